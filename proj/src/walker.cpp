#include "dioph/walker.hpp"

#include <cassert>

namespace dioph {

TrajectoryWalker::TrajectoryWalker(const Grid& g, std::vector<Rat> x, long l0) {
    grid_ = g;
    n_ = g.n;
    level_ = l0;
    center_mode_ = false;
    x_ = std::move(x);
    FlowPoint fp{x_, GridTime(g, l0)};
    b_ = scaled_basis(fp, denom_);
    npow_ = ipow(g.N, (unsigned long)l0);
    reduce(b_);
}

TrajectoryWalker TrajectoryWalker::centered(const Grid& g) {
    TrajectoryWalker w;
    w.grid_ = g;
    w.n_ = g.n;
    w.level_ = 0;
    w.center_mode_ = true;
    w.x_.assign(g.n, Rat(1, 2));
    w.corner_.assign(g.n, Int(0));
    w.denom_ = 2;
    w.npow_ = 1;
    FlowPoint fp{w.x_, GridTime(g, 0)};
    Int d;
    w.b_ = scaled_basis(fp, d);
    assert(d == 2);
    reduce(w.b_);
    return w;
}

const std::vector<Int>& TrajectoryWalker::corner() const {
    if (!center_mode_) throw InternalError("walker: corner() requires center mode");
    return corner_;
}

void TrajectoryWalker::advance() {
    if (center_mode_) throw InternalError("walker: advance() requires fixed-x mode");
    // rows 1..n scale by N (e^{t/n} grows by N^{1/(n+1)}, cleared to integers)
    for (int j = 0; j < b_.dim; ++j)
        for (int r = 1; r <= n_; ++r) b_.cols[j][r] *= grid_.N;
    ++level_;
    npow_ *= grid_.N;
    reduce(b_);
}

void TrajectoryWalker::descend(const std::vector<Int>& digits) {
    if (!center_mode_) throw InternalError("walker: descend() requires center mode");
    if ((int)digits.size() != n_) throw InternalError("walker: descend dimension mismatch");
    const Int& N = grid_.N;
    Int next_pow = npow_ * N;  // N^{l+1}
    Int N2 = N * N;
    for (int i = 0; i < n_; ++i) {
        if (digits[i] < 0 || digits[i] >= N) throw InternalError("walker: digit out of range");
        // center shift: x'_i - x_i = (2 d_i + 1 - N) / (2 N^{l+1})
        Int j = 2 * digits[i] + 1 - N;
        for (int col = 0; col < b_.dim; ++col) {
            b_.cols[col][i + 1] *= N2;
            if (j != 0 && b_.coeffs[col][0] != 0)
                b_.cols[col][i + 1] -= b_.coeffs[col][0] * j * next_pow;
        }
        corner_[i] = corner_[i] * N + digits[i];
    }
    for (int col = 0; col < b_.dim; ++col) b_.cols[col][0] *= N;
    ++level_;
    npow_ = next_pow;
    for (int i = 0; i < n_; ++i) {
        x_[i] = Rat(2 * corner_[i] + 1, 2 * npow_);
        x_[i].canonicalize();
    }
    reduce(b_);
}

TrajectoryWalker TrajectoryWalker::freeze() const {
    if (!center_mode_) throw InternalError("walker: freeze() requires center mode");
    TrajectoryWalker w = *this;
    w.center_mode_ = false;
    w.denom_ = 2 * npow_;
    w.corner_.clear();
    return w;
}

LogQuantity TrajectoryWalker::unscale_log() const {
    LogQuantity t = GridTime(grid_, level_).t();
    if (center_mode_) {
        // denominator 2 N^l
        return LogQuantity::log_rational(2) +
               LogQuantity::logn_multiple(grid_.N, Rat(level_)) + t;
    }
    return LogQuantity::log_rational(Rat(denom_)) + t;
}

LogQuantity TrajectoryWalker::lambda1_log() const {
    return minima(1).lambda_logs[0];
}

MinimaResult TrajectoryWalker::minima(int k) const {
    return minima_from_basis(b_, k, unscale_log());
}

}  // namespace dioph
