#include "dioph/grid.hpp"

#include <cmath>

namespace dioph {

Grid::Grid(Int N_, int n_) : N(std::move(N_)), n(n_) {
    if (N < 2) throw DomainError("grid base N must be an integer >= 2");
    if (n < 1) throw DomainError("dimension n must be >= 1");
}

LogQuantity Grid::step() const { return LogQuantity::logn_multiple(N, Rat(n, n + 1)); }

namespace {
// exact ceil of t/M given a floating first guess
long refine_level(const Grid& g, const LogValue& t, bool want_ceil) {
    LogQuantity M = g.step();
    double guess = t.approx() / M.approx();
    long l = (long)std::llround(guess);
    // walk to the exact boundary; the float guess is off by at most a few
    auto tl = [&](long lev) { return M.scaled(Rat(lev)); };
    if (want_ceil) {
        while (LogValue(tl(l)) < t) ++l;
        while (LogValue(tl(l - 1)) >= t) --l;
        return l;
    }
    while (LogValue(tl(l)) > t) --l;
    while (LogValue(tl(l + 1)) <= t) ++l;
    return l;
}
}  // namespace

long grid_ceil(const Grid& g, const LogValue& t) { return refine_level(g, t, true); }
long grid_floor(const Grid& g, const LogValue& t) { return refine_level(g, t, false); }

Int grid_base_for_step(double m_request, int n) {
    double target = std::exp((double)(n + 1) / n * m_request);
    Int N(std::ceil(target));
    if (N < 2) N = 2;
    // adjust exactly: want (n/(n+1)) log N >= m_request is advisory only, the
    // float ceiling is authoritative enough since N itself becomes the exact
    // ground truth downstream
    return N;
}

}  // namespace dioph
