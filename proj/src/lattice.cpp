#include "dioph/lattice.hpp"

#include <algorithm>
#include <cassert>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dioph {

Int sup_norm(const IntVector& v) {
    Int m = 0;
    for (const Int& c : v) {
        Int a = iabs(c);
        if (a > m) m = a;
    }
    return m;
}

// ---------------------------------------------------------------------------
// RationalPoint

RationalPoint RationalPoint::from_vector(IntVector w) {
    if (w.empty() || w[0] == 0)
        throw InternalError("RationalPoint: first coordinate (q) must be nonzero");
    Int g = 0;
    for (const Int& c : w) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    for (Int& c : w) c /= g;
    if (w[0] < 0)
        for (Int& c : w) c = -c;
    return RationalPoint{std::move(w)};
}

Int RationalPoint::height() const { return sup_norm(vec); }

std::vector<Rat> RationalPoint::value() const {
    std::vector<Rat> v;
    for (size_t i = 1; i < vec.size(); ++i) {
        Rat r(vec[i], vec[0]);
        r.canonicalize();
        v.push_back(r);
    }
    return v;
}

Rat RationalPoint::dist(const std::vector<Rat>& x) const {
    if (x.size() + 1 != vec.size()) throw InternalError("RationalPoint::dist dimension mismatch");
    Rat d = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        Rat r(vec[i + 1], vec[0]);
        r.canonicalize();
        Rat a = rabs(x[i] - r);
        if (a > d) d = a;
    }
    return d;
}

// ---------------------------------------------------------------------------
// flow norms

NormResult flow_norm_log(const std::vector<Rat>& x, int n, const LogValue& t,
                         const IntVector& w) {
    if ((int)w.size() != n + 1) throw InternalError("flow_norm_log: bad vector size");
    if ((int)x.size() != n) throw InternalError("flow_norm_log: bad point size");
    bool any = false, have_first = false;
    LogValue best;
    bool best_is_first = false;
    auto consider = [&](const LogValue& term, bool is_first) {
        if (!any) {
            best = term;
            best_is_first = is_first;
            any = true;
        } else {
            int c = compare(term, best);
            if (c > 0 || (c == 0 && is_first)) {
                best = term;
                best_is_first = is_first;
            }
        }
    };
    if (w[0] != 0) {
        consider(-t + LogValue(LogQuantity::log_rational(Rat(iabs(w[0])))), true);
        have_first = true;
    }
    for (int i = 0; i < n; ++i) {
        Rat comp = Rat(w[i + 1]) - Rat(w[0]) * x[i];
        comp.canonicalize();
        if (comp == 0) continue;
        consider(t.scaled(Rat(1, n)) + LogValue(LogQuantity::log_rational(rabs(comp))), false);
    }
    if (!any) throw DomainError("ZERO_VECTOR: flow norm of the zero vector");
    (void)have_first;
    return NormResult{best, best_is_first};
}

NormResult flow_norm_log(const FlowPoint& fp, const IntVector& w) {
    return flow_norm_log(fp.x, fp.t.grid.n, LogValue(fp.t.t()), w);
}

// ---------------------------------------------------------------------------
// basis construction and reduction

Basis scaled_basis(const FlowPoint& fp, Int& denom_out) {
    int n = fp.t.grid.n;
    if ((int)fp.x.size() != n) throw InternalError("scaled_basis: bad point size");
    Int d = 1;
    for (const Rat& xi : fp.x) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), xi.get_den().get_mpz_t());
    Int Nl = ipow(fp.t.grid.N, (unsigned long)fp.t.level);
    Basis b;
    b.dim = n + 1;
    b.cols.assign(n + 1, IntVector(n + 1, Int(0)));
    b.coeffs.assign(n + 1, IntVector(n + 1, Int(0)));
    b.cols[0][0] = d;
    for (int i = 0; i < n; ++i) {
        Rat e = -Rat(d) * Rat(Nl) * fp.x[i];
        e.canonicalize();
        assert(e.get_den() == 1);
        b.cols[0][i + 1] = e.get_num();
        b.cols[i + 1][i + 1] = d * Nl;
    }
    for (int j = 0; j <= n; ++j) b.coeffs[j][j] = 1;
    denom_out = d;
    return b;
}

namespace {

Int dot(const IntVector& a, const IntVector& b) {
    Int s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void submul(IntVector& a, const Int& mu, const IntVector& b) {
    for (size_t i = 0; i < a.size(); ++i) a[i] -= mu * b[i];
}

// nearest integer to a/b (b > 0)
Int round_div(const Int& a, const Int& b) {
    Int q;
    Int num = 2 * a + b;
    Int den = 2 * b;
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return q;
}

Rat round_rat(const Rat& r) { return Rat(rfloor(r + Rat(1, 2))); }

}  // namespace

void gauss_reduce(Basis& b) {
    assert(b.dim == 2);
    for (;;) {
        Int n0 = dot(b.cols[0], b.cols[0]), n1 = dot(b.cols[1], b.cols[1]);
        if (n0 > n1) {
            std::swap(b.cols[0], b.cols[1]);
            std::swap(b.coeffs[0], b.coeffs[1]);
            std::swap(n0, n1);
        }
        Int mu = round_div(dot(b.cols[0], b.cols[1]), n0);
        if (mu == 0) break;
        submul(b.cols[1], mu, b.cols[0]);
        submul(b.coeffs[1], mu, b.coeffs[0]);
    }
}

namespace {

struct Gso {
    std::vector<std::vector<Rat>> mu;  // mu[i][j], j < i
    std::vector<Rat> bnorm;            // ||b*_i||^2
};

Gso compute_gso(const Basis& b) {
    int d = b.dim;
    Gso g;
    g.mu.assign(d, std::vector<Rat>(d, Rat(0)));
    g.bnorm.assign(d, Rat(0));
    std::vector<std::vector<Rat>> bstar(d, std::vector<Rat>(d, Rat(0)));
    for (int i = 0; i < d; ++i) {
        for (int r = 0; r < d; ++r) bstar[i][r] = Rat(b.cols[i][r]);
        for (int j = 0; j < i; ++j) {
            Rat ip = 0;
            for (int r = 0; r < d; ++r) ip += Rat(b.cols[i][r]) * bstar[j][r];
            if (g.bnorm[j] == 0) continue;  // degenerate (should not happen: full rank)
            g.mu[i][j] = ip / g.bnorm[j];
            for (int r = 0; r < d; ++r) bstar[i][r] -= g.mu[i][j] * bstar[j][r];
        }
        for (int r = 0; r < d; ++r) g.bnorm[i] += bstar[i][r] * bstar[i][r];
    }
    return g;
}

}  // namespace

void lll_reduce(Basis& b) {
    const Rat delta(3, 4);
    int d = b.dim;
    int k = 1;
    Gso g = compute_gso(b);
    int guard = 0;
    while (k < d) {
        if (++guard > 100000) throw InternalError("lll_reduce: failed to converge");
        // size reduction of column k
        for (int j = k - 1; j >= 0; --j) {
            Rat mu = g.mu[k][j];
            Rat r = round_rat(mu);
            if (r != 0) {
                Int m = r.get_num();
                submul(b.cols[k], m, b.cols[j]);
                submul(b.coeffs[k], m, b.coeffs[j]);
                g = compute_gso(b);
            }
        }
        if (g.bnorm[k] >= (delta - g.mu[k][k - 1] * g.mu[k][k - 1]) * g.bnorm[k - 1]) {
            ++k;
        } else {
            std::swap(b.cols[k], b.cols[k - 1]);
            std::swap(b.coeffs[k], b.coeffs[k - 1]);
            g = compute_gso(b);
            k = std::max(1, k - 1);
        }
    }
}

void reduce(Basis& b) {
    if (b.dim == 2)
        gauss_reduce(b);
    else
        lll_reduce(b);
}

// ---------------------------------------------------------------------------
// exhaustive sup-norm box enumeration

namespace {

// per-coefficient bounds |c_j| <= floor(T * sum_i |inv[j][i]|)
std::vector<Int> coefficient_bounds(const Basis& b, const Int& T) {
    int d = b.dim;
    // invert the column matrix with rational Gaussian elimination
    std::vector<std::vector<Rat>> m(d, std::vector<Rat>(2 * d, Rat(0)));
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) m[i][j] = Rat(b.cols[j][i]);  // row i, col j
        m[i][d + i] = 1;
    }
    for (int col = 0; col < d; ++col) {
        int piv = -1;
        for (int r = col; r < d; ++r)
            if (m[r][col] != 0) { piv = r; break; }
        if (piv < 0) throw InternalError("coefficient_bounds: singular basis");
        std::swap(m[col], m[piv]);
        Rat p = m[col][col];
        for (int j = 0; j < 2 * d; ++j) m[col][j] /= p;
        for (int r = 0; r < d; ++r) {
            if (r == col || m[r][col] == 0) continue;
            Rat f = m[r][col];
            for (int j = 0; j < 2 * d; ++j) m[r][j] -= f * m[col][j];
        }
    }
    std::vector<Int> bounds(d);
    for (int j = 0; j < d; ++j) {
        // c = B^{-1} w, so |c_j| <= T * sum_i |inv[j][i]|; inv[j][i] = m[j][d+i]
        Rat s = 0;
        for (int i = 0; i < d; ++i) s += rabs(m[j][d + i]);
        bounds[j] = rfloor(Rat(T) * s);
    }
    return bounds;
}

struct EnumCtx {
    const Basis* b;
    const Int* bound;
    std::vector<Int> bounds;
    std::vector<Candidate>* out;
};

// recursive descent over coefficients idx..d-1; partial = sum of chosen
// columns so far; nonzero_seen enforces the first-nonzero-positive rule
void enum_rec(EnumCtx& ctx, int idx, IntVector& partial, std::vector<Int>& c,
              bool nonzero_seen) {
    int d = ctx.b->dim;
    if (idx == d) {
        if (!nonzero_seen) return;
        Int nrm = sup_norm(partial);
        if (nrm > *ctx.bound) return;
        Candidate cand;
        cand.coords = partial;
        cand.norm = nrm;
        cand.coeff.assign(d, Int(0));
        for (int j = 0; j < d; ++j)
            if (c[j] != 0)
                for (int r = 0; r < d; ++r) cand.coeff[r] += c[j] * ctx.b->coeffs[j][r];
        // canonicalize the (q,p) representation
        for (int r = 0; r < d; ++r) {
            if (cand.coeff[r] == 0) continue;
            if (cand.coeff[r] < 0) {
                for (int s = 0; s < d; ++s) {
                    cand.coeff[s] = -cand.coeff[s];
                    cand.coords[s] = -cand.coords[s];
                }
            }
            break;
        }
        ctx.out->push_back(std::move(cand));
        return;
    }
    Int lo = nonzero_seen ? -ctx.bounds[idx] : Int(0);
    for (Int v = lo; v <= ctx.bounds[idx]; ++v) {
        c[idx] = v;
        if (v != 0) {
            IntVector next = partial;
            for (int r = 0; r < d; ++r) next[r] += v * ctx.b->cols[idx][r];
            enum_rec(ctx, idx + 1, next, c, true);
        } else {
            enum_rec(ctx, idx + 1, partial, c, nonzero_seen);
        }
    }
    c[idx] = 0;
}

}  // namespace

std::vector<Candidate> enumerate_box(const Basis& b, const Int& bound, bool parallel) {
    std::vector<Int> bounds = coefficient_bounds(b, bound);
    int d = b.dim;
    std::vector<Candidate> out;
    if (!parallel || !bounds[0].fits_slong_p() || bounds[0] < 2) {
        EnumCtx ctx{&b, &bound, bounds, &out};
        IntVector partial(d, Int(0));
        std::vector<Int> c(d, Int(0));
        enum_rec(ctx, 0, partial, c, false);
        return out;
    }
    // parallelize over the leading coefficient; per-branch outputs are already
    // in lexicographic order, and branches are concatenated in order, so the
    // result is schedule-independent
    long b0 = bounds[0].get_si();
    std::vector<std::vector<Candidate>> parts(b0 + 1);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long v0 = 0; v0 <= b0; ++v0) {
        std::vector<Candidate> local;
        EnumCtx ctx{&b, &bound, bounds, &local};
        IntVector partial(d, Int(0));
        std::vector<Int> c(d, Int(0));
        c[0] = v0;
        if (v0 == 0) {
            enum_rec(ctx, 1, partial, c, false);
        } else {
            for (int r = 0; r < d; ++r) partial[r] += Int(v0) * b.cols[0][r];
            enum_rec(ctx, 1, partial, c, true);
        }
        parts[v0] = std::move(local);
    }
    for (auto& p : parts)
        for (auto& cand : p) out.push_back(std::move(cand));
    return out;
}

// ---------------------------------------------------------------------------
// successive minima

namespace {

bool coeff_lex_less(const IntVector& a, const IntVector& b) {
    for (size_t i = 0; i < a.size(); ++i) {
        int c = cmp(a[i], b[i]);
        if (c != 0) return c < 0;
    }
    return false;
}

struct VecWC {
    IntVector coords, coeff;
    Int norm;
    bool valid = false;
};

void canonicalize_sign(IntVector& coeff, IntVector& coords) {
    for (const Int& c : coeff) {
        if (c == 0) continue;
        if (c < 0) {
            for (Int& v : coeff) v = -v;
            for (Int& v : coords) v = -v;
        }
        return;
    }
}

bool better(const VecWC& cand, const VecWC& cur) {
    if (!cur.valid) return true;
    int s = cmp(cand.norm, cur.norm);
    if (s != 0) return s < 0;
    return coeff_lex_less(cand.coeff, cur.coeff);
}

// lambda_1 of the reduced basis via box enumeration (the radius-min(|b_i|) ball
// is always small after reduction)
VecWC shortest_vector(const Basis& b) {
    Int bound = sup_norm(b.cols[0]);
    for (int i = 1; i < b.dim; ++i) bound = std::min(bound, sup_norm(b.cols[i]));
    auto cands = enumerate_box(b, bound);
    VecWC best;
    for (auto& c : cands) {
        VecWC v{c.coords, c.coeff, c.norm, true};
        if (better(v, best)) best = std::move(v);
    }
    if (!best.valid) throw InternalError("shortest_vector: empty enumeration");
    return best;
}

// ---- exact machinery for lambda_j, j >= 2 ----------------------------------
//
// Enumerating the full sup-norm ball of radius lambda_j is infeasible for skew
// lattices (e.g. x exactly rational: lambda_1 -> 0 and the ball holds
// ~lambda_j/lambda_1 points).  Instead: quotient by the saturation of the span
// of the chosen vectors, enumerate the (small) Euclidean ball of quotient
// classes, and minimize inside each class; the final free coefficient runs
// along the shortest chosen vector, where the sup-norm is convex and the
// integer minimum sits at the rounding of the real minimizer.

using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;  // list of rows

RatVec to_rat(const IntVector& v) {
    RatVec r(v.size());
    for (size_t i = 0; i < v.size(); ++i) r[i] = Rat(v[i]);
    return r;
}

Rat rdot(const RatVec& a, const RatVec& b) {
    Rat s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// integer row matrix whose rows span the rational left-kernel of the columns
// c_1..c_m (i.e. forms vanishing on span{c_i})
std::vector<IntVector> span_annihilator(const std::vector<IntVector>& cols, int d) {
    // row-reduce the m x d matrix of the c_i to find the orthogonal complement
    RatMat m;
    for (const auto& c : cols) m.push_back(to_rat(c));
    int rank = 0;
    std::vector<int> pivot_col;
    for (int col = 0; col < d && rank < (int)m.size(); ++col) {
        int piv = -1;
        for (int r = rank; r < (int)m.size(); ++r)
            if (m[r][col] != 0) { piv = r; break; }
        if (piv < 0) continue;
        std::swap(m[rank], m[piv]);
        Rat p = m[rank][col];
        for (int cc = 0; cc < d; ++cc) m[rank][cc] /= p;
        for (int r = 0; r < (int)m.size(); ++r) {
            if (r == rank || m[r][col] == 0) continue;
            Rat f = m[r][col];
            for (int cc = 0; cc < d; ++cc) m[r][cc] -= f * m[rank][cc];
        }
        pivot_col.push_back(col);
        ++rank;
    }
    // free columns give kernel-of-transpose rows: for each non-pivot column j,
    // the form e_j - sum_i m[i][j] e_{pivot_i} annihilates all c
    std::vector<IntVector> rows;
    std::vector<bool> is_pivot(d, false);
    for (int pc : pivot_col) is_pivot[pc] = true;
    for (int j = 0; j < d; ++j) {
        if (is_pivot[j]) continue;
        RatVec form(d, Rat(0));
        form[j] = 1;
        for (int i = 0; i < rank; ++i) form[pivot_col[i]] = -m[i][j];
        Int den = 1;
        for (const Rat& f : form) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), f.get_den().get_mpz_t());
        IntVector row(d);
        for (int cc = 0; cc < d; ++cc) {
            Rat e = form[cc] * Rat(den);
            e.canonicalize();
            row[cc] = e.get_num();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

// column-style Hermite elimination: returns unimodular U (columns) with
// A*U = [* | 0]; the trailing columns of U (the kernel) span the saturation
// of the annihilated subspace
void column_kernel(const std::vector<IntVector>& a_rows, int d,
                   std::vector<IntVector>& kernel, std::vector<IntVector>& complement) {
    int r = (int)a_rows.size();
    std::vector<IntVector> work(d, IntVector(r, Int(0)));  // work[col][row]
    std::vector<IntVector> u(d, IntVector(d, Int(0)));
    for (int c = 0; c < d; ++c) {
        u[c][c] = 1;
        for (int rr = 0; rr < r; ++rr) work[c][rr] = a_rows[rr][c];
    }
    int col = 0;
    for (int row = 0; row < r && col < d; ++row) {
        for (;;) {
            int cmin = -1;
            for (int c = col; c < d; ++c) {
                if (work[c][row] == 0) continue;
                if (cmin < 0 || iabs(work[c][row]) < iabs(work[cmin][row])) cmin = c;
            }
            if (cmin < 0) break;  // row already zero on remaining columns
            bool others = false;
            for (int c = col; c < d; ++c) {
                if (c == cmin || work[c][row] == 0) continue;
                others = true;
                Int q = round_div(work[c][row], iabs(work[cmin][row]));
                if (work[cmin][row] < 0) q = -q;
                if (q != 0) {
                    for (int rr = 0; rr < r; ++rr) work[c][rr] -= q * work[cmin][rr];
                    for (int rr = 0; rr < d; ++rr) u[c][rr] -= q * u[cmin][rr];
                }
            }
            if (!others) {
                std::swap(work[cmin], work[col]);
                std::swap(u[cmin], u[col]);
                ++col;
                break;
            }
        }
    }
    kernel.assign(u.begin() + col, u.end());
    complement.assign(u.begin(), u.begin() + col);
}

// real minimizer of a -> max_i |u_i + a k_i| (convex piecewise linear); the
// integer minimum is then at floor/ceil of the real minimizer
Rat chebyshev_1d_real(const RatVec& u, const RatVec& k) {
    int d = (int)u.size();
    std::vector<Rat> cands;
    for (int i = 0; i < d; ++i) {
        if (k[i] != 0) cands.push_back(-u[i] / k[i]);
        for (int j = i + 1; j < d; ++j) {
            Rat dk = k[i] - k[j], sk = k[i] + k[j];
            if (dk != 0) cands.push_back(-(u[i] - u[j]) / dk);
            if (sk != 0) cands.push_back(-(u[i] + u[j]) / sk);
        }
    }
    if (cands.empty()) return Rat(0);
    auto value = [&](const Rat& a) {
        Rat m = 0;
        for (int i = 0; i < d; ++i) {
            Rat v = rabs(u[i] + a * k[i]);
            if (v > m) m = v;
        }
        return m;
    };
    Rat best_a = cands[0], best_v = value(cands[0]);
    for (size_t i = 1; i < cands.size(); ++i) {
        Rat v = value(cands[i]);
        if (v < best_v || (v == best_v && cands[i] < best_a)) {
            best_v = v;
            best_a = cands[i];
        }
    }
    return best_a;
}

constexpr long kScanCap = 200000;

// minimize ||w0 + sum a_i k_i||_inf over integer a; k sorted by descending
// Euclidean norm so the innermost (convex closed-form) level is the shortest
// chosen vector.  gso_* describe the Euclidean GSO of the k_i in that order.
void inner_min_rec(const IntVector& w0, const std::vector<IntVector>& ks,
                   const RatMat& gso_ortho, const std::vector<Rat>& gso_norm2,
                   int level, IntVector& acc, const Int& cap_norm, VecWC& best,
                   const std::vector<IntVector>& kcoeffs, const IntVector& w0coeff) {
    int d = (int)w0.size();
    auto finish = [&](const IntVector& coords, const std::vector<Int>& a) {
        Int nrm = sup_norm(coords);
        if (nrm == 0) return;  // class was zero: skip (cannot happen for m != 0)
        VecWC cand;
        cand.coords = coords;
        cand.norm = nrm;
        cand.coeff = w0coeff;
        for (size_t i = 0; i < a.size(); ++i)
            for (int r = 0; r < d; ++r) cand.coeff[r] += a[i] * kcoeffs[i][r];
        canonicalize_sign(cand.coeff, cand.coords);
        cand.valid = true;
        if (better(cand, best)) best = std::move(cand);
    };
    if (level < 0) {
        std::vector<Int> a;  // no free coefficients at all
        finish(acc, a);
        return;
    }
    if (level == 0) {
        // convex closed form on the last (shortest) direction
        RatVec u = to_rat(acc), k = to_rat(ks[0]);
        Rat astar = chebyshev_1d_real(u, k);
        Int lo = rfloor(astar);
        for (Int a1 = lo; a1 <= lo + 1; ++a1) {
            IntVector coords = acc;
            for (int r = 0; r < d; ++r) coords[r] += a1 * ks[0][r];
            std::vector<Int> a{a1};
            // rebuild full a vector from recursion stack: acc already folded
            // higher levels into coords, and their coefficients into w0coeff
            finish(coords, a);
        }
        return;
    }
    // integer range from the Euclidean bound |proj(w)| <= sqrt(d) * cap
    Rat center = -rdot(to_rat(acc), gso_ortho[level]) / gso_norm2[level];
    // radius^2 = d * cap^2 / ||k*_level||^2
    Rat rad2 = Rat(d) * Rat(cap_norm) * Rat(cap_norm) / gso_norm2[level];
    // |a - center| <= sqrt(rad2): bound by integer sqrt
    Int rad2c = rceil(rad2);
    Int radius;
    mpz_sqrt(radius.get_mpz_t(), rad2c.get_mpz_t());
    radius += 1;
    if (radius > kScanCap)
        throw InternalError("minima: pathological coefficient range in inner scan");
    Int lo = rceil(center - Rat(radius)), hi = rfloor(center + Rat(radius));
    for (Int a = lo; a <= hi; ++a) {
        IntVector next = acc;
        IntVector w0c = w0coeff;
        for (int r = 0; r < d; ++r) {
            next[r] += a * ks[level][r];
            w0c[r] += a * kcoeffs[level][r];
        }
        inner_min_rec(w0, ks, gso_ortho, gso_norm2, level - 1, next, cap_norm, best,
                      kcoeffs, w0c);
    }
}

// Euclidean GSO of integer vectors (rows)
void rat_gso(const std::vector<IntVector>& vs, RatMat& ortho, std::vector<Rat>& norm2) {
    ortho.clear();
    norm2.clear();
    for (const auto& v : vs) {
        RatVec o = to_rat(v);
        for (size_t j = 0; j < ortho.size(); ++j) {
            if (norm2[j] == 0) continue;
            Rat mu = rdot(to_rat(v), ortho[j]) / norm2[j];
            for (size_t r = 0; r < o.size(); ++r) o[r] -= mu * ortho[j][r];
        }
        norm2.push_back(rdot(o, o));
        ortho.push_back(std::move(o));
    }
}

// shortest lattice vector outside the span of `chosen`; basis_cols/basis_coeffs
// describe the full lattice (columns with original-coefficient tracking)
VecWC shortest_outside_span(const Basis& b, const std::vector<VecWC>& chosen) {
    int d = b.dim;
    int j1 = (int)chosen.size();  // j - 1
    // original basis matrix B0 with B0 * coeff = coords: solve column by column
    // (b.coeffs is unimodular)
    RatMat coeffm(d, RatVec(d));
    for (int c = 0; c < d; ++c)
        for (int r = 0; r < d; ++r) coeffm[r][c] = Rat(b.coeffs[c][r]);
    // invert coeffm
    RatMat inv(d, RatVec(2 * d, Rat(0)));
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) inv[r][c] = coeffm[r][c];
        inv[r][d + r] = 1;
    }
    for (int col = 0; col < d; ++col) {
        int piv = -1;
        for (int r = col; r < d; ++r)
            if (inv[r][col] != 0) { piv = r; break; }
        if (piv < 0) throw InternalError("minima: singular coefficient matrix");
        std::swap(inv[col], inv[piv]);
        Rat p = inv[col][col];
        for (int cc = 0; cc < 2 * d; ++cc) inv[col][cc] /= p;
        for (int r = 0; r < d; ++r) {
            if (r == col || inv[r][col] == 0) continue;
            Rat f = inv[r][col];
            for (int cc = 0; cc < 2 * d; ++cc) inv[r][cc] -= f * inv[col][cc];
        }
    }
    // B0 columns: orig_col[c][r] = sum_k b.cols[k][r] * inv[k][d+c]
    std::vector<IntVector> orig_cols(d, IntVector(d, Int(0)));
    for (int c = 0; c < d; ++c)
        for (int r = 0; r < d; ++r) {
            Rat s = 0;
            for (int k2 = 0; k2 < d; ++k2) s += Rat(b.cols[k2][r]) * inv[k2][d + c];
            s.canonicalize();
            if (s.get_den() != 1) throw InternalError("minima: non-integer original basis");
            orig_cols[c][r] = s.get_num();
        }
    auto coords_of = [&](const IntVector& coeff) {
        IntVector w(d, Int(0));
        for (int c = 0; c < d; ++c) {
            if (coeff[c] == 0) continue;
            for (int r = 0; r < d; ++r) w[r] += coeff[c] * orig_cols[c][r];
        }
        return w;
    };
    // saturation of span(chosen) and a complement, in coefficient space
    std::vector<IntVector> chosen_coeffs;
    for (const auto& v : chosen) chosen_coeffs.push_back(v.coeff);
    auto ann = span_annihilator(chosen_coeffs, d);
    std::vector<IntVector> kernel, complement;
    column_kernel(ann, d, kernel, complement);
    if ((int)kernel.size() != j1 || (int)complement.size() != d - j1)
        throw InternalError("minima: saturation dimension mismatch");
    // geometric vectors
    std::vector<IntVector> kcoords, tcoords;
    for (const auto& kc : kernel) kcoords.push_back(coords_of(kc));
    for (const auto& tc : complement) tcoords.push_back(coords_of(tc));
    // sort kernel directions by descending Euclidean length (shortest last =
    // innermost convex level)
    std::vector<int> korder(j1);
    for (int i = 0; i < j1; ++i) korder[i] = i;
    auto eunorm2 = [&](const IntVector& v) {
        Int s = 0;
        for (const Int& c : v) s += c * c;
        return s;
    };
    std::stable_sort(korder.begin(), korder.end(), [&](int a, int c) {
        return eunorm2(kcoords[a]) > eunorm2(kcoords[c]);
    });
    std::vector<IntVector> ks, kcoeffs;
    for (int i : korder) {
        ks.push_back(kcoords[i]);
        kcoeffs.push_back(kernel[i]);
    }
    // reverse for recursion convention: level index == position in ks, with
    // level 0 the shortest => ks currently descending; recursion uses
    // level = j1-1 .. 0 with ks[level]: make ks[0] the shortest
    std::reverse(ks.begin(), ks.end());
    std::reverse(kcoeffs.begin(), kcoeffs.end());
    // GSO in natural order (shortest first): kortho[L] is orthogonal to
    // ks[0..L-1], so inner levels do not move the level-L projection
    RatMat kortho;
    std::vector<Rat> knorm2;
    rat_gso(ks, kortho, knorm2);
    for (const Rat& nn : knorm2)
        if (nn == 0) throw InternalError("minima: dependent chosen vectors");
    // projections of the complement directions orthogonal to span(chosen)
    RatMat span_ortho;
    std::vector<Rat> span_norm2;
    rat_gso(ks, span_ortho, span_norm2);
    int dprime = d - j1;
    RatMat proj(dprime);
    for (int r = 0; r < dprime; ++r) {
        RatVec p = to_rat(tcoords[r]);
        for (int i = 0; i < j1; ++i) {
            if (span_norm2[i] == 0) continue;
            Rat mu = rdot(to_rat(tcoords[r]), span_ortho[i]) / span_norm2[i];
            for (int rr = 0; rr < d; ++rr) p[rr] -= mu * span_ortho[i][rr];
        }
        proj[r] = std::move(p);
    }
    RatMat gram(dprime, RatVec(dprime));
    for (int r = 0; r < dprime; ++r)
        for (int s = 0; s < dprime; ++s) gram[r][s] = rdot(proj[r], proj[s]);
    // initial bound from the complement unit classes
    VecWC best;
    auto try_class = [&](const std::vector<Int>& m) {
        IntVector w0(d, Int(0)), w0coeff(d, Int(0));
        for (int r = 0; r < dprime; ++r) {
            if (m[r] == 0) continue;
            for (int rr = 0; rr < d; ++rr) {
                w0[rr] += m[r] * tcoords[r][rr];
                w0coeff[rr] += m[r] * complement[r][rr];
            }
        }
        // Babai size-reduction along the chosen directions keeps the class
        // representative (and hence the scan cap) small
        for (int lv = j1 - 1; lv >= 0; --lv) {
            Rat mu = rdot(to_rat(w0), kortho[lv]) / knorm2[lv];
            Int a = rfloor(mu + Rat(1, 2));
            if (a == 0) continue;
            for (int rr = 0; rr < d; ++rr) {
                w0[rr] -= a * ks[lv][rr];
                w0coeff[rr] -= a * kcoeffs[lv][rr];
            }
        }
        {
            VecWC seed;
            seed.coords = w0;
            seed.coeff = w0coeff;
            seed.norm = sup_norm(w0);
            seed.valid = true;
            canonicalize_sign(seed.coeff, seed.coords);
            if (better(seed, best)) best = seed;
        }
        IntVector acc = w0;
        inner_min_rec(w0, ks, kortho, knorm2, j1 - 1, acc, best.norm, best, kcoeffs, w0coeff);
    };
    for (int r = 0; r < dprime; ++r) {
        std::vector<Int> m(dprime, Int(0));
        m[r] = 1;
        try_class(m);
    }
    if (!best.valid) throw InternalError("minima: no candidate class");
    // enumerate all classes m != 0 with m^T G m <= d * best.norm^2 via GSO of G
    RatMat gso_mu(dprime, RatVec(dprime, Rat(0)));
    std::vector<Rat> gso_d(dprime, Rat(0));
    {
        // Cholesky-style: G = L D L^T
        RatMat l(dprime, RatVec(dprime, Rat(0)));
        for (int i = 0; i < dprime; ++i) {
            for (int jj = 0; jj <= i; ++jj) {
                Rat s = gram[i][jj];
                for (int k2 = 0; k2 < jj; ++k2) s -= l[i][k2] * l[jj][k2] * gso_d[k2];
                if (i == jj) {
                    gso_d[i] = s;
                    l[i][i] = 1;
                    if (s <= 0) throw InternalError("minima: quotient Gram not PD");
                } else {
                    l[i][jj] = s / gso_d[jj];
                }
            }
        }
        gso_mu = l;
    }
    Rat limit = Rat(d) * Rat(best.norm) * Rat(best.norm);
    std::vector<Int> m(dprime, Int(0));
    std::vector<Rat> centers(dprime, Rat(0));
    // recursive FP enumeration over classes
    std::function<void(int, const Rat&)> enum_m = [&](int level, const Rat& used) {
        if (level < 0) {
            bool nz = false, firstpos = true;
            for (const Int& mi : m)
                if (mi != 0) {
                    nz = true;
                    firstpos = mi > 0;
                    break;
                }
            if (!nz || !firstpos) return;
            bool unit = false;
            int nnz = 0, unit_at = -1;
            for (int r = 0; r < dprime; ++r)
                if (m[r] != 0) {
                    ++nnz;
                    if (m[r] == 1) unit_at = r;
                }
            unit = (nnz == 1 && unit_at >= 0);
            if (unit) return;  // already tried as seed
            try_class(m);
            return;
        }
        // center for this level given outer choices
        Rat c = 0;
        for (int r = level + 1; r < dprime; ++r) c += gso_mu[r][level] * Rat(m[r]);
        Rat rem = limit - used;
        if (rem < 0) return;
        Rat rad2 = rem / gso_d[level];
        Int rad2c = rceil(rad2);
        Int radius;
        mpz_sqrt(radius.get_mpz_t(), rad2c.get_mpz_t());
        radius += 1;
        Int lo = rceil(-c - Rat(radius)), hi = rfloor(-c + Rat(radius));
        for (Int v = lo; v <= hi; ++v) {
            Rat term = (Rat(v) + c) * (Rat(v) + c) * gso_d[level];
            if (term > rem) continue;
            m[level] = v;
            enum_m(level - 1, used + term);
        }
        m[level] = 0;
    };
    enum_m(dprime - 1, Rat(0));
    return best;
}

}  // namespace

MinimaResult minima_from_basis(Basis b, int k, const LogQuantity& unscale_log, bool parallel) {
    if (k < 1 || k > b.dim) throw DomainError("minima_from_basis: k out of range");
    (void)parallel;
    reduce(b);
    MinimaResult res;
    std::vector<VecWC> chosen;
    for (int j = 1; j <= k; ++j) {
        VecWC v = (j == 1) ? shortest_vector(b) : shortest_outside_span(b, chosen);
        res.witnesses.push_back(v.coeff);
        res.lambda_logs.push_back(LogQuantity::log_rational(Rat(v.norm)) - unscale_log);
        chosen.push_back(std::move(v));
    }
    return res;
}

MinimaResult successive_minima(const FlowPoint& fp, int k) {
    Int d;
    Basis b = scaled_basis(fp, d);
    LogQuantity unscale = LogQuantity::log_rational(Rat(d)) + fp.t.t();
    return minima_from_basis(std::move(b), k, unscale);
}

LogQuantity lambda1_log(const FlowPoint& fp) {
    return successive_minima(fp, 1).lambda_logs[0];
}

// ---------------------------------------------------------------------------
// Lemma "rational points near badly approximable points"

NearBadResult rational_near_bad(const FlowPoint& fp, const LogValue& R) {
    if (R.sign() < 0) throw DomainError("rational_near_bad: R must be >= 0");
    LogQuantity l1 = lambda1_log(fp);
    if ((LogValue(l1) + R).sign() < 0)
        throw PreconditionError("rational_near_bad: lambda_1 < e^{-R}");
    const Grid& g = fp.t.grid;
    LogValue t(fp.t.t());
    long l2 = grid_ceil(g, t + R.scaled(Rat(2 * g.n)));
    if (l2 < fp.t.level) l2 = fp.t.level;
    FlowPoint fp2{fp.x, GridTime(g, l2)};
    Int d;
    Basis b = scaled_basis(fp2, d);
    reduce(b);
    return near_bad_select(b, fp.x, g, t, R, l2);
}

NearBadResult near_bad_select(const Basis& b, const std::vector<Rat>& x, const Grid& g,
                              const LogValue& t, const LogValue& R, long l2) {
    int n = g.n;
    Int bound = sup_norm(b.cols[0]);
    for (int i = 1; i < b.dim; ++i) bound = std::min(bound, sup_norm(b.cols[i]));
    auto cands = enumerate_box(b, bound);
    std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& c) {
        int s = cmp(a.norm, c.norm);
        if (s != 0) return s < 0;
        return coeff_lex_less(a.coeff, c.coeff);
    });
    // shortest vector with q != 0 (the Minkowski step of the lemma's proof);
    // among norm ties prefer the candidate closest to x (at degenerate small
    // times several norm-1 vectors tie and only the closest satisfies the
    // distance guarantee), then coefficient order
    const Candidate* pick = nullptr;
    Rat pick_dist;
    for (const auto& cand : cands) {
        if (cand.coeff[0] == 0) continue;
        if (pick && cmp(cand.norm, pick->norm) > 0) break;  // sorted by norm
        Rat dist = RationalPoint::from_vector(cand.coeff).dist(x);
        if (!pick || dist < pick_dist) {
            pick = &cand;
            pick_dist = dist;
        }
    }
    if (!pick) throw InternalError("rational_near_bad: no short vector with q != 0");
    RationalPoint v = RationalPoint::from_vector(pick->coeff);
    NearBadResult res;
    res.snapped_level = l2;
    res.h_log = LogQuantity::log_rational(Rat(v.height()));
    res.dist = v.dist(x);
    // post-conditions of the lemma (exact)
    LogQuantity M = g.step();
    bool ok_lower = (LogValue(res.h_log) - t + R).sign() >= 0;
    bool ok_upper = (t + R.scaled(Rat(2 * n)) + LogValue(M) - LogValue(res.h_log)).sign() >= 0;
    bool ok_dist = true;
    if (res.dist != 0) {
        LogValue lhs(LogQuantity::log_rational(res.dist));
        LogValue rhs = -LogValue(LogQuantity::log_rational(2)) - t.scaled(Rat(n + 1, n));
        ok_dist = (rhs - lhs).sign() >= 0;
    }
    if (!ok_lower || !ok_upper || !ok_dist)
        throw InternalError("rational_near_bad: post-condition violated after grid snapping");
    res.v = std::move(v);
    return res;
}

}  // namespace dioph
