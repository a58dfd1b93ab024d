#include "dioph/dimension.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "dioph/mpfr_util.hpp"
#include "dioph/walker.hpp"

namespace dioph {

namespace {

struct Lcg {
    unsigned long long s;
    explicit Lcg(unsigned long long seed = 0x9e3779b97f4a7c15ull) : s(seed) {}
    unsigned long long next() {
        s = s * 6364136223846793005ull + 1442695040888963407ull;
        return s;
    }
    long uniform(long lo, long hi) {  // inclusive
        return lo + (long)(next() % (unsigned long long)(hi - lo + 1));
    }
};

// largest d with d^(n+1) <= N^(n(n+1)-1), i.e. floor(N^{n - 1/(n+1)})
Int pow_floor(const Int& N, int n) {
    Int p = ipow(N, (unsigned long)(n * (n + 1) - 1));
    Int d;
    mpz_root(d.get_mpz_t(), p.get_mpz_t(), (unsigned long)(n + 1));
    return d;
}

// floor(N^n - r3 * N^{n - 1/(n+1)}), exact (binary search on the ceiling of
// the subtracted term)
Int floor_pruned(const Int& N, int n, const Rat& r3) {
    if (r3 < 0) throw DomainError("floor_pruned: R3 < 0");
    Int nn = ipow(N, (unsigned long)n);
    if (r3 == 0) return nn;
    Int p = r3.get_num(), q = r3.get_den();
    Int rhs = ipow(p, (unsigned long)(n + 1)) * ipow(N, (unsigned long)(n * (n + 1) - 1));
    // smallest m with (m q)^(n+1) >= p^(n+1) N^(n(n+1)-1)
    auto ge = [&](const Int& m) {
        return ipow(m * q, (unsigned long)(n + 1)) >= rhs;
    };
    Int lo = 0, hi = nn + 1;
    while (hi - lo > 1) {
        Int mid = (lo + hi) / 2;
        if (ge(mid))
            hi = mid;
        else
            lo = mid;
    }
    return nn - hi;
}

Rat rat_from_mpfr(mpfr_srcptr m) {
    if (mpfr_zero_p(m)) return Rat(0);
    Int mant;
    mpfr_exp_t e = mpfr_get_z_2exp(mant.get_mpz_t(), m);
    Rat r(mant);
    if (e >= 0)
        r *= Rat(ipow(Int(2), (unsigned long)e));
    else
        r /= Rat(ipow(Int(2), (unsigned long)(-e)));
    r.canonicalize();
    return r;
}

// fraction-free rank tracker over Z^(n+1); reports rank <= cap early
struct RankTracker {
    std::vector<IntVector> pivots;

    bool add(IntVector v) {
        for (const IntVector& p : pivots) {
            size_t j = 0;
            while (j < p.size() && p[j] == 0) ++j;
            if (v[j] == 0) continue;
            Int a = p[j], b = v[j];
            for (size_t i = 0; i < v.size(); ++i) v[i] = v[i] * a - p[i] * b;
        }
        for (const Int& c : v)
            if (c != 0) {
                pivots.push_back(std::move(v));
                return true;
            }
        return false;
    }
    int rank() const { return (int)pivots.size(); }
};

}  // namespace

// ---------------------------------------------------------------------------
// branching survey

BranchingStats branching_survey(const PsiSpec& spec, const Constants& consts,
                                const EpochSchedule& sched, int samples) {
    (void)spec;
    (void)consts;
    const Grid& g = sched.grid;
    int n = g.n;
    if (samples < 1) throw DomainError("branching_survey: samples < 1");
    if (sched.epochs.empty()) throw DomainError("branching_survey: empty schedule");
    const Epoch& e = sched.epochs[0];
    LogQuantity M = g.step();
    // pre-condition G4 (M_k > 3M): the S_C ball must have radius < 1
    if ((e.m_k - LogValue(M.scaled(Rat(3)))).sign() <= 0)
        throw PreconditionError("branching_survey: M_1 <= 3M");
    if (!mpz_fits_slong_p(g.N.get_mpz_t()))
        throw DomainError("branching_survey: N too large");
    long Nl = mpz_get_si(g.N.get_mpz_t());
    long nn = 1;
    for (int i = 0; i < n; ++i) {
        if (nn > (1L << 40) / Nl) throw DomainError("branching_survey: N^n too large");
        nn *= Nl;
    }
    LogValue log2v(LogQuantity::log_rational(2));
    LogValue thresh = -e.m_k + LogValue(M) + log2v;        // kept-child rule
    LogValue sc_log = -e.m_k + LogValue(M.scaled(Rat(3)));  // S_C radius
    long stride = std::max<long>(1, e.l_minus / 16);

    BranchingStats st;
    st.N = g.N;
    st.n = n;
    st.samples = samples;
    st.per_level_counts.assign((size_t)samples, {});
    std::vector<long> worst_deficit((size_t)samples, 0);
    std::vector<long> min_count((size_t)samples, nn);
    std::vector<long> sc_checks((size_t)samples, 0), sc_size((size_t)samples, 0);
    std::vector<int> sc_rank((size_t)samples, 0);

    std::vector<std::exception_ptr> errs((size_t)samples);
#pragma omp parallel for schedule(dynamic)
    for (int s = 0; s < samples; ++s) {
        try {
            Lcg rng(0x9e3779b97f4a7c15ull + (unsigned long long)s);
            TrajectoryWalker w = TrajectoryWalker::centered(g);
            for (long l = 1; l <= e.l_minus; ++l) {
                // S_C at the parent center, time lM
                if (l % stride == 0 || l == e.l_minus) {
                    TrajectoryWalker wf = w.freeze();
                    wf.advance();
                    Int bound = ceil_exp(sc_log + LogValue(wf.unscale_log())) - 1;
                    RankTracker rk;
                    long size = 0;
                    if (bound >= 1) {
                        for (const Candidate& cand : enumerate_box(wf.basis(), bound)) {
                            ++size;
                            rk.add(cand.coords);
                            if (rk.rank() > n)
                                throw InternalError(
                                    "SIMPLEX_VIOLATION: n+1 independent vectors shorter "
                                    "than 1 in a covolume-1 lattice at level " +
                                    std::to_string(l));
                        }
                    }
                    ++sc_checks[(size_t)s];
                    sc_size[(size_t)s] = std::max(sc_size[(size_t)s], size);
                    sc_rank[(size_t)s] = std::max(sc_rank[(size_t)s], rk.rank());
                }
                // count kept children, pick one at random
                std::vector<IntVector> kept;
                IntVector digits((size_t)n, Int(0));
                for (long idx = 0; idx < nn; ++idx) {
                    TrajectoryWalker trial = w;
                    trial.descend(digits);
                    if ((LogValue(trial.lambda1_log()) - thresh).sign() >= 0)
                        kept.push_back(digits);
                    int i = n - 1;
                    while (i >= 0) {
                        digits[(size_t)i] += 1;
                        if (digits[(size_t)i] < g.N) break;
                        digits[(size_t)i] = 0;
                        --i;
                    }
                }
                if (kept.empty())
                    throw InfeasibleError("A_l", "branching_survey: no kept subcube at level " +
                                                     std::to_string(l));
                long count = (long)kept.size();
                st.per_level_counts[(size_t)s].push_back(count);
                worst_deficit[(size_t)s] = std::max(worst_deficit[(size_t)s], nn - count);
                min_count[(size_t)s] = std::min(min_count[(size_t)s], count);
                w.descend(kept[(size_t)(rng.next() % (unsigned long long)kept.size())]);
            }
        } catch (...) {
            errs[(size_t)s] = std::current_exception();
        }
    }
    for (const std::exception_ptr& e2 : errs)
        if (e2) std::rethrow_exception(e2);

    long deficit = 0, mincnt = nn;
    for (int s = 0; s < samples; ++s) {
        deficit = std::max(deficit, worst_deficit[(size_t)s]);
        mincnt = std::min(mincnt, min_count[(size_t)s]);
        st.s_c_checks += sc_checks[(size_t)s];
        st.s_c_max_size = std::max(st.s_c_max_size, sc_size[(size_t)s]);
        st.s_c_max_rank = std::max(st.s_c_max_rank, sc_rank[(size_t)s]);
    }
    st.r3_fitted = deficit == 0 ? Rat(0) : Rat(Int(deficit), pow_floor(g.N, n));
    st.r3_fitted.canonicalize();
    st.min_fraction = Rat(Int(mincnt), Int(nn));
    st.min_fraction.canonicalize();
    return st;
}

// ---------------------------------------------------------------------------
// dimension bound

DimBound dim_lower_bound(const Int& N, int n, const Rat& r3, const Rat& lambda) {
    if (N < 2 || n < 1 || lambda <= 0) throw DomainError("dim_lower_bound: bad arguments");
    DimBound out;
    out.target = Rat(n + 1) / lambda;
    out.target.canonicalize();
    out.floor_arg = floor_pruned(N, n, r3);
    if (out.floor_arg <= 0)
        throw DomainError("dim_lower_bound: N^n - R3 N^{n-1/(n+1)} <= 0");
    Rat factor = Rat(n + 1) / (Rat(n) * lambda);
    // exact when floor_arg is a rational power of N
    for (int y = 1; y <= 64 && !out.exact; ++y) {
        Int fy = ipow(out.floor_arg, (unsigned long)y);
        double z0 = (double)y * std::log(mpz_get_d(out.floor_arg.get_mpz_t())) /
                    std::log(mpz_get_d(N.get_mpz_t()));
        for (long z = std::max<long>(0, (long)std::llround(z0) - 1);
             z <= (long)std::llround(z0) + 1; ++z) {
            if (ipow(N, (unsigned long)z) == fy) {
                out.value = Rat(z, y) * factor;
                out.value.canonicalize();
                out.exact = true;
                break;
            }
        }
    }
    if (!out.exact) {
        // dyadic log ratio rounded down (conservative)
        mpfr_prec_t prec =
            std::max<mpfr_prec_t>(128, (mpfr_prec_t)mpz_sizeinbase(out.floor_arg.get_mpz_t(), 2) + 32);
        Mpfr lf(prec), ln(prec);
        mpfr_set_z(lf.get(), out.floor_arg.get_mpz_t(), MPFR_RNDD);
        mpfr_log(lf.get(), lf.get(), MPFR_RNDD);
        mpfr_set_z(ln.get(), N.get_mpz_t(), MPFR_RNDU);
        mpfr_log(ln.get(), ln.get(), MPFR_RNDU);
        mpfr_div(lf.get(), lf.get(), ln.get(), MPFR_RNDD);
        out.value = rat_from_mpfr(lf.get()) * factor;
        out.value.canonicalize();
    }
    return out;
}

// ---------------------------------------------------------------------------
// pruned tree, mass check, box count

PrunedTree pruned_tree(const EpochSchedule& sched, const Rat& r3, int depth) {
    if (depth < 1 || depth > (int)sched.epochs.size())
        throw DomainError("pruned_tree: depth out of range");
    const Grid& g = sched.grid;
    PrunedTree tree;
    tree.N = g.N;
    tree.n = g.n;
    tree.r3 = r3;
    Int b1 = floor_pruned(g.N, g.n, r3);
    if (b1 < 1) throw DomainError("pruned_tree: branching factor < 1");
    long prev_plus = 0;
    for (int k = 1; k <= depth; ++k) {
        const Epoch& e = sched.epochs[(size_t)k - 1];
        for (long l = prev_plus + 1; l <= e.l_minus; ++l) tree.b.push_back(b1);
        for (long l = e.l_minus + 1; l <= e.l_plus; ++l) tree.b.push_back(Int(1));
        prev_plus = e.l_plus;
    }
    return tree;
}

MassReport mass_check(const PrunedTree& tree, const Rat& alpha, int trials) {
    if (alpha < 0 || trials < 1) throw DomainError("mass_check: bad arguments");
    long L = (long)tree.b.size();
    if (L == 0) throw DomainError("mass_check: empty tree");
    const Int& p = alpha.get_num();
    const Int& q = alpha.get_den();
    if (!mpz_fits_slong_p(p.get_mpz_t()) || !mpz_fits_slong_p(q.get_mpz_t()))
        throw DomainError("mass_check: alpha too complex");
    // pre-condition: alpha < log(b_1...b_l) / (l log N) for every built level,
    // i.e. N^{p l} < (b_1...b_l)^q exactly
    std::vector<Int> prod((size_t)L);
    Int acc = 1;
    for (long l = 1; l <= L; ++l) {
        acc *= tree.b[(size_t)l - 1];
        prod[(size_t)l - 1] = acc;
        Int lhs = ipow(tree.N, (unsigned long)(mpz_get_si(p.get_mpz_t()) * l));
        Int rhs = ipow(acc, (unsigned long)mpz_get_si(q.get_mpz_t()));
        if (lhs >= rhs)
            throw PreconditionError("mass_check: alpha >= liminf proxy at level " +
                                    std::to_string(l));
    }
    // log N = ((n+1)/n) M
    Grid g(tree.N, tree.n);
    LogQuantity logN = g.step().scaled(Rat(tree.n + 1, tree.n));
    LogValue bound(LogQuantity::log_rational(Rat(ipow(Int(3) * tree.N, (unsigned long)tree.n))));
    MassReport rep;
    rep.trials = trials;
    rep.pass = true;
    Lcg rng;
    std::optional<LogValue> max_ratio;
    for (int t = 0; t < trials; ++t) {
        long j = rng.uniform(1, L);
        // mu(B) <= (3N)^n (b_1...b_j)^{-1} for a ball of radius r = N^{-j};
        // ratio mu(B)/r^alpha
        LogValue ratio = bound - LogValue(LogQuantity::log_rational(Rat(prod[(size_t)j - 1]))) +
                         LogValue(logN.scaled(alpha * Rat(j)));
        if ((ratio - bound).sign() > 0) rep.pass = false;
        if (!max_ratio || (ratio - *max_ratio).sign() > 0) max_ratio = ratio;
    }
    rep.max_ratio_decimal = max_ratio->decimal(8);
    return rep;
}

BoxCountEstimate box_count_estimate(const PrunedTree& tree) {
    BoxCountEstimate est;
    est.levels = (int)tree.b.size();
    if (est.levels == 0) return est;
    double logN = std::log(mpz_get_d(tree.N.get_mpz_t()));
    double sx = 0, sy = 0, sxx = 0, sxy = 0, y = 0;
    Mpfr m(64);
    Int acc = 1;
    for (int l = 1; l <= est.levels; ++l) {
        acc *= tree.b[(size_t)l - 1];
        mpfr_set_z(m.get(), acc.get_mpz_t(), MPFR_RNDN);
        mpfr_log(m.get(), m.get(), MPFR_RNDN);
        y = mpfr_get_d(m.get(), MPFR_RNDN);
        double x = (double)l * logN;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double d = (double)est.levels * sxx - sx * sx;
    est.slope = d == 0 ? 0 : ((double)est.levels * sxy - sx * sy) / d;
    return est;
}

}  // namespace dioph
