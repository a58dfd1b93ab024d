// Branching statistics, the pruned-tree mass-distribution lower bound, and a
// box-counting estimator.
//
// The surveys are deterministic: sampling uses the linear-congruential stream
//   s_{i+1} = 6364136223846793005 * s_i + 1442695040888963407  (mod 2^64)
// seeded with 0x9e3779b97f4a7c15, consuming one value per decision in the
// order documented at each operation.
#pragma once

#include "dioph/cantor.hpp"
#include "dioph/schedule.hpp"

namespace dioph {

struct BranchingStats {
    Int N;
    int n = 0;
    int samples = 0;
    // per sample path: kept-child counts at Case-1 levels 1..l_1^-
    std::vector<std::vector<long>> per_level_counts;
    Rat r3_fitted;     // max over samples of (N^n - count) / N^{n - 1/(n+1)},
                       // denominator rounded down (so the fit over-estimates)
    Rat min_fraction;  // min kept / N^n
    long s_c_checks = 0;    // hyperplane checks performed
    long s_c_max_size = 0;  // largest |S_C| seen
    int s_c_max_rank = 0;   // largest rank of span(S_C); always <= n
};

// Random Case-1 descent paths through epoch 1 of the schedule.  At every level
// the kept children are counted with the same center-plus-log-2 rule as
// case1_filter; one kept child is chosen by the LCG stream (one draw per
// level).  At evenly spaced levels the set S_C of lattice vectors shorter than
// e^{-M_1 + 3M} at the parent center is enumerated and its rank is checked to
// be at most n; rank n+1 is impossible for a covolume-1 lattice and raises
// InternalError("SIMPLEX_VIOLATION ...").
BranchingStats branching_survey(const PsiSpec& spec, const Constants& consts,
                                const EpochSchedule& sched, int samples);

struct DimBound {
    Int floor_arg;  // floor(N^n - R3 N^{n - 1/(n+1)})
    Rat value;      // (log floor_arg / log N) * (n+1) / (n lambda)
    bool exact = false;  // value is exact (floor_arg a rational power of N)
    Rat target;          // (n+1) / lambda
};
// The displayed lower bound on dim_H E(psi); when the log ratio is irrational
// the value is a dyadic approximation rounded down (conservative).
DimBound dim_lower_bound(const Int& N, int n, const Rat& r3, const Rat& lambda);

struct PrunedTree {
    Int N;
    int n = 0;
    Rat r3;
    std::vector<Int> b;  // b_l for l = 1..L; mu(C_l) = (b_1...b_l)^{-1}
};
// b_l = floor(N^n (1 - R3 e^{-M/n})) on Case-1 ranges, 1 on Case-2 ranges,
// through the first `depth` epochs
PrunedTree pruned_tree(const EpochSchedule& sched, const Rat& r3, int depth);

struct MassReport {
    int trials = 0;
    bool pass = false;
    std::string max_ratio_decimal;  // max over trials of mu(B) / r^alpha (log-exact)
};
// Mass-distribution check: random dyadic balls B of radius N^{-j} (one LCG
// draw per trial for j), verifying mu(B) <= (3N)^n r^alpha from the weight
// formula.  Pre-condition: alpha < min_l log(b_1...b_l)/(l log N), checked
// exactly; violation raises PreconditionError.
MassReport mass_check(const PrunedTree& tree, const Rat& alpha, int trials);

struct BoxCountEstimate {  // ESTIMATE only: least-squares slope, double precision
    double slope = 0;
    int levels = 0;
};
BoxCountEstimate box_count_estimate(const PrunedTree& tree);

}  // namespace dioph
