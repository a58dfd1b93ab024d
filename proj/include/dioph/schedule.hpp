// Epoch-time scheduler: pick the times t_k subject to the ratio conditions
// (I)-(III) and the largeness predicates (G1)-(G5), derive all per-epoch
// quantities, and build the piecewise-linear template above r_psi.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dioph/psi.hpp"

namespace dioph {

struct Constants {
    int n = 1;
    Rat r0, r1, r2;
    Rat r3 = 0;       // empirical branching constant, fitted elsewhere
    LogQuantity on1;  // explicit O_n(1): log((n+1)!) from Minkowski's 2nd theorem
    bool paper_profile = false;

    // R0 = max(4n, n^2), R1 = 10 R0 / (1 - gamma), R2 = 2n(R1 + 6 R0) + 1
    static Constants paper(const PsiSpec& spec);
    // user-supplied smaller constants; schedules built from these carry no
    // theorem guarantee but all empirical checks still run
    static Constants relaxed(const PsiSpec& spec, const Rat& r0, const Rat& r1, const Rat& r2);
};

struct Epoch {
    int k = 0;
    GridTime t_k;
    LogValue m_k;               // M_k = -sup_{t >= t_{k-1}} r_psi(t)
    LogValue t_minus;           // t_k + r_psi(t_k)
    LogValue t_plus_cantor;     // t_k + R2 M_k
    LogValue t_plus_template;   // t_k - n r_psi(t_k)
    long l_minus = 0;           // ceil((t_k^- - 4 R0 M_k) / M)
    long l_plus = 0;            // floor((t_k + R2 M_k) / M)
    Rat eps_k;                  // min(1/(2k), 1/8)
    int iterations = 0;         // downward steps taken until (III) held
};

struct EpochSchedule {
    PsiSpec spec;
    Constants consts;
    Grid grid;
    GridTime t0;
    std::vector<Epoch> epochs;
    std::optional<Rat> gap_ratio;
    bool minimal = false;
};

struct PredicateCheck {
    int k = 0;  // 0 = constants-level invariant
    std::string name;
    bool pass = false;
    std::string margin;  // decimal slack (>= 0 iff pass), or a short reason
};

struct ScheduleOptions {
    std::optional<Rat> gap_ratio;
    bool minimal = false;        // skip the post-search doubling
    long level_ceiling = 4000000;
};

// deterministic search: per epoch the minimal grid time passing every
// predicate, then doubled once unless minimal is set; throws InfeasibleError
// naming the first failing predicate when the ceiling is reached
EpochSchedule choose_times(const PsiSpec& spec, const Constants& consts, const Grid& grid,
                           int k_max, const ScheduleOptions& opts = {});

// independent re-check of every predicate on an existing schedule
std::vector<PredicateCheck> audit_schedule(const EpochSchedule& sched);

struct Template {
    std::vector<std::pair<LogValue, LogValue>> breakpoints;  // (t, T(t))
    std::vector<Rat> slopes;                                 // per segment, in {-1, 0, 1/n}

    // piecewise-linear evaluation; slope 0 continuation past the last corner
    LogValue eval(const LogValue& t) const;
};

Template build_template(const PsiSpec& spec, const EpochSchedule& sched);

}  // namespace dioph
