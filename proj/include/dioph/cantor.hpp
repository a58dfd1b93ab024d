// Cantor-set construction: Case-1 subcube filtering, Case-2 witness
// selection, certificate assembly, and the independent condition verifier.
#pragma once

#include <iosfwd>
#include <optional>

#include "dioph/schedule.hpp"
#include "dioph/walker.hpp"

namespace dioph {

struct Cube {
    long level = 0;
    IntVector corner;  // n entries, 0 <= c_i < N^level

    static Cube root(int n) { return Cube{0, IntVector((size_t)n, Int(0))}; }
    std::vector<Rat> center(const Grid& g) const;  // (2 c_i + 1) / (2 N^l)
    Rat side(const Grid& g) const;                 // N^{-l}
    bool contains(const Grid& g, const std::vector<Rat>& p) const;
    Cube child(const IntVector& digits, const Grid& g) const;
};

struct ConditionFlag {
    bool pass = false;
    std::string margin;
};

struct EpochWitness {
    int k = 0;
    RationalPoint v;         // v_k from rational_near_bad
    std::vector<Rat> y;      // y_k placement inside C_{l_k^-}
    Rat d_exact;             // d(v_k, y_k), exact rational
    bool d_is_target = false;  // d equals (1 - 1/(2k)) psi(H(v_k)) exactly
    long near_bad_level = 0;   // grid level t'' of the accepted near-bad call
    ConditionFlag b_i, b_ii, b_iii;  // filled by verify_conditions
};

struct AuditEntry {
    int k = 0;
    long level = 0;  // -1 for per-epoch aggregate checks
    std::string condition;
    bool pass = false;
    std::string margin;
};

struct Certificate {
    PsiSpec spec;
    Constants consts;
    EpochSchedule schedule;
    std::vector<IntVector> address;  // per-level subdivision digits (level 1..L)
    std::vector<EpochWitness> witnesses;
    std::vector<AuditEntry> audit;
    bool theorem_guarantee = false;

    Cube cube_at(long level) const;  // 0 <= level <= address.size()
    std::vector<Rat> deepest_center() const;
};

// Case 1: the subcubes of c (at level c.level + 1) certified to satisfy
// c_x((l)M) >= -M_k + M for every x, via the center value and the log 2
// distortion bound
std::vector<Cube> case1_filter(const Cube& c, int k, const PsiSpec& spec,
                               const EpochSchedule& sched);

struct Case2Result {
    std::vector<Cube> chain;  // C_l(y_k) for l = l_k^- + 1 .. l_k^+
    EpochWitness witness;
};
// Case 2 at level l_k^-: pick v_k by the near-bad lemma (adaptive upward grid
// scan of the call time until (B)(i) holds), place y_k at sup-distance
// (1 - 1/(2k)) psi(H(v_k)) from v_k inside c, and return the singleton chain.
// base, if given, must be a centered walker at c (reused for the scan).
Case2Result case2_select(const Cube& c, int k, const PsiSpec& spec, const EpochSchedule& sched,
                         const TrajectoryWalker* base = nullptr);

Certificate construct(const PsiSpec& spec, const Constants& consts, const EpochSchedule& sched,
                      int depth);

// independent replay: recompute c_x at every grid level at the deepest cube
// center and re-check (A_l), (B)(i)-(iii), the lambda_1 witness identity,
// the lambda_2 separation, and trajectory-vs-r_psi
std::vector<AuditEntry> verify_conditions(const Certificate& cert, long through_level);
std::vector<AuditEntry> verify_conditions(const Certificate& cert);

}  // namespace dioph
