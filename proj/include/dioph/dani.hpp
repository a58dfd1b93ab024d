// Dani correspondence between approximation quality and lattice norms,
// trajectory sampling of c_x(t) against r_psi(t), and the brute-force
// classification oracle over all rationals up to a height bound.
#pragma once

#include <optional>
#include <ostream>

#include "dioph/psi.hpp"
#include "dioph/walker.hpp"

namespace dioph {

struct DaniForwardResult {
    LogValue t;         // log Psi(H(v))
    LogValue norm_log;  // log ||a_t u_x v||
    bool e1_dominant = false;
};

// Prop. (a): d(x, v) <= psi(H(v)) implies the first coordinate dominates at
// t = log Psi(H(v)) and the norm is at most -t + log Psi^{-1}(e^t)
DaniForwardResult dani_forward(const PsiSpec& spec, const std::vector<Rat>& x,
                               const RationalPoint& v);

// Prop. (b): if ||a_t u_x w|| <= e^{-t} Psi^{-1}(e^t) with e1-dominance, the
// rational point of w satisfies H(v) <= Psi^{-1}(e^t) and d(x,v) <= psi(H(v));
// returns nullopt when the hypothesis fails
std::optional<RationalPoint> dani_backward(const PsiSpec& spec, const std::vector<Rat>& x,
                                           const IntVector& w, const LogValue& t);

struct TrajectorySample {
    long level = 0;
    GridTime t;
    LogQuantity c_x;                  // log lambda_1, always <= 0
    std::optional<LogValue> r_psi;    // absent below the psi cutoff time
    IntVector witness;                // (q, p) coefficients of a shortest vector
    bool e1_dominant = false;
};

std::vector<TrajectorySample> trajectory(const PsiSpec& spec, const std::vector<Rat>& x,
                                         const Grid& g, long l_lo, long l_hi);

// columns: level, t, c_x, r_psi, witness_q, witness_p.., e1_dominant
void write_trajectory_csv(const std::vector<TrajectorySample>& samples, std::ostream& os);

struct ClassifyHit {
    RationalPoint v;
    Rat dist;
};
struct ClassifyReport {
    Int h_max;
    Rat c;
    std::vector<ClassifyHit> hits;  // (q, p)-lexicographic order
};

// every primitive rational v with H(v) <= h_max and d(x, v) < c * psi(H(v));
// exhaustive by construction (the independent oracle for certificates)
ClassifyReport classify(const PsiSpec& spec, const std::vector<Rat>& x, const Int& h_max,
                        const Rat& c);

}  // namespace dioph
