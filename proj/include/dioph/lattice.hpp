// Exact lattice computations for a_t u_x Z^{n+1}: sup-norm shortest vectors,
// successive minima, and the rational-point extraction near badly-approximable
// points.  All arithmetic runs on the integer-scaled lattice
// diag(1, N^l, ..., N^l) u_x Z^{n+1} cleared of denominators; the unscaling
// factor lives in LogQuantity.
#pragma once

#include <optional>
#include <vector>

#include "dioph/grid.hpp"
#include "dioph/logq.hpp"
#include "dioph/rational.hpp"

namespace dioph {

using IntVector = std::vector<Int>;

Int sup_norm(const IntVector& v);

// Rational point v = (p_1/q, ..., p_n/q) as a primitive vector (q, p...), q > 0.
struct RationalPoint {
    IntVector vec;  // (q, p_1..p_n), primitive, q > 0

    static RationalPoint from_vector(IntVector w);  // normalizes; q must be != 0
    const Int& q() const { return vec[0]; }
    Int height() const;                 // max |coordinate|
    std::vector<Rat> value() const;     // (p_i/q)
    // sup-distance d(x, v), exact
    Rat dist(const std::vector<Rat>& x) const;
};

struct FlowPoint {
    std::vector<Rat> x;  // n coordinates in [0,1)
    GridTime t;
};

// log ||a_t u_x w|| with arbitrary (possibly off-grid) t, plus e1-dominance
// (|first coordinate| attains the max; ties count as dominant).
struct NormResult {
    LogValue norm_log;
    bool e1_dominant = false;
};
NormResult flow_norm_log(const std::vector<Rat>& x, int n, const LogValue& t,
                         const IntVector& w);
NormResult flow_norm_log(const FlowPoint& fp, const IntVector& w);

// --- scaled-basis plumbing (shared with the incremental walker) -------------

// Integer basis of the scaled lattice; cols[j] are coordinates, coeffs[j] the
// expression of column j in the original (q, p) basis.
struct Basis {
    int dim = 0;
    std::vector<IntVector> cols;
    std::vector<IntVector> coeffs;
};

Basis scaled_basis(const FlowPoint& fp, Int& denom_out);  // denom = lcm of x denominators
void gauss_reduce(Basis& b);  // dim 2
void lll_reduce(Basis& b);    // any dim, delta = 3/4, exact rational GSO
void reduce(Basis& b);

struct Candidate {
    IntVector coords, coeff;
    Int norm;  // sup-norm of coords
};
// all nonzero lattice vectors with sup-norm <= bound, canonicalized (first
// nonzero coefficient positive), in lexicographic coefficient order
std::vector<Candidate> enumerate_box(const Basis& b, const Int& bound, bool parallel = false);

struct MinimaResult {
    std::vector<LogQuantity> lambda_logs;      // log lambda_1 .. log lambda_k
    std::vector<IntVector> witnesses;          // matching (q,p)-coefficient vectors
};
// successive minima of the scaled basis; log lambda_i = log(int norm) - unscale_log
MinimaResult minima_from_basis(Basis b, int k, const LogQuantity& unscale_log,
                               bool parallel = false);

// --- public operations ------------------------------------------------------

MinimaResult successive_minima(const FlowPoint& fp, int k);
LogQuantity lambda1_log(const FlowPoint& fp);

struct NearBadResult {
    RationalPoint v;
    long snapped_level;   // grid level of t + 2nR rounded up
    LogQuantity h_log;    // log H(v)
    Rat dist;             // d(x, v), exact
};
// Lemma "rational points near badly approximable points": requires
// lambda_1(a_t u_x Z^{n+1}) >= e^{-R}; returns v with
// e^{t-R} <= H(v) <= e^{t+2nR+M} and d(x,v) <= (1/2) e^{-(n+1)t/n}.
NearBadResult rational_near_bad(const FlowPoint& fp, const LogValue& R);

// selection step of rational_near_bad: given the reduced scaled basis of
// a_{l2 M} u_x Z^{n+1} (coeffs tracked from the standard basis), pick the
// shortest q != 0 vector and check the lemma's post-conditions against the
// original call time t; callers must have checked lambda_1 >= e^{-R} at t
NearBadResult near_bad_select(const Basis& b, const std::vector<Rat>& x, const Grid& g,
                              const LogValue& t, const LogValue& R, long l2);

}  // namespace dioph
