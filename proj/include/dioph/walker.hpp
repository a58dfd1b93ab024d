// Incremental level-by-level lattice walker.
//
// Recomputing a reduced basis of a_{lM} u_x Z^{n+1} from scratch at level l
// costs time proportional to l (it replays the whole continued-fraction /
// reduction history), so a sweep over levels 0..L would be quadratic in L.
// The walker instead carries the reduced scaled basis from one level to the
// next: the diagonal flow step multiplies fixed rows by N (and a cube-center
// refinement adds one small cross term), after which the basis is nearly
// reduced and re-reduction takes amortized O(1) steps.
#pragma once

#include "dioph/lattice.hpp"

namespace dioph {

class TrajectoryWalker {
  public:
    // fixed-x mode: x constant, level starts at l0 (basis built from scratch)
    TrajectoryWalker(const Grid& g, std::vector<Rat> x, long l0 = 0);
    // center mode: starts at the center of the level-0 cube [0,1)^n and
    // follows cube subdivisions; x is always the current cube's center
    static TrajectoryWalker centered(const Grid& g);

    long level() const { return level_; }
    const Grid& grid() const { return grid_; }
    const std::vector<Rat>& x() const { return x_; }
    const std::vector<Int>& corner() const;  // center mode only
    FlowPoint flow_point() const { return FlowPoint{x_, GridTime(grid_, level_)}; }

    void advance();  // fixed-x mode: t += M
    // center mode: go to the child cube given by per-coordinate digits in [0, N)
    void descend(const std::vector<Int>& digits);

    // center mode only: a fixed-x copy pinned at the current cube center, for
    // further advance() steps without rebuilding the basis
    TrajectoryWalker freeze() const;
    const Basis& basis() const { return b_; }

    LogQuantity lambda1_log() const;
    MinimaResult minima(int k) const;
    // log of the scale factor relating integer basis norms to lattice norms
    LogQuantity unscale_log() const;

  private:
    TrajectoryWalker() = default;

    Grid grid_;
    int n_ = 0;
    long level_ = 0;
    bool center_mode_ = false;
    std::vector<Rat> x_;
    std::vector<Int> corner_;  // center mode: cube corner digits, x_i=(2c_i+1)/(2N^l)
    Int denom_;                // fixed mode: cleared denominator of x
    Int npow_;                 // N^level_
    Basis b_;
};

}  // namespace dioph
