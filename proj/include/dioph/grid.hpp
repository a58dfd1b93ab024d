// Grid of flow times t = l*M with M = (n/(n+1)) log N, N integer >= 2.
// On the grid, e^{t/n} = N^{l/(n+1)} and e^{-t} = N^{-ln/(n+1)}, which keeps
// every scaled lattice integral.
#pragma once

#include "dioph/logq.hpp"
#include "dioph/rational.hpp"

namespace dioph {

struct Grid {
    Int N;  // subdivision factor, integer >= 2
    int n;  // ambient dimension

    Grid() : N(0), n(0) {}
    Grid(Int N_, int n_);

    LogQuantity step() const;  // M = (n/(n+1)) log N
    bool operator==(const Grid&) const = default;
};

struct GridTime {
    Grid grid;
    long level = 0;

    GridTime() = default;
    GridTime(const Grid& g, long l) : grid(g), level(l) {}
    LogQuantity t() const { return grid.step().scaled(Rat(level)); }
};

// smallest l with l*M >= t / largest l with l*M <= t
long grid_ceil(const Grid& g, const LogValue& t);
long grid_floor(const Grid& g, const LogValue& t);

// N from a requested step M (double, advisory): smallest integer N >= 2 with
// (n/(n+1)) log N >= M_request
Int grid_base_for_step(double m_request, int n);

}  // namespace dioph
