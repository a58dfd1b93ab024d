// Benchmark: serial vs OpenMP box enumeration on scaled lattice bases.
// The parallel path must return exactly the serial result; this binary
// measures both and checks agreement.
#include <chrono>
#include <iostream>

#include "dioph/lattice.hpp"

using namespace dioph;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void bench_case(int n, const Int& N, long level, long denom, long bound_mult) {
    std::vector<Rat> x;
    for (int i = 0; i < n; ++i) {
        x.emplace_back(2 * i + 1, denom);
        x.back().canonicalize();
    }
    FlowPoint fp{x, GridTime(Grid(N, n), level)};
    Int unused;
    Basis b = scaled_basis(fp, unused);
    reduce(b);
    Int shortest = b.cols[0][0] < 0 ? Int(-b.cols[0][0]) : b.cols[0][0];
    for (const auto& col : b.cols)
        shortest = std::min(shortest, sup_norm(col));
    Int bound = shortest * bound_mult;

    auto t0 = Clock::now();
    auto serial = enumerate_box(b, bound, false);
    double serial_ms = ms_since(t0);
    t0 = Clock::now();
    auto parallel = enumerate_box(b, bound, true);
    double parallel_ms = ms_since(t0);

    bool same = serial.size() == parallel.size();
    for (size_t i = 0; same && i < serial.size(); ++i)
        same = serial[i].coeff == parallel[i].coeff && serial[i].norm == parallel[i].norm;
    std::cout << "n=" << n << " N=" << N << " l=" << level << " |box|=" << serial.size()
              << "  serial " << serial_ms << " ms, parallel " << parallel_ms << " ms, "
              << (same ? "results identical" : "MISMATCH") << "\n";
    if (!same) std::exit(1);
}

}  // namespace

int main() {
    bench_case(1, Int(16), 40, 997, 400);
    bench_case(2, Int(16), 12, 997, 24);
    bench_case(2, Int(4), 20, 641, 40);
    bench_case(3, Int(4), 8, 257, 10);
    return 0;
}
