// JSON (de)serialization for certificates, schedules, and run configs, plus
// atomic file output.  Exact values travel as "p/q" strings or LogQuantity
// objects {"coeff","mantissa","logN_base","root"}; decimal fields are for
// human inspection only and are never parsed back as exact values.
#pragma once

#include <json.hpp>
#include <string>

#include "dioph/cantor.hpp"
#include "dioph/dimension.hpp"
#include "dioph/schedule.hpp"

namespace dioph {

using Json = nlohmann::json;

std::string rat_str(const Rat& r);
Rat rat_from_str(const std::string& s);  // "p/q" or "p"; ConfigError on junk

Json logq_json(const LogQuantity& q);
LogQuantity logq_from_json(const Json& j);

Json psi_json(const PsiSpec& spec);
PsiSpec psi_from_json(const Json& j);

Json constants_json(const Constants& c);
Constants constants_from_json(const Json& j, const PsiSpec& spec);

// schedule: derived per-epoch quantities are emitted for inspection but only
// the exact skeleton (grid, t0 level, epoch levels, iteration counts) is
// parsed; everything else is recomputed from the spec
Json schedule_json(const EpochSchedule& sched);
EpochSchedule schedule_from_json(const Json& j);

Json certificate_json(const Certificate& cert);
Certificate certificate_from_json(const Json& j);

Json dimension_report_json(const BranchingStats& stats, const DimBound& bound,
                           const Rat& lambda);

// run configuration (cli): psi section, grid {N or M}, constants profile,
// epochs, survey seed/samples; ConfigError names the offending field
struct RunConfig {
    PsiSpec psi;
    Int N;
    std::string profile = "relaxed";  // "paper" | "relaxed"
    Rat r0, r1, r2;                   // relaxed profile only
    int epochs = 1;
    int samples = 2;     // dimension surveys
    int trials = 50;     // mass checks
    bool minimal = true; // schedule search: skip the post-search doubling
    long level_ceiling = 4000000;  // schedule search cutoff

    Grid grid() const { return Grid(N, psi.n); }
    Constants constants() const;
};
RunConfig config_from_json(const Json& j);

// write via temp file + rename in the target directory
void atomic_write(const std::string& path, const std::string& content);

}  // namespace dioph
