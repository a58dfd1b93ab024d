// Command-line surface: reproducible runs of the trajectory sampler, the
// scheduler/template, the Cantor construction, certificate verification, the
// dimension survey, and the classification oracle.
//
// Exit codes: 0 success, 2 config error, 3 domain error, 4 infeasible,
// 5 verification failure.
#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include <fstream>
#include <iostream>
#include <sstream>

#include "dioph/dani.hpp"
#include "dioph/json_io.hpp"

using namespace dioph;

namespace {

RunConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read config: " + path);
    Json j = Json::parse(is, nullptr, true, true);  // allow comments
    return config_from_json(j);
}

std::vector<Rat> parse_point(const std::string& s, int n) {
    std::vector<Rat> x;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) x.push_back(rat_from_str(tok));
    if ((int)x.size() == 1 && n > 1) x.resize((size_t)n, x[0]);
    if ((int)x.size() != n) throw ConfigError("point needs " + std::to_string(n) + " coordinates");
    return x;
}

std::string out_path(const std::string& dir, const std::string& name) {
    return dir.empty() ? name : dir + "/" + name;
}

Json trajectory_sidecar(const std::vector<TrajectorySample>& samples) {
    Json rows = Json::array();
    for (const TrajectorySample& s : samples) {
        Json row{{"level", s.level},
                 {"t", logq_json(s.t.t())},
                 {"c_x", logq_json(s.c_x)},
                 {"witness", Json::array()},
                 {"e1_dominant", s.e1_dominant}};
        for (const Int& w : s.witness) row["witness"].push_back(w.get_str());
        if (s.r_psi && s.r_psi->is_exact())
            row["r_psi"] = logq_json(s.r_psi->exact_part());
        else if (s.r_psi)
            row["r_psi_decimal"] = s.r_psi->decimal(12);
        rows.push_back(std::move(row));
    }
    return rows;
}

int run(int argc, char** argv) {
    CLI::App app{"exactly-psi-approximable construction toolkit"};
    app.require_subcommand(1);
    std::string config_path, out_dir, profile_override;
    int threads = 0;
    app.add_option("--config", config_path, "run configuration (JSON)");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--threads", threads, "OpenMP worker count");
    app.add_option("--profile", profile_override, "constants profile: paper|relaxed");

    auto* traj = app.add_subcommand("trajectory", "sample c_x(lM) against r_psi");
    std::string traj_x = "0";
    long l_lo = 0, l_hi = 8;
    traj->add_option("--x", traj_x, "point, comma-separated rationals p/q");
    traj->add_option("--l-lo", l_lo, "first grid level");
    traj->add_option("--l-hi", l_hi, "last grid level");

    auto* sched_cmd = app.add_subcommand("schedule", "choose the epoch times");
    auto* tmpl_cmd = app.add_subcommand("template", "piecewise-linear template");
    auto* cons_cmd = app.add_subcommand("construct", "run the Cantor construction");
    auto* dim_cmd = app.add_subcommand("dimension", "branching survey and dimension bound");

    auto* ver_cmd = app.add_subcommand("verify", "replay a certificate");
    std::string cert_path;
    std::string ver_hmax;
    ver_cmd->add_option("--certificate", cert_path, "certificate JSON")->required();
    ver_cmd->add_option("--h-max", ver_hmax, "also classify rationals up to this height");

    auto* cls_cmd = app.add_subcommand("classify", "rationals beating c*psi up to a height");
    std::string cls_x = "0", cls_h = "100", cls_c = "1";
    cls_cmd->add_option("--x", cls_x, "point, comma-separated rationals p/q");
    cls_cmd->add_option("--h-max", cls_h, "height bound");
    cls_cmd->add_option("--c", cls_c, "scale factor c (rational)");

    CLI11_PARSE(app, argc, argv);
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif

    // verify needs no config; everything else does
    if (ver_cmd->parsed()) {
        std::ifstream is(cert_path);
        if (!is) throw ConfigError("cannot read certificate: " + cert_path);
        Certificate cert = certificate_from_json(Json::parse(is));
        auto audit = verify_conditions(cert);
        bool all = true;
        for (const AuditEntry& a : audit) {
            if (!a.pass)
                std::cout << "FAIL k=" << a.k << " level=" << a.level << " " << a.condition
                          << " margin=" << a.margin << "\n";
            all = all && a.pass;
        }
        std::cout << (all ? "verify: PASS" : "verify: FAIL") << " (" << audit.size()
                  << " checks)\n";
        if (!ver_hmax.empty() && !cert.witnesses.empty()) {
            ClassifyReport rep = classify(cert.spec, cert.deepest_center(),
                                          Int(ver_hmax.c_str()), Rat(1));
            for (const ClassifyHit& h : rep.hits) {
                std::cout << "hit q=" << h.v.q() << " H=" << h.v.height()
                          << " d=" << rat_str(h.dist) << "\n";
            }
        }
        return all ? 0 : 5;
    }

    if (config_path.empty()) throw ConfigError("missing --config");
    RunConfig cfg = load_config(config_path);
    if (!profile_override.empty()) {
        if (profile_override != "paper" && profile_override != "relaxed")
            throw ConfigError("unknown profile: " + profile_override);
        cfg.profile = profile_override;
    }
    Grid g = cfg.grid();

    if (traj->parsed()) {
        std::vector<Rat> x = parse_point(traj_x, cfg.psi.n);
        auto samples = trajectory(cfg.psi, x, g, l_lo, l_hi);
        std::ostringstream csv;
        write_trajectory_csv(samples, csv);
        atomic_write(out_path(out_dir, "trajectory.csv"), csv.str());
        atomic_write(out_path(out_dir, "trajectory.json"),
                     trajectory_sidecar(samples).dump(2) + "\n");
        std::cout << "trajectory: " << samples.size() << " rows\n";
        return 0;
    }

    ScheduleOptions opts;
    opts.minimal = cfg.minimal;
    opts.level_ceiling = cfg.level_ceiling;
    if (sched_cmd->parsed() || tmpl_cmd->parsed() || cons_cmd->parsed() || dim_cmd->parsed()) {
        EpochSchedule sched =
            choose_times(cfg.psi, cfg.constants(), g, std::max(cfg.epochs, 1), opts);
        if (sched_cmd->parsed()) {
            atomic_write(out_path(out_dir, "schedule.json"), schedule_json(sched).dump(2) + "\n");
            auto checks = audit_schedule(sched);
            bool all = true;
            for (const auto& c : checks) all = all && c.pass;
            std::cout << "schedule: " << sched.epochs.size() << " epochs, audit "
                      << (all ? "PASS" : "FAIL") << "\n";
            return all ? 0 : 5;
        }
        if (tmpl_cmd->parsed()) {
            Template tmpl = build_template(cfg.psi, sched);
            Json corners = Json::array();
            for (const auto& [t, v] : tmpl.breakpoints)
                corners.push_back(Json{{"t", t.decimal(12)}, {"T", v.decimal(12)}});
            Json slopes = Json::array();
            for (const Rat& s : tmpl.slopes) slopes.push_back(rat_str(s));
            atomic_write(out_path(out_dir, "template.json"),
                         Json{{"corners", corners}, {"slopes", slopes}}.dump(2) + "\n");
            std::cout << "template: " << tmpl.breakpoints.size() << " corners\n";
            return 0;
        }
        if (cons_cmd->parsed()) {
            Certificate cert = construct(cfg.psi, cfg.constants(), sched, cfg.epochs);
            atomic_write(out_path(out_dir, "certificate.json"),
                         certificate_json(cert).dump(2) + "\n");
            bool all = true;
            for (const AuditEntry& a : cert.audit) all = all && a.pass;
            std::cout << "construct: depth " << cfg.epochs << ", audit "
                      << (all ? "PASS" : "FAIL") << "\n";
            return all ? 0 : 5;
        }
        // dimension
        BranchingStats stats = branching_survey(cfg.psi, cfg.constants(), sched, cfg.samples);
        DimBound bound = dim_lower_bound(g.N, g.n, stats.r3_fitted, cfg.psi.lambda);
        atomic_write(out_path(out_dir, "dimension.json"),
                     dimension_report_json(stats, bound, cfg.psi.lambda).dump(2) + "\n");
        std::cout << "dimension: bound >= " << rat_str(bound.value) << " (target "
                  << rat_str(bound.target) << ")\n";
        return 0;
    }

    // classify
    std::vector<Rat> x = parse_point(cls_x, cfg.psi.n);
    ClassifyReport rep = classify(cfg.psi, x, Int(cls_h.c_str()), rat_from_str(cls_c));
    for (const ClassifyHit& h : rep.hits) {
        std::cout << "hit";
        for (const Int& c : h.v.vec) std::cout << " " << c;
        std::cout << " d=" << rat_str(h.dist) << "\n";
    }
    std::cout << "classify: " << rep.hits.size() << " hits up to H=" << rep.h_max << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 3;
    } catch (const PreconditionError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 3;
    } catch (const InfeasibleError& e) {
        std::cerr << "INFEASIBLE (" << e.predicate << "): " << e.what() << "\n";
        return 4;
    } catch (const VerifyError& e) {
        std::cerr << "verification error: " << e.what() << "\n";
        return 5;
    }
}
