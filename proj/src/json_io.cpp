#include "dioph/json_io.hpp"

#include <cstdio>
#include <fstream>

namespace dioph {

namespace {

const Json& field(const Json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end()) throw ConfigError(std::string("missing field: ") + name);
    return *it;
}

Int int_from_json(const Json& j) {
    if (j.is_number_integer()) return Int((long)j.get<long long>());
    if (j.is_string()) {
        Int v;
        if (mpz_set_str(v.get_mpz_t(), j.get<std::string>().c_str(), 10) != 0)
            throw ConfigError("bad integer: " + j.get<std::string>());
        return v;
    }
    throw ConfigError("expected integer");
}

Rat rat_from_json(const Json& j) {
    if (j.is_number_integer()) return Rat((long)j.get<long long>());
    if (j.is_string()) return rat_from_str(j.get<std::string>());
    throw ConfigError("expected rational \"p/q\" string");
}

Json rats_json(const std::vector<Rat>& v) {
    Json a = Json::array();
    for (const Rat& r : v) a.push_back(rat_str(r));
    return a;
}

std::vector<Rat> rats_from_json(const Json& j) {
    std::vector<Rat> v;
    for (const Json& e : j) v.push_back(rat_from_json(e));
    return v;
}

Json ints_json(const IntVector& v) {
    Json a = Json::array();
    for (const Int& c : v) a.push_back(c.get_str());
    return a;
}

IntVector ints_from_json(const Json& j) {
    IntVector v;
    for (const Json& e : j) v.push_back(int_from_json(e));
    return v;
}

}  // namespace

std::string rat_str(const Rat& r) {
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rat rat_from_str(const std::string& s) {
    Rat r;
    if (mpq_set_str(r.get_mpq_t(), s.c_str(), 10) != 0)
        throw ConfigError("bad rational: " + s);
    if (r.get_den() == 0) throw ConfigError("zero denominator: " + s);
    r.canonicalize();
    return r;
}

// ---------------------------------------------------------------------------
// exact values

Json logq_json(const LogQuantity& q) {
    return Json{{"coeff", rat_str(q.coeff())},
                {"mantissa", rat_str(q.mantissa())},
                {"logN_base", q.base().get_str()},
                {"root", q.root()},
                {"decimal", q.decimal(12)}};
}

LogQuantity logq_from_json(const Json& j) {
    return LogQuantity::make(int_from_json(field(j, "logN_base")),
                             rat_from_json(field(j, "coeff")),
                             rat_from_json(field(j, "mantissa")),
                             j.value("root", 1ul));
}

Json psi_json(const PsiSpec& spec) {
    return Json{{"n", spec.n},
                {"family", spec.family == PsiFamily::Power ? "power" : "power_log"},
                {"lambda", rat_str(spec.lambda)},
                {"beta", rat_str(spec.beta)},
                {"c", rat_str(spec.c)},
                {"s0", spec.s0.get_str()}};
}

PsiSpec psi_from_json(const Json& j) {
    int n = field(j, "n").get<int>();
    Rat lambda = rat_from_json(field(j, "lambda"));
    std::string fam = j.value("family", std::string("power"));
    PsiSpec spec;
    if (fam == "power")
        spec = PsiSpec::power(n, lambda, j.contains("c") ? rat_from_json(j["c"]) : Rat(1));
    else if (fam == "power_log")
        spec = PsiSpec::power_log(n, lambda, rat_from_json(field(j, "beta")),
                                  j.contains("c") ? rat_from_json(j["c"]) : Rat(1));
    else
        throw ConfigError("unknown psi family: " + fam);
    if (j.contains("s0")) spec.s0 = int_from_json(j["s0"]);
    return spec;
}

Json constants_json(const Constants& c) {
    return Json{{"profile", c.paper_profile ? "paper" : "relaxed"},
                {"n", c.n},
                {"R0", rat_str(c.r0)},
                {"R1", rat_str(c.r1)},
                {"R2", rat_str(c.r2)},
                {"R3", rat_str(c.r3)},
                {"On1", logq_json(c.on1)}};
}

Constants constants_from_json(const Json& j, const PsiSpec& spec) {
    std::string profile = field(j, "profile").get<std::string>();
    Constants c;
    if (profile == "paper")
        c = Constants::paper(spec);
    else if (profile == "relaxed")
        c = Constants::relaxed(spec, rat_from_json(field(j, "R0")),
                               rat_from_json(field(j, "R1")), rat_from_json(field(j, "R2")));
    else
        throw ConfigError("unknown constants profile: " + profile);
    if (j.contains("R3")) c.r3 = rat_from_json(j["R3"]);
    return c;
}

// ---------------------------------------------------------------------------
// schedule

Json schedule_json(const EpochSchedule& sched) {
    Json eps = Json::array();
    for (const Epoch& e : sched.epochs) {
        eps.push_back(Json{{"k", e.k},
                           {"level", e.t_k.level},
                           {"iterations", e.iterations},
                           {"l_minus", e.l_minus},
                           {"l_plus", e.l_plus},
                           {"eps_k", rat_str(e.eps_k)},
                           {"m_k_decimal", e.m_k.decimal(12)},
                           {"t_minus_decimal", e.t_minus.decimal(12)}});
    }
    Json j{{"psi", psi_json(sched.spec)},
           {"constants", constants_json(sched.consts)},
           {"N", sched.grid.N.get_str()},
           {"t0_level", sched.t0.level},
           {"minimal", sched.minimal},
           {"epochs", eps}};
    if (sched.gap_ratio) j["gap_ratio"] = rat_str(*sched.gap_ratio);
    return j;
}

EpochSchedule schedule_from_json(const Json& j) {
    EpochSchedule sched;
    sched.spec = psi_from_json(field(j, "psi"));
    sched.consts = constants_from_json(field(j, "constants"), sched.spec);
    sched.grid = Grid(int_from_json(field(j, "N")), sched.spec.n);
    sched.t0 = GridTime(sched.grid, field(j, "t0_level").get<long>());
    sched.minimal = j.value("minimal", false);
    if (j.contains("gap_ratio")) sched.gap_ratio = rat_from_json(j["gap_ratio"]);
    // rebuild derived quantities from the exact skeleton
    LogValue prev_t(sched.t0.t());
    for (const Json& je : field(j, "epochs")) {
        Epoch e;
        e.k = field(je, "k").get<int>();
        e.t_k = GridTime(sched.grid, field(je, "level").get<long>());
        e.iterations = je.value("iterations", 0);
        e.m_k = m_bound(sched.spec, prev_t);
        e.eps_k = std::min(Rat(1, 2 * e.k), Rat(1, 8));
        LogValue t(e.t_k.t());
        LogValue r_t = r_psi(sched.spec, t);
        e.t_minus = t + r_t;
        e.t_plus_cantor = t + e.m_k.scaled(sched.consts.r2);
        e.t_plus_template = t - r_t.scaled(Rat(sched.spec.n));
        e.l_minus = grid_ceil(sched.grid, e.t_minus - e.m_k.scaled(Rat(4) * sched.consts.r0));
        e.l_plus = grid_floor(sched.grid, e.t_plus_cantor);
        prev_t = t;
        sched.epochs.push_back(std::move(e));
    }
    return sched;
}

// ---------------------------------------------------------------------------
// certificate

Json certificate_json(const Certificate& cert) {
    Json address = Json::array();
    for (const IntVector& d : cert.address) address.push_back(ints_json(d));
    Json wits = Json::array();
    for (const EpochWitness& w : cert.witnesses) {
        Json jv{{"q", w.v.q().get_str()}};
        Json ps = Json::array();
        for (size_t i = 1; i < w.v.vec.size(); ++i) ps.push_back(w.v.vec[i].get_str());
        jv["p"] = ps;
        wits.push_back(Json{{"k", w.k},
                            {"v", jv},
                            {"H", w.v.height().get_str()},
                            {"y", rats_json(w.y)},
                            {"d_exact", rat_str(w.d_exact)},
                            {"d_is_target", w.d_is_target},
                            {"near_bad_level", w.near_bad_level},
                            {"margins", Json{{"Bi", w.b_i.margin},
                                             {"Bii", w.b_ii.margin},
                                             {"Biii", w.b_iii.margin}}}});
    }
    Json audit = Json::array();
    for (const AuditEntry& a : cert.audit)
        audit.push_back(Json{{"k", a.k},
                             {"level", a.level},
                             {"condition", a.condition},
                             {"pass", a.pass},
                             {"margin_decimal", a.margin}});
    return Json{{"psi", psi_json(cert.spec)},
                {"constants", constants_json(cert.consts)},
                {"schedule", schedule_json(cert.schedule)},
                {"address", address},
                {"witnesses", wits},
                {"audit", audit},
                {"theorem_guarantee", cert.theorem_guarantee}};
}

Certificate certificate_from_json(const Json& j) {
    Certificate cert;
    cert.spec = psi_from_json(field(j, "psi"));
    cert.consts = constants_from_json(field(j, "constants"), cert.spec);
    cert.schedule = schedule_from_json(field(j, "schedule"));
    for (const Json& d : field(j, "address")) cert.address.push_back(ints_from_json(d));
    for (const Json& jw : field(j, "witnesses")) {
        EpochWitness w;
        w.k = field(jw, "k").get<int>();
        const Json& jv = field(jw, "v");
        IntVector vec{int_from_json(field(jv, "q"))};
        for (const Json& p : field(jv, "p")) vec.push_back(int_from_json(p));
        w.v = RationalPoint::from_vector(std::move(vec));
        w.y = rats_from_json(field(jw, "y"));
        w.d_exact = rat_from_json(field(jw, "d_exact"));
        w.d_is_target = jw.value("d_is_target", false);
        w.near_bad_level = jw.value("near_bad_level", 0l);
        cert.witnesses.push_back(std::move(w));
    }
    if (j.contains("audit"))
        for (const Json& ja : j["audit"])
            cert.audit.push_back({field(ja, "k").get<int>(), field(ja, "level").get<long>(),
                                  field(ja, "condition").get<std::string>(),
                                  field(ja, "pass").get<bool>(),
                                  ja.value("margin_decimal", std::string())});
    cert.theorem_guarantee = j.value("theorem_guarantee", false);
    return cert;
}

// ---------------------------------------------------------------------------
// dimension report and run config

Json dimension_report_json(const BranchingStats& stats, const DimBound& bound,
                           const Rat& lambda) {
    Json counts = Json::array();
    for (const auto& path : stats.per_level_counts) counts.push_back(path);
    Rat target = bound.target;
    return Json{{"N", stats.N.get_str()},
                {"n", stats.n},
                {"lambda", rat_str(lambda)},
                {"R3_fitted", rat_str(stats.r3_fitted)},
                {"bound", rat_str(bound.value)},
                {"bound_decimal", mpq_get_d(bound.value.get_mpq_t())},
                {"bound_exact", bound.exact},
                {"target", rat_str(target)},
                {"target_decimal", mpq_get_d(target.get_mpq_t())},
                {"min_fraction", rat_str(stats.min_fraction)},
                {"s_c_checks", stats.s_c_checks},
                {"s_c_max_rank", stats.s_c_max_rank},
                {"per_level_counts", counts}};
}

Constants RunConfig::constants() const {
    if (profile == "paper") return Constants::paper(psi);
    return Constants::relaxed(psi, r0, r1, r2);
}

RunConfig config_from_json(const Json& j) {
    RunConfig cfg;
    cfg.psi = psi_from_json(field(j, "psi"));
    const Json& grid = field(j, "grid");
    if (grid.contains("N")) {
        cfg.N = int_from_json(grid["N"]);
    } else if (grid.contains("M")) {
        // advisory decimal: smallest integer N whose step reaches M
        cfg.N = grid_base_for_step(grid["M"].get<double>(), cfg.psi.n);
    } else {
        throw ConfigError("missing field: grid.N or grid.M");
    }
    if (cfg.N < 2) throw ConfigError("grid.N must be >= 2");
    cfg.profile = j.value("profile", std::string("relaxed"));
    if (cfg.profile == "paper") {
        if (j.contains("R0") || j.contains("R1") || j.contains("R2"))
            throw ConfigError("paper profile forbids overriding R0/R1/R2");
    } else if (cfg.profile == "relaxed") {
        cfg.r0 = rat_from_json(field(j, "R0"));
        cfg.r1 = rat_from_json(field(j, "R1"));
        cfg.r2 = rat_from_json(field(j, "R2"));
    } else {
        throw ConfigError("unknown profile: " + cfg.profile);
    }
    cfg.epochs = j.value("epochs", 1);
    cfg.samples = j.value("samples", 2);
    cfg.trials = j.value("trials", 50);
    cfg.minimal = j.value("minimal", true);
    cfg.level_ceiling = j.value("level_ceiling", 4000000l);
    if (cfg.level_ceiling < 1) throw ConfigError("level_ceiling must be >= 1");
    if (cfg.epochs < 0 || cfg.samples < 1 || cfg.trials < 1)
        throw ConfigError("epochs/samples/trials out of range");
    return cfg;
}

void atomic_write(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw ConfigError("cannot write " + tmp);
        os << content;
        if (!os.flush()) throw ConfigError("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw ConfigError("rename failed: " + path);
}

}  // namespace dioph
