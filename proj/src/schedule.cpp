#include "dioph/schedule.hpp"

#include <algorithm>

namespace dioph {

namespace {

Int factorial(int m) {
    Int f = 1;
    for (int i = 2; i <= m; ++i) f *= i;
    return f;
}

}  // namespace

Constants Constants::paper(const PsiSpec& spec) {
    Constants c;
    c.n = spec.n;
    c.r0 = Rat(std::max(4 * spec.n, spec.n * spec.n));
    c.r1 = Rat(10) * c.r0 / (Rat(1) - spec.gamma());
    c.r2 = Rat(2 * spec.n) * (c.r1 + Rat(6) * c.r0) + 1;
    c.on1 = LogQuantity::log_rational(Rat(factorial(spec.n + 1)));
    c.paper_profile = true;
    return c;
}

Constants Constants::relaxed(const PsiSpec& spec, const Rat& r0, const Rat& r1, const Rat& r2) {
    Constants c;
    c.n = spec.n;
    c.r0 = r0;
    c.r1 = r1;
    c.r2 = r2;
    c.on1 = LogQuantity::log_rational(Rat(factorial(spec.n + 1)));
    c.paper_profile = false;
    return c;
}

namespace {

struct CandidateResult {
    Epoch epoch;
    std::vector<PredicateCheck> checks;
    bool all_pass = true;
};

void add_check(CandidateResult& res, int k, const char* name, bool pass, std::string margin) {
    res.checks.push_back(PredicateCheck{k, name, pass, std::move(margin)});
    if (!pass) res.all_pass = false;
}

void add_log_check(CandidateResult& res, int k, const char* name, const LogValue& margin,
                   bool strict) {
    int s;
    try {
        s = margin.sign();
    } catch (const NonSeparableError&) {
        add_check(res, k, name, false, "non-separable");
        return;
    }
    add_check(res, k, name, strict ? s > 0 : s >= 0, margin.decimal(8));
}

// all derived quantities and predicate outcomes for t_k at the given level;
// m_k is fixed by the previous epoch time
CandidateResult evaluate_candidate(const PsiSpec& spec, const Constants& cc, const Grid& g,
                                   int k, int k_max, const LogValue& m_k, long prev_l_plus,
                                   const LogValue& prev_t_plus_cantor,
                                   const LogValue& prev_t_plus_template, long level,
                                   const std::optional<Rat>& gap_ratio) {
    CandidateResult res;
    Epoch& e = res.epoch;
    e.k = k;
    e.t_k = GridTime(g, level);
    e.m_k = m_k;
    e.eps_k = std::min(Rat(1, 2 * k), Rat(1, 8));
    LogValue t(e.t_k.t());
    Rat gamma = spec.gamma();
    LogValue r_t;
    try {
        r_t = r_psi(spec, t);
    } catch (const DomainError&) {
        add_check(res, k, "domain", false, "below cutoff");
        return res;
    }
    e.t_minus = t + r_t;
    e.t_plus_cantor = t + m_k.scaled(cc.r2);
    e.t_plus_template = t - r_t.scaled(Rat(spec.n));
    e.l_minus = grid_ceil(g, e.t_minus - m_k.scaled(Rat(4) * cc.r0));
    e.l_plus = grid_floor(g, e.t_plus_cantor);

    // (I): -gamma - 1/k <= r(t_k)/t_k <= -gamma + 1/k  (t_k > 0)
    add_log_check(res, k, "I_lower", r_t + t.scaled(gamma + Rat(1, k)), false);
    add_log_check(res, k, "I_upper", t.scaled(-gamma + Rat(1, k)) - r_t, false);
    // (II): sup_{t' >= t_k} r <= r(t_k) + R1 M_k
    add_log_check(res, k, "II", r_t + m_k.scaled(cc.r1) + m_bound(spec, t), false);
    // (III): r(t_k - R1 M_k) <= r(t_k) + ((1+gamma)/2) R1 M_k
    try {
        LogValue r_back = r_psi(spec, t - m_k.scaled(cc.r1));
        add_log_check(res, k, "III",
                      r_t + m_k.scaled((Rat(1) + gamma) / 2 * cc.r1) - r_back, false);
    } catch (const DomainError&) {
        add_check(res, k, "III", false, "below cutoff");
    }
    // (G1): e^{-M_k} < 1/(2k)
    add_log_check(res, k, "G1", m_k - LogValue(LogQuantity::log_rational(Rat(2 * k))), true);
    // (G2): sup_{t >= t_k^- - 4 R0 M_k} r < -5 R0 M_k
    try {
        LogValue m_tail = m_bound(spec, e.t_minus - m_k.scaled(Rat(4) * cc.r0));
        add_log_check(res, k, "G2", m_tail - m_k.scaled(Rat(5) * cc.r0), true);
    } catch (const DomainError&) {
        add_check(res, k, "G2", false, "below cutoff");
    }
    // (G3): -(5R0+R1+R2) M_k - On1 >= r(t) for all t >= t_k - R1 M_k
    try {
        LogValue m_tail = m_bound(spec, t - m_k.scaled(cc.r1));
        add_log_check(res, k, "G3",
                      m_tail - m_k.scaled(Rat(5) * cc.r0 + cc.r1 + cc.r2) - LogValue(cc.on1),
                      false);
    } catch (const DomainError&) {
        add_check(res, k, "G3", false, "below cutoff");
    }
    // (G4): M_k > 3M
    add_log_check(res, k, "G4", m_k - LogValue(g.step().scaled(Rat(3))), true);
    // (G5): l_{k-1}^+ < l_k^- (and optional ratio bound)
    add_check(res, k, "G5_order", e.l_minus > prev_l_plus,
              std::to_string(e.l_minus - prev_l_plus - 1));
    if (gap_ratio) {
        Rat margin = *gap_ratio * Rat(e.l_minus) - Rat(prev_l_plus);
        add_check(res, k, "G5_ratio", margin >= 0, format_rat(margin));
    }
    // ordering chain t_{k-1}^+ < t_k^- for both t^+ variants (k=1: 0 < t_1^-)
    add_log_check(res, k, "chain", e.t_minus - prev_t_plus_cantor, true);
    add_log_check(res, k, "template_order", e.t_minus - prev_t_plus_template, true);
    // successor largeness: M_{k+1} = -sup_{t >= t_k} r must pass (G1)/(G4)
    if (k < k_max) {
        LogValue m_next = m_bound(spec, t);
        add_log_check(res, k, "succ_G1",
                      m_next - LogValue(LogQuantity::log_rational(Rat(2 * (k + 1)))), true);
        add_log_check(res, k, "succ_G4", m_next - LogValue(g.step().scaled(Rat(3))), true);
    }
    return res;
}

bool named_pass(const CandidateResult& r, const char* name) {
    for (const auto& c : r.checks)
        if (c.name == name) return c.pass;
    return false;
}

const PredicateCheck* first_fail(const CandidateResult& r) {
    for (const auto& c : r.checks)
        if (!c.pass) return &c;
    return nullptr;
}

}  // namespace

EpochSchedule choose_times(const PsiSpec& spec, const Constants& consts, const Grid& grid,
                           int k_max, const ScheduleOptions& opts) {
    if (k_max < 1) throw DomainError("choose_times: k_max must be >= 1");
    if (spec.gamma() >= 1) throw DomainError("choose_times: gamma_psi must be < 1");
    EpochSchedule sched;
    sched.spec = spec;
    sched.consts = consts;
    sched.grid = grid;
    sched.gap_ratio = opts.gap_ratio;
    sched.minimal = opts.minimal;
    LogQuantity m3 = grid.step().scaled(Rat(3));
    LogQuantity log2 = LogQuantity::log_rational(2);
    bool monotone = spec.family == PsiFamily::Power;
    // t_0: minimal grid time whose tail bound M_1 already passes (G1)/(G4)
    auto t0_pass = [&](long l) -> int {  // 0 pass, 1 fail G1, 2 fail G4
        LogValue m1;
        try {
            m1 = m_bound(spec, LogValue(GridTime(grid, l).t()));
        } catch (const DomainError&) {
            return 1;
        }
        if ((m1 - LogValue(log2)).sign() <= 0) return 1;
        if ((m1 - LogValue(m3)).sign() <= 0) return 2;
        return 0;
    };
    std::optional<long> l0;
    if (monotone) {
        long step = 1, cur = 0, last_fail = -1;
        while (cur <= opts.level_ceiling) {
            if (t0_pass(cur) == 0) {
                l0 = cur;
                break;
            }
            last_fail = cur;
            cur += step;
            step *= 2;
        }
        if (l0) {
            long hi = *l0;
            while (hi - last_fail > 1) {
                long mid = last_fail + (hi - last_fail) / 2;
                if (t0_pass(mid) == 0)
                    hi = mid;
                else
                    last_fail = mid;
            }
            l0 = hi;
        }
    } else {
        for (long l = 0; l <= opts.level_ceiling; ++l)
            if (t0_pass(l) == 0) {
                l0 = l;
                break;
            }
    }
    if (!l0)
        throw InfeasibleError(t0_pass(opts.level_ceiling) == 2 ? "G4" : "G1",
                              "choose_times: no feasible t_0 below level ceiling");
    sched.t0 = GridTime(grid, *l0);

    GridTime prev_t = sched.t0;
    long prev_l_plus = 0;
    LogValue prev_tpc{LogQuantity::zero()}, prev_tpt{LogQuantity::zero()};
    for (int k = 1; k <= k_max; ++k) {
        LogValue m_k = m_bound(spec, LogValue(prev_t.t()));
        auto candidate = [&](long level) {
            CandidateResult r =
                evaluate_candidate(spec, consts, grid, k, k_max, m_k, prev_l_plus, prev_tpc,
                                   prev_tpt, level, opts.gap_ratio);
            // the existence lemma's iteration: while (III) fails at a time
            // where (I)/(II) hold, step down by R1 M_k (a no-op for POWER,
            // whose linear r_psi satisfies (III) everywhere)
            int iters = 0;
            long cur = level;
            while (!r.all_pass && named_pass(r, "I_lower") && named_pass(r, "I_upper") &&
                   named_pass(r, "II") && !named_pass(r, "III") && iters < 64) {
                long down =
                    grid_floor(grid, LogValue(GridTime(grid, cur).t()) - m_k.scaled(consts.r1));
                if (down >= cur || down <= prev_t.level) break;
                cur = down;
                ++iters;
                r = evaluate_candidate(spec, consts, grid, k, k_max, m_k, prev_l_plus, prev_tpc,
                                       prev_tpt, cur, opts.gap_ratio);
            }
            r.epoch.iterations = iters;
            return r;
        };
        auto search_min = [&](long start) -> std::optional<CandidateResult> {
            if (monotone) {
                long step = 1, cur = start, last_fail = start - 1;
                std::optional<CandidateResult> found;
                while (cur <= opts.level_ceiling) {
                    auto r = candidate(cur);
                    if (r.all_pass) {
                        found = std::move(r);
                        break;
                    }
                    last_fail = cur;
                    cur += step;
                    step *= 2;
                }
                if (!found) return std::nullopt;
                long hi = found->epoch.t_k.level;
                while (hi - last_fail > 1) {
                    long mid = last_fail + (hi - last_fail) / 2;
                    auto r = candidate(mid);
                    if (r.all_pass) {
                        found = std::move(r);
                        hi = mid;
                    } else {
                        last_fail = mid;
                    }
                }
                return found;
            }
            for (long l = start; l <= opts.level_ceiling; ++l) {
                auto r = candidate(l);
                if (r.all_pass) return r;
            }
            return std::nullopt;
        };
        auto found = search_min(prev_t.level + 1);
        if (found && !opts.minimal) found = search_min(2 * found->epoch.t_k.level);
        if (!found) {
            auto r = candidate(opts.level_ceiling);
            const PredicateCheck* f = first_fail(r);
            throw InfeasibleError(f ? f->name : "unknown",
                                  "choose_times: epoch " + std::to_string(k) +
                                      " infeasible below level ceiling (first failing "
                                      "predicate: " +
                                      (f ? f->name : "unknown") + ")");
        }
        Epoch e = found->epoch;
        prev_t = e.t_k;
        prev_l_plus = e.l_plus;
        prev_tpc = e.t_plus_cantor;
        prev_tpt = e.t_plus_template;
        sched.epochs.push_back(std::move(e));
    }
    return sched;
}

std::vector<PredicateCheck> audit_schedule(const EpochSchedule& sched) {
    std::vector<PredicateCheck> out;
    const Constants& cc = sched.consts;
    if (cc.paper_profile) {
        out.push_back({0, "R0_min", cc.r0 >= 4, format_rat(cc.r0 - 4)});
        out.push_back({0, "R1_gt_R0", cc.r1 > cc.r0, format_rat(cc.r1 - cc.r0)});
        Rat r2_min = Rat(2 * cc.n) * (cc.r1 + Rat(6) * cc.r0);
        out.push_back({0, "R2_min", cc.r2 > r2_min, format_rat(cc.r2 - r2_min)});
    }
    GridTime prev_t = sched.t0;
    long prev_l_plus = 0;
    LogValue prev_tpc{LogQuantity::zero()}, prev_tpt{LogQuantity::zero()};
    for (const Epoch& e : sched.epochs) {
        LogValue m_k = m_bound(sched.spec, LogValue(prev_t.t()));
        CandidateResult r = evaluate_candidate(sched.spec, cc, sched.grid, e.k,
                                               (int)sched.epochs.size(), m_k, prev_l_plus,
                                               prev_tpc, prev_tpt, e.t_k.level, sched.gap_ratio);
        out.push_back({e.k, "t_order", e.t_k.level > prev_t.level,
                       std::to_string(e.t_k.level - prev_t.level - 1)});
        // M_k <= -r_psi(t_{k-1})
        LogValue m_up = -r_psi(sched.spec, LogValue(prev_t.t())) - m_k;
        out.push_back({e.k, "M_upper", m_up.sign() >= 0, m_up.decimal(8)});
        if (sched.spec.family == PsiFamily::Power) {
            LogQuantity diff = m_k.require_exact() - e.m_k.require_exact();
            out.push_back({e.k, "M_match", diff.sign() == 0, diff.decimal(8)});
        }
        out.push_back({e.k, "l_match",
                       r.epoch.l_minus == e.l_minus && r.epoch.l_plus == e.l_plus,
                       std::to_string(r.epoch.l_minus - e.l_minus) + "," +
                           std::to_string(r.epoch.l_plus - e.l_plus)});
        for (auto& c : r.checks) out.push_back(std::move(c));
        prev_t = e.t_k;
        prev_l_plus = e.l_plus;
        prev_tpc = e.t_plus_cantor;
        prev_tpt = e.t_plus_template;
    }
    return out;
}

Template build_template(const PsiSpec& spec, const EpochSchedule& sched) {
    if (sched.epochs.empty()) throw DomainError("build_template: empty schedule");
    Template tpl;
    LogValue zero{LogQuantity::zero()};
    tpl.breakpoints.emplace_back(zero, zero);
    for (const Epoch& e : sched.epochs) {
        LogValue t(e.t_k.t());
        LogValue r_t = e.t_minus - t;  // r_psi(t_k)
        if ((e.t_minus - tpl.breakpoints.back().first).sign() <= 0)
            throw InternalError("build_template: non-increasing breakpoints");
        tpl.slopes.push_back(Rat(0));
        tpl.breakpoints.emplace_back(e.t_minus, zero);
        tpl.slopes.push_back(Rat(-1));
        tpl.breakpoints.emplace_back(t, r_t);
        tpl.slopes.push_back(Rat(1, spec.n));
        tpl.breakpoints.emplace_back(e.t_plus_template, zero);
    }
    return tpl;
}

LogValue Template::eval(const LogValue& t) const {
    if ((t - breakpoints.front().first).sign() < 0)
        throw DomainError("Template::eval: t before start");
    size_t seg = breakpoints.size() - 1;
    for (size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if ((t - breakpoints[i + 1].first).sign() <= 0) {
            seg = i;
            break;
        }
    }
    if (seg == breakpoints.size() - 1) return breakpoints.back().second;  // slope-0 tail
    const auto& [t0, v0] = breakpoints[seg];
    return v0 + (t - t0).scaled(slopes[seg]);
}

}  // namespace dioph
