#include "dioph/cantor.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dioph {

// ---------------------------------------------------------------------------
// cubes

std::vector<Rat> Cube::center(const Grid& g) const {
    Int den = 2 * ipow(g.N, (unsigned long)level);
    std::vector<Rat> c;
    for (const Int& ci : corner) {
        Rat r(2 * ci + 1, den);
        r.canonicalize();
        c.push_back(r);
    }
    return c;
}

Rat Cube::side(const Grid& g) const {
    Rat s(1, ipow(g.N, (unsigned long)level));
    s.canonicalize();
    return s;
}

bool Cube::contains(const Grid& g, const std::vector<Rat>& p) const {
    Int den = ipow(g.N, (unsigned long)level);
    for (size_t i = 0; i < corner.size(); ++i) {
        Rat lo(corner[i], den), hi(corner[i] + 1, den);
        lo.canonicalize();
        hi.canonicalize();
        if (p[i] < lo || p[i] >= hi) return false;
    }
    return true;
}

Cube Cube::child(const IntVector& digits, const Grid& g) const {
    if (digits.size() != corner.size()) throw InternalError("Cube::child: dimension mismatch");
    Cube c;
    c.level = level + 1;
    c.corner.resize(corner.size());
    for (size_t i = 0; i < corner.size(); ++i) {
        if (digits[i] < 0 || digits[i] >= g.N) throw InternalError("Cube::child: digit range");
        c.corner[i] = corner[i] * g.N + digits[i];
    }
    return c;
}

Cube Certificate::cube_at(long level) const {
    if (level < 0 || level > (long)address.size())
        throw DomainError("Certificate::cube_at: level out of range");
    Cube c = Cube::root(schedule.grid.n);
    for (long l = 0; l < level; ++l) c = c.child(address[(size_t)l], schedule.grid);
    return c;
}

std::vector<Rat> Certificate::deepest_center() const {
    return cube_at((long)address.size()).center(schedule.grid);
}

// ---------------------------------------------------------------------------
// helpers

namespace {

// psi(h) as an exact rational (POWER with integer exponent)
std::optional<Rat> psi_exact(const PsiSpec& spec, const Int& h) {
    if (spec.family != PsiFamily::Power || spec.lambda.get_den() != 1) return std::nullopt;
    if (!mpz_fits_ulong_p(spec.lambda.get_num().get_mpz_t())) return std::nullopt;
    Rat v = spec.c / Rat(ipow(h, spec.lambda.get_num().get_ui()));
    v.canonicalize();
    return v;
}

// exact dyadic rational close to e^v (relative error ~2^{-prec/2})
Rat exp_dyadic(const LogValue& v, mpfr_prec_t prec) {
    Enclosure e = v.enclosure(prec);
    Mpfr t(prec);
    mpfr_exp(t.get(), e.lo.get(), MPFR_RNDN);
    Int mant;
    mpfr_exp_t e2 = mpfr_get_z_2exp(mant.get_mpz_t(), t.get());
    Rat r(mant);
    if (e2 >= 0)
        r *= Rat(ipow(Int(2), (unsigned long)e2));
    else
        r /= Rat(ipow(Int(2), (unsigned long)(-e2)));
    r.canonicalize();
    return r;
}

// sup-distance extremes of the point set [lo,hi]^n (closed) from v
void cube_dist_range(const std::vector<Rat>& lo, const std::vector<Rat>& hi,
                     const std::vector<Rat>& v, Rat& dmin, Rat& dmax) {
    dmin = 0;
    dmax = 0;
    for (size_t j = 0; j < v.size(); ++j) {
        Rat below = lo[j] - v[j], above = v[j] - hi[j];
        Rat dj = 0;
        if (below > 0) dj = below;
        if (above > dj) dj = above;
        if (dj > dmin) dmin = dj;
        Rat far = std::max(rabs(lo[j] - v[j]), rabs(hi[j] - v[j]));
        if (far > dmax) dmax = far;
    }
}

std::string flag_margin(const LogValue& m) { return m.decimal(8); }

}  // namespace

// ---------------------------------------------------------------------------
// Case 1

std::vector<Cube> case1_filter(const Cube& c, int k, const PsiSpec& spec,
                               const EpochSchedule& sched) {
    const Grid& g = sched.grid;
    int n = g.n;
    if (k < 1 || k > (int)sched.epochs.size()) throw DomainError("case1_filter: bad epoch");
    const Epoch& e = sched.epochs[(size_t)k - 1];
    long l = c.level + 1;
    long prev_plus = k >= 2 ? sched.epochs[(size_t)k - 2].l_plus : 0;
    if (l <= prev_plus || l > e.l_minus)
        throw DomainError("case1_filter: level outside the Case-1 range");
    // threshold at the center: c_x(lM) >= -M_k + M + log 2
    LogValue thresh = -e.m_k + LogValue(g.step()) + LogValue(LogQuantity::log_rational(2));
    long count = 1;
    for (int i = 0; i < n; ++i) {
        if (!mpz_fits_slong_p(g.N.get_mpz_t()) || count > (1L << 40) / mpz_get_si(g.N.get_mpz_t()))
            throw DomainError("case1_filter: N^n too large to enumerate");
        count *= mpz_get_si(g.N.get_mpz_t());
    }
    std::vector<char> keep((size_t)count, 0);
#pragma omp parallel for schedule(dynamic)
    for (long idx = 0; idx < count; ++idx) {
        IntVector digits(n);
        long rem = idx;
        for (int i = n - 1; i >= 0; --i) {
            digits[(size_t)i] = Int(rem % mpz_get_si(g.N.get_mpz_t()));
            rem /= mpz_get_si(g.N.get_mpz_t());
        }
        Cube child = c.child(digits, g);
        FlowPoint fp{child.center(g), GridTime(g, l)};
        LogValue margin = LogValue(lambda1_log(fp)) - thresh;
        keep[(size_t)idx] = margin.sign() >= 0;
    }
    std::vector<Cube> kept;
    for (long idx = 0; idx < count; ++idx) {
        if (!keep[(size_t)idx]) continue;
        IntVector digits(n);
        long rem = idx;
        for (int i = n - 1; i >= 0; --i) {
            digits[(size_t)i] = Int(rem % mpz_get_si(g.N.get_mpz_t()));
            rem /= mpz_get_si(g.N.get_mpz_t());
        }
        kept.push_back(c.child(digits, g));
    }
    return kept;
}

// ---------------------------------------------------------------------------
// Case 2

Case2Result case2_select(const Cube& c, int k, const PsiSpec& spec, const EpochSchedule& sched,
                         const TrajectoryWalker* base) {
    const Grid& g = sched.grid;
    int n = g.n;
    if (k < 1 || k > (int)sched.epochs.size()) throw DomainError("case2_select: bad epoch");
    const Epoch& e = sched.epochs[(size_t)k - 1];
    if (c.level != e.l_minus) throw DomainError("case2_select: cube level != l_k^-");
    const Rat& r0 = sched.consts.r0;
    LogValue m_k = e.m_k;
    LogValue R = m_k.scaled(Rat(2));
    std::vector<Rat> x = c.center(g);

    // adaptive upward scan of the near-bad call time t'' until H(v) lands in
    // the (B)(i) window [t_k^- - 5 R0 M_k, t_k^- - 3 R0 M_k]
    // any t'' whose guaranteed height range [t''-R, t''+2nR+M] meets the
    // window can work; scan them in ascending order.  t'' >= l_k^- M keeps
    // d(x_k, v) <= (1/2) e^{-(n+1)t''/n} <= side/2, so v stays in the cube
    long l_lo = grid_ceil(g, e.t_minus - m_k.scaled(Rat(5) * r0) - R.scaled(Rat(2 * n)) -
                                 LogValue(g.step()));
    if (l_lo < c.level) l_lo = c.level;
    if (l_lo < 1) l_lo = 1;
    long l_hi = grid_floor(g, e.t_minus - m_k.scaled(Rat(3) * r0) + R);
    if (l_hi < l_lo)
        throw InfeasibleError("B_i", "case2_select: empty call-time window for epoch " +
                                         std::to_string(k));
    auto walker_at = [&](long lvl) {
        if (base && base->level() <= lvl) {
            TrajectoryWalker w = base->freeze();
            while (w.level() < lvl) w.advance();
            return w;
        }
        TrajectoryWalker w(g, x, std::min<long>(lvl, 1));
        while (w.level() < lvl) w.advance();
        return w;
    };
    TrajectoryWalker wa = walker_at(l_lo);  // lambda_1 at the call time
    TrajectoryWalker wb = wa;               // basis at the snapped time t'' + 2nR
    std::optional<NearBadResult> found;
    long found_level = 0;
    for (long tl = l_lo; tl <= l_hi; ++tl) {
        if ((LogValue(wa.lambda1_log()) + R).sign() >= 0) {
            LogValue t(GridTime(g, tl).t());
            long l2 = grid_ceil(g, t + R.scaled(Rat(2 * n)));
            if (l2 < tl) l2 = tl;
            while (wb.level() < l2) wb.advance();
            NearBadResult nb = near_bad_select(wb.basis(), x, g, t, R, l2);
            LogValue lo_m = LogValue(nb.h_log) - e.t_minus + m_k.scaled(Rat(5) * r0);
            LogValue hi_m = e.t_minus - m_k.scaled(Rat(3) * r0) - LogValue(nb.h_log);
            if (lo_m.sign() >= 0 && hi_m.sign() >= 0 && c.contains(g, nb.v.value())) {
                found = std::move(nb);
                found_level = tl;
                break;
            }
        }
        wa.advance();
    }
    if (!found)
        throw InfeasibleError("B_i", "case2_select: no call time places H(v_k) in the (B)(i) "
                                     "window for epoch " +
                                         std::to_string(k));

    RationalPoint v = found->v;
    Int H = v.height();
    // target distance (1 - 1/(2k)) psi(H)
    std::optional<Rat> psiH = psi_exact(spec, H);
    Rat delta;
    bool is_target = false;
    if (psiH) {
        delta = *psiH * Rat(2 * k - 1, 2 * k);
        delta.canonicalize();
        is_target = true;
    } else {
        // irrational psi(H): exact dyadic stand-in strictly inside the
        // (B)(ii) open interval ((1 - 1/k) psi(H), psi(H))
        LogValue psi_l = psi_log(spec, LogValue(LogQuantity::log_rational(Rat(H))));
        LogValue target = psi_l + LogValue(LogQuantity::log_rational(Rat(2 * k - 1, 2 * k)));
        bool ok = false;
        for (mpfr_prec_t p = 128; p <= (1 << 20); p *= 2) {
            delta = exp_dyadic(target, p);
            if (delta <= 0) continue;
            LogValue dl(LogQuantity::log_rational(delta));
            bool hi_ok = (psi_l - dl).sign() > 0;
            bool lo_ok =
                k == 1 ||
                (dl - psi_l - LogValue(LogQuantity::log_rational(Rat(k - 1, k)))).sign() > 0;
            if (hi_ok && lo_ok) {
                ok = true;
                break;
            }
        }
        if (!ok) throw InternalError("case2_select: could not pin psi(H) numerically");
    }

    // y_k: displacement delta along the coordinate direction maximizing
    // clearance to the cube boundary (ties: lowest index, then +)
    std::vector<Rat> vval = v.value();
    Int den = ipow(g.N, (unsigned long)c.level);
    std::vector<Rat> lo(n), hi(n);
    for (int i = 0; i < n; ++i) {
        lo[(size_t)i] = Rat(c.corner[(size_t)i], den);
        lo[(size_t)i].canonicalize();
        hi[(size_t)i] = lo[(size_t)i] + c.side(g);
    }
    std::optional<std::vector<Rat>> best;
    Rat best_clear;
    for (int i = 0; i < n; ++i) {
        for (int s : {1, -1}) {
            std::vector<Rat> y = vval;
            y[(size_t)i] += Rat(s) * delta;
            bool feasible = true;
            Rat clear;
            for (int j = 0; j < n; ++j) {
                if (y[(size_t)j] < lo[(size_t)j] || y[(size_t)j] >= hi[(size_t)j]) {
                    feasible = false;
                    break;
                }
                Rat cj = std::min(y[(size_t)j] - lo[(size_t)j], hi[(size_t)j] - y[(size_t)j]);
                if (j == 0 || cj < clear) clear = cj;
            }
            if (!feasible) continue;
            if (!best || clear > best_clear) {
                best = std::move(y);
                best_clear = clear;
            }
        }
    }
    if (!best)
        throw InfeasibleError("WITNESS_OUT_OF_CUBE",
                              "case2_select: no y_k placement at distance psi-target stays in "
                              "the cube for epoch " +
                                  std::to_string(k));

    Case2Result res;
    res.witness.k = k;
    res.witness.v = std::move(v);
    res.witness.y = *best;
    res.witness.d_exact = delta;
    res.witness.d_is_target = is_target;
    res.witness.near_bad_level = found_level;

    // singleton chain C_l(y_k), l = l_k^- + 1 .. l_k^+
    Cube cur = c;
    std::vector<Int> num(n), dn(n), scaled(n), fprev(n);
    for (int i = 0; i < n; ++i) {
        num[(size_t)i] = (*best)[(size_t)i].get_num();
        dn[(size_t)i] = (*best)[(size_t)i].get_den();
        scaled[(size_t)i] = num[(size_t)i] * den;  // num * N^{l_minus}
        Int f;
        mpz_fdiv_q(f.get_mpz_t(), scaled[(size_t)i].get_mpz_t(), dn[(size_t)i].get_mpz_t());
        if (f != cur.corner[(size_t)i]) throw InternalError("case2_select: y_k outside cube");
        fprev[(size_t)i] = f;
    }
    for (long l = c.level + 1; l <= e.l_plus; ++l) {
        IntVector digits(n);
        for (int i = 0; i < n; ++i) {
            scaled[(size_t)i] *= g.N;
            Int f;
            mpz_fdiv_q(f.get_mpz_t(), scaled[(size_t)i].get_mpz_t(), dn[(size_t)i].get_mpz_t());
            digits[(size_t)i] = f - fprev[(size_t)i] * g.N;
            fprev[(size_t)i] = f;
        }
        cur = cur.child(digits, g);
        res.chain.push_back(cur);
    }
    return res;
}

// ---------------------------------------------------------------------------
// verifier

std::vector<AuditEntry> verify_conditions(const Certificate& cert) {
    return verify_conditions(cert, (long)cert.address.size());
}

std::vector<AuditEntry> verify_conditions(const Certificate& cert, long through_level) {
    std::vector<AuditEntry> out;
    const EpochSchedule& sched = cert.schedule;
    const Grid& g = sched.grid;
    int n = g.n;
    long L = std::min<long>(through_level, (long)cert.address.size());
    if (L <= 0 || cert.witnesses.empty()) return out;
    LogQuantity M = g.step();
    const Rat& r0 = cert.consts.r0;
    const Rat& r1 = cert.consts.r1;

    std::vector<Rat> x = cert.cube_at(L).center(g);

    struct Ep {
        const Epoch* e = nullptr;
        const EpochWitness* wit = nullptr;
        long a_lo = 0, a_hi = -1;  // (A_l) levels
        long r_lo = 0;             // first level with t >= t_{k-1}, where -M_k >= r_psi
        long w_lo = 0, w_hi = -1;  // lambda_1-witness identity levels
        long l_x = -1;             // lambda_2 separation level
        LogValue t_k_x;
        LogQuantity log_h;
        // aggregates
        long w_match = 0, w_total = 0;
        bool e1_eq_ok = true;
        bool above_r_ok = true;
        std::optional<LogValue> above_r_min;
    };
    std::vector<Ep> eps;
    long prev_plus = 0;
    for (const EpochWitness& wit : cert.witnesses) {
        const Epoch& e = sched.epochs.at((size_t)wit.k - 1);
        if (e.l_plus > L) break;  // epoch not fully contained in the replay
        Ep ep;
        ep.e = &e;
        ep.wit = &wit;
        ep.log_h = LogQuantity::log_rational(Rat(wit.v.height()));
        Rat d_x = wit.v.dist(x);
        if (d_x == 0) {
            out.push_back({wit.k, -1, "B_iii", false, "x equals v_k"});
        } else {
            ep.t_k_x = LogValue(LogQuantity::log_rational(d_x).scaled(Rat(-n, n + 1)));
            ep.l_x = std::min(grid_floor(g, ep.t_k_x), L);
            ep.w_lo = grid_ceil(g, e.t_minus);
            ep.w_hi = std::min(grid_floor(g, ep.t_k_x), L);
        }
        ep.a_lo = prev_plus + 1;
        ep.a_hi = e.l_minus;
        ep.r_lo = wit.k == 1 ? sched.t0.level
                             : grid_ceil(g, LogValue(sched.epochs[(size_t)wit.k - 2].t_k.t()));
        LogValue a_cut = e.t_minus - e.m_k.scaled(Rat(4) * r0);
        while (ep.a_hi >= ep.a_lo &&
               (LogValue(GridTime(g, ep.a_hi).t()) - a_cut).sign() > 0)
            --ep.a_hi;
        prev_plus = e.l_plus;
        eps.push_back(std::move(ep));
    }

    // one sweep over grid levels at the deepest center
    TrajectoryWalker w(g, x, 0);
    for (long l = 0;; ++l) {
        bool need1 = false, need2 = false;
        for (const Ep& ep : eps) {
            if ((l >= ep.a_lo && l <= ep.a_hi) || (l >= ep.w_lo && l <= ep.w_hi)) need1 = true;
            if (l == ep.l_x) need2 = true;
        }
        if (need1 || need2) {
            MinimaResult m = w.minima(need2 ? 2 : 1);
            LogQuantity c_l = m.lambda_logs[0];
            LogValue t(GridTime(g, l).t());
            for (Ep& ep : eps) {
                int k = ep.wit->k;
                if (l >= ep.a_lo && l <= ep.a_hi) {
                    // (A_l): c_x(lM) >= -M_k + M
                    LogValue margin = LogValue(c_l) + ep.e->m_k - LogValue(M);
                    out.push_back({k, l, "A", margin.sign() >= 0, flag_margin(margin)});
                    if (l >= ep.r_lo) try {
                        LogValue rm = LogValue(c_l) - r_psi(cert.spec, t);
                        if (rm.sign() <= 0) ep.above_r_ok = false;
                        if (!ep.above_r_min || (rm - *ep.above_r_min).sign() < 0)
                            ep.above_r_min = rm;
                    } catch (const DomainError&) {
                        // below the r_psi cutoff: nothing to compare
                    }
                }
                if (l >= ep.w_lo && l <= ep.w_hi) {
                    ++ep.w_total;
                    if (m.witnesses[0] == ep.wit->v.vec) {
                        ++ep.w_match;
                        auto nr = flow_norm_log(x, n, t, ep.wit->v.vec);
                        if (nr.e1_dominant &&
                            compare(c_l, -GridTime(g, l).t() + ep.log_h) != 0)
                            ep.e1_eq_ok = false;
                    }
                }
                if (l == ep.l_x) {
                    // lambda_2 separation since T = t_k^- - 4 R0 M_k
                    LogValue s = t - ep.e->t_minus + ep.e->m_k.scaled(Rat(4) * r0);
                    LogValue margin = LogValue(m.lambda_logs[1] - m.lambda_logs[0]) -
                                      s.scaled(Rat(n + 1, n)) + ep.e->m_k.scaled(Rat(3) * r0);
                    out.push_back({k, l, "lambda2_sep", margin.sign() >= 0, flag_margin(margin)});
                }
            }
        }
        if (l == L) break;
        w.advance();
    }

    // per-epoch conditions
    for (Ep& ep : eps) {
        int k = ep.wit->k;
        const Epoch& e = *ep.e;
        // (B)(i)
        LogValue lo_m = LogValue(ep.log_h) - e.t_minus + e.m_k.scaled(Rat(5) * r0);
        LogValue hi_m = e.t_minus - e.m_k.scaled(Rat(3) * r0) - LogValue(ep.log_h);
        bool bi = lo_m.sign() >= 0 && hi_m.sign() >= 0;
        out.push_back({k, -1, "B_i", bi,
                       flag_margin((lo_m - hi_m).sign() < 0 ? lo_m : hi_m)});
        // (B)(ii) over the deepest epoch cube
        {
            Cube d = cert.cube_at(std::min(e.l_plus, L));
            Int den = ipow(g.N, (unsigned long)d.level);
            std::vector<Rat> lo(n), hi(n);
            for (int i = 0; i < n; ++i) {
                lo[(size_t)i] = Rat(d.corner[(size_t)i], den);
                lo[(size_t)i].canonicalize();
                hi[(size_t)i] = lo[(size_t)i] + d.side(g);
            }
            Rat dmin, dmax;
            cube_dist_range(lo, hi, ep.wit->v.value(), dmin, dmax);
            if (dmin <= 0) {
                out.push_back({k, -1, "B_ii", false, "v_k meets the cube"});
            } else {
                LogValue psi_l =
                    psi_log(cert.spec, LogValue(LogQuantity::log_rational(Rat(ep.wit->v.height()))));
                LogValue up = psi_l - LogValue(LogQuantity::log_rational(dmax));
                bool pass = up.sign() > 0;
                LogValue worst = up;
                if (k > 1) {
                    LogValue low = LogValue(LogQuantity::log_rational(dmin)) - psi_l -
                                   LogValue(LogQuantity::log_rational(Rat(k - 1, k)));
                    if (low.sign() <= 0) pass = false;
                    if ((low - worst).sign() < 0) worst = low;
                }
                out.push_back({k, -1, "B_ii", pass, flag_margin(worst)});
            }
            // the stored witness point must be consistent with the address:
            // y_k inside the deepest epoch cube at the recorded distance
            bool y_in = ep.wit->y.size() == (size_t)n;
            for (int i = 0; y_in && i < n; ++i)
                y_in = ep.wit->y[(size_t)i] >= lo[(size_t)i] && ep.wit->y[(size_t)i] < hi[(size_t)i];
            bool d_ok = y_in && ep.wit->v.dist(ep.wit->y) == ep.wit->d_exact;
            out.push_back({k, -1, "B_ii_y", y_in && d_ok,
                           !y_in ? "y outside the chain cube"
                                 : (d_ok ? "consistent" : "d(v,y) != d_exact")});
        }
        // (B)(iii): t_k - R1 M_k < t_k^x < t_{k+1}
        if (ep.l_x >= 0) {
            LogValue low = ep.t_k_x - LogValue(e.t_k.t()) + e.m_k.scaled(r1);
            bool pass = low.sign() > 0;
            std::string margin = flag_margin(low);
            if ((size_t)k < sched.epochs.size()) {
                LogValue up = LogValue(sched.epochs[(size_t)k].t_k.t()) - ep.t_k_x;
                if (up.sign() <= 0) pass = false;
                if ((up - low).sign() < 0) margin = flag_margin(up);
            }
            out.push_back({k, -1, "B_iii", pass, margin});
        }
        // v_k attains lambda_1 on [t_k^-, t_k^x] with the exact value
        out.push_back({k, -1, "v_attains_lambda1", ep.w_total > 0 && ep.w_match == ep.w_total,
                       std::to_string(ep.w_match) + "/" + std::to_string(ep.w_total)});
        out.push_back({k, -1, "c_x_eq_height", ep.e1_eq_ok, ep.e1_eq_ok ? "exact" : "mismatch"});
        // trajectory stays above r_psi on the (A) range
        out.push_back({k, -1, "above_r_psi", ep.above_r_ok,
                       ep.above_r_min ? flag_margin(*ep.above_r_min) : "no samples"});
    }
    return out;
}

// ---------------------------------------------------------------------------
// construction

Certificate construct(const PsiSpec& spec, const Constants& consts, const EpochSchedule& sched,
                      int depth) {
    Certificate cert;
    cert.spec = spec;
    cert.consts = consts;
    cert.schedule = sched;
    cert.theorem_guarantee = consts.paper_profile;
    if (depth < 0 || depth > (int)sched.epochs.size())
        throw DomainError("construct: depth out of range");
    if (depth == 0) return cert;
    const Grid& g = sched.grid;
    int n = g.n;
    {
        // big-integer honesty cap: scaled basis entries at level l carry about
        // 2 l log10(N) decimal digits
        long deepest = sched.epochs[(size_t)depth - 1].l_plus;
        double digits = 2.0 * (double)deepest * std::log10(mpz_get_d(g.N.get_mpz_t()));
        if (digits > 1e6)
            throw InfeasibleError("digit_cap",
                                  "construct: big-integer sizes would exceed 1e6 decimal digits "
                                  "at level " +
                                      std::to_string(deepest));
    }
    LogQuantity M = g.step();
    LogValue log2v(LogQuantity::log_rational(2));
    TrajectoryWalker w = TrajectoryWalker::centered(g);
    std::vector<AuditEntry> case1_audit;
    std::vector<AuditEntry> verify_audit;
    long prev_plus = 0;
    for (int k = 1; k <= depth; ++k) {
        const Epoch& e = sched.epochs[(size_t)k - 1];
        for (long l = prev_plus + 1; l <= e.l_minus; ++l) {
            // lexicographically first subcube certified by the center value
            IntVector digits((size_t)n, Int(0));
            bool found = false;
            for (;;) {
                TrajectoryWalker trial = w;
                trial.descend(digits);
                LogValue margin =
                    LogValue(trial.lambda1_log()) + e.m_k - LogValue(M) - log2v;
                if (margin.sign() >= 0) {
                    w = std::move(trial);
                    cert.address.push_back(digits);
                    case1_audit.push_back({k, l, "case1_keep", true, margin.decimal(8)});
                    found = true;
                    break;
                }
                int i = n - 1;
                while (i >= 0) {
                    digits[(size_t)i] += 1;
                    if (digits[(size_t)i] < g.N) break;
                    digits[(size_t)i] = 0;
                    --i;
                }
                if (i < 0) break;
            }
            if (!found)
                throw InfeasibleError("A_l", "construct: no certified subcube at level " +
                                                 std::to_string(l));
        }
        Cube c{e.l_minus, w.corner()};
        Case2Result c2 = case2_select(c, k, spec, sched, &w);
        for (const Cube& cc : c2.chain) {
            IntVector digits((size_t)n);
            for (int i = 0; i < n; ++i)
                digits[(size_t)i] = cc.corner[(size_t)i] - w.corner()[(size_t)i] * g.N;
            w.descend(digits);
            cert.address.push_back(std::move(digits));
        }
        cert.witnesses.push_back(std::move(c2.witness));
        prev_plus = e.l_plus;
        verify_audit = verify_conditions(cert, e.l_plus);
    }
    // fold the verifier's findings back into the witness flags
    for (const AuditEntry& a : verify_audit) {
        if (a.k < 1 || a.k > (int)cert.witnesses.size()) continue;
        EpochWitness& wit = cert.witnesses[(size_t)a.k - 1];
        if (a.condition == "B_i") wit.b_i = {a.pass, a.margin};
        if (a.condition == "B_ii") wit.b_ii = {a.pass, a.margin};
        if (a.condition == "B_iii") wit.b_iii = {a.pass, a.margin};
    }
    cert.audit = std::move(case1_audit);
    cert.audit.insert(cert.audit.end(), verify_audit.begin(), verify_audit.end());
    return cert;
}

}  // namespace dioph
