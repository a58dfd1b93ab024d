#include "dioph/dani.hpp"

#include <omp.h>

namespace dioph {

DaniForwardResult dani_forward(const PsiSpec& spec, const std::vector<Rat>& x,
                               const RationalPoint& v) {
    int n = (int)x.size();
    if ((int)v.vec.size() != n + 1) throw DomainError("dani_forward: dimension mismatch");
    for (const Rat& c : v.value())
        if (c < 0 || c > 1) throw DomainError("dani_forward: v outside [0,1]^n");
    LogValue log_h(LogQuantity::log_rational(Rat(v.height())));
    LogValue psi = psi_log(spec, log_h);
    Rat d = v.dist(x);
    if (d != 0 && (psi - LogValue(LogQuantity::log_rational(d))).sign() < 0)
        throw PreconditionError("dani_forward: d(x,v) > psi(H(v))");
    DaniForwardResult res;
    res.t = Psi_log(spec, log_h);
    auto nr = flow_norm_log(x, n, res.t, v.vec);
    res.norm_log = nr.norm_log;
    res.e1_dominant = nr.e1_dominant;
    return res;
}

std::optional<RationalPoint> dani_backward(const PsiSpec& spec, const std::vector<Rat>& x,
                                           const IntVector& w, const LogValue& t) {
    bool zero = true;
    for (const Int& c : w)
        if (c != 0) zero = false;
    if (zero) throw DomainError("dani_backward: zero vector");
    auto nr = flow_norm_log(x, (int)x.size(), t, w);
    if (!nr.e1_dominant) return std::nullopt;
    LogValue thresh = -t + Psi_inv_log_ext(spec, t);
    if ((thresh - nr.norm_log).sign() < 0) return std::nullopt;
    if (w[0] == 0) return std::nullopt;
    return RationalPoint::from_vector(w);
}

std::vector<TrajectorySample> trajectory(const PsiSpec& spec, const std::vector<Rat>& x,
                                         const Grid& g, long l_lo, long l_hi) {
    if (l_lo > l_hi) throw DomainError("trajectory: empty level range");
    TrajectoryWalker w(g, x, l_lo);
    std::vector<TrajectorySample> out;
    for (long l = l_lo;; ++l) {
        auto m = w.minima(1);
        TrajectorySample s;
        s.level = l;
        s.t = GridTime(g, l);
        s.c_x = m.lambda_logs[0];
        s.witness = m.witnesses[0];
        s.e1_dominant = flow_norm_log(w.flow_point(), s.witness).e1_dominant;
        try {
            s.r_psi = r_psi(spec, LogValue(s.t.t()));
        } catch (const DomainError&) {
            s.r_psi = std::nullopt;  // below the psi cutoff time
        }
        out.push_back(std::move(s));
        if (l == l_hi) break;
        w.advance();
    }
    return out;
}

void write_trajectory_csv(const std::vector<TrajectorySample>& samples, std::ostream& os) {
    int n = samples.empty() ? 0 : (int)samples.front().witness.size() - 1;
    os << "level,t,c_x,r_psi,witness_q";
    for (int i = 1; i <= n; ++i) os << ",witness_p" << i;
    os << ",e1_dominant\n";
    for (const auto& s : samples) {
        os << s.level << ',' << s.t.t().decimal() << ',' << s.c_x.decimal() << ',';
        if (s.r_psi) os << s.r_psi->decimal();
        for (const Int& c : s.witness) os << ',' << c.get_str();
        os << ',' << (s.e1_dominant ? 1 : 0) << '\n';
    }
}

ClassifyReport classify(const PsiSpec& spec, const std::vector<Rat>& x, const Int& h_max,
                        const Rat& c) {
    if (h_max < 1) throw DomainError("classify: h_max must be >= 1");
    if (c <= 0 || c > 1) throw DomainError("classify: c must be in (0,1]");
    if (!mpz_fits_slong_p(h_max.get_mpz_t()))
        throw DomainError("classify: h_max too large for exhaustive enumeration");
    long qmax = mpz_get_si(h_max.get_mpz_t());
    int n = (int)x.size();
    LogQuantity log_c = LogQuantity::log_rational(c);
    std::vector<std::vector<ClassifyHit>> per_q((size_t)qmax);
#pragma omp parallel for schedule(dynamic)
    for (long q = 1; q <= qmax; ++q) {
        Int qi(q);
        // window half-width: |p_i - q x_i| < q * c * psi(max(q, s0)) <= W
        Int base = std::max(qi, spec.s0);
        LogValue bound = LogValue(LogQuantity::log_rational(Rat(qi) * c)) +
                         psi_log(spec, LogValue(LogQuantity::log_rational(Rat(base))));
        Int w = ceil_exp(bound);
        std::vector<Int> lo(n), hi(n), p(n);
        for (int i = 0; i < n; ++i) {
            Rat qx = Rat(qi) * x[i];
            lo[i] = Int(rfloor(qx) - w);
            hi[i] = Int(rceil(qx) + w);
            if (lo[i] < -h_max) lo[i] = -h_max;
            if (hi[i] > h_max) hi[i] = h_max;
            p[i] = lo[i];
        }
        auto& hits = per_q[(size_t)q - 1];
        for (;;) {
            Int g = qi;
            Int h = qi;
            for (int i = 0; i < n; ++i) {
                mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), p[i].get_mpz_t());
                h = std::max(h, iabs(p[i]));
            }
            if (g == 1 && h <= h_max) {
                IntVector vec(n + 1);
                vec[0] = qi;
                for (int i = 0; i < n; ++i) vec[i + 1] = p[i];
                RationalPoint v = RationalPoint::from_vector(std::move(vec));
                Rat d = v.dist(x);
                // d = 0 is a hit at any height (c*psi > 0); otherwise heights
                // below the cutoff s0 are outside psi's domain and skipped
                bool hit;
                if (d == 0) {
                    hit = true;
                } else if (h < spec.s0) {
                    hit = false;
                } else {
                    LogValue rhs = LogValue(log_c) +
                                   psi_log(spec, LogValue(LogQuantity::log_rational(Rat(h))));
                    hit = (rhs - LogValue(LogQuantity::log_rational(d))).sign() > 0;
                }
                if (hit) hits.push_back(ClassifyHit{std::move(v), std::move(d)});
            }
            // odometer over the p windows, lexicographic
            int i = n - 1;
            while (i >= 0) {
                p[i] += 1;
                if (p[i] <= hi[i]) break;
                p[i] = lo[i];
                --i;
            }
            if (i < 0) break;
        }
    }
    ClassifyReport rep;
    rep.h_max = h_max;
    rep.c = c;
    for (auto& hq : per_q)
        for (auto& h : hq) rep.hits.push_back(std::move(h));
    return rep;
}

}  // namespace dioph
