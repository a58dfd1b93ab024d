#include "dioph/psi.hpp"

#include <cassert>

namespace dioph {

namespace {

// smallest integer s >= 1 with psi_power(s) = c s^{-lambda} < 1, i.e. s^p > c^q
// for lambda = p/q
Int power_cutoff(const Rat& lambda, const Rat& c) {
    Int p = lambda.get_num(), q = lambda.get_den();
    if (!p.fits_ulong_p() || !q.fits_ulong_p())
        throw ConfigError("lambda numerator/denominator too large");
    Rat cq = rpow(c, q.get_si());
    auto below = [&](const Int& s) { return Rat(ipow(s, p.get_ui())) > cq; };
    Int lo = 1, hi = 1;
    while (!below(hi)) hi *= 2;
    while (lo < hi) {
        Int mid = (lo + hi) / 2;
        if (below(mid))
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

Enclosure log_of(const Enclosure& e, mpfr_prec_t prec) {
    if (e.lo.sgn() <= 0) throw InternalError("log of interval touching 0");
    Enclosure r(prec);
    mpfr_log(r.lo.get(), e.lo.get(), MPFR_RNDD);
    mpfr_log(r.hi.get(), e.hi.get(), MPFR_RNDU);
    return r;
}

}  // namespace

PsiSpec PsiSpec::power(int n, const Rat& lambda, const Rat& c) {
    if (n < 1) throw DomainError("n must be >= 1");
    if (c <= 0) throw DomainError("c must be positive");
    if (lambda < Rat(n + 1, n))
        throw DomainError("POWER family requires lambda >= (n+1)/n");
    PsiSpec s;
    s.n = n;
    s.family = PsiFamily::Power;
    s.lambda = lambda;
    s.c = c;
    s.s0 = power_cutoff(lambda, c);
    return s;
}

PsiSpec PsiSpec::power_log(int n, const Rat& lambda, const Rat& beta, const Rat& c) {
    if (n < 1) throw DomainError("n must be >= 1");
    if (c <= 0) throw DomainError("c must be positive");
    if (lambda < Rat(n + 1, n) || (lambda == Rat(n + 1, n) && beta <= 0))
        throw DomainError("POWER_LOG requires lambda > (n+1)/n, or beta > 0 at the boundary");
    PsiSpec s;
    s.n = n;
    s.family = PsiFamily::PowerLog;
    s.lambda = lambda;
    s.beta = beta;
    s.c = c;
    // cutoff: need log s0 > 0 and psi(s0) < 1 and, for beta < 0, strict
    // decrease (lambda log s + beta > 0)
    Int cand = power_cutoff(lambda, c);
    if (cand < 2) cand = 2;
    auto ok = [&](const Int& sc) {
        PsiSpec probe = s;
        probe.s0 = 1;  // avoid cutoff recursion in psi_log
        LogValue v = psi_log(probe, LogValue(LogQuantity::log_rational(Rat(sc))));
        if (v.sign() >= 0) return false;
        if (beta < 0) {
            // lambda * log sc + beta > 0, interval test
            for (mpfr_prec_t p = 64; p <= 4096; p *= 2) {
                Enclosure e = Enclosure::log_rat(Rat(sc), p).scaled(lambda, p) +
                              Enclosure::of_rat(beta, p);
                int sg = e.sign();
                if (sg != 0) return sg > 0;
            }
            return false;
        }
        return true;
    };
    while (!ok(cand)) cand += 1;
    s.s0 = cand;
    return s;
}

bool PsiSpec::strictly_admissible() const {
    Rat boundary(n + 1, n);
    if (lambda > boundary) return true;
    return family == PsiFamily::PowerLog && lambda == boundary && beta > 0;
}

Rat PsiSpec::gamma() const {
    if (lambda <= 0) throw DomainError("gamma_psi needs lambda > 0");
    Rat g = (Rat(n) * lambda - Rat(n + 1)) / (Rat(n) * lambda);
    g.canonicalize();
    return g;
}

PsiSpec PsiSpec::scale(const Rat& c2) const {
    if (c2 <= 0) throw DomainError("scale factor must be positive");
    PsiSpec s = *this;
    s.c = c * c2;
    s.c.canonicalize();
    // cutoff may shift
    if (family == PsiFamily::Power)
        return PsiSpec::power(n, lambda, s.c);
    return PsiSpec::power_log(n, lambda, beta, s.c);
}

LogQuantity PsiSpec::log_cutoff() const { return LogQuantity::log_rational(Rat(s0)); }

LogValue psi_log(const PsiSpec& spec, const LogValue& s) {
    if ((s - LogValue(spec.log_cutoff())).sign() < 0)
        throw DomainError("psi_log: argument below cutoff s0");
    LogValue v = LogValue(LogQuantity::log_rational(spec.c)) - s.scaled(spec.lambda);
    if (spec.family == PsiFamily::PowerLog && spec.beta != 0) {
        LogValue scopy = s;
        Rat beta = spec.beta;
        v = v + LogValue::with_tail(LogQuantity::zero(), [scopy, beta](mpfr_prec_t p) {
                return log_of(scopy.enclosure(p), p).scaled(-beta, p);
            });
    }
    return v;
}

LogValue Psi_log(const PsiSpec& spec, const LogValue& s) {
    return psi_log(spec, s).scaled(Rat(-spec.n, spec.n + 1));
}

namespace {

// F(sigma) = log Psi(e^sigma) as a directed interval, POWER_LOG case
Enclosure F_enclosure(const PsiSpec& spec, const Mpfr& sigma, mpfr_prec_t p) {
    // (n/(n+1)) * (lambda*sigma + beta*log sigma - log c)
    Enclosure s(p);
    mpfr_set(s.lo.get(), sigma.get(), MPFR_RNDD);
    mpfr_set(s.hi.get(), sigma.get(), MPFR_RNDU);
    Enclosure acc = s.scaled(spec.lambda, p);
    if (spec.beta != 0) acc = acc + log_of(s, p).scaled(spec.beta, p);
    acc = acc - Enclosure::log_rat(spec.c, p);
    return acc.scaled(Rat(spec.n, spec.n + 1), p);
}

Enclosure F_enclosure(const PsiSpec& spec, const Enclosure& sigma, mpfr_prec_t p) {
    Enclosure a = F_enclosure(spec, sigma.lo, p);
    Enclosure b = F_enclosure(spec, sigma.hi, p);
    Enclosure r(p);  // F increasing in sigma on the admissible range
    mpfr_set(r.lo.get(), a.lo.get(), MPFR_RNDD);
    mpfr_set(r.hi.get(), b.hi.get(), MPFR_RNDU);
    return r;
}

// enclosure of sigma with log Psi(e^sigma) = t, by monotone bisection
Enclosure power_log_inverse(const PsiSpec& spec, const LogValue& t, mpfr_prec_t p) {
    Enclosure te = t.enclosure(p);
    // bracket [a, b]
    Mpfr a(p), b(p);
    mpfr_set_z(a.get(), spec.s0.get_mpz_t(), MPFR_RNDD);
    mpfr_log(a.get(), a.get(), MPFR_RNDD);  // sigma >= log s0
    mpfr_set(b.get(), a.get(), MPFR_RNDN);
    if (mpfr_sgn(b.get()) <= 0) mpfr_set_ui(b.get(), 1, MPFR_RNDN);
    for (int i = 0; i < 400; ++i) {
        Enclosure fb = F_enclosure(spec, b, p);
        if (mpfr_cmp(fb.lo.get(), te.hi.get()) > 0) break;
        mpfr_mul_ui(b.get(), b.get(), 2, MPFR_RNDU);
    }
    long iters = (long)p + 8;
    Mpfr mid(p);
    for (long i = 0; i < iters; ++i) {
        mpfr_add(mid.get(), a.get(), b.get(), MPFR_RNDN);
        mpfr_div_ui(mid.get(), mid.get(), 2, MPFR_RNDN);
        Enclosure fm = F_enclosure(spec, mid, p);
        if (mpfr_cmp(fm.hi.get(), te.lo.get()) < 0)
            mpfr_set(a.get(), mid.get(), MPFR_RNDD);
        else if (mpfr_cmp(fm.lo.get(), te.hi.get()) > 0)
            mpfr_set(b.get(), mid.get(), MPFR_RNDU);
        else
            break;  // cannot separate at this precision; [a,b] still certified
    }
    Enclosure r(p);
    mpfr_set(r.lo.get(), a.get(), MPFR_RNDD);
    mpfr_set(r.hi.get(), b.get(), MPFR_RNDU);
    return r;
}

LogValue t_cutoff(const PsiSpec& spec) {
    return Psi_log(spec, LogValue(spec.log_cutoff()));
}

}  // namespace

LogValue Psi_inv_log(const PsiSpec& spec, const LogValue& t) {
    if ((t - t_cutoff(spec)).sign() < 0)
        throw DomainError("Psi_inv_log: t below cutoff log Psi(s0)");
    if (spec.family == PsiFamily::Power) {
        // sigma = (n+1)/(lambda n) * t + (1/lambda) log c
        return t.scaled(Rat(spec.n + 1) / (spec.lambda * Rat(spec.n))) +
               LogValue(LogQuantity::log_rational(spec.c).scaled(1 / spec.lambda));
    }
    PsiSpec sp = spec;
    LogValue tc = t;
    return LogValue::with_tail(LogQuantity::zero(), [sp, tc](mpfr_prec_t p) {
        return power_log_inverse(sp, tc, p);
    });
}

LogValue Psi_inv_log_ext(const PsiSpec& spec, const LogValue& t) {
    if (spec.family == PsiFamily::Power)
        return t.scaled(Rat(spec.n + 1) / (spec.lambda * Rat(spec.n))) +
               LogValue(LogQuantity::log_rational(spec.c).scaled(1 / spec.lambda));
    return Psi_inv_log(spec, t);
}

LogValue r_psi(const PsiSpec& spec, const LogValue& t) { return Psi_inv_log(spec, t) - t; }

LogValue m_bound(const PsiSpec& spec, const LogValue& t_prev) {
    if (spec.family == PsiFamily::Power || spec.beta >= 0) {
        // r_psi is nonincreasing: sup attained at t_prev
        return -r_psi(spec, t_prev);
    }
    // beta < 0: r_psi decreases only past sigma* = -beta/(lambda - (n+1)/n);
    // scan [t_prev, T*] with the r+t Lipschitz envelope, then the monotone tail
    PsiSpec sp = spec;
    LogValue tp = t_prev;
    Rat sigma_star = -spec.beta / (spec.lambda - Rat(spec.n + 1, spec.n));
    return LogValue::with_tail(LogQuantity::zero(), [sp, tp, sigma_star](mpfr_prec_t p) {
        Enclosure tpe = tp.enclosure(p);
        Mpfr ss(p);
        mpfr_set_q(ss.get(), sigma_star.get_mpq_t(), MPFR_RNDU);
        Enclosure tstar = F_enclosure(sp, ss, p);
        Enclosure sup = r_psi(sp, tp).enclosure(p);  // candidate at t_prev
        if (mpfr_cmp(tstar.hi.get(), tpe.lo.get()) > 0) {
            // scan t_prev .. T* in segments
            long segs = 64;
            Mpfr width(p), tj(p), tj1(p);
            mpfr_sub(width.get(), tstar.hi.get(), tpe.lo.get(), MPFR_RNDU);
            mpfr_div_si(width.get(), width.get(), segs, MPFR_RNDU);
            for (long j = 0; j <= segs; ++j) {
                mpfr_mul_si(tj.get(), width.get(), j, MPFR_RNDD);
                mpfr_add(tj.get(), tj.get(), tpe.lo.get(), MPFR_RNDD);
                Enclosure sig = power_log_inverse(
                    sp, LogValue::with_tail(LogQuantity::zero(), [tj, p](mpfr_prec_t) {
                        Enclosure e(p);
                        mpfr_set(e.lo.get(), tj.get(), MPFR_RNDD);
                        mpfr_set(e.hi.get(), tj.get(), MPFR_RNDU);
                        return e;
                    }),
                    p);
                // r on [tj, tj+width] <= (sigma(tj) - tj) + width (since r+t increasing)
                Enclosure rj(p);
                mpfr_sub(rj.lo.get(), sig.lo.get(), tj.get(), MPFR_RNDD);
                mpfr_sub(rj.hi.get(), sig.hi.get(), tj.get(), MPFR_RNDU);
                mpfr_add(rj.hi.get(), rj.hi.get(), width.get(), MPFR_RNDU);
                if (mpfr_cmp(rj.lo.get(), sup.lo.get()) > 0)
                    mpfr_set(sup.lo.get(), rj.lo.get(), MPFR_RNDD);
                if (mpfr_cmp(rj.hi.get(), sup.hi.get()) > 0)
                    mpfr_set(sup.hi.get(), rj.hi.get(), MPFR_RNDU);
            }
        }
        return sup.neg();
    });
}

}  // namespace dioph
