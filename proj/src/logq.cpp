#include "dioph/logq.hpp"

#include <cassert>
#include <numeric>

namespace dioph {

// ---------------------------------------------------------------------------
// Enclosure

Enclosure Enclosure::log_rat(const Rat& r, mpfr_prec_t prec) {
    assert(r > 0);
    Enclosure e(prec);
    Mpfr tmp(prec);
    // lo: round the argument down, then log down
    mpfr_set_q(tmp.get(), r.get_mpq_t(), MPFR_RNDD);
    mpfr_log(e.lo.get(), tmp.get(), MPFR_RNDD);
    mpfr_set_q(tmp.get(), r.get_mpq_t(), MPFR_RNDU);
    mpfr_log(e.hi.get(), tmp.get(), MPFR_RNDU);
    return e;
}

Enclosure Enclosure::operator+(const Enclosure& o) const {
    mpfr_prec_t p = std::max(lo.prec(), o.lo.prec());
    Enclosure e(p);
    mpfr_add(e.lo.get(), lo.get(), o.lo.get(), MPFR_RNDD);
    mpfr_add(e.hi.get(), hi.get(), o.hi.get(), MPFR_RNDU);
    return e;
}

Enclosure Enclosure::operator-(const Enclosure& o) const { return *this + o.neg(); }

Enclosure Enclosure::neg() const {
    Enclosure e(lo.prec());
    mpfr_neg(e.lo.get(), hi.get(), MPFR_RNDD);
    mpfr_neg(e.hi.get(), lo.get(), MPFR_RNDU);
    return e;
}

Enclosure Enclosure::scaled(const Rat& c, mpfr_prec_t prec) const {
    Enclosure e(prec);
    if (c >= 0) {
        mpfr_mul_q(e.lo.get(), lo.get(), c.get_mpq_t(), MPFR_RNDD);
        mpfr_mul_q(e.hi.get(), hi.get(), c.get_mpq_t(), MPFR_RNDU);
    } else {
        mpfr_mul_q(e.lo.get(), hi.get(), c.get_mpq_t(), MPFR_RNDD);
        mpfr_mul_q(e.hi.get(), lo.get(), c.get_mpq_t(), MPFR_RNDU);
    }
    return e;
}

// ---------------------------------------------------------------------------
// LogQuantity

namespace {

// N = r^e with e maximal; returns {r, e}
std::pair<Int, unsigned long> primitive_root(const Int& n) {
    assert(n >= 2);
    unsigned long maxe = mpz_sizeinbase(n.get_mpz_t(), 2);
    Int r;
    for (unsigned long e = maxe; e >= 2; --e) {
        if (mpz_root(r.get_mpz_t(), n.get_mpz_t(), e) != 0) return {r, e};
    }
    return {n, 1};
}

unsigned long lcm_ul(unsigned long a, unsigned long b) { return a / std::gcd(a, b) * b; }

// m^(1/d) exactly, or nullopt
bool exact_root(const Int& m, unsigned long d, Int& out) {
    return mpz_root(out.get_mpz_t(), m.get_mpz_t(), d) != 0;
}

}  // namespace

LogQuantity LogQuantity::log_rational(const Rat& r) {
    if (r <= 0) throw DomainError("log of non-positive rational");
    LogQuantity q;
    q.base_ = 0;
    q.coeff_ = 0;
    q.mantissa_ = r;
    q.root_ = 1;
    q.normalize();
    return q;
}

LogQuantity LogQuantity::logn_multiple(const Int& base, const Rat& c) {
    if (base < 2) throw DomainError("logN base must be >= 2");
    LogQuantity q;
    q.base_ = base;
    q.coeff_ = c;
    q.mantissa_ = 1;
    q.root_ = 1;
    q.normalize();
    return q;
}

LogQuantity LogQuantity::make(const Int& base, const Rat& coeff, const Rat& mantissa,
                              unsigned long root) {
    if (base != 0 && base < 2) throw DomainError("logN base must be >= 2 (or 0 for none)");
    if (mantissa <= 0) throw DomainError("mantissa must be positive");
    if (root == 0) throw DomainError("root must be >= 1");
    LogQuantity q;
    q.base_ = base;
    q.coeff_ = coeff;
    q.mantissa_ = mantissa;
    q.root_ = root;
    q.normalize();
    return q;
}

void LogQuantity::normalize() {
    assert(mantissa_ > 0);
    if (base_ != 0 && mantissa_ != 1) {
        // absorb exact powers of the base's primitive root into coeff
        auto [r, e] = primitive_root(base_);
        if (r > 1) {
            Int num = mantissa_.get_num(), den = mantissa_.get_den(), rest;
            unsigned long jn = mpz_remove(rest.get_mpz_t(), num.get_mpz_t(), r.get_mpz_t());
            if (jn) num = rest;
            unsigned long jd = mpz_remove(rest.get_mpz_t(), den.get_mpz_t(), r.get_mpz_t());
            if (jd) den = rest;
            if (jn || jd) {
                long j = (long)jn - (long)jd;
                coeff_ += Rat(j, (long)(e * root_));
                mantissa_ = Rat(num, den);
                mantissa_.canonicalize();
            }
        }
    }
    // reduce the root by extracting exact prime-order roots of the mantissa
    for (;;) {
        unsigned long d = root_;
        bool reduced = false;
        for (unsigned long p = 2; p <= d && !reduced; ++p) {
            if (d % p) continue;
            while (d % p == 0) d /= p;
            Int rn, rd;
            if (exact_root(mantissa_.get_num(), p, rn) && exact_root(mantissa_.get_den(), p, rd)) {
                mantissa_ = Rat(rn, rd);
                mantissa_.canonicalize();
                root_ /= p;
                reduced = true;
            }
        }
        if (!reduced) break;
    }
    if (mantissa_ == 1) root_ = 1;
    if (coeff_ == 0 && mantissa_ == 1) base_ = 0;
    coeff_.canonicalize();
}

namespace {
Int combine_base(const Int& a, const Int& b) {
    if (a == 0) return b;
    if (b == 0) return a;
    if (a != b) throw InternalError("mixed logN bases in LogQuantity arithmetic");
    return a;
}
}  // namespace

LogQuantity LogQuantity::operator+(const LogQuantity& o) const {
    LogQuantity q;
    q.base_ = combine_base(base_, o.base_);
    q.coeff_ = coeff_ + o.coeff_;
    unsigned long L = lcm_ul(root_, o.root_);
    Rat m = rpow(mantissa_, (long)(L / root_)) * rpow(o.mantissa_, (long)(L / o.root_));
    m.canonicalize();
    q.mantissa_ = m;
    q.root_ = L;
    q.normalize();
    return q;
}

LogQuantity LogQuantity::operator-() const {
    LogQuantity q;
    q.base_ = base_;
    q.coeff_ = -coeff_;
    q.mantissa_ = 1 / mantissa_;
    q.root_ = root_;
    q.normalize();
    return q;
}

LogQuantity LogQuantity::operator-(const LogQuantity& o) const { return *this + (-o); }

LogQuantity LogQuantity::scaled(const Rat& c) const {
    if (c == 0) return LogQuantity::zero();
    LogQuantity q;
    q.base_ = base_;
    q.coeff_ = coeff_ * c;
    Int p = c.get_num(), d = c.get_den();
    if (!p.fits_slong_p() || !d.fits_ulong_p())
        throw InternalError("LogQuantity::scaled: scalar too large");
    q.mantissa_ = rpow(mantissa_, p.get_si());
    q.root_ = root_ * d.get_ui();
    q.normalize();
    return q;
}

Enclosure LogQuantity::enclosure(mpfr_prec_t prec) const {
    Enclosure e(prec);
    if (base_ != 0 && coeff_ != 0) {
        e = Enclosure::log_rat(Rat(base_), prec).scaled(coeff_, prec);
    }
    if (mantissa_ != 1) {
        Rat inv_root(1, (long)root_);
        e = e + Enclosure::log_rat(mantissa_, prec).scaled(inv_root, prec);
    }
    return e;
}

int LogQuantity::sign() const {
    // purely symbolic cases first
    if (mantissa_ == 1) {
        if (base_ == 0 || coeff_ == 0) return 0;
        return sgn(coeff_);
    }
    if (base_ == 0 || coeff_ == 0) return mantissa_ > 1 ? 1 : (mantissa_ < 1 ? -1 : 0);
    // adaptive interval evaluation
    for (mpfr_prec_t prec = 64; prec <= 16384; prec *= 2) {
        int s = enclosure(prec).sign();
        if (s != 0) return s;
    }
    // exact fallback: sign of cn*D*logN + cd*log(mantissa), scaled by cd*D > 0
    Int E = coeff_.get_num() * (long)root_;
    Int cd = coeff_.get_den();
    if (!cd.fits_ulong_p()) throw InternalError("LogQuantity::sign: coeff denominator too large");
    unsigned long b = cd.get_ui();
    Int pn = ipow(mantissa_.get_num(), b), pd = ipow(mantissa_.get_den(), b);
    if (!E.fits_slong_p()) throw InternalError("LogQuantity::sign: exponent too large");
    long e = E.get_si();
    Int lhs, rhs;
    if (e >= 0) {
        lhs = ipow(base_, (unsigned long)e) * pn;
        rhs = pd;
    } else {
        lhs = pn;
        rhs = ipow(base_, (unsigned long)(-e)) * pd;
    }
    return cmp(lhs, rhs);
}

bool LogQuantity::exp_is_rational() const {
    if (root_ != 1) return false;
    if (base_ == 0) return true;
    return coeff_.get_den() == 1;
}

Rat LogQuantity::exp_rational() const {
    if (!exp_is_rational()) throw DomainError("LogQuantity does not exponentiate to a rational");
    if (base_ == 0 || coeff_ == 0) return mantissa_;
    Int c = coeff_.get_num();
    if (!c.fits_slong_p()) throw InternalError("exp_rational: exponent too large");
    return rpow(Rat(base_), c.get_si()) * mantissa_;
}

double LogQuantity::approx() const { return enclosure(128).mid(); }

namespace {
std::string decimal_of(const Enclosure& e, int digits) {
    Mpfr mid(256);
    mpfr_add(mid.get(), e.lo.get(), e.hi.get(), MPFR_RNDN);
    mpfr_div_ui(mid.get(), mid.get(), 2, MPFR_RNDN);
    char buf[128];
    mpfr_snprintf(buf, sizeof buf, "%.*Rg", digits, mid.get());
    return buf;
}
}  // namespace

std::string LogQuantity::decimal(int digits) const { return decimal_of(enclosure(256), digits); }

// ---------------------------------------------------------------------------
// LogValue

LogValue LogValue::with_tail(const LogQuantity& exact_part, TailFn tail) {
    LogValue v;
    v.exact_ = exact_part;
    v.tail_ = std::make_shared<const TailFn>(std::move(tail));
    return v;
}

const LogQuantity& LogValue::require_exact() const {
    if (tail_) throw InternalError("LogValue: exact value required but enclosure tail present");
    return exact_;
}

LogValue LogValue::operator+(const LogValue& o) const {
    LogValue v;
    v.exact_ = exact_ + o.exact_;
    if (tail_ && o.tail_) {
        auto ta = tail_, tb = o.tail_;
        v.tail_ = std::make_shared<const TailFn>(
            [ta, tb](mpfr_prec_t p) { return (*ta)(p) + (*tb)(p); });
    } else if (tail_ || o.tail_) {
        v.tail_ = tail_ ? tail_ : o.tail_;
    }
    return v;
}

LogValue LogValue::operator-() const {
    LogValue v;
    v.exact_ = -exact_;
    if (tail_) {
        auto t = tail_;
        v.tail_ = std::make_shared<const TailFn>([t](mpfr_prec_t p) { return (*t)(p).neg(); });
    }
    return v;
}

LogValue LogValue::operator-(const LogValue& o) const { return *this + (-o); }

LogValue LogValue::scaled(const Rat& c) const {
    LogValue v;
    v.exact_ = exact_.scaled(c);
    if (tail_) {
        auto t = tail_;
        Rat cc = c;
        v.tail_ = std::make_shared<const TailFn>(
            [t, cc](mpfr_prec_t p) { return (*t)(p).scaled(cc, p); });
    }
    return v;
}

int LogValue::sign() const {
    if (!tail_) return exact_.sign();
    for (mpfr_prec_t prec = 64; prec <= 16384; prec *= 2) {
        int s = enclosure(prec).sign();
        if (s != 0) return s;
    }
    throw NonSeparableError("LogValue comparison failed to separate at 16384 bits");
}

Enclosure LogValue::enclosure(mpfr_prec_t prec) const {
    Enclosure e = exact_.enclosure(prec);
    if (tail_) e = e + (*tail_)(prec);
    return e;
}

double LogValue::approx() const { return enclosure(128).mid(); }

std::string LogValue::decimal(int digits) const { return decimal_of(enclosure(256), digits); }

Int ceil_exp(const LogValue& v) {
    auto log_ge = [&](const Int& w) {
        return (LogValue(LogQuantity::log_rational(Rat(w))) - v).sign() >= 0;
    };
    if (v.sign() <= 0) return 1;
    Int hi = 2;
    while (!log_ge(hi)) hi *= 2;
    Int lo = hi / 2;  // log(lo) < v <= log(hi)
    while (hi - lo > 1) {
        Int mid = (lo + hi) / 2;
        if (log_ge(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

}  // namespace dioph
