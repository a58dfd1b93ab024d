// Thin RAII wrapper around mpfr_t plus directed-rounding interval helpers.
#pragma once

#include <mpfr.h>

#include <string>
#include <utility>

#include "dioph/rational.hpp"

namespace dioph {

class Mpfr {
  public:
    explicit Mpfr(mpfr_prec_t prec = 64) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
    Mpfr(const Mpfr& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    Mpfr(Mpfr&& o) noexcept {
        mpfr_init2(v_, 2);
        mpfr_swap(v_, o.v_);
    }
    Mpfr& operator=(const Mpfr& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Mpfr& operator=(Mpfr&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Mpfr() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    int sgn() const { return mpfr_sgn(v_); }

  private:
    mpfr_t v_;
};

// Closed interval [lo, hi] with certified directed rounding.
struct Enclosure {
    Mpfr lo, hi;

    explicit Enclosure(mpfr_prec_t prec = 64) : lo(prec), hi(prec) {}

    static Enclosure zero(mpfr_prec_t prec) { return Enclosure(prec); }

    static Enclosure of_rat(const Rat& r, mpfr_prec_t prec) {
        Enclosure e(prec);
        mpfr_set_q(e.lo.get(), r.get_mpq_t(), MPFR_RNDD);
        mpfr_set_q(e.hi.get(), r.get_mpq_t(), MPFR_RNDU);
        return e;
    }

    // log of a positive rational
    static Enclosure log_rat(const Rat& r, mpfr_prec_t prec);

    Enclosure operator+(const Enclosure& o) const;
    Enclosure operator-(const Enclosure& o) const;
    Enclosure neg() const;
    Enclosure scaled(const Rat& c, mpfr_prec_t prec) const;  // multiply by exact rational
    // sign of every point in the interval: -1 / +1 if separated from 0, 0 if straddles
    int sign() const {
        if (hi.sgn() < 0) return -1;
        if (lo.sgn() > 0) return 1;
        return 0;
    }
    double mid() const { return (lo.to_double() + hi.to_double()) / 2; }
};

}  // namespace dioph
