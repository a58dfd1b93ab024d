// Exact log-scale arithmetic.
//
// A LogQuantity represents the real number
//
//     coeff * log(base) + (1/root) * log(mantissa)
//
// with coeff, mantissa rational (mantissa > 0), base an integer >= 2 (or 0
// when no log-base term is present) and root a positive integer.  root = 1
// gives the plain q*logN + log r form; root > 1 appears when rational powers
// of heights (psi with fractional exponent) enter.  The form is closed under
// addition and rational scaling, and comparisons are always exactly decidable
// (adaptive-precision intervals first, rational cross-powers as fallback).
#pragma once

#include <compare>
#include <functional>
#include <memory>
#include <string>

#include "dioph/mpfr_util.hpp"
#include "dioph/rational.hpp"

namespace dioph {

struct NonSeparableError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class LogQuantity {
  public:
    LogQuantity() : base_(0), coeff_(0), mantissa_(1), root_(1) {}

    static LogQuantity zero() { return LogQuantity(); }
    // log r for a positive rational r (no logN term)
    static LogQuantity log_rational(const Rat& r);
    // q * log N
    static LogQuantity logn_multiple(const Int& base, const Rat& q);
    static LogQuantity make(const Int& base, const Rat& coeff, const Rat& mantissa,
                            unsigned long root = 1);

    const Int& base() const { return base_; }
    const Rat& coeff() const { return coeff_; }
    const Rat& mantissa() const { return mantissa_; }
    unsigned long root() const { return root_; }

    LogQuantity operator+(const LogQuantity& o) const;
    LogQuantity operator-(const LogQuantity& o) const;
    LogQuantity operator-() const;
    LogQuantity scaled(const Rat& c) const;

    int sign() const;  // exact
    bool operator==(const LogQuantity& o) const { return ((*this) - o).sign() == 0; }
    bool operator<(const LogQuantity& o) const { return ((*this) - o).sign() < 0; }
    bool operator<=(const LogQuantity& o) const { return ((*this) - o).sign() <= 0; }
    bool operator>(const LogQuantity& o) const { return o < *this; }
    bool operator>=(const LogQuantity& o) const { return o <= *this; }

    bool is_zero() const { return coeff_ == 0 && mantissa_ == 1; }
    // exp(value) when it is rational: requires root == 1 and integer coeff
    bool exp_is_rational() const;
    Rat exp_rational() const;

    Enclosure enclosure(mpfr_prec_t prec) const;
    double approx() const;
    std::string decimal(int digits = 17) const;

  private:
    void normalize();

    Int base_;       // 0 = no logN term present
    Rat coeff_;      // coefficient of log(base)
    Rat mantissa_;   // > 0
    unsigned long root_;  // >= 1
};

inline int compare(const LogQuantity& a, const LogQuantity& b) { return (a - b).sign(); }

// A LogQuantity plus an optional certified-enclosure tail (the non-closed-form
// part of POWER_LOG values).  Exact when the tail is absent.
class LogValue {
  public:
    using TailFn = std::function<Enclosure(mpfr_prec_t)>;

    LogValue() = default;
    LogValue(const LogQuantity& q) : exact_(q) {}
    static LogValue with_tail(const LogQuantity& exact_part, TailFn tail);

    const LogQuantity& exact_part() const { return exact_; }
    bool is_exact() const { return tail_ == nullptr; }
    // exact part when no tail; throws otherwise
    const LogQuantity& require_exact() const;

    LogValue operator+(const LogValue& o) const;
    LogValue operator-(const LogValue& o) const;
    LogValue operator-() const;
    LogValue scaled(const Rat& c) const;

    // -1/0/+1; throws NonSeparableError only when a tail is present and the
    // enclosures refuse to separate at max precision
    int sign() const;
    bool operator<(const LogValue& o) const { return ((*this) - o).sign() < 0; }
    bool operator<=(const LogValue& o) const { return ((*this) - o).sign() <= 0; }
    bool operator>(const LogValue& o) const { return o < *this; }
    bool operator>=(const LogValue& o) const { return o <= *this; }

    Enclosure enclosure(mpfr_prec_t prec) const;
    double approx() const;
    std::string decimal(int digits = 17) const;

  private:
    LogQuantity exact_;
    std::shared_ptr<const TailFn> tail_;
};

inline int compare(const LogValue& a, const LogValue& b) { return (a - b).sign(); }

// smallest integer >= exp(v), by exact sign tests (doubling + binary search)
Int ceil_exp(const LogValue& v);

}  // namespace dioph
