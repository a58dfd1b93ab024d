// Basic GMP typedefs and small rational/integer helpers shared by all modules.
#pragma once

#include <gmpxx.h>
#include <stdexcept>
#include <string>
#include <vector>

namespace dioph {

using Int = mpz_class;
using Rat = mpq_class;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InfeasibleError : std::runtime_error {
    std::string predicate;
    InfeasibleError(const std::string& pred, const std::string& msg)
        : std::runtime_error(msg), predicate(pred) {}
};
struct VerifyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InternalError : std::logic_error {
    using std::logic_error::logic_error;
};

inline Int ipow(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Rat rpow(const Rat& base, long e) {
    Rat r;
    if (e >= 0) {
        mpz_pow_ui(r.get_num_mpz_t(), base.get_num().get_mpz_t(), (unsigned long)e);
        mpz_pow_ui(r.get_den_mpz_t(), base.get_den().get_mpz_t(), (unsigned long)e);
    } else {
        mpz_pow_ui(r.get_num_mpz_t(), base.get_den().get_mpz_t(), (unsigned long)(-e));
        mpz_pow_ui(r.get_den_mpz_t(), base.get_num().get_mpz_t(), (unsigned long)(-e));
    }
    r.canonicalize();
    return r;
}

// floor(a) for rational a
inline Int rfloor(const Rat& a) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_num().get_mpz_t(), a.get_den().get_mpz_t());
    return q;
}

inline Int rceil(const Rat& a) {
    Int q;
    mpz_cdiv_q(q.get_mpz_t(), a.get_num().get_mpz_t(), a.get_den().get_mpz_t());
    return q;
}

inline Rat rabs(const Rat& a) { return a < 0 ? Rat(-a) : a; }
inline Int iabs(const Int& a) { return a < 0 ? Int(-a) : a; }

// Parses "p/q" or "p" (decimal forms are rejected: exactness discipline).
inline Rat parse_rat(const std::string& s) {
    if (s.empty()) throw ConfigError("empty rational literal");
    if (s.find('.') != std::string::npos || s.find('e') != std::string::npos ||
        s.find('E') != std::string::npos)
        throw ConfigError("rational literal must be \"p\" or \"p/q\", got: " + s);
    Rat r;
    if (r.set_str(s, 10) != 0) throw ConfigError("bad rational literal: " + s);
    r.canonicalize();
    if (r.get_den() == 0) throw ConfigError("zero denominator: " + s);
    return r;
}

inline std::string format_rat(const Rat& r) { return r.get_str(); }

}  // namespace dioph
