// Approximation functions psi and their derived rate objects:
//   Psi(s)      = psi(s)^{-n/(n+1)}
//   r_psi(t)    = -t + log Psi^{-1}(e^t)
//   gamma_psi   = (n*lambda - n - 1) / (n*lambda)
//   m_bound     = M_k = -sup_{t >= t_prev} r_psi(t)
// POWER family: psi(s) = c s^{-lambda}; everything is exact closed form.
// POWER_LOG:    psi(s) = c s^{-lambda} (log s)^{-beta}; the log-log part is a
// certified enclosure tail inside LogValue; r_psi uses monotone bisection.
#pragma once

#include "dioph/grid.hpp"
#include "dioph/logq.hpp"
#include "dioph/rational.hpp"

namespace dioph {

enum class PsiFamily { Power, PowerLog };

struct PsiSpec {
    int n = 1;
    PsiFamily family = PsiFamily::Power;
    Rat lambda;
    Rat beta = 0;  // POWER_LOG only
    Rat c = 1;
    Int s0 = 1;  // lower cutoff; heights below s0 are out of psi's domain

    static PsiSpec power(int n, const Rat& lambda, const Rat& c = 1);
    static PsiSpec power_log(int n, const Rat& lambda, const Rat& beta, const Rat& c = 1);

    // lambda > (n+1)/n strictly, or POWER_LOG boundary with beta > 0
    bool strictly_admissible() const;
    Rat lower_order() const { return lambda; }  // lambda_psi
    Rat gamma() const;                          // gamma_psi
    PsiSpec scale(const Rat& c2) const;         // spec of (c2 * psi)

    LogQuantity log_cutoff() const;  // log s0
};

// log psi(e^s); DOMAIN if e^s < s0
LogValue psi_log(const PsiSpec& spec, const LogValue& s);
// log Psi(e^s) = -(n/(n+1)) log psi(e^s)
LogValue Psi_log(const PsiSpec& spec, const LogValue& s);
// log Psi^{-1}(e^t)
LogValue Psi_inv_log(const PsiSpec& spec, const LogValue& t);
// closed-form continuation below the s0 cutoff (POWER only; POWER_LOG keeps
// the cutoff since the log factor degenerates at s = 1)
LogValue Psi_inv_log_ext(const PsiSpec& spec, const LogValue& t);
// r_psi(t); DOMAIN below t_cutoff = log Psi(s0)
LogValue r_psi(const PsiSpec& spec, const LogValue& t);
// M = -sup_{t >= t_prev} r_psi(t)
LogValue m_bound(const PsiSpec& spec, const LogValue& t_prev);

}  // namespace dioph
