#pragma once

// Arbitrary-precision referee for the regularized incomplete gamma
// functions. Everything runs in MPFR at 256 bits with truncation driven to
// ~2^-200, so any disagreement beyond 1e-12 with the double-precision
// implementation is the implementation's error, not the oracle's.

#include <mpfr.h>

#include <stdexcept>

namespace oracle {

inline constexpr mpfr_prec_t kGammaPrec = 256;

namespace detail {

// exp(a ln x - x - lnGamma(a)) into `out`.
inline void gamma_prefactor(mpfr_t out, const mpfr_t a, const mpfr_t x) {
  mpfr_t lg;
  mpfr_init2(lg, kGammaPrec);
  mpfr_log(out, x, MPFR_RNDN);
  mpfr_mul(out, out, a, MPFR_RNDN);
  mpfr_sub(out, out, x, MPFR_RNDN);
  mpfr_lngamma(lg, a, MPFR_RNDN);
  mpfr_sub(out, out, lg, MPFR_RNDN);
  mpfr_exp(out, out, MPFR_RNDN);
  mpfr_clear(lg);
}

// Lower series: P(a,x) = prefactor * sum_{i>=0} x^i / (a (a+1) ... (a+i)).
inline void gamma_p_series(mpfr_t out, const mpfr_t a, const mpfr_t x) {
  mpfr_t term, sum, denom, thresh;
  mpfr_inits2(kGammaPrec, term, sum, denom, thresh, (mpfr_ptr) nullptr);
  mpfr_ui_div(term, 1, a, MPFR_RNDN);
  mpfr_set(sum, term, MPFR_RNDN);
  mpfr_set(denom, a, MPFR_RNDN);
  bool converged = false;
  for (long i = 1; i < 4000000; ++i) {
    mpfr_add_ui(denom, denom, 1, MPFR_RNDN);
    mpfr_mul(term, term, x, MPFR_RNDN);
    mpfr_div(term, term, denom, MPFR_RNDN);
    mpfr_add(sum, sum, term, MPFR_RNDN);
    mpfr_mul_2si(thresh, sum, -220, MPFR_RNDN);
    if (mpfr_cmp(term, thresh) < 0) {
      converged = true;
      break;
    }
  }
  if (!converged) throw std::runtime_error("oracle gamma_p_series: no convergence");
  gamma_prefactor(out, a, x);
  mpfr_mul(out, out, sum, MPFR_RNDN);
  mpfr_clears(term, sum, denom, thresh, (mpfr_ptr) nullptr);
}

// Upper continued fraction (modified Lentz): Q(a,x) = prefactor * cf.
inline void gamma_q_cf(mpfr_t out, const mpfr_t a, const mpfr_t x) {
  mpfr_t b, c, d, h, an, delta, tmp;
  mpfr_inits2(kGammaPrec, b, c, d, h, an, delta, tmp, (mpfr_ptr) nullptr);
  // b = x + 1 - a
  mpfr_add_ui(b, x, 1, MPFR_RNDN);
  mpfr_sub(b, b, a, MPFR_RNDN);
  mpfr_set_ui_2exp(c, 1, 600, MPFR_RNDN);  // "infinite" c
  if (mpfr_zero_p(b))
    mpfr_set_ui_2exp(d, 1, 600, MPFR_RNDN);
  else
    mpfr_ui_div(d, 1, b, MPFR_RNDN);
  mpfr_set(h, d, MPFR_RNDN);
  bool converged = false;
  for (long i = 1; i < 4000000; ++i) {
    // an = -i (i - a)
    mpfr_ui_sub(an, static_cast<unsigned long>(i), a, MPFR_RNDN);
    mpfr_mul_si(an, an, -i, MPFR_RNDN);
    mpfr_add_ui(b, b, 2, MPFR_RNDN);
    // d = 1 / (an d + b)
    mpfr_mul(d, an, d, MPFR_RNDN);
    mpfr_add(d, d, b, MPFR_RNDN);
    if (mpfr_zero_p(d)) mpfr_set_ui_2exp(d, 1, -600, MPFR_RNDN);
    mpfr_ui_div(d, 1, d, MPFR_RNDN);
    // c = b + an / c
    mpfr_div(tmp, an, c, MPFR_RNDN);
    mpfr_add(c, b, tmp, MPFR_RNDN);
    if (mpfr_zero_p(c)) mpfr_set_ui_2exp(c, 1, -600, MPFR_RNDN);
    mpfr_mul(delta, d, c, MPFR_RNDN);
    mpfr_mul(h, h, delta, MPFR_RNDN);
    mpfr_sub_ui(tmp, delta, 1, MPFR_RNDN);
    mpfr_abs(tmp, tmp, MPFR_RNDN);
    if (mpfr_cmp_ui_2exp(tmp, 1, -220) < 0) {
      converged = true;
      break;
    }
  }
  if (!converged) throw std::runtime_error("oracle gamma_q_cf: no convergence");
  gamma_prefactor(out, a, x);
  mpfr_mul(out, out, h, MPFR_RNDN);
  mpfr_clears(b, c, d, h, an, delta, tmp, (mpfr_ptr) nullptr);
}

}  // namespace detail

// Upper regularized incomplete gamma Q(a, x), rounded to nearest double.
inline double gamma_q_mpfr(double a_in, double x_in) {
  if (!(a_in > 0.0) || x_in < 0.0)
    throw std::invalid_argument("gamma_q_mpfr: bad arguments");
  if (x_in == 0.0) return 1.0;
  mpfr_t a, x, r;
  mpfr_inits2(kGammaPrec, a, x, r, (mpfr_ptr) nullptr);
  mpfr_set_d(a, a_in, MPFR_RNDN);
  mpfr_set_d(x, x_in, MPFR_RNDN);
  if (x_in < a_in + 1.0) {
    detail::gamma_p_series(r, a, x);
    mpfr_ui_sub(r, 1, r, MPFR_RNDN);
  } else {
    detail::gamma_q_cf(r, a, x);
  }
  double out = mpfr_get_d(r, MPFR_RNDN);
  mpfr_clears(a, x, r, (mpfr_ptr) nullptr);
  return out;
}

inline double gamma_p_mpfr(double a_in, double x_in) {
  if (!(a_in > 0.0) || x_in < 0.0)
    throw std::invalid_argument("gamma_p_mpfr: bad arguments");
  if (x_in == 0.0) return 0.0;
  mpfr_t a, x, r;
  mpfr_inits2(kGammaPrec, a, x, r, (mpfr_ptr) nullptr);
  mpfr_set_d(a, a_in, MPFR_RNDN);
  mpfr_set_d(x, x_in, MPFR_RNDN);
  if (x_in < a_in + 1.0) {
    detail::gamma_p_series(r, a, x);
  } else {
    detail::gamma_q_cf(r, a, x);
    mpfr_ui_sub(r, 1, r, MPFR_RNDN);
  }
  double out = mpfr_get_d(r, MPFR_RNDN);
  mpfr_clears(a, x, r, (mpfr_ptr) nullptr);
  return out;
}

// P[chi-square with dof degrees of freedom > x]; evaluates at exactly the
// (a, x) = (dof/2, x/2) the double implementation sees (both halvings exact).
inline double chi_square_tail_mpfr(int dof, double x) {
  if (dof < 1) throw std::invalid_argument("chi_square_tail_mpfr: dof < 1");
  if (x <= 0.0) return 1.0;
  return gamma_q_mpfr(0.5 * dof, 0.5 * x);
}

}  // namespace oracle
