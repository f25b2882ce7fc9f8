#pragma once

#include <cstdint>

namespace irntc {

// Natural-log gamma, thread safe (no signgam global).
double log_gamma(double x);

// log of the binomial coefficient C(n, t); requires 0 <= t <= n.
double log_binomial(int64_t n, int64_t t);

// log(exp(a) + exp(b)) without overflow; handles -inf arguments.
double log_sum_exp(double a, double b);

// Regularized incomplete gamma functions, a > 0, x >= 0.
// gamma_p(a, x) = P(a, x) grows from 0 to 1; gamma_q = 1 - P.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Chi-square distribution with dof degrees of freedom.
double chi_square_tail(int dof, double x);       // P[X > x]
double chi_square_cdf(int dof, double x);        // P[X <= x]
double chi_square_quantile(int dof, double prob);

// Regularized incomplete beta I_x(a, b), a, b > 0, x in [0, 1].
double beta_inc(double a, double b, double x);

// P[Binomial(n, p) > r], strict inequality; r < 0 gives 1, r >= n gives 0.
double binomial_tail(int64_t n, int64_t r, double p);

// Binary entropy in bits, p in [0, 1].
double binary_entropy(double p);

}
