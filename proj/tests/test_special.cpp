#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <gmpxx.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "irntc/special.hpp"
#include "oracles/mpfr_gamma.hpp"

using namespace irntc;

TEST_CASE("chi-square tail matches the arbitrary-precision referee") {
  const std::vector<int> dofs = {1, 2, 3, 4, 7, 10, 19, 31, 64, 137, 500, 1000, 2000};
  const std::vector<double> mult = {0.05, 0.3, 0.7, 0.95, 1.0, 1.05, 1.3, 2.0, 3.5};
  for (int dof : dofs) {
    for (double f : mult) {
      double x = f * dof;
      double got = chi_square_tail(dof, x);
      double want = oracle::chi_square_tail_mpfr(dof, x);
      CAPTURE(dof);
      CAPTURE(x);
      CHECK(std::abs(got - want) <= 1e-12);
      if (want > 1e-8) CHECK(std::abs(got - want) <= 1e-10 * want);
    }
  }
  // Small absolute x, far from the mean.
  for (int dof : {1, 5, 50, 2000}) {
    for (double x : {1e-3, 0.1, 1.0, 5.0}) {
      CHECK(std::abs(chi_square_tail(dof, x) - oracle::chi_square_tail_mpfr(dof, x)) <=
            1e-12);
    }
  }
}

TEST_CASE("incomplete gamma halves are complementary") {
  for (double a : {0.5, 1.0, 2.5, 17.0, 400.0}) {
    for (double f : {0.2, 0.9, 1.0, 1.1, 2.5}) {
      double x = f * a;
      CHECK(gamma_p(a, x) + gamma_q(a, x) == doctest::Approx(1.0).epsilon(1e-13));
      CHECK(std::abs(gamma_p(a, x) - oracle::gamma_p_mpfr(a, x)) <= 1e-12);
    }
  }
  CHECK(gamma_p(3.0, 0.0) == 0.0);
  CHECK(gamma_q(3.0, 0.0) == 1.0);
  CHECK_THROWS_AS(gamma_p(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(gamma_q(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("chi-square cdf, tail, and quantile are consistent") {
  for (int dof : {1, 3, 10, 100, 1000}) {
    for (double f : {0.3, 1.0, 1.8}) {
      double x = f * dof;
      CHECK(chi_square_cdf(dof, x) + chi_square_tail(dof, x) ==
            doctest::Approx(1.0).epsilon(1e-13));
    }
    for (double p : {0.01, 0.5, 0.99, 0.999999}) {
      double x = chi_square_quantile(dof, p);
      CHECK(chi_square_cdf(dof, x) == doctest::Approx(p).epsilon(1e-7));
    }
    CHECK(chi_square_quantile(dof, 0.0) == 0.0);
  }
  CHECK(chi_square_tail(5, 0.0) == 1.0);
  CHECK(chi_square_tail(5, -1.0) == 1.0);
  CHECK(chi_square_cdf(5, 0.0) == 0.0);
  CHECK_THROWS_AS(chi_square_tail(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(chi_square_quantile(3, 1.0), std::invalid_argument);
}

TEST_CASE("regularized incomplete beta against closed forms") {
  // I_x(1, b) = 1 - (1-x)^b and I_x(a, 1) = x^a.
  for (double x : {0.05, 0.3, 0.7, 0.97}) {
    for (double b : {0.5, 1.0, 3.0, 20.0}) {
      CHECK(beta_inc(1.0, b, x) ==
            doctest::Approx(1.0 - std::pow(1.0 - x, b)).epsilon(1e-13));
      CHECK(beta_inc(b, 1.0, x) == doctest::Approx(std::pow(x, b)).epsilon(1e-13));
    }
    // Symmetry I_x(a, b) = 1 - I_{1-x}(b, a).
    for (double a : {0.7, 2.0, 9.0}) {
      for (double b : {1.3, 4.0}) {
        CHECK(beta_inc(a, b, x) ==
              doctest::Approx(1.0 - beta_inc(b, a, 1.0 - x)).epsilon(1e-12));
      }
    }
  }
  CHECK(beta_inc(2.0, 3.0, 0.0) == 0.0);
  CHECK(beta_inc(2.0, 3.0, 1.0) == 1.0);
  CHECK_THROWS_AS(beta_inc(0.0, 1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(beta_inc(1.0, 1.0, 1.5), std::invalid_argument);
}

TEST_CASE("binomial tail matches exact rational enumeration") {
  // P[X > r] = sum_{t>r} C(n,t) p^t q^(n-t), evaluated exactly in rationals.
  const mpq_class ps[] = {mpq_class(1, 4), mpq_class(789, 10000), mpq_class(1, 2)};
  for (const mpq_class& pq : ps) {
    double p = pq.get_d();
    for (int n : {1, 2, 5, 17, 40, 120}) {
      std::vector<mpz_class> binom(static_cast<size_t>(n) + 1);
      binom[0] = 1;
      for (int t = 1; t <= n; ++t) {
        binom[static_cast<size_t>(t)] = binom[static_cast<size_t>(t) - 1] * (n - t + 1);
        mpz_divexact_ui(binom[static_cast<size_t>(t)].get_mpz_t(),
                        binom[static_cast<size_t>(t)].get_mpz_t(),
                        static_cast<unsigned long>(t));
      }
      for (int r : {-1, 0, 1, n / 3, n / 2, n - 1, n}) {
        mpq_class exact = 0;
        mpq_class q = mpq_class(1) - pq;
        for (int t = std::max(0, r + 1); t <= n; ++t) {
          mpq_class term = binom[static_cast<size_t>(t)];
          for (int i = 0; i < t; ++i) term *= pq;
          for (int i = 0; i < n - t; ++i) term *= q;
          exact += term;
        }
        double got = binomial_tail(n, r, p);
        double want = exact.get_d();
        CAPTURE(n);
        CAPTURE(r);
        CAPTURE(p);
        CHECK(std::abs(got - want) <= 1e-12 * (want + 1e-300) + 1e-15);
      }
    }
  }
  CHECK(binomial_tail(10, -3, 0.3) == 1.0);
  CHECK(binomial_tail(10, 10, 0.3) == 0.0);
  CHECK(binomial_tail(10, 12, 0.3) == 0.0);
  CHECK(binomial_tail(10, 4, 0.0) == 0.0);
  CHECK(binomial_tail(10, 4, 1.0) == 1.0);
}

TEST_CASE("log binomial coefficients match exact big integers") {
  for (int n : {1, 2, 30, 333, 2000}) {
    for (int t : {0, 1, n / 5, n / 2, n - 1, n}) {
      mpz_class c;
      mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(n),
                   static_cast<unsigned long>(t));
      mpfr_t v;
      mpfr_init2(v, 128);
      mpfr_set_z(v, c.get_mpz_t(), MPFR_RNDN);
      mpfr_log(v, v, MPFR_RNDN);
      double want = mpfr_get_d(v, MPFR_RNDN);
      mpfr_clear(v);
      CAPTURE(n);
      CAPTURE(t);
      CHECK(std::abs(log_binomial(n, t) - want) <= 1e-12 * (std::abs(want) + 1.0));
    }
  }
  CHECK_THROWS_AS(log_binomial(5, 6), std::invalid_argument);
  CHECK_THROWS_AS(log_binomial(5, -1), std::invalid_argument);
}

TEST_CASE("log-sum-exp handles infinities and magnitude spread") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(log_sum_exp(-inf, 3.0) == 3.0);
  CHECK(log_sum_exp(3.0, -inf) == 3.0);
  CHECK(log_sum_exp(-inf, -inf) == -inf);
  CHECK(log_sum_exp(0.0, 0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(log_sum_exp(1000.0, 1000.0) ==
        doctest::Approx(1000.0 + std::log(2.0)).epsilon(1e-15));
  CHECK(log_sum_exp(-1.0, -900.0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(log_sum_exp(2.0, 3.0) == log_sum_exp(3.0, 2.0));
}

TEST_CASE("binary entropy closed values and symmetry") {
  CHECK(binary_entropy(0.5) == 1.0);
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.25) ==
        doctest::Approx(2.0 - 0.75 * std::log2(3.0)).epsilon(1e-15));
  for (double p : {0.01, 0.11, 0.3, 0.49})
    CHECK(binary_entropy(p) == doctest::Approx(binary_entropy(1.0 - p)).epsilon(1e-13));
  CHECK(binary_entropy(0.2) < binary_entropy(0.35));
  CHECK_THROWS_AS(binary_entropy(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(binary_entropy(1.1), std::invalid_argument);
}
