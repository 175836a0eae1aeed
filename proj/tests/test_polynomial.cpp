#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "reluland/errors.hpp"
#include "reluland/polynomial.hpp"

using namespace reluland;
using doctest::Approx;

namespace {

Polynomial random_poly(std::mt19937_64& gen, int degree) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> c(degree + 1);
  for (double& x : c) x = u(gen);
  return Polynomial(c);
}

}  // namespace

TEST_CASE("trailing zeros are trimmed") {
  Polynomial p{1.0, 2.0, 0.0, 0.0};
  CHECK(p.degree() == 1);
  CHECK(p.coeffs().size() == 2);
  CHECK(Polynomial{0.0}.is_zero());
  CHECK(Polynomial().degree() == 0);
}

TEST_CASE("piecewise evaluation") {
  PiecewisePolynomial sq({0.0, 1.0}, {Polynomial{0.0, 0.0, 1.0}});
  CHECK(sq(0.5) == 0.25);
  PiecewisePolynomial seven({0.0, 2.0}, {Polynomial::constant(7.0)});
  CHECK(seven(1.3) == 7.0);
  PiecewisePolynomial tent({0.0, 1.0, 2.0}, {Polynomial{0.0, 1.0}, Polynomial{2.0, -1.0}});
  CHECK(tent(1.0) == 1.0);
  CHECK(tent.piece_index(1.0) == 1);
  CHECK(tent.piece_index(2.0) == 1);
  CHECK_THROWS_AS(tent(2.5), DomainError);
  CHECK_THROWS_AS(tent(-1e-9), DomainError);
  CHECK(tent.is_continuous());
  CHECK_FALSE(PiecewisePolynomial({0.0, 1.0, 2.0}, {Polynomial{0.0}, Polynomial{1.0}}).is_continuous());
}

TEST_CASE("construction rejects bad breakpoints") {
  CHECK_THROWS_AS(PiecewisePolynomial({0.0, 0.0}, {Polynomial{1.0}}), DomainError);
  CHECK_THROWS_AS(PiecewisePolynomial({0.0, 1.0}, {Polynomial{1.0}, Polynomial{2.0}}), DomainError);
  CHECK_THROWS_AS(PiecewisePolynomial({1.0, 0.0}, {Polynomial{1.0}}), DomainError);
}

TEST_CASE("moments") {
  PiecewisePolynomial x({0.0, 1.0}, {Polynomial{0.0, 1.0}});
  PiecewisePolynomial x2({0.0, 1.0}, {Polynomial{0.0, 0.0, 1.0}});
  CHECK(x.moment(0, 0.0, 1.0) == Approx(0.5).epsilon(1e-15));
  CHECK(x2.moment(1, 0.0, 1.0) == Approx(0.25).epsilon(1e-15));
  // antiderivative q^3/3 at q = 1/3
  CHECK(x2.moment(0, 0.0, 1.0 / 3.0) == Approx(1.0 / 81.0).epsilon(1e-14));
  CHECK_THROWS_AS(x2.moment(0, -0.1, 0.5), DomainError);
}

TEST_CASE("moments match Gauss-Legendre for random piecewise polynomials") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 4;
    std::vector<double> bps{-1.0};
    for (int i = 0; i < n; ++i) bps.push_back(bps.back() + 0.2 + u(gen));
    std::vector<Polynomial> pieces;
    for (int i = 0; i < n; ++i) pieces.push_back(random_poly(gen, 6));
    PiecewisePolynomial pp(bps, pieces);
    const double lo = bps.front() + 0.1 * u(gen), hi = bps.back() - 0.1 * u(gen);
    std::vector<double> cuts(bps.begin() + 1, bps.end() - 1);
    for (int k = 0; k <= 3; ++k) {
      const double expect =
          oracle::gauss_legendre_split([&](double x) { return std::pow(x, k) * pp(x); }, lo, hi, cuts, 1);
      const double got = pp.moment(k, lo, hi);
      CHECK(std::abs(got - expect) <= 1e-10 * std::max(1.0, std::abs(expect)));
    }
  }
}

TEST_CASE("roots_in examples") {
  auto r = roots_in(Polynomial{-0.25, 0.0, 1.0}, 0.0, 1.0, 1e-12);
  REQUIRE(r.size() == 1);
  CHECK(r[0] == Approx(0.5).epsilon(1e-14));

  // (q-1)^2 (3q-1) (q+1) = 3q^4 - 4q^3 - 2q^2 + 4q - 1
  const double eps = 1e-6;
  r = roots_in(Polynomial{-1.0, 4.0, -2.0, -4.0, 3.0}, eps, 1.0 - eps, 1e-12);
  REQUIRE(r.size() == 1);
  CHECK(r[0] == Approx(1.0 / 3.0).epsilon(1e-13));

  CHECK(roots_in(Polynomial{1.0, 0.0, 1.0}, 0.0, 1.0, 1e-12).empty());
  CHECK_THROWS_AS(roots_in(Polynomial{}, 0.0, 1.0, 1e-12), DegeneracyError);
  CHECK_THROWS_AS(roots_in(Polynomial{1.0, 1.0}, 1.0, 0.0, 1e-12), DomainError);
}

TEST_CASE("roots_in recovers planted roots of random cubics") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    double r1 = u(gen), r2 = u(gen), r3 = u(gen);
    const double lead = trial % 2 ? 0.5 + std::abs(u(gen)) : -1.0;
    Polynomial p = lead * Polynomial{-r1, 1.0} * Polynomial{-r2, 1.0} * Polynomial{-r3, 1.0};
    const auto roots = roots_in(p, -3.5, 3.5, 1e-13);
    for (double planted : {r1, r2, r3}) {
      double best = 1e300;
      for (double x : roots) best = std::min(best, std::abs(x - planted));
      // Near-coincident planted roots may legitimately collapse.
      double sep = 1e300;
      for (double other : {r1, r2, r3})
        if (other != planted) sep = std::min(sep, std::abs(other - planted));
      if (sep > 1e-3) CHECK(best < 1e-9);
    }
    for (double x : roots) CHECK(std::abs(p(x)) <= 1e-9 * p.scale());
  }
}

TEST_CASE("roots at interval ends and double roots") {
  auto r = roots_in(Polynomial{0.0, 1.0}, 0.0, 1.0, 1e-12);
  REQUIRE(r.size() == 1);
  CHECK(std::abs(r[0]) < 1e-12);
  r = roots_in(Polynomial{0.25, -1.0, 1.0}, 0.0, 1.0, 1e-12);  // (x - 1/2)^2
  REQUIRE(r.size() == 1);
  CHECK(r[0] == Approx(0.5).epsilon(1e-7));
}

TEST_CASE("algebra identities") {
  Polynomial p{1.0, -2.0, 3.0};
  Polynomial q{0.5, 4.0};
  CHECK((p - p).is_zero());
  CHECK((p * q)(0.7) == Approx(p(0.7) * q(0.7)).epsilon(1e-14));
  CHECK((p * 0.0).is_zero());
  CHECK(p.antiderivative().derivative()(1.3) == Approx(p(1.3)).epsilon(1e-14));
  CHECK(p.integral(0.0, 2.0) == Approx(2.0 - 4.0 + 8.0).epsilon(1e-14));
  const DivisionResult d = divide(p * q + Polynomial{2.0}, q);
  CHECK(d.quotient(0.3) == Approx(p(0.3)).epsilon(1e-13));
  CHECK(d.remainder(0.0) == Approx(2.0).epsilon(1e-13));
  CHECK(d.remainder.degree() == 0);
}

TEST_CASE("compose_affine evaluates p(s x + t)") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    Polynomial p = random_poly(gen, trial % 6);
    const double s = u(gen), t = u(gen), x = u(gen);
    CHECK(std::abs(p.compose_affine(s, t)(x) - p(s * x + t)) <= 1e-12);
  }
  Polynomial p{1.0, 2.0};
  CHECK(p.compose_affine(1.0, 0.0)(0.3) == p(0.3));
}

TEST_CASE("piecewise transforms") {
  PiecewisePolynomial tent({0.0, 1.0, 2.0}, {Polynomial{0.0, 1.0}, Polynomial{2.0, -1.0}});
  CHECK(tent.scaled(3.0)(0.5) == Approx(1.5));
  CHECK(tent.squared()(1.5) == Approx(0.25));
  // u -> tent(2u) on [0, 1]
  const PiecewisePolynomial c = tent.compose_affine(2.0, 0.0);
  CHECK(c.lo() == 0.0);
  CHECK(c.hi() == 1.0);
  CHECK(c(0.75) == Approx(tent(1.5)));
  // a negative slope reverses the pieces
  const PiecewisePolynomial r = tent.compose_affine(-1.0, 2.0);
  CHECK(r(0.25) == Approx(tent(1.75)));
  CHECK(r.moment(0, 0.0, 2.0) == Approx(1.0));
}
