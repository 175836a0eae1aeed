#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "reluland/errors.hpp"
#include "reluland/minima.hpp"
#include "reluland/network.hpp"

using namespace reluland;
using doctest::Approx;

namespace {

Params random_params(std::mt19937_64& gen, int H) {
  std::normal_distribution<double> n(0.0, 1.0);
  Params p(H);
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = n(gen);
  return p;
}

}  // namespace

TEST_CASE("params layout") {
  Params p(2, {1, 2, 3, 4, 5, 6, 7});
  CHECK(p.w(1) == 2);
  CHECK(p.b(0) == 3);
  CHECK(p.v(1) == 6);
  CHECK(p.c() == 7);
  CHECK(p.idx_c() == 6);
  CHECK_THROWS_AS(Params(2, {1, 2, 3}), DomainError);
  CHECK_THROWS_AS(Params(0), DomainError);
}

TEST_CASE("realize") {
  CHECK(realize(Params(1, {1, 0, 1, 0}), 0.7) == Approx(0.7));
  Params zero_v(3, {1, -2, 0.5, 0.1, 0.2, 0.3, 0, 0, 0, 4.5});
  for (double x : {0.0, 0.3, 1.0}) CHECK(realize(zero_v, x) == 4.5);
  // family member with normalized kink 1/2
  BenchmarkTarget t(1.0 / 3.0, 2.0 / 3.0);
  const MinimaSample s = sample_M(t, 4, 0.5, 1.0, 0);
  CHECK(realize(s.theta, 0.5) == Approx(-1.0 / (4.0 * std::sqrt(5.0))).epsilon(1e-14));
}

TEST_CASE("canonical form") {
  Realization r = canonical(Params(1, {1, -0.5, 2, 1}), 0.0, 1.0);
  REQUIRE(r.kinks.size() == 1);
  CHECK(r.kinks[0] == 0.5);
  CHECK(r.slopes == std::vector<double>{0.0, 2.0});
  CHECK(r.offset == 1.0);

  Realization split = canonical(Params(2, {1, 1, -0.5, -0.5, 1, 1, 1}), 0.0, 1.0);
  CHECK(split.kinks == r.kinks);
  CHECK(split.slopes == r.slopes);
  CHECK(split.offset == r.offset);

  BenchmarkTarget t(1.0 / 3.0, 2.0 / 3.0);
  const MinimaSample s = sample_M(t, 4, 0.42, 2.5, 9);
  Realization m = canonical(s.theta, 0.0, 1.0);
  REQUIRE(m.kinks.size() == 1);
  CHECK(m.kinks[0] == Approx(0.42).epsilon(1e-14));

  // cancelling neurons leave an affine function with no kink
  Realization cancel = canonical(Params(2, {1, 1, -0.5, -0.5, 1, -1, 0}), 0.0, 1.0);
  CHECK(cancel.kinks.empty());
  CHECK(cancel.slopes.size() == 1);
}

TEST_CASE("canonical agrees with realize") {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> u(-1.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const Params p = random_params(gen, 1 + i % 5);
    const Realization r = canonical(p, -1.0, 2.0);
    const double x = u(gen);
    CHECK(std::abs(r(x) - realize(p, x)) < 1e-10);
    for (std::size_t k = 1; k < r.kinks.size(); ++k) CHECK(r.kinks[k] > r.kinks[k - 1]);
    CHECK(r.slopes.size() == r.kinks.size() + 1);
  }
}

TEST_CASE("canonical invariances") {
  std::mt19937_64 gen(8);
  for (int i = 0; i < 100; ++i) {
    const Params p = random_params(gen, 3);
    const Realization r = canonical(p, 0.0, 1.0);
    // permutation (0 1 2) -> (2 0 1)
    Params perm(3);
    for (int j = 0; j < 3; ++j) {
      const int k = (j + 1) % 3;
      perm.w(k) = p.w(j);
      perm.b(k) = p.b(j);
      perm.v(k) = p.v(j);
    }
    perm.c() = p.c();
    // positive rescaling of each neuron
    Params scaled = p;
    for (int j = 0; j < 3; ++j) {
      const double lambda = 0.5 + j;
      scaled.w(j) *= lambda;
      scaled.b(j) *= lambda;
      scaled.v(j) /= lambda;
    }
    for (const Params& q : {perm, scaled}) {
      const Realization s = canonical(q, 0.0, 1.0);
      REQUIRE(s.kinks.size() == r.kinks.size());
      for (std::size_t k = 0; k < r.kinks.size(); ++k) CHECK(s.kinks[k] == Approx(r.kinks[k]).epsilon(1e-12));
      CHECK(l2_distance(r, s) < 1e-12);
    }
  }
}

TEST_CASE("l2 distance") {
  const Realization zero = Realization::constant(0.0, 1.0, 0.0);
  CHECK(l2_distance(zero, zero) == 0.0);
  CHECK(l2_distance(zero, Realization::constant(0.0, 1.0, 1.0)) == Approx(1.0));
  CHECK(l2_distance(zero, Realization::affine(0.0, 1.0, 1.0, 0.0)) == Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK_THROWS_AS(l2_distance(zero, Realization::constant(0.0, 2.0, 0.0)), DomainError);
  // |x - 1/2| against 0: integral of (x - 1/2)^2 = 1/12
  const Realization vee = canonical(Params(2, {1, -1, -0.5, 0.5, 1, 1, 0}), 0.0, 1.0);
  CHECK(l2_distance(zero, vee) == Approx(std::sqrt(1.0 / 12.0)).epsilon(1e-14));
}

TEST_CASE("smooth activation") {
  const SmoothActivation a6(1e6);
  CHECK(a6(0.0) < 1e-6);
  CHECK(a6(0.0) >= 0.0);
  CHECK(std::abs(SmoothActivation(1e4)(1.0) - 1.0) < 0.011);
  CHECK(SmoothActivation(100).derivative(-0.5) < 1e-20);
  CHECK(a6.derivative(0.0) < 1e-6);  // left-continuous indicator at 0
  CHECK(a6.derivative(1e-3) > 1.0 - 1e-6);
  // no overflow far out
  CHECK(a6(1e3) == Approx(1e3).epsilon(1e-6));
  CHECK(a6(-1e3) == 0.0);
  const SmoothActivation sq = SmoothActivation::sqrt_shifted(1e6);
  CHECK(sq.shift() == Approx(1e3));
  CHECK(std::abs(sq(1.0) - 1.0) < 1.1e-3);
  CHECK_THROWS_AS(SmoothActivation(0.0), DomainError);
}

TEST_CASE("smooth realizations converge") {
  std::mt19937_64 gen(99);
  for (int trial = 0; trial < 20; ++trial) {
    const Params p = random_params(gen, 4);
    double prev = 1e300;
    for (double r : {1e2, 1e4, 1e6}) {
      const SmoothActivation act(r);
      double sup = 0.0;
      for (int i = 0; i <= 1000; ++i) {
        const double x = i / 1000.0;
        sup = std::max(sup, std::abs(realize_smooth(p, x, act) - realize(p, x)));
      }
      CHECK(sup <= prev);
      prev = sup;
    }
    double vsum = 0.0;
    for (int j = 0; j < 4; ++j) vsum += std::abs(p.v(j));
    CHECK(prev < 1e-3 * (1.0 + vsum));
  }
}

TEST_CASE("linear pieces") {
  const Params p(2, {1, -1, -0.25, 0.75, 2, 3, 0.5});
  const auto segs = linear_pieces(p, 0.0, 1.0);
  REQUIRE(segs.size() == 3);
  for (const Segment& s : segs) CHECK(s.at(0.5 * (s.lo + s.hi)) == Approx(realize(p, 0.5 * (s.lo + s.hi))));
  const Realization r = Realization::from_segments(segs);
  CHECK(r.kinks.size() == 2);
}
