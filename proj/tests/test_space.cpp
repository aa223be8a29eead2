#include <doctest.h>

#include <random>

#include "support.hpp"

using namespace biortho;
using namespace biortho::testing;

namespace {
const Gridd unit(0.0, 1.0, 11);
}

TEST_CASE("grid construction") {
  CHECK(unit.step() == doctest::Approx(0.1));
  CHECK(unit.abscissa(0) == 0.0);
  CHECK(unit.abscissa(10) == 0.0 + 10 * unit.step());
  CHECK(unit.weights().sum() == doctest::Approx(1.0));
  CHECK(unit.weight(0) == unit.step() / 2);
  CHECK(unit.weight(5) == unit.step());

  CHECK_THROWS_AS(Gridd(1.0, 1.0, 5), InvalidArgument);
  CHECK_THROWS_AS(Gridd(2.0, 1.0, 5), InvalidArgument);
  CHECK_THROWS_AS(Gridd(0.0, 1.0, 1), InvalidArgument);
}

TEST_CASE("signal invariants") {
  CHECK_THROWS_AS(Signald(unit, VectorX<double>::Zero(10)), InvalidArgument);
  VectorX<double> v = VectorX<double>::Zero(11);
  v(3) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(Signald(unit, v), InvalidArgument);
  v(3) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(Signald(unit, v), InvalidArgument);
}

TEST_CASE("inner product examples") {
  const Signald one = Signald::sample(unit, [](double) { return 1.0; });
  const Signald t = Signald::sample(unit, [](double x) { return x; });
  CHECK(inner(one, one) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(inner(t, one) == doctest::Approx(0.5).epsilon(1e-14));

  const Gridd g = example_grid();
  const std::vector<double> c0 = {0.0};
  const Dictionaryd d = mexican_hat_dictionary(g, c0);
  const Signald a = d.signal(0);
  CHECK(std::abs(inner(a, a) - 1.0) <= 1e-10);

  const Signald other = Signald::zero(Gridd(0.0, 1.0, 12));
  CHECK_THROWS_AS(inner(one, other), GridMismatch);
}

TEST_CASE("norm_sq examples") {
  CHECK(norm_sq(Signald::zero(unit)) == 0.0);
  CHECK(norm_sq(Signald::sample(unit, [](double) { return 1.0; })) == doctest::Approx(1.0).epsilon(1e-14));

  std::mt19937_64 rng(7);
  const Gridd g(0.0, 1.0, 64);
  const Signald u = random_signal(rng, g);
  const Signald raw = random_signal(rng, g);
  const Signald v = axpy(-inner(u, raw) / norm_sq(u), u, raw);
  REQUIRE(std::abs(inner(u, v)) < 1e-13);
  const Signald sum = axpy(1.0, u, v);
  CHECK(std::abs(norm_sq(sum) - (norm_sq(u) + norm_sq(v))) <= 1e-12);
}

TEST_CASE("axpy examples") {
  std::mt19937_64 rng(3);
  const Signald x = random_signal(rng, unit);
  const Signald y = random_signal(rng, unit);
  CHECK(axpy(0.0, x, y).values() == y.values());
  CHECK(axpy(1.0, x, Signald::zero(unit)).values() == x.values());
  CHECK(axpy(-1.0, x, x).values() == VectorX<double>::Zero(11));
  CHECK_THROWS_AS(axpy(1.0, x, Signald::zero(Gridd(0.0, 2.0, 11))), GridMismatch);
}

TEST_CASE("inner is exactly symmetric") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Gridd g(-1.0, 3.0, 17 + trial);
    const Signald a = random_signal(rng, g);
    const Signald b = random_signal(rng, g);
    CHECK(inner(a, b) == inner(b, a));
  }
}

TEST_CASE("bilinearity and Cauchy-Schwarz on random signals") {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> scalar(-5.0, 5.0);
  std::uniform_int_distribution<int> size(2, 300);
  for (int trial = 0; trial < 200; ++trial) {
    const Gridd g(-2.0, 5.0, size(rng));
    const Signald u = random_signal(rng, g);
    const Signald v = random_signal(rng, g);
    const Signald w = random_signal(rng, g);
    const double a = scalar(rng);

    const double lhs = inner(axpy(a, u, v), w);
    const double rhs = a * inner(u, w) + inner(v, w);
    const double scale = std::abs(a) * std::abs(inner(u, w)) + std::abs(inner(v, w)) +
                         std::sqrt(norm_sq(axpy(a, u, v)) * norm_sq(w));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * scale);

    const double uv = inner(u, v);
    CHECK(uv * uv <= norm_sq(u) * norm_sq(v) * (1 + 1e-12));
  }
}

TEST_CASE("trapezoid is exact for combined degree <= 1") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double lo = coef(rng);
    const double hi = lo + 0.5 + std::abs(coef(rng));
    const Gridd g(lo, hi, 5 + trial);
    const double p = coef(rng), q = coef(rng), r = coef(rng);
    const Signald lin = Signald::sample(g, [&](double t) { return p + q * t; });
    const Signald cst = Signald::sample(g, [&](double) { return r; });
    const double exact = r * (p * (g.t_max() - g.t_min()) +
                              q * (g.t_max() * g.t_max() - g.t_min() * g.t_min()) / 2);
    const double scale = std::abs(r) * (std::abs(p) + std::abs(q) * std::max(std::abs(lo), std::abs(hi))) *
                         (g.t_max() - g.t_min());
    CHECK(std::abs(inner(lin, cst) - exact) <= 1e-12 * scale);
  }
}
