#include <doctest.h>

#include <algorithm>
#include <random>

#include "support.hpp"

using namespace biortho;
using namespace biortho::testing;

TEST_CASE("single centered Mexican hat") {
  const Gridd g = example_grid();
  const std::vector<double> centers = {0.0};
  const Dictionaryd d = mexican_hat_dictionary(g, centers);
  REQUIRE(d.size() == 1);
  CHECK(std::abs(norm_sq(d.signal(0)) - 1.0) <= 1e-10);
  Index argmax = 0;
  d.column(0).maxCoeff(&argmax);
  CHECK(std::abs(g.abscissa(argmax)) < 1e-12);
  CHECK(d.label(0) == "mexhat(center=0)");
}

TEST_CASE("integer centers -6..6 give a symmetric unit-diagonal Gram matrix") {
  const Gridd g = example_grid();
  std::vector<double> centers;
  for (int c = -6; c <= 6; ++c) centers.push_back(c);
  const Dictionaryd d = mexican_hat_dictionary(g, centers);
  REQUIRE(d.size() == 13);
  for (Index n = 0; n < d.size(); ++n) {
    for (Index m = 0; m < d.size(); ++m) {
      const double gnm = inner(d.signal(n), d.signal(m));
      CHECK(gnm == inner(d.signal(m), d.signal(n)));
      if (n == m) CHECK(std::abs(gnm - 1.0) <= 1e-10);
    }
  }
}

TEST_CASE("duplicate centers are rejected downstream as dependent") {
  const std::vector<double> centers = {0.0, 0.0};
  const Dictionaryd d = mexican_hat_dictionary(example_grid(), centers);
  CHECK(d.size() == 2);
  CHECK_THROWS_AS(biorthogonalize(d), LinearlyDependent);
}

TEST_CASE("atom far outside the interval is degenerate") {
  const std::vector<double> centers = {0.0, 1000.0};
  CHECK_THROWS_AS(mexican_hat_dictionary(example_grid(), centers), DegenerateAtom);
  CHECK_THROWS_AS(mexican_hat_dictionary(example_grid(), std::vector<double>{}), InvalidArgument);
}

TEST_CASE("example dictionary layout") {
  const Dictionaryd d = paper_example_dictionary(example_grid());
  REQUIRE(d.size() == 13);
  for (Index n = 0; n < d.size(); ++n) {
    CHECK(d.id(n) == AtomId{n + 1});
    CHECK(std::abs(norm_sq(d.signal(n)) - 1.0) <= 1e-10);
  }
  CHECK(d.label(0) == "mexhat(center=0)");
  CHECK(d.label(11) == "mexhat(center=6)");
  CHECK(d.label(12) == "mexhat(center=-6)");

  const double overlap = inner(d.signal(0), d.signal(1));
  CHECK(overlap > 0.1);

  // Mirror pairs are images of each other under t -> -t.
  const VectorX<double> flipped = d.column(2).reverse();
  CHECK((flipped - d.column(1)).cwiseAbs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(paper_example_dictionary(Gridd(-3.0, 4.0, 701)), InvalidArgument);
}

TEST_CASE("example Gram matrix is positive definite") {
  const Dictionaryd d = paper_example_dictionary(example_grid());
  const GramSystem<double> sys = gram_system(d);
  CHECK(sys.condition_estimate > 1.0);
  CHECK(std::isfinite(sys.condition_estimate));
  CHECK((sys.gram - sys.gram.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("remove_atom") {
  const Dictionaryd d = paper_example_dictionary(example_grid());
  const AtomId minus6 = id_of_center(d, -6.0);
  const Dictionaryd r = remove_atom(d, minus6);
  CHECK(r.size() == 12);
  for (Index n = 0; n < r.size(); ++n) CHECK(r.id(n) == d.id(n));
  CHECK_FALSE(r.contains(minus6));

  CHECK_THROWS_AS(remove_atom(d, AtomId{99}), UnknownAtom);
  CHECK_THROWS_AS(remove_atom(r, minus6), UnknownAtom);

  const std::vector<double> c0 = {0.0};
  const Dictionaryd single = mexican_hat_dictionary(example_grid(), c0);
  CHECK_THROWS_AS(remove_atom(single, AtomId{1}), LastAtom);
}

TEST_CASE("removals never reindex ids") {
  std::mt19937_64 rng(2024);
  const Dictionaryd d = paper_example_dictionary(example_grid());
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<AtomId> order(d.ids().begin(), d.ids().end());
    std::shuffle(order.begin(), order.end(), rng);
    Dictionaryd cur = d;
    for (std::size_t s = 0; s + 1 < order.size(); ++s) {
      cur = remove_atom(cur, order[s]);
      for (Index n = 0; n < cur.size(); ++n) {
        const Index orig = d.require_index(cur.id(n));
        CHECK(cur.column(n) == d.column(orig));
        CHECK(cur.label(n) == d.label(orig));
      }
      // Survivors keep their relative order.
      for (Index n = 1; n < cur.size(); ++n) CHECK(d.require_index(cur.id(n - 1)) < d.require_index(cur.id(n)));
    }
  }
}

TEST_CASE("dictionary construction checks") {
  const Gridd g(0.0, 1.0, 5);
  const Signald s = Signald::sample(g, [](double t) { return 1 + t; });
  CHECK_THROWS_AS(Dictionaryd(g, {{AtomId{1}, s, "a"}, {AtomId{1}, s, "b"}}), DuplicateAtom);
  CHECK_THROWS_AS(Dictionaryd(g, {{AtomId{1}, s, "a,b"}}), InvalidArgument);
  CHECK_THROWS_AS(Dictionaryd(g, {}), InvalidArgument);
  const Signald other = Signald::sample(Gridd(0.0, 2.0, 5), [](double t) { return t; });
  CHECK_THROWS_AS(Dictionaryd(g, {{AtomId{1}, other, "a"}}), GridMismatch);

  const Dictionaryd d(g, {{AtomId{4}, s, "a"}});
  CHECK(d.next_id() == AtomId{5});
  CHECK_THROWS_AS(d.with_atom({AtomId{4}, s, "again"}), DuplicateAtom);
}
