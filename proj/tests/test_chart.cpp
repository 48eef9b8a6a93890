#include "doctest.h"

#include <random>

#include "generators.hpp"
#include "ixm/chart.hpp"
#include "ixm/error.hpp"

using ixm::Card;
using ixm::Chart;
using ixm::EPSet;
using ixm::Int;
using ixm::Piece;

namespace {

  using gen::random_chart;

  // Oracle cardinality of a set given by membership: count on a short and a
  // long window; a stable count is the finite size.
  Card brute_card(auto member) {
    Int a = 0, b = 0;
    for (Int x = 0; x < 4000; ++x) {
      if (member(x)) {
        (x < 2000 ? a : b) += 1;
      }
    }
    return b == 0 ? Card::fin(static_cast<std::uint64_t>(a)) : Card::aleph0();
  }

  Card brute_collapse(Chart const& f) {
    return brute_card([&](Int x) { return !f.apply(x); });
  }
  Card brute_defect(Chart const& f) {
    return brute_card([&](Int y) { return !f.preimage(y); });
  }
  Card brute_rank(Chart const& f) {
    return brute_card([&](Int y) { return f.preimage(y).has_value(); });
  }

  EPSet evens() {
    return EPSet::residue_class(0, 2);
  }
  EPSet odds() {
    return EPSet::residue_class(1, 2);
  }

}  // namespace

TEST_CASE("compose examples") {
  CHECK(ixm::compose(Chart::affine(2, 0), Chart::affine(2, 0)) == Chart::affine(4, 0));
  CHECK(ixm::compose(Chart::affine(2, 0), Chart::identity(odds())).is_empty());
  CHECK(ixm::compose(Chart::from_pairs({{0, 3}}), Chart::from_pairs({{3, 1}}))
        == Chart::from_pairs({{0, 1}}));
}

TEST_CASE("invert examples") {
  auto inv = ixm::invert(Chart::affine(2, 0));
  CHECK(inv == Chart::from_piece({0, 2, 0, 1}));
  CHECK(inv.str() == "chart { piece (0 mod 2 from 0) -> (0 mod 1 from 0); }");
  CHECK(ixm::invert(Chart::identity(evens())) == Chart::identity(evens()));
  CHECK(ixm::invert(Chart::from_pairs({{0, 1}, {1, 2}})) == Chart::from_pairs({{1, 0}, {2, 1}}));
}

TEST_CASE("stats examples") {
  auto s = ixm::stats(Chart::affine(2, 0));
  CHECK(s.rank == Card::aleph0());
  CHECK(s.collapse == Card::fin(0));
  CHECK(s.defect == Card::aleph0());
  CHECK(s.im == evens());
  CHECK_FALSE(s.support.has_value());

  s = ixm::stats(Chart::identity_on_naturals());
  CHECK(s.rank == Card::aleph0());
  CHECK(s.collapse == Card::fin(0));
  CHECK(s.defect == Card::fin(0));
  REQUIRE(s.support.has_value());
  CHECK(s.support->is_empty());

  s = ixm::stats(Chart::affine(1, 1));
  CHECK(s.collapse == Card::fin(0));
  CHECK(s.defect == Card::fin(1));

  s = ixm::stats(Chart());
  CHECK(s.rank == Card::fin(0));
  CHECK(s.collapse == Card::aleph0());
  CHECK(s.defect == Card::aleph0());
}

TEST_CASE("support of permutations") {
  // swap 2k <-> 2k+1 for k >= 2
  auto swap = Chart::make({{0, 0}, {1, 1}, {2, 2}, {3, 3}}, {{4, 2, 5, 2}, {5, 2, 4, 2}});
  CHECK(ixm::support(swap) == (EPSet::naturals() - EPSet::first(4)));
  auto p = Chart::make({}, {{0, 2, 0, 2}, {1, 4, 3, 4}, {3, 4, 1, 4}});
  CHECK(ixm::support(p) == EPSet::residue_class(1, 2));
  // x -> 2x - 10 on evens from 10 fixes 10, past every other exception
  auto late = ixm::extend_to_permutation(Chart::from_piece({10, 2, 10, 4}), EPSet::naturals());
  auto sup  = ixm::support(late);
  CHECK_FALSE(sup.contains(10));
  for (Int x = 0; x < 500; ++x) {
    CHECK(sup.contains(x) == (late.apply(x) != x));
  }
  CHECK_THROWS_AS(ixm::support(Chart::affine(2, 0)), ixm::PreconditionError);
}

TEST_CASE("image of set") {
  CHECK(ixm::image_of_set(Chart::affine(2, 0), EPSet::residue_class(0, 3))
        == EPSet::residue_class(0, 6));
  CHECK(ixm::image_of_set(Chart::identity(evens()), odds()).is_empty());
  CHECK(ixm::image_of_set(Chart::affine(3, 1), EPSet()).is_empty());
}

TEST_CASE("text format and injectivity diagnostics") {
  auto f = Chart::parse("chart { pair 0 -> 3; piece (1 mod 2 from 0) -> (0 mod 2 from 1); }");
  CHECK(f.apply(0) == 3);
  CHECK(f.apply(5) == 6);
  CHECK(Chart::parse(f.str()) == f);
  CHECK(Chart::parse("chart { }").is_empty());
  CHECK(Chart().str() == "chart { }");
  try {
    Chart::parse("chart { pair 0 -> 3; pair 1 -> 3; }");
    FAIL("expected a parse error");
  } catch (ixm::ParseError const& e) {
    CHECK(std::string(e.what()).find("target point 3") != std::string::npos);
  }
  try {
    Chart::parse("chart { piece (0 mod 2 from 0) -> (0 mod 1 from 0); pair 4 -> 100; }");
    FAIL("expected a parse error");
  } catch (ixm::ParseError const& e) {
    CHECK(std::string(e.what()).find("source point 4") != std::string::npos);
  }
  CHECK_THROWS_AS(
      Chart::parse("chart { piece (0 mod 2 from 0) -> (0 mod 4 from 0); piece (0 mod 3 from 0) -> (1 mod 2 from 0); }"),
      ixm::ParseError);
  CHECK_THROWS_AS(Chart::parse("chart { pair 1 -> }"), ixm::ParseError);
}

TEST_CASE("canonical form absorbs pairs and merges pieces") {
  // identity written as pairs plus two half pieces
  auto f = Chart::make({{0, 0}, {1, 1}}, {{2, 2, 2, 2}, {3, 2, 3, 2}});
  CHECK(f == Chart::identity_on_naturals());
  CHECK(f.pairs().empty());
  CHECK(f.pieces().size() == 1);
}

TEST_CASE("random compose agrees pointwise and is associative") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 2000; ++i) {
    Chart f = random_chart(rng), g = random_chart(rng), h = random_chart(rng);
    Chart fg = ixm::compose(f, g);
    for (Int x = 0; x < 300; ++x) {
      std::optional<Int> want;
      if (auto y = f.apply(x)) {
        want = g.apply(*y);
      }
      REQUIRE(fg.apply(x) == want);
    }
    REQUIRE(ixm::compose(fg, h) == ixm::compose(f, ixm::compose(g, h)));
  }
}

TEST_CASE("inverse semigroup laws") {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 2000; ++i) {
    Chart f  = random_chart(rng);
    Chart fi = ixm::invert(f);
    REQUIRE(ixm::invert(fi) == f);
    REQUIRE(ixm::compose(ixm::compose(f, fi), f) == f);
    REQUIRE(ixm::compose(ixm::compose(fi, f), fi) == fi);
    REQUIRE(ixm::compose(fi, f) == Chart::identity(f.im()));
    REQUIRE(fi.dom() == f.im());
    Chart e = ixm::compose(f, fi);
    REQUIRE(e.is_idempotent());
    REQUIRE(e == Chart::identity(f.dom()));
  }
}

TEST_CASE("stats agree with brute-force counts") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 300; ++i) {
    Chart f = random_chart(rng);
    auto  s = ixm::stats(f);
    REQUIRE(s.rank == brute_rank(f));
    REQUIRE(s.collapse == brute_collapse(f));
    REQUIRE(s.defect == brute_defect(f));
    for (Int x = 0; x < 200; ++x) {
      REQUIRE(s.dom.contains(x) == f.apply(x).has_value());
      REQUIRE(s.im.contains(x) == f.preimage(x).has_value());
    }
  }
}

TEST_CASE("rank, collapse and defect relations under composition") {
  std::mt19937_64 rng(24);
  for (int i = 0; i < 2000; ++i) {
    Chart f = random_chart(rng), g = random_chart(rng);
    Chart fg = ixm::compose(f, g);
    auto  sf = ixm::stats(f), sg = ixm::stats(g), sfg = ixm::stats(fg);
    REQUIRE(sfg.rank <= std::min(sf.rank, sg.rank));
    REQUIRE(sf.collapse <= sfg.collapse);
    REQUIRE(sfg.collapse <= sf.collapse + sg.collapse);
    REQUIRE(sg.defect <= sfg.defect);
    REQUIRE(sfg.defect <= sf.defect + sg.defect);
    if (sf.defect == Card::fin(0)) {
      REQUIRE(sfg.collapse == sf.collapse + sg.collapse);
    }
    if (sg.collapse == Card::fin(0)) {
      REQUIRE(sfg.defect == sf.defect + sg.defect);
    }
  }
}

TEST_CASE("image of a union") {
  std::mt19937_64 rng(25);
  for (int i = 0; i < 500; ++i) {
    Chart f = random_chart(rng);
    EPSet a = EPSet::residue_class(static_cast<Int>(rng() % 3), 3) | EPSet::singleton(rng() % 10);
    EPSet b = EPSet::progression(static_cast<Int>(rng() % 7), 1 + static_cast<Int>(rng() % 5));
    REQUIRE(ixm::image_of_set(f, a | b) == (ixm::image_of_set(f, a) | ixm::image_of_set(f, b)));
  }
}

TEST_CASE("bijection between equinumerous sets") {
  auto f = ixm::bijection_between(evens(), odds());
  CHECK(f == Chart::from_piece({0, 2, 1, 2}));
  auto g = ixm::bijection_between(EPSet::finite({1, 2, 3}), EPSet::finite({7, 8, 9}));
  CHECK(g == Chart::from_pairs({{1, 7}, {2, 8}, {3, 9}}));
  CHECK_THROWS_AS(ixm::bijection_between(EPSet::naturals(), EPSet::first(3)),
                  ixm::PreconditionError);

  std::vector<EPSet> sets{EPSet::naturals(), evens(), EPSet::residue_class(2, 5) | EPSet::finite({0, 1, 3}),
                          EPSet::progression(7, 3) | EPSet::residue_class(1, 4),
                          EPSet::naturals() - EPSet::first(9), EPSet::residue_class(5, 12)};
  for (auto const& a : sets) {
    for (auto const& b : sets) {
      auto h = ixm::bijection_between(a, b);
      CHECK(h.dom() == a);
      CHECK(h.im() == b);
    }
  }
}

TEST_CASE("extend to permutation") {
  CHECK(ixm::extend_to_permutation(Chart(), EPSet::naturals()).is_permutation());
  Chart p = Chart::from_piece({0, 4, 2, 4});
  Chart q = ixm::extend_to_permutation(p, evens());
  CHECK(q.dom() == evens());
  CHECK(q.im() == evens());
  CHECK(ixm::restrict(q, p.dom()) == p);
  CHECK(ixm::extend_to_permutation(Chart::from_pairs({{0, 0}}), EPSet::singleton(0))
        == Chart::from_pairs({{0, 0}}));
  CHECK_THROWS_AS(ixm::extend_to_permutation(Chart::affine(2, 0), EPSet::naturals()),
                  ixm::PreconditionError);
  CHECK_THROWS_AS(ixm::extend_to_permutation(Chart::from_pairs({{1, 1}}), evens()),
                  ixm::PreconditionError);
}

TEST_CASE("sandwich factorization") {
  EPSet y = evens();
  Chart f = Chart::affine(4, 0);
  Chart g = ixm::invert(Chart::affine(4, 2));
  for (Chart h : {Chart::identity_on_naturals(), Chart::affine(2, 0), Chart(),
                  Chart::from_pairs({{0, 5}, {3, 1}}), Chart::identity(odds())}) {
    Chart q = ixm::sandwich_factorize(h, f, g, y);
    CHECK(ixm::compose(ixm::compose(f, q), g) == h);
    CHECK(q.is_permutation());
    CHECK(ixm::restrict(q, odds()) == Chart::identity(odds()));
  }
  CHECK_THROWS_AS(ixm::sandwich_factorize(Chart(), Chart::affine(2, 0), g, y),
                  ixm::PreconditionError);

  std::mt19937_64 rng(26);
  for (int i = 0; i < 300; ++i) {
    Chart h = random_chart(rng);
    Chart q = ixm::sandwich_factorize(h, f, g, y);
    REQUIRE(ixm::compose(ixm::compose(f, q), g) == h);
  }
}
