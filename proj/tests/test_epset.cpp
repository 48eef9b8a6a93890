#include "doctest.h"

#include <random>

#include "generators.hpp"
#include "ixm/epset.hpp"
#include "ixm/error.hpp"

using ixm::EPSet;
using ixm::Int;

namespace {

  using gen::random_set;

  bool agree_on(EPSet const& s, Int window, auto pred) {
    for (Int x = 0; x <= window; ++x) {
      if (s.contains(x) != pred(x)) {
        return false;
      }
    }
    return true;
  }

  EPSet evens() {
    return EPSet::residue_class(0, 2);
  }
  EPSet odds() {
    return EPSet::residue_class(1, 2);
  }

}  // namespace

TEST_CASE("boolean examples") {
  CHECK((evens() | odds()) == EPSet::naturals());
  CHECK((evens() & EPSet::residue_class(0, 3)) == EPSet::residue_class(0, 6));
  CHECK(EPSet::naturals().complement() == EPSet::empty());
  CHECK(ixm::ep_boolean(ixm::BoolOp::complement, EPSet::naturals()).is_empty());
  auto e = evens();
  CHECK(ixm::ep_boolean(ixm::BoolOp::difference, EPSet::naturals(), &e) == odds());
}

TEST_CASE("cardinality") {
  CHECK(EPSet::empty().card() == ixm::Card::fin(0));
  CHECK(evens().card() == ixm::Card::aleph0());
  auto s = EPSet::from_parts(3, 1, {}, {0, 1, 2});
  CHECK(s.card() == ixm::Card::fin(3));
  CHECK(s == EPSet::first(3));
}

TEST_CASE("empty and naturals representation") {
  CHECK(EPSet::empty().threshold() == 0);
  CHECK(EPSet::empty().residues().empty());
  CHECK(EPSet::empty().str() == "ep N=0 m=1 R={} L={}");
  CHECK(EPSet::naturals().str() == "ep N=0 m=1 R={0} L={}");
}

TEST_CASE("decompose examples") {
  auto d = evens().decompose();
  REQUIRE(d.progressions.size() == 1);
  CHECK(d.progressions[0] == ixm::Progression{0, 2, 0});
  CHECK(d.finite.empty());

  d = (EPSet::naturals() - EPSet::singleton(0)).decompose();
  REQUIRE(d.progressions.size() == 1);
  CHECK(d.progressions[0] == ixm::Progression{0, 1, 1});

  auto s = EPSet::singleton(1) | EPSet::progression(6, 3);
  d      = s.decompose();
  REQUIRE(d.progressions.size() == 1);
  CHECK(d.progressions[0] == ixm::Progression{0, 3, 2});
  CHECK(d.finite == std::vector<Int>{1});
  CHECK(agree_on(s, 100, [](Int x) { return x == 1 || (x >= 6 && x % 3 == 0); }));
}

TEST_CASE("moiety") {
  CHECK(evens().is_moiety());
  CHECK_FALSE(EPSet::naturals().is_moiety());
  CHECK_FALSE(EPSet::singleton(5).is_moiety());
  CHECK_FALSE((EPSet::naturals() - EPSet::singleton(3)).is_moiety());
}

TEST_CASE("text format") {
  auto s = EPSet::parse("ep N=7 m=3 R={0} L={1,6}");
  CHECK(s.str() == "ep N=4 m=3 R={0} L={1}");
  CHECK(EPSet::parse(s.str()) == s);
  CHECK(EPSet::parse("ep N=0 m=6 R={0,2,4} L={}") == evens());
  CHECK_THROWS_AS(EPSet::parse("ep N=2 m=3 R={3} L={}"), ixm::ParseError);
  CHECK_THROWS_AS(EPSet::parse("ep N=2 m=3 R={} L={2}"), ixm::ParseError);
  CHECK_THROWS_AS(EPSet::parse("ep N=2 m=0 R={} L={}"), ixm::ParseError);
  CHECK_THROWS_AS(EPSet::parse("ep N=2 m=1 R={} L={} x"), ixm::ParseError);
}

TEST_CASE("random boolean operations agree pointwise") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 10000; ++i) {
    EPSet a = random_set(rng);
    EPSet b = random_set(rng);
    Int   w = ixm::comparison_window(a, b);
    // Oracle: raw membership straight from the definitions.
    REQUIRE(agree_on(a | b, w, [&](Int x) { return a.contains(x) || b.contains(x); }));
    REQUIRE(agree_on(a & b, w, [&](Int x) { return a.contains(x) && b.contains(x); }));
    REQUIRE(agree_on(a - b, w, [&](Int x) { return a.contains(x) && !b.contains(x); }));
    REQUIRE(agree_on(a.complement(), w, [&](Int x) { return !a.contains(x); }));
  }
}

TEST_CASE("canonical form is extensional") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 3000; ++i) {
    EPSet a = random_set(rng);
    EPSet b = random_set(rng);
    Int   w = ixm::comparison_window(a, b);
    bool  ext = agree_on(a, w, [&](Int x) { return b.contains(x); });
    REQUIRE(ext == (a == b));
    // idempotent normalisation
    EPSet again = EPSet::from_parts(a.threshold(), a.period(), a.residues(), a.low());
    REQUIRE(again == a);
    REQUIRE(EPSet::parse(a.str()) == a);
    // a multiple of the period is never minimal unless it equals it
    EPSet padded = EPSet::from_predicate(a.threshold() + 5, a.period() * 3,
                                         [&](Int x) { return a.contains(x); });
    REQUIRE(padded == a);
  }
}

TEST_CASE("De Morgan and distributivity") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 2000; ++i) {
    EPSet a = random_set(rng);
    EPSet b = random_set(rng);
    EPSet c = random_set(rng);
    REQUIRE((a | b).complement() == (a.complement() & b.complement()));
    REQUIRE((a & b).complement() == (a.complement() | b.complement()));
    REQUIRE((a & (b | c)) == ((a & b) | (a & c)));
    REQUIRE((a | (b & c)) == ((a | b) & (a | c)));
  }
}

TEST_CASE("decomposition covers the set exactly") {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 2000; ++i) {
    EPSet a = random_set(rng);
    auto  d = a.decompose();
    Int   w = ixm::comparison_window(a, a);
    REQUIRE(agree_on(a, w, [&](Int x) {
      int hits = 0;
      for (Int f : d.finite) {
        hits += f == x;
      }
      for (auto const& p : d.progressions) {
        hits += p.contains(x);
      }
      REQUIRE(hits <= 1);
      return hits == 1;
    }));
  }
}

TEST_CASE("split into infinite parts") {
  std::mt19937_64 rng(15);
  for (int i = 0; i < 500; ++i) {
    EPSet a = random_set(rng);
    if (a.is_finite()) {
      CHECK_THROWS_AS(a.split(2), ixm::PreconditionError);
      continue;
    }
    for (int k : {2, 3}) {
      auto  parts = a.split(k);
      EPSet all;
      for (std::size_t j = 0; j < parts.size(); ++j) {
        REQUIRE_FALSE(parts[j].is_finite());
        REQUIRE(parts[j].disjoint_from(all));
        all = all | parts[j];
      }
      REQUIRE(all == a);
    }
  }
}

TEST_CASE("first elements and min") {
  auto s = EPSet::singleton(1) | EPSet::progression(6, 3);
  CHECK(s.min() == 1);
  CHECK(s.first_elements(4) == std::vector<Int>{1, 6, 9, 12});
  CHECK(s.elements_below(10) == std::vector<Int>{1, 6, 9});
  CHECK_THROWS_AS(EPSet::empty().min(), ixm::PreconditionError);
}
