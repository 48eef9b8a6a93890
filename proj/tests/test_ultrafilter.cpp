#include "doctest.h"

#include <random>

#include "generators.hpp"
#include "ixm/error.hpp"
#include "ixm/ultrafilter.hpp"

using ixm::Chart;
using ixm::EPSet;
using ixm::Int;
using ixm::UFOracle;

namespace {

  using Choices = std::vector<std::pair<Int, Int>>;

  std::vector<Choices> const kTowers = {
      {},
      {{8, 5}, {3, 1}},
      {{25, 7}, {5, 2}},
      {{2, 1}, {9, 4}, {7, 6}},
  };

  // Residue of the tower point by search: the least x < m agreeing with
  // every listed choice at the prime powers dividing m, treating the listed
  // residue as the full p-component.
  Int brute_residue(Choices const& choices, Int m) {
    for (Int x = 0; x < m; ++x) {
      bool ok = true;
      for (Int p = 2; p <= m && ok; ++p) {
        bool prime = true;
        for (Int d = 2; d * d <= p; ++d) {
          prime = prime && p % d != 0;
        }
        if (!prime || m % p != 0) {
          continue;
        }
        Int pe = 1;
        while (m % (pe * p) == 0) {
          pe *= p;
        }
        Int comp = 0, best = 0;
        for (auto const& [q, r] : choices) {
          Int t = q;
          while (t % p == 0) {
            t /= p;
          }
          if (t == 1 && q > best) {
            best = q;
            comp = r;
          }
        }
        ok = x % pe == comp % pe;
      }
      if (ok) {
        return x;
      }
    }
    return -1;
  }

  // S in F iff the tail of S meets the class of the point modulo its period.
  bool brute_contains(Choices const& choices, EPSet const& s) {
    Int m = s.period();
    Int r = brute_residue(choices, m);
    for (Int x = s.threshold(); x < s.threshold() + m; ++x) {
      if (x % m == r) {
        return s.contains(x);
      }
    }
    return false;
  }

  EPSet evens() {
    return EPSet::residue_class(0, 2);
  }

}  // namespace

TEST_CASE("membership examples") {
  UFOracle t0 = UFOracle::tower();
  CHECK(ixm::uf_contains(t0, evens()));
  CHECK_FALSE(ixm::uf_contains(t0, EPSet::residue_class(1, 2)));
  CHECK(ixm::uf_contains(t0, EPSet::residue_class(1, 2).complement()));
  CHECK_FALSE(ixm::uf_contains(t0, EPSet::first(1000)));
  CHECK(ixm::uf_contains(UFOracle::principal(3), EPSet::singleton(3)));
  CHECK_FALSE(ixm::uf_contains(UFOracle::principal(3), EPSet::singleton(4)));
  CHECK(ixm::uf_min(UFOracle::principal(0)) == ixm::Card::fin(1));
  CHECK(ixm::uf_min(t0) == ixm::Card::aleph0());
  CHECK(ixm::uf_min(UFOracle::tower({{8, 5}})) == ixm::Card::aleph0());
}

TEST_CASE("tower construction and text") {
  auto F = UFOracle::tower({{8, 5}, {2, 1}, {3, 2}});
  CHECK(F.residue(8) == 5);
  CHECK(F.residue(16) == 5);
  CHECK(F.residue(3) == 2);
  CHECK(F.residue(5) == 0);
  CHECK(F.str() == "uf tower [2^3=5, 3^1=2]");
  CHECK(UFOracle::parse(F.str()) == F);
  CHECK(UFOracle::parse("uf tower [8=5, 3=2]") == F);
  CHECK(UFOracle::parse("uf tower") == UFOracle::tower());
  CHECK(UFOracle::parse("uf tower [2=0]").is_zero_tower());
  CHECK(UFOracle::parse("uf principal 7") == UFOracle::principal(7));
  CHECK_THROWS_AS(UFOracle::tower({{6, 1}}), ixm::InvalidParameter);
  CHECK_THROWS_AS(UFOracle::tower({{4, 4}}), ixm::InvalidParameter);
  CHECK_THROWS_AS(UFOracle::tower({{4, 1}, {2, 0}}), ixm::InvalidParameter);
  CHECK_THROWS_AS(UFOracle::parse("uf tower [6=1]"), ixm::ParseError);
  CHECK_THROWS_AS(UFOracle::parse("uf somewhere"), ixm::ParseError);
  CHECK_THROWS_AS(UFOracle::parse("uf principal 2 3"), ixm::ParseError);
}

TEST_CASE("tower residues agree with a search oracle and are compatible") {
  for (auto const& c : kTowers) {
    auto F = UFOracle::tower(c);
    for (Int m = 1; m <= 400; ++m) {
      REQUIRE(F.residue(m) == brute_residue(c, m));
      for (Int d = 1; d <= m; ++d) {
        if (m % d == 0) {
          REQUIRE(F.residue(m) % d == F.residue(d));
        }
      }
    }
  }
}

TEST_CASE("ultrafilter and filter axioms on random sets") {
  std::mt19937_64       rng(31);
  std::vector<UFOracle> filters = {UFOracle::principal(0), UFOracle::principal(13)};
  for (auto const& c : kTowers) {
    filters.push_back(UFOracle::tower(c));
  }
  for (auto const& F : filters) {
    CHECK_FALSE(ixm::uf_contains(F, EPSet::empty()));
    CHECK(ixm::uf_contains(F, EPSet::naturals()));
  }
  for (int i = 0; i < 10000; ++i) {
    EPSet a = gen::random_set(rng);
    EPSet b = gen::random_set(rng);
    for (auto const& F : filters) {
      bool in_a = ixm::uf_contains(F, a);
      REQUIRE(in_a != ixm::uf_contains(F, a.complement()));
      if (in_a) {
        REQUIRE(ixm::uf_contains(F, a | b));
        if (ixm::uf_contains(F, b)) {
          REQUIRE(ixm::uf_contains(F, a & b));
        }
      }
      if (!F.is_principal()) {
        REQUIRE_FALSE((a.is_finite() && in_a));
      }
    }
    for (auto const& c : kTowers) {
      REQUIRE(ixm::uf_contains(UFOracle::tower(c), a) == brute_contains(c, a));
    }
  }
}

TEST_CASE("stabiliser examples") {
  UFOracle t0 = UFOracle::tower();
  CHECK(ixm::stabilises_filter(t0, Chart::affine(2, 0)));
  CHECK_FALSE(ixm::stabilises_filter(t0, Chart::affine(1, 1)));
  auto w = ixm::stabiliser_witness(t0, Chart::affine(1, 1));
  REQUIRE(w.has_value());
  CHECK(ixm::uf_contains(t0, *w));
  CHECK_FALSE(ixm::uf_contains(t0, ixm::image_of_set(Chart::affine(1, 1), *w)));
  CHECK(ixm::stabilises_filter(UFOracle::principal(5), Chart::identity_on_naturals()));
  CHECK_FALSE(ixm::stabilises_filter(UFOracle::principal(5), Chart::affine(1, 1)));
  // x -> 2x fixes only the zero point
  CHECK_FALSE(ixm::stabilises_filter(UFOracle::tower({{2, 1}}), Chart::affine(2, 0)));
  // x -> 3x + 2 fixes -1, which is not a tower point
  CHECK_FALSE(ixm::stabilises_filter(t0, Chart::affine(3, 2)));
  // domain not in F
  CHECK_FALSE(ixm::stabilises_filter(t0, Chart::identity(EPSet::residue_class(1, 2))));
}

TEST_CASE("stabiliser decision agrees with sampled sets") {
  std::mt19937_64 rng(32);
  for (auto const& c : kTowers) {
    auto F = UFOracle::tower(c);
    for (int i = 0; i < 500; ++i) {
      Chart f    = gen::random_chart(rng);
      bool  stab = ixm::stabilises_filter(F, f);
      auto  w    = ixm::stabiliser_witness(F, f);
      REQUIRE(stab == !w.has_value());
      if (w) {
        REQUIRE(ixm::uf_contains(F, *w));
        REQUIRE_FALSE(ixm::uf_contains(F, ixm::image_of_set(f, *w)));
      }
      for (int j = 0; j < (c.empty() ? 1000 : 100); ++j) {
        EPSet s = gen::random_set(rng);
        if (stab) {
          REQUIRE(ixm::uf_contains(F, s) == ixm::uf_contains(F, ixm::image_of_set(f, s)));
        }
      }
      if (stab) {
        // basic neighbourhoods of the point go into F
        for (Int j = 1; j <= 12; ++j) {
          Int   k = f.modulus() * j;
          EPSet s = ixm::tower_neighbourhood(F, k);
          REQUIRE(ixm::uf_contains(F, ixm::image_of_set(f, s)));
        }
      }
    }
  }
}

TEST_CASE("forward and backward forms match the stabiliser") {
  std::mt19937_64 rng(33);
  std::vector<UFOracle> filters = {UFOracle::principal(2)};
  for (auto const& c : kTowers) {
    filters.push_back(UFOracle::tower(c));
  }
  for (int i = 0; i < 3000; ++i) {
    Chart f = i % 3 == 0 ? gen::random_permutation(rng) : gen::random_chart(rng);
    for (auto const& F : filters) {
      bool stab = ixm::stabilises_filter(F, f);
      bool dom  = ixm::uf_contains(F, f.dom());
      bool im   = ixm::uf_contains(F, f.im());
      REQUIRE(ixm::maps_filter_forward(F, f) == stab);
      if (im) {
        REQUIRE(ixm::keeps_nonmembers_out(F, f) == stab);
      } else {
        REQUIRE(ixm::keeps_nonmembers_out(F, f));
      }
      if (stab) {
        REQUIRE(dom);
        REQUIRE(im);
      }
      // stabilising is symmetric under inversion
      REQUIRE(ixm::stabilises_filter(F, ixm::invert(f)) == stab);
    }
  }
}

TEST_CASE("permutations fixing a member pointwise stabilise") {
  std::mt19937_64 rng(34);
  for (auto const& c : kTowers) {
    auto F = UFOracle::tower(c);
    for (int i = 0; i < 100; ++i) {
      Int   k     = gen::uni(rng, 1, 12);
      EPSet sigma = ixm::tower_neighbourhood(F, k) | gen::random_set(rng);
      REQUIRE(ixm::uf_contains(F, sigma));
      EPSet rest = sigma.complement();
      Chart move;
      if (rest.is_finite()) {
        auto xs = rest.low();
        std::shuffle(xs.begin(), xs.end(), rng);
        std::vector<std::pair<Int, Int>> pairs;
        for (std::size_t j = 0; j < xs.size(); ++j) {
          pairs.emplace_back(rest.low()[j], xs[j]);
        }
        move = Chart::from_pairs(pairs);
      } else {
        auto parts = rest.split(2);
        move       = ixm::disjoint_union(ixm::bijection_between(parts[0], parts[1]),
                                         ixm::bijection_between(parts[1], parts[0]));
      }
      Chart f = ixm::disjoint_union(Chart::identity(sigma), move);
      REQUIRE(f.is_permutation());
      REQUIRE(ixm::stabilises_filter(F, f));
    }
  }
}
