#include "doctest.h"

#include <random>
#include <set>

#include "ixm/error.hpp"
#include "ixm/finite_model.hpp"

using ixm::FMap;
using ixm::FSet;

namespace {

  // sum_k C(n,k)^2 k!
  std::size_t count_charts(int n) {
    std::size_t total = 0;
    for (int k = 0; k <= n; ++k) {
      std::size_t c = 1;
      for (int i = 0; i < k; ++i) {
        c = c * static_cast<std::size_t>(n - i) / static_cast<std::size_t>(i + 1);
      }
      std::size_t f = 1;
      for (int i = 2; i <= k; ++i) {
        f *= static_cast<std::size_t>(i);
      }
      total += c * c * f;
    }
    return total;
  }

  FMap random_chart(std::mt19937_64& rng, int n) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      perm[static_cast<std::size_t>(i)] = i;
    }
    std::shuffle(perm.begin(), perm.end(), rng);
    for (auto& y : perm) {
      if (rng() % 3 == 0) {
        y = -1;
      }
    }
    return FMap::from(perm);
  }

  // Naive fixpoint: square the set until nothing new appears.
  FSet naive_closure(std::vector<FMap> gens) {
    std::set<std::uint32_t> seen;
    std::vector<FMap>       all;
    for (auto const& g : gens) {
      if (seen.insert(g.code()).second) {
        all.push_back(g);
      }
    }
    bool grew = true;
    while (grew) {
      grew      = false;
      auto copy = all;
      for (auto const& a : copy) {
        for (auto const& b : copy) {
          FMap p = ixm::fcompose(a, b);
          if (seen.insert(p.code()).second) {
            all.push_back(p);
            grew = true;
          }
        }
      }
    }
    return FSet::from(all);
  }

  FSet all_of(int n) {
    return FSet::from(ixm::all_charts(n));
  }

}  // namespace

TEST_CASE("universe sizes") {
  for (int n = 0; n <= 6; ++n) {
    CHECK(ixm::all_charts(n).size() == count_charts(n));
  }
  CHECK(count_charts(3) == 34);
  CHECK(ixm::all_perms(4).size() == 24);
  CHECK_THROWS_AS(ixm::all_charts(8), ixm::ResourceError);
}

TEST_CASE("text format") {
  auto f = FMap::parse("[1,_,0]");
  CHECK(f.n == 3);
  CHECK(f(0) == 1);
  CHECK(f(1) == -1);
  CHECK(f.str() == "[1,_,0]");
  CHECK(FMap::parse(" [ ] ").n == 0);
  CHECK_THROWS_AS(FMap::parse("[3,_,0]"), ixm::ParseError);
  CHECK_THROWS_AS(FMap::parse("[1,0"), ixm::ParseError);
  CHECK_THROWS_AS(FMap::parse("[1,0] x"), ixm::ParseError);
  for (auto const& g : ixm::all_charts(3)) {
    CHECK(FMap::parse(g.str()) == g);
    CHECK(FMap::from_code(3, g.code()) == g);
  }
}

TEST_CASE("composition reads left to right") {
  auto a = FMap::from({1, -1, 0});
  auto b = FMap::from({2, 0, -1});
  auto c = ixm::fcompose(a, b);
  CHECK(c == FMap::from({0, -1, 2}));
  CHECK(ixm::fcompose(a, ixm::finverse(a)) == FMap::from({0, -1, 2}));
  CHECK_THROWS_AS(ixm::finverse(FMap::from({0, 0})), ixm::PreconditionError);
}

TEST_CASE("minimal extension examples") {
  CHECK(ixm::minimal_extension(FMap::from({1, -1})) == FMap::from({1, 1}));
  CHECK(ixm::minimal_extension(FMap::from({-1, 0, -1})) == FMap::from({0, 0, 0}));
  auto p = FMap::from({2, 0, 1});
  CHECK(ixm::minimal_extension(p) == p);
  CHECK_THROWS_AS(ixm::minimal_extension(FMap::empty(3)), ixm::PreconditionError);
}

TEST_CASE("minimal extension preserves rank, collapse and defect") {
  for (int n = 1; n <= 5; ++n) {
    for (auto const& u : ixm::all_charts(n)) {
      if (u.dom_mask() == 0) {
        continue;
      }
      auto v = ixm::minimal_extension(u);
      REQUIRE(v.is_total());
      REQUIRE(v.im_mask() == u.im_mask());
      for (int i = 0; i < n; ++i) {
        if (u.defined(i)) {
          REQUIRE(v(i) == u(i));
        }
      }
      REQUIRE(v.rank() == u.rank());
      // collapse of v: complement of a transversal, n - rank; of u: n - |dom u|
      REQUIRE(n - v.rank() == n - std::popcount(u.dom_mask()));
      REQUIRE(n - std::popcount(v.im_mask()) == n - std::popcount(u.im_mask()));
      REQUIRE(ixm::is_transversal(v, u.dom_mask()));
      REQUIRE((u.is_total() == (u == v)));
      REQUIRE((u.is_total() == v.is_injective()));
    }
  }
}

TEST_CASE("mutt examples") {
  auto id = FMap::identity(3);
  auto r  = ixm::mutt_products({{id, 0b111}}, 4);
  REQUIRE(r.size() == 1);
  CHECK(r[0] == id);

  auto v = FMap::from({1, 1, 2});  // im = {1,2}, transversal {0,2} misses 1
  r      = ixm::mutt_products({{v, 0b101}}, 4);
  REQUIRE(r.size() == 1);
  CHECK(r[0] == v);

  CHECK_THROWS_AS(ixm::mutt_products({{v, 0b011}}, 2), ixm::PreconditionError);
  CHECK_THROWS_AS(ixm::mutt_products({{v, 0b111}}, 2), ixm::PreconditionError);
}

TEST_CASE("mutt products agree with word enumeration") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    int                          n = 4;
    std::vector<ixm::MuttFactor> family;
    while (family.size() < 3) {
      auto u = random_chart(rng, n);
      if (u.dom_mask() != 0) {
        family.push_back({ixm::minimal_extension(u), u.dom_mask()});
      }
    }
    int const                maxlen = 3;
    std::set<std::uint32_t> expect;
    // every word over {0,1,2} of length 1..3
    for (int len = 1; len <= maxlen; ++len) {
      int words = 1;
      for (int i = 0; i < len; ++i) {
        words *= 3;
      }
      for (int w = 0; w < words; ++w) {
        int  rest = w;
        FMap p;
        bool ok = true;
        for (int i = 0; i < len; ++i) {
          auto const& f = family[static_cast<std::size_t>(rest % 3)];
          rest /= 3;
          if (i == 0) {
            p = f.v;
          } else if ((p.im_mask() & ~f.lambda) != 0) {
            ok = false;
            break;
          } else {
            p = ixm::fcompose(p, f.v);
          }
        }
        if (ok) {
          expect.insert(p.code());
        }
      }
    }
    std::set<std::uint32_t> got;
    for (auto const& p : ixm::mutt_products(family, maxlen)) {
      got.insert(p.code());
    }
    REQUIRE(got == expect);
  }
}

TEST_CASE("closure examples") {
  CHECK(ixm::closure({FMap::identity(3)}).size() == 1);
  auto t = FMap::from({1, 0, 2});
  auto c = FMap::from({1, 2, 0});
  CHECK(ixm::closure({t, c}) == FSet::from(ixm::all_perms(3)));
  auto gens = ixm::all_perms(3);
  gens.push_back(FMap::from({0, 1, -1}));
  CHECK(ixm::closure(gens).size() == 34);
  CHECK(ixm::closure({}).size() == 0);
  CHECK_THROWS_AS(ixm::closure({FMap::identity(8)}), ixm::ResourceError);
}

TEST_CASE("closure kernels agree with a naive fixpoint") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 150; ++trial) {
    int               n = 2 + static_cast<int>(rng() % 3);
    std::vector<FMap> gens;
    int               k = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < k; ++i) {
      gens.push_back(random_chart(rng, n));
    }
    auto oracle = naive_closure(gens);
    REQUIRE(ixm::closure_serial(gens) == oracle);
    REQUIRE(ixm::closure(gens) == oracle);
  }
  // a larger universe for the two kernels only
  std::vector<FMap> gens = ixm::all_perms(6);
  gens.resize(4);
  gens.push_back(FMap::from({1, 2, 3, 4, 5, -1}));
  gens.push_back(FMap::from({1, 0, 2, 3, 4, 5}));
  gens.push_back(FMap::from({1, 2, 3, 4, 5, 0}));
  CHECK(ixm::closure(gens) == ixm::closure_serial(gens));
  CHECK(ixm::closure(gens).size() == count_charts(6));
}

TEST_CASE("finite ideal is an ideal") {
  for (int n = 1; n <= 3; ++n) {
    auto all = ixm::all_charts(n);
    for (auto const& f : all) {
      for (auto const& g : all) {
        if (ixm::in_finite_ideal(g)) {
          REQUIRE(ixm::in_finite_ideal(ixm::fcompose(f, g)));
          REQUIRE(ixm::in_finite_ideal(ixm::fcompose(g, f)));
        }
      }
    }
  }
}

TEST_CASE("largest inverse subsemigroup inside M") {
  std::mt19937_64 rng(23);
  auto const      all = ixm::all_charts(3);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<FMap> gens;
    for (int i = 0; i < 3; ++i) {
      gens.push_back(all[rng() % all.size()]);
    }
    FSet m    = ixm::closure(gens);
    FSet core = ixm::fset_intersection(m, ixm::fset_inverse(m));
    if (!core.elems.empty()) {
      REQUIRE(ixm::closure(core.elems) == core);
    }
    REQUIRE(ixm::fset_inverse(core) == core);
    // every inverse-closed subsemigroup generated inside M lies in the core
    for (int j = 0; j < 40; ++j) {
      std::vector<FMap> sub;
      for (auto const& f : m.elems) {
        if (rng() % 4 == 0) {
          sub.push_back(f);
          sub.push_back(ixm::finverse(f));
        }
      }
      if (sub.empty()) {
        continue;
      }
      FSet v = ixm::closure(sub);
      if (ixm::fset_subset(v, m)) {
        REQUIRE(ixm::fset_subset(v, core));
      }
    }
  }
}

TEST_CASE("is_maximal") {
  std::vector<FMap> low;
  for (auto const& f : ixm::all_charts(3)) {
    if (f.is_permutation() || f.rank() <= 1) {
      low.push_back(f);
    }
  }
  // Adjoining any rank-2 chart to Sym(3) generates I_3.
  CHECK(ixm::is_maximal(FSet::from(low), 3));

  auto most = ixm::all_charts(3);
  most.erase(std::find(most.begin(), most.end(), FMap::from({1, 0, 2})));
  CHECK_THROWS_AS(ixm::is_maximal(FSet::from(most), 3), ixm::PreconditionError);
  CHECK_THROWS_AS(ixm::is_maximal(all_of(3), 3), ixm::PreconditionError);

  // Sym(3) alone is closed and proper but not maximal.
  CHECK_FALSE(ixm::is_maximal(FSet::from(ixm::all_perms(3)), 3));
}

TEST_CASE("subgroups of small symmetric groups") {
  CHECK(ixm::all_subgroups(3).size() == 6);
  CHECK(ixm::all_subgroups(4).size() == 30);
  CHECK(ixm::maximal_subgroups(2).size() == 1);
  CHECK(ixm::maximal_subgroups(3).size() == 4);
  auto m4 = ixm::maximal_subgroups(4);
  CHECK(m4.size() == 8);  // A4, three D4, four S3
  std::multiset<std::size_t> orders;
  for (auto const& g : m4) {
    orders.insert(g.size());
  }
  CHECK(orders == std::multiset<std::size_t>{6, 6, 6, 6, 8, 8, 8, 12});
}

TEST_CASE("predicted maximals") {
  auto p2 = ixm::predicted_finite_maximals(2);
  REQUIRE(p2.size() == 2);
  CHECK(p2[0].set == FSet::from({FMap::identity(2), FMap::from({1, 0}), FMap::empty(2)}));
  CHECK(ixm::predicted_finite_maximals(3).size() == 5);
  CHECK_THROWS_AS(ixm::predicted_finite_maximals(1), ixm::ResourceError);
  CHECK_THROWS_AS(ixm::predicted_finite_maximals(5), ixm::ResourceError);
  for (int n = 2; n <= 4; ++n) {
    for (auto const& m : ixm::predicted_finite_maximals(n)) {
      CHECK_MESSAGE(ixm::is_maximal(m.set, n), m.name);
    }
  }
}

TEST_CASE("completeness at n = 2 and n = 3") {
  auto sorted_sets = [](std::vector<ixm::NamedFSet> const& named) {
    std::vector<FSet> v;
    for (auto const& m : named) {
      v.push_back(m.set);
    }
    std::sort(v.begin(), v.end(), [](FSet const& a, FSet const& b) { return a.elems < b.elems; });
    return v;
  };
  auto r2 = ixm::completeness_search(2);
  CHECK_FALSE(r2.partial);
  CHECK(r2.maximal == sorted_sets(ixm::predicted_finite_maximals(2)));
  CHECK(r2.maximal_inverse == r2.maximal);

  // lectic enumeration agrees with the powerset on n = 2
  auto l2 = ixm::enumerate_closed(2, 0);
  CHECK(l2.closed_sets == r2.closed_sets);
  CHECK(l2.maximal == r2.maximal);

  auto r3 = ixm::completeness_search(3);
  REQUIRE_FALSE(r3.partial);
  CHECK(r3.maximal == sorted_sets(ixm::predicted_finite_maximals(3)));
  CHECK(r3.maximal_inverse == r3.maximal);
  CHECK_THROWS_AS(ixm::completeness_search(4), ixm::ResourceError);
}

TEST_CASE("completeness budget is flagged") {
  auto full = ixm::enumerate_closed(3, 0);
  REQUIRE_FALSE(full.partial);
  auto r = ixm::enumerate_closed(3, 1);
  // either stopped early and said so, or finished with the full count
  CHECK(r.closed_sets > 0);
  CHECK((r.partial ? r.closed_sets < full.closed_sets : r.closed_sets == full.closed_sets));
}

TEST_CASE("injective mutt products lie in the generated semigroup") {
  CHECK(ixm::injective_mutt_membership({FMap::identity(3)}, 3));
  CHECK(ixm::injective_mutt_membership(ixm::all_perms(3), 3));
  CHECK_THROWS_AS(ixm::injective_mutt_membership({}, 3), ixm::PreconditionError);
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<FMap> u;
    int               k = 1 + static_cast<int>(rng() % 4);
    while (static_cast<int>(u.size()) < k) {
      auto c = random_chart(rng, 4);
      if (c.dom_mask() != 0) {
        u.push_back(c);
      }
    }
    REQUIRE(ixm::injective_mutt_membership(u, 3));
  }
}
