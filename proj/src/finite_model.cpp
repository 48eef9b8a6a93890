#include "ixm/finite_model.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include "ixm/error.hpp"
#include "scan.hpp"

namespace ixm {

  FMap FMap::identity(int n) {
    FMap f;
    f.n = n;
    for (int i = 0; i < n; ++i) {
      f.img[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(i);
    }
    return f;
  }

  FMap FMap::empty(int n) {
    FMap f;
    f.n = n;
    return f;
  }

  FMap FMap::from(std::vector<int> const& images) {
    if (images.size() > static_cast<std::size_t>(kMaxN)) {
      throw InvalidParameter("finite maps are limited to n <= 8");
    }
    FMap f;
    f.n = static_cast<int>(images.size());
    for (std::size_t i = 0; i < images.size(); ++i) {
      int y = images[i];
      if (y >= f.n || y < -1) {
        throw InvalidParameter("image " + std::to_string(y) + " outside 0.." + std::to_string(f.n - 1));
      }
      f.img[i] = y < 0 ? kUndef : static_cast<std::uint8_t>(y);
    }
    return f;
  }

  unsigned FMap::dom_mask() const {
    unsigned m = 0;
    for (int i = 0; i < n; ++i) {
      if (defined(i)) {
        m |= 1u << i;
      }
    }
    return m;
  }

  unsigned FMap::im_mask() const {
    unsigned m = 0;
    for (int i = 0; i < n; ++i) {
      if (defined(i)) {
        m |= 1u << img[static_cast<std::size_t>(i)];
      }
    }
    return m;
  }

  int FMap::rank() const {
    return std::popcount(im_mask());
  }

  bool FMap::is_injective() const {
    return std::popcount(dom_mask()) == rank();
  }

  bool FMap::is_total() const {
    return dom_mask() == (1u << n) - 1;
  }

  bool FMap::is_permutation() const {
    return is_total() && is_injective();
  }

  bool FMap::is_idempotent() const {
    return fcompose(*this, *this) == *this;
  }

  std::uint32_t FMap::code() const {
    std::uint32_t c = 0;
    for (int i = n - 1; i >= 0; --i) {
      c = c * static_cast<std::uint32_t>(n + 1)
          + (defined(i) ? img[static_cast<std::size_t>(i)] + 1u : 0u);
    }
    return c;
  }

  FMap FMap::from_code(int n, std::uint32_t code) {
    FMap f;
    f.n = n;
    for (int i = 0; i < n; ++i) {
      std::uint32_t d = code % static_cast<std::uint32_t>(n + 1);
      code /= static_cast<std::uint32_t>(n + 1);
      f.img[static_cast<std::size_t>(i)] = d == 0 ? kUndef : static_cast<std::uint8_t>(d - 1);
    }
    return f;
  }

  std::string FMap::str() const {
    std::string s = "[";
    for (int i = 0; i < n; ++i) {
      if (i > 0) {
        s += ",";
      }
      s += defined(i) ? std::to_string(img[static_cast<std::size_t>(i)]) : "_";
    }
    return s + "]";
  }

  FMap FMap::parse(std::string_view text) {
    detail::Scanner  sc(text, "finite map");
    std::vector<int> images;
    sc.expect("[");
    if (!sc.try_consume("]")) {
      do {
        if (sc.try_consume("_")) {
          images.push_back(-1);
        } else {
          images.push_back(static_cast<int>(sc.read_nat()));
        }
      } while (sc.try_consume(","));
      sc.expect("]");
    }
    if (!sc.at_end()) {
      sc.fail("trailing input");
    }
    try {
      return from(images);
    } catch (InvalidParameter const& e) {
      throw ParseError(std::string("finite map: ") + e.what());
    }
  }

  FMap fcompose(FMap const& a, FMap const& b) {
    if (a.n != b.n) {
      throw InvalidParameter("composing finite maps of different degree");
    }
    FMap c;
    c.n = a.n;
    for (int i = 0; i < a.n; ++i) {
      if (a.defined(i)) {
        c.img[static_cast<std::size_t>(i)] = b.img[a.img[static_cast<std::size_t>(i)]];
      }
    }
    return c;
  }

  FMap finverse(FMap const& a) {
    if (!a.is_injective()) {
      throw PreconditionError("inverse of a non-injective map " + a.str());
    }
    FMap c;
    c.n = a.n;
    for (int i = 0; i < a.n; ++i) {
      if (a.defined(i)) {
        c.img[a.img[static_cast<std::size_t>(i)]] = static_cast<std::uint8_t>(i);
      }
    }
    return c;
  }

  std::uint32_t universe_size_codes(int n) {
    std::uint32_t s = 1;
    for (int i = 0; i < n; ++i) {
      s *= static_cast<std::uint32_t>(n + 1);
    }
    return s;
  }

  std::vector<FMap> all_charts(int n) {
    if (n < 0 || n > 7) {
      throw ResourceError("enumerating I_n is limited to n <= 7");
    }
    std::vector<FMap> out;
    std::uint32_t     total = universe_size_codes(n);
    for (std::uint32_t c = 0; c < total; ++c) {
      FMap f = FMap::from_code(n, c);
      if (f.is_injective()) {
        out.push_back(f);
      }
    }
    return out;
  }

  std::vector<FMap> all_perms(int n) {
    std::vector<int> p(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      p[static_cast<std::size_t>(i)] = i;
    }
    std::vector<FMap> out;
    do {
      out.push_back(FMap::from(p));
    } while (std::next_permutation(p.begin(), p.end()));
    std::sort(out.begin(), out.end());
    return out;
  }

  FSet FSet::from(std::vector<FMap> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return FSet{std::move(v)};
  }

  bool FSet::contains(FMap const& f) const {
    return std::binary_search(elems.begin(), elems.end(), f);
  }

  FSet fset_union(FSet const& a, FSet const& b) {
    std::vector<FMap> v = a.elems;
    v.insert(v.end(), b.elems.begin(), b.elems.end());
    return FSet::from(std::move(v));
  }

  FSet fset_intersection(FSet const& a, FSet const& b) {
    std::vector<FMap> v;
    std::set_intersection(a.elems.begin(), a.elems.end(), b.elems.begin(), b.elems.end(),
                          std::back_inserter(v));
    return FSet{std::move(v)};
  }

  FSet fset_inverse(FSet const& a) {
    std::vector<FMap> v;
    for (auto const& f : a.elems) {
      v.push_back(finverse(f));
    }
    return FSet::from(std::move(v));
  }

  bool fset_subset(FSet const& a, FSet const& b) {
    return std::includes(b.elems.begin(), b.elems.end(), a.elems.begin(), a.elems.end());
  }

  FTrans minimal_extension(FChart const& u) {
    unsigned dom = u.dom_mask();
    if (dom == 0) {
      throw PreconditionError("minimal transformation extension of the empty chart");
    }
    int  x0 = std::countr_zero(dom);
    FMap v  = u;
    for (int i = 0; i < u.n; ++i) {
      if (!u.defined(i)) {
        v.img[static_cast<std::size_t>(i)] = u.img[static_cast<std::size_t>(x0)];
      }
    }
    return v;
  }

  bool is_transversal(FTrans const& v, unsigned mask) {
    if (!v.is_total() || (mask >> v.n) != 0) {
      return false;
    }
    unsigned seen = 0;
    for (int i = 0; i < v.n; ++i) {
      if (mask & (1u << i)) {
        unsigned y = 1u << v.img[static_cast<std::size_t>(i)];
        if (seen & y) {
          return false;
        }
        seen |= y;
      }
    }
    return seen == v.im_mask();
  }

  std::vector<FTrans> mutt_products(std::vector<MuttFactor> const& family, int maxlen) {
    for (auto const& f : family) {
      if (!is_transversal(f.v, f.lambda)) {
        throw PreconditionError("assigned set is not a transversal of " + f.v.str());
      }
    }
    std::set<std::uint32_t> seen;
    std::vector<FTrans>     out;
    auto                    record = [&](FTrans const& p) {
      if (seen.insert(p.code()).second) {
        out.push_back(p);
      }
    };
    // Depth-first over words; the chaining constraint depends only on the
    // prefix product and the next factor.
    auto extend = [&](auto&& self, FTrans const& prefix, int len) -> void {
      record(prefix);
      if (len == maxlen) {
        return;
      }
      unsigned im = prefix.im_mask();
      for (auto const& f : family) {
        if ((im & ~f.lambda) == 0) {
          self(self, fcompose(prefix, f.v), len + 1);
        }
      }
    };
    if (maxlen >= 1) {
      for (auto const& f : family) {
        extend(extend, f.v, 1);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  namespace {

    int common_degree(std::vector<FMap> const& gens) {
      int n = gens.front().n;
      for (auto const& g : gens) {
        if (g.n != n) {
          throw InvalidParameter("generators of different degree");
        }
      }
      if (n > 7) {
        throw ResourceError("closure is limited to n <= 7");
      }
      return n;
    }

  }  // namespace

  FSet closure_serial(std::vector<FMap> const& gens) {
    if (gens.empty()) {
      return {};
    }
    int                       n = common_degree(gens);
    std::vector<std::uint8_t> seen(universe_size_codes(n), 0);
    std::vector<FMap>         elems;
    for (auto const& g : gens) {
      if (!seen[g.code()]) {
        seen[g.code()] = 1;
        elems.push_back(g);
      }
    }
    std::vector<FMap> uniq = elems;
    for (std::size_t i = 0; i < elems.size(); ++i) {
      for (auto const& g : uniq) {
        FMap p = fcompose(elems[i], g);
        if (!seen[p.code()]) {
          seen[p.code()] = 1;
          elems.push_back(p);
        }
      }
    }
    return FSet::from(std::move(elems));
  }

  FSet closure(std::vector<FMap> const& gens) {
    if (gens.empty()) {
      return {};
    }
    int                       n = common_degree(gens);
    std::vector<std::uint8_t> seen(universe_size_codes(n), 0);
    std::vector<FMap>         elems;
    for (auto const& g : gens) {
      if (!seen[g.code()]) {
        seen[g.code()] = 1;
        elems.push_back(g);
      }
    }
    std::vector<FMap> const uniq     = elems;
    std::vector<FMap>       frontier = elems;
    while (!frontier.empty()) {
      std::vector<FMap> next;
#pragma omp parallel
      {
        std::vector<FMap> local;
#pragma omp for schedule(static) nowait
        for (std::size_t i = 0; i < frontier.size(); ++i) {
          for (auto const& g : uniq) {
            FMap p = fcompose(frontier[i], g);
            // Racy pre-filter only; the merge below is authoritative.
            if (!seen[p.code()]) {
              local.push_back(p);
            }
          }
        }
#pragma omp critical
        next.insert(next.end(), local.begin(), local.end());
      }
      frontier.clear();
      std::sort(next.begin(), next.end());
      for (auto const& p : next) {
        if (!seen[p.code()]) {
          seen[p.code()] = 1;
          frontier.push_back(p);
          elems.push_back(p);
        }
      }
    }
    return FSet::from(std::move(elems));
  }

  bool is_maximal(FSet const& m, int n) {
    auto universe = all_charts(n);
    if (m.size() >= universe.size()) {
      throw PreconditionError("is_maximal: M is not a proper subset of I_" + std::to_string(n));
    }
    for (auto const& f : m.elems) {
      if (f.n != n) {
        throw InvalidParameter("is_maximal: element of the wrong degree");
      }
    }
    if (!m.elems.empty() && !(closure(m.elems) == m)) {
      throw PreconditionError("is_maximal: M is not closed under composition");
    }
    for (auto const& x : universe) {
      if (m.contains(x)) {
        continue;
      }
      auto gens = m.elems;
      gens.push_back(x);
      if (closure(gens).size() != universe.size()) {
        return false;
      }
    }
    return true;
  }

  std::vector<FSet> all_subgroups(int n) {
    if (n < 1 || n > 5) {
      throw ResourceError("subgroup enumeration is limited to n <= 5");
    }
    auto                         perms = all_perms(n);
    std::set<std::vector<std::uint32_t>> keys;
    std::vector<FSet>            groups;
    auto add = [&](FSet const& g) {
      std::vector<std::uint32_t> k;
      for (auto const& f : g.elems) {
        k.push_back(f.code());
      }
      if (keys.insert(k).second) {
        groups.push_back(g);
      }
    };
    for (auto const& p : perms) {
      add(closure({p}));
    }
    // Every subgroup arises by adjoining generators one at a time.
    for (std::size_t i = 0; i < groups.size(); ++i) {
      for (auto const& p : perms) {
        if (!groups[i].contains(p)) {
          auto gens = groups[i].elems;
          gens.push_back(p);
          add(closure(gens));
        }
      }
    }
    std::sort(groups.begin(), groups.end(), [](FSet const& a, FSet const& b) {
      if (a.size() != b.size()) {
        return a.size() < b.size();
      }
      return a.elems < b.elems;
    });
    return groups;
  }

  std::vector<FSet> maximal_subgroups(int n) {
    auto              groups = all_subgroups(n);
    std::size_t       order  = all_perms(n).size();
    std::vector<FSet> out;
    for (auto const& h : groups) {
      if (h.size() == order) {
        continue;
      }
      bool maximal = std::none_of(groups.begin(), groups.end(), [&](FSet const& k) {
        return k.size() > h.size() && k.size() < order && fset_subset(h, k);
      });
      if (maximal) {
        out.push_back(h);
      }
    }
    return out;
  }

  std::vector<NamedFSet> predicted_finite_maximals(int n) {
    if (n < 2 || n > 4) {
      throw ResourceError("predicted finite maximals are provided for 2 <= n <= 4");
    }
    auto                   universe = all_charts(n);
    std::vector<NamedFSet> out;
    std::vector<FMap>      low;
    std::vector<FMap>      nonperm;
    for (auto const& f : universe) {
      if (f.is_permutation() || f.rank() <= n - 2) {
        low.push_back(f);
      }
      if (!f.is_permutation()) {
        nonperm.push_back(f);
      }
    }
    out.push_back({"Sym(" + std::to_string(n) + ") + rank<=" + std::to_string(n - 2),
                   FSet::from(low)});
    int k = 0;
    for (auto const& g : maximal_subgroups(n)) {
      auto elems = nonperm;
      elems.insert(elems.end(), g.elems.begin(), g.elems.end());
      out.push_back({"G" + std::to_string(k++) + "[order=" + std::to_string(g.size())
                         + "] + non-permutations",
                     FSet::from(elems)});
    }
    return out;
  }

  namespace {

    // Subsets of I_n (n <= 3, |I_3| = 34) as 64-bit masks.
    struct MaskUniverse {
      std::vector<FMap>                  elems;
      std::vector<std::vector<int>>      mul;
      std::vector<int>                   inv;
      std::uint64_t                      full = 0;

      explicit MaskUniverse(int n) : elems(all_charts(n)) {
        if (elems.size() > 64) {
          throw ResourceError("mask enumeration is limited to n <= 3");
        }
        std::map<std::uint32_t, int> index;
        for (std::size_t i = 0; i < elems.size(); ++i) {
          index[elems[i].code()] = static_cast<int>(i);
        }
        mul.assign(elems.size(), std::vector<int>(elems.size()));
        inv.resize(elems.size());
        for (std::size_t a = 0; a < elems.size(); ++a) {
          for (std::size_t b = 0; b < elems.size(); ++b) {
            mul[a][b] = index.at(fcompose(elems[a], elems[b]).code());
          }
          inv[a] = index.at(finverse(elems[a]).code());
        }
        full = elems.size() == 64 ? ~0ull : (1ull << elems.size()) - 1;
      }

      std::uint64_t close(std::uint64_t s) const {
        std::uint64_t        done = 0;
        std::uint64_t        todo = s;
        while (todo) {
          int a = std::countr_zero(todo);
          todo &= todo - 1;
          done |= 1ull << a;
          for (std::uint64_t rest = done; rest; rest &= rest - 1) {
            int           b  = std::countr_zero(rest);
            std::uint64_t ab = 1ull << mul[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
            std::uint64_t ba = 1ull << mul[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)];
            if (!(s & ab)) {
              s |= ab;
              todo |= ab;
            }
            if (!(s & ba)) {
              s |= ba;
              todo |= ba;
            }
          }
        }
        return s;
      }

      bool is_closed(std::uint64_t s) const {
        for (std::uint64_t x = s; x; x &= x - 1) {
          for (std::uint64_t y = s; y; y &= y - 1) {
            if (!(s >> mul[static_cast<std::size_t>(std::countr_zero(x))]
                           [static_cast<std::size_t>(std::countr_zero(y))]
                  & 1)) {
              return false;
            }
          }
        }
        return true;
      }

      std::uint64_t inverse(std::uint64_t s) const {
        std::uint64_t out = 0;
        for (; s; s &= s - 1) {
          out |= 1ull << inv[static_cast<std::size_t>(std::countr_zero(s))];
        }
        return out;
      }

      FSet to_fset(std::uint64_t s) const {
        std::vector<FMap> v;
        for (; s; s &= s - 1) {
          v.push_back(elems[static_cast<std::size_t>(std::countr_zero(s))]);
        }
        return FSet::from(std::move(v));
      }

      bool maximal(std::uint64_t m) const {
        for (std::uint64_t rest = full & ~m; rest; rest &= rest - 1) {
          if (close(m | (rest & -rest)) != full) {
            return false;
          }
        }
        return true;
      }

      bool maximal_inverse(std::uint64_t m) const {
        for (std::uint64_t rest = full & ~m; rest; rest &= rest - 1) {
          std::uint64_t x = rest & -rest;
          if (close(m | x | inverse(x)) != full) {
            return false;
          }
        }
        return true;
      }
    };

    long budget_from_env(long budget_ms) {
      if (budget_ms > 0) {
        return budget_ms;
      }
      if (char const* env = std::getenv("IXM_BUDGET_MS")) {
        return std::atol(env);
      }
      return 0;
    }

    void collect_maximal(MaskUniverse const& u, std::vector<std::uint64_t> const& closed,
                         CompletenessResult& r) {
      for (std::uint64_t m : closed) {
        if (m == u.full) {
          continue;
        }
        if (u.maximal(m)) {
          r.maximal.push_back(u.to_fset(m));
        }
        if (u.inverse(m) == m && u.maximal_inverse(m)) {
          r.maximal_inverse.push_back(u.to_fset(m));
        }
      }
      auto by_elems = [](FSet const& a, FSet const& b) { return a.elems < b.elems; };
      std::sort(r.maximal.begin(), r.maximal.end(), by_elems);
      std::sort(r.maximal_inverse.begin(), r.maximal_inverse.end(), by_elems);
    }

  }  // namespace

  CompletenessResult enumerate_closed(int n, long budget_ms) {
    MaskUniverse               u(n);
    int const                  m = static_cast<int>(u.elems.size());
    long const                 budget = budget_from_env(budget_ms);
    auto const                 start  = std::chrono::steady_clock::now();
    CompletenessResult         r;
    std::vector<std::uint64_t> closed;
    // Ganter's lectic enumeration: every closed set exactly once.
    std::uint64_t a = u.close(0);
    for (;;) {
      closed.push_back(a);
      if (budget > 0 && closed.size() % 256 == 0) {
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
        if (ms > budget) {
          r.partial = true;
          break;
        }
      }
      bool advanced = false;
      for (int i = m - 1; i >= 0; --i) {
        std::uint64_t bit = 1ull << i;
        if (a & bit) {
          continue;
        }
        std::uint64_t below = bit - 1;
        std::uint64_t b     = u.close((a & below) | bit);
        if ((b & below) == (a & below)) {
          a        = b;
          advanced = true;
          break;
        }
      }
      if (!advanced) {
        break;
      }
    }
    r.closed_sets = closed.size();
    collect_maximal(u, closed, r);
    return r;
  }

  CompletenessResult completeness_search(int n, long budget_ms) {
    if (n == 2) {
      MaskUniverse               u(2);
      CompletenessResult         r;
      std::vector<std::uint64_t> closed;
      for (std::uint64_t s = 0; s <= u.full; ++s) {
        if (u.is_closed(s)) {
          closed.push_back(s);
        }
      }
      r.closed_sets = closed.size();
      // Powerset maximality: no closed proper strict superset.
      for (std::uint64_t mset : closed) {
        if (mset == u.full) {
          continue;
        }
        bool max_sg = true, max_inv = mset == u.inverse(mset);
        bool inv_closed = max_inv;
        for (std::uint64_t t : closed) {
          if (t == u.full || t == mset || (t & mset) != mset) {
            continue;
          }
          max_sg = false;
          if (inv_closed && u.inverse(t) == t) {
            max_inv = false;
          }
        }
        if (max_sg) {
          r.maximal.push_back(u.to_fset(mset));
        }
        if (inv_closed && max_inv) {
          r.maximal_inverse.push_back(u.to_fset(mset));
        }
      }
      auto by_elems = [](FSet const& a, FSet const& b) { return a.elems < b.elems; };
      std::sort(r.maximal.begin(), r.maximal.end(), by_elems);
      std::sort(r.maximal_inverse.begin(), r.maximal_inverse.end(), by_elems);
      return r;
    }
    if (n == 3) {
      return enumerate_closed(3, budget_ms);
    }
    throw ResourceError("completeness search is provided for n = 2 and n = 3");
  }

  bool injective_mutt_membership(std::vector<FChart> const& u, int maxlen) {
    if (u.empty()) {
      throw PreconditionError("injective_mutt_membership needs a non-empty U");
    }
    std::vector<MuttFactor> family;
    for (auto const& c : u) {
      family.push_back({minimal_extension(c), c.dom_mask()});
    }
    FSet generated = closure(u);
    for (auto const& p : mutt_products(family, maxlen)) {
      if (p.is_injective() && !generated.contains(p)) {
        return false;
      }
    }
    return true;
  }

  bool in_finite_ideal(FMap const& f) {
    return f.rank() < f.n;
  }

}  // namespace ixm
