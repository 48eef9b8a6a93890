#ifndef IXM_FINITE_MODEL_HPP_
#define IXM_FINITE_MODEL_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ixm {

  // A partial map on {0, .., n-1} with n <= 8. kUndef marks undefined points.
  // Used both for partial bijections (FChart) and total maps (FTrans).
  struct FMap {
    static constexpr std::uint8_t kUndef = 0xFF;
    static constexpr int          kMaxN  = 8;

    int                            n = 0;
    std::array<std::uint8_t, kMaxN> img{};

    FMap() {
      img.fill(kUndef);
    }

    static FMap identity(int n);
    static FMap empty(int n);
    static FMap from(std::vector<int> const& images);  // -1 = undefined

    bool defined(int i) const {
      return img[static_cast<std::size_t>(i)] != kUndef;
    }
    int operator()(int i) const {
      return defined(i) ? img[static_cast<std::size_t>(i)] : -1;
    }

    unsigned dom_mask() const;
    unsigned im_mask() const;
    int      rank() const;
    bool     is_injective() const;
    bool     is_total() const;
    bool     is_permutation() const;
    bool     is_idempotent() const;

    // Base n+1 code with undefined as digit 0; dense in [0, (n+1)^n).
    std::uint32_t code() const;
    static FMap   from_code(int n, std::uint32_t code);

    // [1,_,0]
    std::string str() const;
    static FMap parse(std::string_view text);

    friend bool operator==(FMap const& a, FMap const& b) {
      return a.n == b.n && a.img == b.img;
    }
    friend bool operator<(FMap const& a, FMap const& b) {
      return a.code() < b.code();
    }
  };

  using FChart = FMap;
  using FTrans = FMap;

  // x |-> ((x)a)b
  FMap fcompose(FMap const& a, FMap const& b);
  // Inverse of a partial bijection.
  FMap finverse(FMap const& a);

  std::uint32_t universe_size_codes(int n);  // (n+1)^n

  // All of I_n, sorted by code.
  std::vector<FMap> all_charts(int n);
  // Sym(n), sorted by code.
  std::vector<FMap> all_perms(int n);

  // Sorted-by-code element set with binary-search membership.
  struct FSet {
    std::vector<FMap> elems;

    static FSet from(std::vector<FMap> v);
    bool        contains(FMap const& f) const;
    std::size_t size() const {
      return elems.size();
    }
    friend bool operator==(FSet const&, FSet const&) = default;
  };

  FSet fset_union(FSet const& a, FSet const& b);
  FSet fset_intersection(FSet const& a, FSet const& b);
  FSet fset_inverse(FSet const& a);  // {f^-1 : f in a}
  bool fset_subset(FSet const& a, FSet const& b);

  FTrans minimal_extension(FChart const& u);

  // Transversal of v: exactly one point of every kernel class.
  bool is_transversal(FTrans const& v, unsigned mask);

  struct MuttFactor {
    FTrans   v;
    unsigned lambda = 0;  // transversal of v
  };

  // Products v_0 .. v_k (k < maxlen) over the family with
  // im(v_0 .. v_i) contained in lambda of v_{i+1}. Sorted, distinct.
  std::vector<FTrans> mutt_products(std::vector<MuttFactor> const& family, int maxlen);

  // Least composition-closed superset. Guard: n <= 7.
  FSet closure_serial(std::vector<FMap> const& gens);
  FSet closure(std::vector<FMap> const& gens);  // OpenMP frontier version

  // Throws PreconditionError when M is not closed or not proper.
  bool is_maximal(FSet const& m, int n);

  // Maximal subgroups of Sym(n), each sorted by code. n <= 5.
  std::vector<FSet> maximal_subgroups(int n);
  std::vector<FSet> all_subgroups(int n);

  struct NamedFSet {
    std::string name;
    FSet        set;
  };

  std::vector<NamedFSet> predicted_finite_maximals(int n);

  struct CompletenessResult {
    std::vector<FSet> maximal;
    std::vector<FSet> maximal_inverse;
    std::size_t       closed_sets = 0;  // including the empty set
    bool              partial     = false;
  };

  // n = 2: all 128 subsets of I_2. n = 3: every closed subset of I_3 by
  // lectic enumeration, bounded by budget_ms (0 = IXM_BUDGET_MS or none).
  CompletenessResult completeness_search(int n, long budget_ms = 0);

  // Lectic enumeration of all closed subsets of I_n (n <= 3).
  CompletenessResult enumerate_closed(int n, long budget_ms);

  bool injective_mutt_membership(std::vector<FChart> const& u, int maxlen);

  // rank < n
  bool in_finite_ideal(FMap const& f);

}  // namespace ixm

#endif  // IXM_FINITE_MODEL_HPP_
