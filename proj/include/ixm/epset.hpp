#ifndef IXM_EPSET_HPP_
#define IXM_EPSET_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "ixm/arith.hpp"
#include "ixm/cardinal.hpp"

namespace ixm {

  // The progression {r + m*t : t >= t0}.
  struct Progression {
    Int r  = 0;
    Int m  = 1;
    Int t0 = 0;

    Int start() const {
      return r + m * t0;
    }
    bool contains(Int x) const {
      return x >= start() && (x - r) % m == 0;
    }
    friend bool operator==(Progression const&, Progression const&) = default;
  };

  struct Decomposition {
    std::vector<Progression> progressions;
    std::vector<Int>         finite;
  };

  // Eventually periodic subset of the naturals.
  //
  // x < threshold: x is a member iff it is listed in low.
  // x >= threshold: x is a member iff tail[x mod period] is set.
  // Always held in canonical form (minimal period, then minimal threshold),
  // so == is extensional equality.
  class EPSet {
   public:
    EPSet();  // empty set

    static EPSet empty();
    static EPSet naturals();
    static EPSet finite(std::vector<Int> elems);
    static EPSet singleton(Int x);
    // {0, .., k-1}
    static EPSet first(Int k);
    // {start + step*t : t >= 0}
    static EPSet progression(Int start, Int step);
    static EPSet progression(Progression const& p);
    // {x : x = r mod m}
    static EPSet residue_class(Int r, Int m);
    // Membership below n given by pred, and for x >= n by pred at the first
    // element >= n of x's class mod m.
    static EPSet from_predicate(Int n, Int m, std::function<bool(Int)> const& pred);
    // Raw fields; canonicalized. Throws InvalidParameter on inconsistent data.
    static EPSet from_parts(Int n, Int m, std::vector<Int> residues, std::vector<Int> low);

    Int threshold() const {
      return _threshold;
    }
    Int period() const {
      return _period;
    }
    std::vector<Int> residues() const;
    std::vector<Int> const& low() const {
      return _low;
    }

    bool contains(Int x) const;
    bool is_empty() const;
    bool is_finite() const;
    bool is_naturals() const;
    Card card() const;
    bool is_moiety() const;

    // Smallest element; throws PreconditionError when empty.
    Int min() const;
    // Members in [0, bound).
    std::vector<Int> elements_below(Int bound) const;
    // The k smallest members (fewer if the set is smaller).
    std::vector<Int> first_elements(std::size_t k) const;

    EPSet operator|(EPSet const& b) const;
    EPSet operator&(EPSet const& b) const;
    EPSet operator-(EPSet const& b) const;
    EPSet complement() const;
    bool  subset_of(EPSet const& b) const;
    bool  disjoint_from(EPSet const& b) const;

    Decomposition decompose() const;

    // Splits an infinite set into k >= 2 pairwise disjoint infinite parts;
    // any finite remainder goes to the first part.
    std::vector<EPSet> split(int k) const;

    std::string str() const;
    static EPSet parse(std::string_view text);

    friend bool operator==(EPSet const&, EPSet const&) = default;

   private:
    void canonicalize();

    Int                       _threshold = 0;
    Int                       _period    = 1;
    std::vector<std::uint8_t> _tail{0};
    std::vector<Int>          _low;
  };

  enum class BoolOp { union_, intersection, complement, difference };

  // Dispatch over the Boolean operations. complement ignores b.
  EPSet ep_boolean(BoolOp op, EPSet const& a, EPSet const* b = nullptr);

  inline Card ep_card(EPSet const& a) {
    return a.card();
  }
  inline Decomposition ep_decompose(EPSet const& a) {
    return a.decompose();
  }
  inline bool ep_is_moiety(EPSet const& a) {
    return a.is_moiety();
  }

  // Window on which two sets that agree must agree everywhere (with slack).
  Int comparison_window(EPSet const& a, EPSet const& b);

}  // namespace ixm

#endif  // IXM_EPSET_HPP_
