#ifndef IXM_ULTRAFILTER_HPP_
#define IXM_ULTRAFILTER_HPP_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ixm/cardinal.hpp"
#include "ixm/chart.hpp"
#include "ixm/epset.hpp"

namespace ixm {

  // An ultrafilter on the algebra of eventually periodic sets.
  //
  // principal(x): the sets containing x.
  // tower: a point a of the profinite integers, given by residues modulo
  // prime powers; a set is accepted iff its residue set modulo its period
  // contains a mod period. For each listed prime p the p-component of a is
  // the residue listed at the largest power of p; unlisted primes give 0.
  class UFOracle {
   public:
    enum class Kind { principal, tower };

    UFOracle() = default;  // tower at 0

    static UFOracle principal(Int x);
    // (p^a, r) choices; InvalidParameter if a modulus is not a prime power,
    // r is out of range, or two choices for the same prime disagree.
    static UFOracle tower(std::vector<std::pair<Int, Int>> const& choices = {});

    Kind kind() const {
      return _kind;
    }
    bool is_principal() const {
      return _kind == Kind::principal;
    }
    Int point() const {
      return _point;
    }
    // The tower point modulo m.
    Int residue(Int m) const;
    bool is_zero_tower() const {
      return _kind == Kind::tower && _components.empty();
    }
    // prime -> (exponent, residue modulo prime^exponent); zero components dropped
    std::map<Int, std::pair<int, Int>> const& components() const {
      return _components;
    }

    // uf principal 3 | uf tower [2^3=5, 3^1=1]
    std::string     str() const;
    static UFOracle parse(std::string_view text);

    friend bool operator==(UFOracle const&, UFOracle const&) = default;

   private:
    Kind                               _kind  = Kind::tower;
    Int                                _point = 0;
    std::map<Int, std::pair<int, Int>> _components;
  };

  bool uf_contains(UFOracle const& F, EPSet const& s);
  Card uf_min(UFOracle const& F);

  // The class of the tower point modulo k.
  EPSet tower_neighbourhood(UFOracle const& F, Int k);

  // (for all S)(S in F <=> Sf in F), decided by the action of the piece on
  // the tower point (or by xf = x for principal F).
  bool stabilises_filter(UFOracle const& F, Chart const& f);
  // A set S with S in F but Sf not in F, when f does not stabilise F.
  std::optional<EPSet> stabiliser_witness(UFOracle const& F, Chart const& f);

  // (for all S in F)(Sf in F), evaluated on one basic neighbourhood of the
  // tower point that is fine enough to separate it from its image.
  bool maps_filter_forward(UFOracle const& F, Chart const& f);
  // (for all S not in F)(Sf not in F)
  bool keeps_nonmembers_out(UFOracle const& F, Chart const& f);

}  // namespace ixm

#endif  // IXM_ULTRAFILTER_HPP_
