#ifndef IXM_CLASSES_HPP_
#define IXM_CLASSES_HPP_

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ixm/cardinal.hpp"
#include "ixm/chart.hpp"
#include "ixm/epset.hpp"
#include "ixm/partition.hpp"
#include "ixm/ultrafilter.hpp"

namespace ixm {

  enum class Family { S, P, V, A };
  enum class Variant { plain, inverse, meet };

  // One maximal (inverse) subsemigroup of I_N.
  //   S  symmetric group classes, mu in {1, aleph0}
  //   P  pointwise stabiliser classes, gamma finite non-empty, mu in {aleph0, aleph1}
  //   V  ultrafilter classes, non-principal uf, min(uf) < mu <= aleph1
  //   A  finite partition classes
  // relaxed admits V with mu = aleph0 (below the range where the class is maximal)
  // for exploration; such classes are not maximal.
  struct ClassId {
    Family       family  = Family::S;
    Variant      variant = Variant::plain;
    Card         mu      = Card::fin(1);
    EPSet        gamma;
    UFOracle     uf;
    FinPartition partition;
    bool         relaxed = false;

    static ClassId S(Card mu, Variant v = Variant::plain);
    static ClassId P(EPSet gamma, Card mu, Variant v = Variant::plain);
    static ClassId V(UFOracle uf, Card mu, Variant v = Variant::plain, bool relaxed = false);
    static ClassId A(FinPartition p, Variant v = Variant::plain);

    // InvalidParameter naming the violated bound.
    void validate() const;

    ClassId with_variant(Variant v) const;
    // plain <-> inverse; meet stays
    ClassId mirrored() const;

    // S[mu=aleph0] | Pinv[gamma={0,2};mu=aleph1] | Vmeet[uf=tower;mu=aleph1]
    // | A[blocks=3]
    std::string    str() const;
    static ClassId parse(std::string_view text);

    friend bool operator==(ClassId const&, ClassId const&) = default;
  };

  // Charts of finite rank.
  bool in_F_ideal(Chart const& f);
  // Partial identities.
  bool is_partial_identity(Chart const& f);

  // Membership by the defining disjunction of the class.
  bool in_class(ClassId const& c, Chart const& f);
  // V classes through the one-sided filter conditions instead of the
  // two-sided stabiliser condition; equal to in_class.
  bool in_class_V_alternative(ClassId const& c, Chart const& f);

  enum class StabKind { pointwise, setwise, partition_stab, partition_astab, filter_stab };
  using StabParam = std::variant<EPSet, FinPartition, UFOracle>;

  struct StabCheck {
    bool member      = false;
    bool permutation = false;  // false: f is not a permutation of N
  };

  // InvalidParameter if the parameter type does not fit the kind.
  StabCheck in_stabiliser(StabKind kind, StabParam const& param, Chart const& f);

  struct Witness {
    ClassId     in;
    ClassId     out;
    std::string recipe;
    Chart       chart;
  };

  // f with in_class(c1, f) and not in_class(c2, f), from the constructions
  // separating the classes. NotImplemented for pairs without a recipe.
  Witness witness(ClassId const& c1, ClassId const& c2);
  // The curated separation pairs, each verified on construction.
  std::vector<Witness> witness_table();

  // For h outside the finite-rank ideal and not a partial identity, a class
  // P[gamma={x};mu=aleph1] with (x, y) in h, x != y, excluding h.
  ClassId excluding_maximal(Chart const& h);

  // Every class used by the suites: S and its variants for mu in {1, aleph0};
  // P for gamma in {{0}, {0,2}}, mu in {aleph0, aleph1}; V for two towers at
  // aleph1; A for n in {2, 3}.
  std::vector<ClassId> instantiated_classes();

}  // namespace ixm

#endif  // IXM_CLASSES_HPP_
