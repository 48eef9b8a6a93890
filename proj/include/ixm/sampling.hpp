#ifndef IXM_SAMPLING_HPP_
#define IXM_SAMPLING_HPP_

#include <cstdint>
#include <random>

#include "ixm/chart.hpp"
#include "ixm/classes.hpp"
#include "ixm/epset.hpp"

namespace ixm::sampling {

  using Rng = std::mt19937_64;

  std::uint64_t splitmix64(std::uint64_t& state);
  // Independent stream for case `index` of a run seeded with `seed`.
  Rng case_rng(std::uint64_t seed, std::uint64_t index);

  Int uni(Rng& rng, Int lo, Int hi);

  // Deliberately non-canonical raw data so canonicalization is exercised.
  EPSet random_set(Rng& rng);
  // Pieces on distinct classes plus a few pairs off the pieces.
  Chart random_chart(Rng& rng);
  // A bijection between two partitions of N into residue classes, after a
  // finite shuffle of an initial segment.
  Chart random_permutation(Rng& rng);

  // A permutation of N that restricts to a permutation of s and fixes the
  // rest pointwise.
  Chart permutation_inside(Rng& rng, EPSet const& s);

  // Random elements of the groups the classes are built around.
  Chart pointwise_stabiliser_element(Rng& rng, EPSet const& sigma);
  Chart filter_stabiliser_element(Rng& rng, UFOracle const& F);
  Chart partition_stabiliser_element(Rng& rng, FinPartition const& p);
  Chart partition_astabiliser_element(Rng& rng, FinPartition const& p);
  // The group a class of c's family is built around: Sym(N), the pointwise
  // stabiliser of gamma, the filter stabiliser, or Stab(p).
  Chart group_element(Rng& rng, ClassId const& c);

  inline constexpr Int kCandidateModulus = 48;

  // A chart biased towards the boundary cases of c, with it and its inverse
  // of modulus at most kCandidateModulus; not always a member.
  Chart class_candidate(Rng& rng, ClassId const& c);
  // A member of c: rejection sampling over class_candidate, then a group
  // element as fallback.
  Chart class_member(Rng& rng, ClassId const& c);

  // Charts in the finite-rank ideal or partial identities.
  Chart ideal_or_idempotent(Rng& rng);
  // Charts of infinite rank that are not partial identities.
  Chart outside_ideal_and_idempotents(Rng& rng);

}  // namespace ixm::sampling

#endif  // IXM_SAMPLING_HPP_
