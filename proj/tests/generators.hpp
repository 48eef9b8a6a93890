#ifndef IXM_TESTS_GENERATORS_HPP_
#define IXM_TESTS_GENERATORS_HPP_

#include "ixm/sampling.hpp"

namespace gen {

  using ixm::sampling::random_chart;
  using ixm::sampling::random_permutation;
  using ixm::sampling::random_set;
  using ixm::sampling::uni;

}  // namespace gen

#endif  // IXM_TESTS_GENERATORS_HPP_
