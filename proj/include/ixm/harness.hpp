#ifndef IXM_HARNESS_HPP_
#define IXM_HARNESS_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ixm/finite_model.hpp"

namespace ixm {

  struct CaseFailure {
    std::uint64_t index = 0;
    std::string   kind;  // fail | error | resource
    std::string   input;
    std::string   message;

    friend bool operator==(CaseFailure const&, CaseFailure const&) = default;
  };

  struct SuiteReport {
    std::string              suite;
    std::uint64_t            seed  = 0;
    std::uint64_t            cases = 0;  // cases actually run
    std::vector<CaseFailure> failures;
    double                   wall_ms = 0;
    // FNV-1a over everything except the wall time
    std::uint64_t hash = 0;

    bool passed() const {
      return failures.empty();
    }
    bool resource_only() const;
  };

  struct SuiteInfo {
    std::string   name;
    std::string   summary;
    std::uint64_t default_cases = 0;
  };

  std::vector<SuiteInfo> const& suites();

  // `cases` is the number of random cases; exhaustive suites ignore it or
  // add their fixed cases on top. 0 selects the suite default.
  // InvalidParameter for an unknown suite.
  SuiteReport run_suite(std::string_view name, std::uint64_t seed, std::uint64_t cases);
  // Single-threaded reference; same report up to wall time.
  SuiteReport run_suite_serial(std::string_view name, std::uint64_t seed, std::uint64_t cases);

  // One JSON object per line: the header, then one line per failure.
  std::string report_records(SuiteReport const& r);
  std::string report_text(SuiteReport const& r);

  struct ConditionResult {
    std::string label;  // i .. v
    std::string description;
    bool        checked = true;  // false: out of scope
    bool        passed  = false;
    std::string counterexample;
  };

  // Conditions on a candidate family of maximal subsemigroups of I_n
  // containing the group G generated by gens:
  //   (i)   G is contained in every member
  //   (ii)  every member is a proper subsemigroup
  //   (iii) no member contains another
  //   (iv)  the family is closed under inversion
  //   (v)   not checked
  // PreconditionError unless 1 <= n <= 5 and all charts have size n.
  std::vector<ConditionResult> check_conditions(std::vector<FMap> const& gens,
                                                std::vector<FSet> const& family, int n);

}  // namespace ixm

#endif  // IXM_HARNESS_HPP_
