// Acceptance gate: one line per criterion, nonzero exit if any is red.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "ixm/harness.hpp"

namespace {

  struct Run {
    std::string   suite;
    std::uint64_t cases = 0;  // 0: suite default
  };

  struct Criterion {
    int              id;
    std::string      name;
    std::vector<Run> runs;
    double           budget_s = 0;  // 0: none
  };

  constexpr std::uint64_t kSeed = 20240601;

  bool run_criterion(Criterion const& c) {
    auto        start  = std::chrono::steady_clock::now();
    bool        ok     = true;
    std::string detail;
    for (auto const& r : c.runs) {
      auto rep = ixm::run_suite(r.suite, kSeed, r.cases);
      detail += (detail.empty() ? "" : "; ") + r.suite + " " + std::to_string(rep.cases) + " cases "
                + std::to_string(rep.failures.size()) + " failures";
      if (!rep.passed()) {
        ok = false;
        std::cerr << ixm::report_text(rep);
      }
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0 && secs > c.budget_s) {
      ok = false;
      detail += "; over the " + std::to_string(static_cast<int>(c.budget_s)) + " s budget";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f s", secs);
    std::cout << (ok ? "PASS" : "FAIL") << "  " << c.id << ". " << c.name << " (" << detail << ", " << buf << ")"
              << std::endl;
    return ok;
  }

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {1, "rank, collapse and defect relations", {{"rank-relations", 10000}}, 30},
      {2,
       "classes closed under composition",
       {{"closure-S", 10000}, {"closure-P", 10000}, {"closure-V", 10000}, {"closure-A", 10000}},
       120},
      {3, "inverse duality and meet", {{"duality", 10000}}, 0},
      {4, "witness table", {{"witnesses", 0}}, 0},
      {5,
       "finite classification n = 2, 3, 4",
       {{"finite-classify-n2", 0}, {"finite-classify-n3", 0}, {"finite-classify-n4", 0}},
       300},
      {6, "injective mutt products in the closure", {{"mutt", 200}}, 0},
      {7, "n x n in every admissible closure", {{"nxn", 0}}, 60},
      {8, "padding permutations and lax rho", {{"padding", 1000}, {"rho-lax", 10000}}, 0},
      {9, "sandwich factorization", {{"sandwich", 1000}}, 0},
      {10,
       "ultrafilter axioms, stabiliser and the two class forms",
       {{"ultrafilter-axioms", 10000}, {"ultrafilter-stabiliser", 500}, {"ultrafilter-forms", 10000}},
       0},
      {11, "idempotents and the finite-rank ideal", {{"ideal-in-every-class", 1000}}, 0},
  };
  int failed = 0;
  for (auto const& c : criteria) {
    failed += run_criterion(c) ? 0 : 1;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria pass"
            << std::endl;
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
