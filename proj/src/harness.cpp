#include "ixm/harness.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "ixm/chart.hpp"
#include "ixm/classes.hpp"
#include "ixm/error.hpp"
#include "ixm/partition.hpp"
#include "ixm/sampling.hpp"
#include "ixm/ultrafilter.hpp"

namespace ixm {

  namespace {

    using sampling::Rng;

    struct Outcome {
      std::string input;
      std::string message;
    };

    // Each case returns nothing on success. `input` is filled before the
    // check so errors thrown midway still report what was being tested.
    using CaseFn = std::function<std::optional<Outcome>(std::uint64_t index, std::string& input)>;

    struct Plan {
      std::uint64_t count = 0;
      CaseFn        run;
    };

    using Planner = std::function<Plan(std::uint64_t seed, std::uint64_t cases)>;

    std::optional<Outcome> fail(std::string const& input, std::string message) {
      return Outcome{input, std::move(message)};
    }

    // -- Rank relations -------------------------------------------------

    struct Triple {
      Card r, c, d;
    };

    // The seven rank/collapse/defect relations for a product fg.
    std::optional<std::string> rank_relations(Triple const& f, Triple const& g, Triple const& fg) {
      if (!(fg.r <= std::min(f.r, g.r))) {
        return "r(fg) <= min(r(f), r(g))";
      }
      if (!(f.c <= fg.c && fg.c <= f.c + g.c)) {
        return "c(f) <= c(fg) <= c(f) + c(g)";
      }
      if (!(g.d <= fg.d && fg.d <= f.d + g.d)) {
        return "d(g) <= d(fg) <= d(f) + d(g)";
      }
      if (f.d == Card::fin(0) && fg.c != f.c + g.c) {
        return "d(f) = 0 implies c(fg) = c(f) + c(g)";
      }
      if (g.c == Card::fin(0) && fg.d != f.d + g.d) {
        return "c(g) = 0 implies d(fg) = d(f) + d(g)";
      }
      for (Card mu : {Card::fin(1), Card::aleph0()}) {
        if (f.d < mu && mu <= g.c && fg.c < mu) {
          return "d(f) < mu <= c(g) implies c(fg) >= mu, mu = " + mu.str();
        }
        if (g.c < mu && mu <= f.d && fg.d < mu) {
          return "c(g) < mu <= d(f) implies d(fg) >= mu, mu = " + mu.str();
        }
      }
      return std::nullopt;
    }

    Triple triple(Chart const& f) {
      auto s = stats(f);
      return {s.rank, s.collapse, s.defect};
    }

    Triple triple(FMap const& f) {
      auto n = static_cast<std::uint64_t>(f.n);
      auto r = static_cast<std::uint64_t>(f.rank());
      return {Card::fin(r), Card::fin(n - r), Card::fin(n - r)};
    }

    Plan plan_rank_relations(std::uint64_t seed, std::uint64_t cases) {
      auto i3 = std::make_shared<std::vector<FMap>>(all_charts(3));
      auto m  = i3->size();
      return {cases + m * m, [=](std::uint64_t i, std::string& input) -> std::optional<Outcome> {
                if (i < cases) {
                  Rng   rng = sampling::case_rng(seed, i);
                  Chart f   = sampling::random_chart(rng);
                  Chart g   = sampling::random_chart(rng);
                  input     = "f = " + f.str() + "; g = " + g.str();
                  if (auto bad = rank_relations(triple(f), triple(g), triple(compose(f, g)))) {
                    return fail(input, *bad);
                  }
                  return std::nullopt;
                }
                std::uint64_t j = i - cases;
                FMap const&   f = (*i3)[j / m];
                FMap const&   g = (*i3)[j % m];
                input           = "f = " + f.str() + "; g = " + g.str();
                if (auto bad = rank_relations(triple(f), triple(g), triple(fcompose(f, g)))) {
                  return fail(input, *bad);
                }
                return std::nullopt;
              }};
    }

    // -- Class suites ----------------------------------------------------

    std::vector<ClassId> classes_of(std::optional<Family> family) {
      std::vector<ClassId> out;
      for (auto const& c : instantiated_classes()) {
        if (!family || c.family == *family) {
          out.push_back(c);
        }
      }
      return out;
    }

    Planner plan_closure(Family family) {
      return [family](std::uint64_t seed, std::uint64_t cases) -> Plan {
        auto cls = std::make_shared<std::vector<ClassId>>(classes_of(family));
        return {cases * cls->size(), [=](std::uint64_t i, std::string& input) -> std::optional<Outcome> {
                  ClassId const& c   = (*cls)[i % cls->size()];
                  Rng            rng = sampling::case_rng(seed, i);
                  Chart          f   = sampling::class_member(rng, c);
                  Chart          g   = sampling::class_member(rng, c);
                  input = "class = " + c.str() + "; f = " + f.str() + "; g = " + g.str();
                  if (!in_class(c, f) || !in_class(c, g)) {
                    return fail(input, "sampled factor is not a member");
                  }
                  if (!in_class(c, compose(f, g))) {
                    return fail(input, "fg is not a member");
                  }
                  return std::nullopt;
                }};
      };
    }

    Plan plan_duality(std::uint64_t seed, std::uint64_t cases) {
      auto cls = std::make_shared<std::vector<ClassId>>(classes_of(std::nullopt));
      return {cases * cls->size(), [=](std::uint64_t i, std::string& input) -> std::optional<Outcome> {
                ClassId const& c     = (*cls)[i % cls->size()];
                ClassId        plain = c.with_variant(Variant::plain);
                ClassId        inv   = c.with_variant(Variant::inverse);
                ClassId        meet  = c.with_variant(Variant::meet);
                Rng            rng   = sampling::case_rng(seed, i);
                Chart          f     = sampling::class_candidate(rng, c);
                input                = "class = " + c.str() + "; f = " + f.str();
                Chart finv           = invert(f);
                bool  p              = in_class(plain, f);
                bool  q              = in_class(inv, f);
                if (p != in_class(inv, finv)) {
                  return fail(input, "plain(f) differs from inverse(f^-1)");
                }
                if (q != in_class(plain, finv)) {
                  return fail(input, "inverse(f) differs from plain(f^-1)");
                }
                if (in_class(meet, f) != (p && q)) {
                  return fail(input, "meet differs from the conjunction");
                }
                return std::nullopt;
              }};
    }

    Plan plan_witnesses(std::uint64_t, std::uint64_t) {
      auto table = std::make_shared<std::vector<Witness>>(witness_table());
      return {table->size() + 1, [=](std::uint64_t i, std::string& input) -> std::optional<Outcome> {
                if (i == table->size()) {
                  std::vector<std::pair<std::string, std::string>> pairs;
                  for (auto const& w : *table) {
                    pairs.emplace_back(w.in.str(), w.out.str());
                  }
                  std::sort(pairs.begin(), pairs.end());
                  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
                  input = "table of " + std::to_string(table->size());
                  if (pairs.size() < 12) {
                    return fail(input, "only " + std::to_string(pairs.size()) + " distinct pairs");
                  }
                  return std::nullopt;
                }
                Witness const& w = (*table)[i];
                input = "in = " + w.in.str() + "; out = " + w.out.str() + "; f = " + w.chart.str();
                if (!in_class(w.in, w.chart)) {
                  return fail(input, "not in the first class (" + w.recipe + ")");
                }
                if (in_class(w.out, w.chart)) {
                  return fail(input, "in the second class (" + w.recipe + ")");
                }
                return std::nullopt;
              }};
    }

    Plan plan_ideal(std::uint64_t seed, std::uint64_t cases) {
      auto cls = std::make_shared<std::vector<ClassId>>(classes_of(std::nullopt));
      return {cases, [=](std::uint64_t i, std::string& input) -> std::optional<Outcome> {
                Rng   rng = sampling::case_rng(seed, i);
                Chart e   = sampling::ideal_or_idempotent(rng);
                input     = "e = " + e.str();
                if (!in_F_ideal(e) && !is_partial_identity(e)) {
                  return fail(input, "sampled chart is neither of finite rank nor idempotent");
                }
                for (auto const& c : *cls) {
                  if (!in_class(c, e)) {
                    return fail(input, "missing from " + c.str());
                  }
                }
                Chart h = sampling::outside_ideal_and_idempotents(rng);
                input += "; h = " + h.str();
                if (in_F_ideal(h) || is_partial_identity(h)) {
                  return fail(input, "sampled h is in the ideal or idempotent");
                }
                ClassId c = excluding_maximal(h);
                c.validate();
                if (in_class(c, h)) {
                  return fail(input, "h is in " + c.str());
                }
                return std::nullopt;
              }};
    }

    // -- Finite model ----------------------------------------------------

    std::vector<FSet> sorted_predicted(int n) {
      std::vector<FSet> v;
      for (auto const& m : predicted_finite_maximals(n)) {
        v.push_back(m.set);
      }
      std::sort(v.begin(), v.end(), [](FSet const& a, FSet const& b) { return a.elems < b.elems; });
      return v;
    }

    Planner plan_classify(int n) {
      return [n](std::uint64_t, std::uint64_t) -> Plan {
        auto pred = std::make_shared<std::vector<NamedFSet>>(predicted_finite_maximals(n));
        // case 0: the universe; 1..k: each predicted member; n <= 3 adds
        // the exhaustive comparison
        std::uint64_t extra = n <= 3 ? 1 : 0;
        return {1 + pred->size() + extra, [=](std::uint64_t i, std::string& input) -> std::optional<Outcome> {
                  if (i == 0) {
                    std::size_t const want[] = {1, 2, 7, 34, 209};
                    std::size_t       got    = all_charts(n).size();
                    input                    = "|I_" + std::to_string(n) + "|";
                    if (got != want[n]) {
                      return fail(input, "got " + std::to_string(got));
                    }
                    return std::nullopt;
                  }
                  if (i <= pred->size()) {
                    auto const& m = (*pred)[i - 1];
                    input         = "predicted " + m.name;
                    if (!is_maximal(m.set, n)) {
                      return fail(input, "not maximal");
                    }
                    return std::nullopt;
                  }
                  input  = "exhaustive search n = " + std::to_string(n);
                  auto r = completeness_search(n);
                  if (r.partial) {
                    throw ResourceError("completeness search stopped by the budget");
                  }
                  if (r.maximal != sorted_predicted(n)) {
                    return fail(input, "found " + std::to_string(r.maximal.size()) + " maximal, predicted "
                                           + std::to_string(pred->size()));
                  }
                  if (r.maximal_inverse != r.maximal) {
                    return fail(input, "maximal inverse subsemigroups differ from the maximal ones");
                  }
                  return std::nullopt;
                }};
      };
    }

    std::string fset_text(std::vector<FMap> const& u) {
      std::string s = "{";
      for (std::size_t i = 0; i < u.size(); ++i) {
        s += (i ? ", " : "") + u[i].str();
      }
      return s + "}";
    }

    Plan plan_mutt(std::uint64_t seed, std::uint64_t cases) {
      auto i4 = std::make_shared<std::vector<FMap>>(all_charts(4));
      return {cases, [=](std::uint64_t i, std::string& input) -> std::optional<Outcome> {
                Rng               rng = sampling::case_rng(seed, i);
                std::vector<FMap> u;
                auto              k = sampling::uni(rng, 1, 4);
                while (static_cast<Int>(u.size()) < k) {
                  auto const& c = (*i4)[static_cast<std::size_t>(sampling::uni(rng, 0, static_cast<Int>(i4->size()) - 1))];
                  if (c.dom_mask() != 0) {
                    u.push_back(c);
                  }
                }
                input = "U = " + fset_text(u) + "; maxlen = 3";
                if (!injective_mutt_membership(u, 3)) {
                  return fail(input, "an injective mutt product lies outside the closure");
                }
                return std::nullopt;
              }};
    }

    // -- Partitions ------------------------------------------------------

    Plan plan_nxn(std::uint64_t, std::uint64_t) {
      return {2, [](std::uint64_t i, std::string& input) -> std::optional<Outcome> {
                int           n    = static_cast<int>(i) + 2;
                std::uint64_t want = n == 2 ? 7 * 7 : 337 * 337;
                input              = "n = " + std::to_string(n);
                auto r             = nxn_exhaustive(n);
                if (r.first_failure) {
                  return fail(input + "; rho = " + r.first_failure->first.str()
                                  + "; sigma = " + r.first_failure->second.str(),
                              std::to_string(r.failures) + " pairs without n x n");
                }
                if (r.pairs != want) {
                  return fail(input, "enumerated " + std::to_string(r.pairs) + " pairs");
                }
                return std::nullopt;
              }};
    }

    Plan plan_padding(std::uint64_t seed, std::uint64_t cases) {
      return {cases, [=](std::uint64_t i, std::string& input) -> std::optional<Outcome> {
                Rng          rng = sampling::case_rng(seed, i);
                FinPartition p   = FinPartition::residues(static_cast<int>(2 + i % 2));
                Chart        f   = sampling::random_chart(rng);
                Chart        g   = sampling::random_chart(rng);
                input            = "p = " + p.str() + "; f = " + f.str() + "; g = " + g.str();
                Chart a          = padding_perm(p, f, g);
                if (!in_partition_stab(p, a)) {
                  return fail(input + "; a = " + a.str(), "a is not in Stab(p)");
                }
                if (rho_of(p, compose(compose(f, a), g)) != rel_compose(rho_of(p, f), rho_of(p, g))) {
                  return fail(input + "; a = " + a.str(), "rho(fag) differs from rho(f) rho(g)");
                }
                return std::nullopt;
              }};
    }

    Plan plan_rho_lax(std::uint64_t seed, std::uint64_t cases) {
      return {cases, [=](std::uint64_t i, std::string& input) -> std::optional<Outcome> {
                Rng          rng = sampling::case_rng(seed, i);
                FinPartition p   = FinPartition::residues(static_cast<int>(2 + i % 3));
                Chart        f   = sampling::random_chart(rng);
                Chart        g   = sampling::random_chart(rng);
                input            = "p = " + p.str() + "; f = " + f.str() + "; g = " + g.str();
                BinRel fg        = rho_of(p, compose(f, g));
                BinRel prod      = rel_compose(rho_of(p, f), rho_of(p, g));
                if ((fg.bits & ~prod.bits) != 0) {
                  return fail(input, "rho(fg) = " + fg.str() + " is not inside " + prod.str());
                }
                return std::nullopt;
              }};
    }

    Plan plan_sandwich(std::uint64_t seed, std::uint64_t cases) {
      return {cases, [=](std::uint64_t i, std::string& input) -> std::optional<Outcome> {
                EPSet y    = EPSet::residue_class(0, 2);
                EPSet rest = y.complement();
                Chart f    = Chart::affine(4, 0);
                Chart g    = invert(Chart::affine(4, 2));
                Rng   rng  = sampling::case_rng(seed, i);
                Chart h    = sampling::random_chart(rng);
                input      = "h = " + h.str();
                Chart q    = sandwich_factorize(h, f, g, y);
                input += "; p = " + q.str();
                if (compose(compose(f, q), g) != h) {
                  return fail(input, "f p g differs from h");
                }
                if (!q.is_permutation()) {
                  return fail(input, "p is not a permutation");
                }
                if (restrict(q, rest) != Chart::identity(rest)) {
                  return fail(input, "p moves a point outside Y");
                }
                return std::nullopt;
              }};
    }

    // -- Ultrafilter -----------------------------------------------------

    Plan plan_uf_axioms(std::uint64_t seed, std::uint64_t cases) {
      return {cases, [=](std::uint64_t i, std::string& input) -> std::optional<Outcome> {
                UFOracle F   = UFOracle::tower();
                Rng      rng = sampling::case_rng(seed, i);
                EPSet    a   = sampling::random_set(rng);
                EPSet    b   = sampling::random_set(rng);
                input        = "A = " + a.str() + "; B = " + b.str();
                if (i == 0 && (uf_contains(F, EPSet::empty()) || !uf_contains(F, EPSet::naturals()))) {
                  return fail(input, "empty set in F or N not in F");
                }
                bool in_a = uf_contains(F, a);
                bool in_b = uf_contains(F, b);
                if (in_a == uf_contains(F, a.complement())) {
                  return fail(input, "not exactly one of A and its complement");
                }
                if (in_a && !uf_contains(F, a | b)) {
                  return fail(input, "not upward closed");
                }
                if (in_a && in_b && !uf_contains(F, a & b)) {
                  return fail(input, "not closed under intersection");
                }
                if (in_a && a.is_finite()) {
                  return fail(input, "finite member");
                }
                return std::nullopt;
              }};
    }

    Plan plan_uf_stabiliser(std::uint64_t seed, std::uint64_t cases) {
      return {cases, [=](std::uint64_t i, std::string& input) -> std::optional<Outcome> {
                UFOracle F   = UFOracle::tower();
                Rng      rng = sampling::case_rng(seed, i);
                Chart    f   = i % 2 ? sampling::filter_stabiliser_element(rng, F) : sampling::random_chart(rng);
                input        = "f = " + f.str();
                bool stab    = stabilises_filter(F, f);
                auto w       = stabiliser_witness(F, f);
                if (stab == w.has_value()) {
                  return fail(input, "decision and witness disagree");
                }
                if (w && (!uf_contains(F, *w) || uf_contains(F, image_of_set(f, *w)))) {
                  return fail(input + "; S = " + w->str(), "witness does not separate");
                }
                if (stab) {
                  for (int j = 0; j < 1000; ++j) {
                    EPSet s = sampling::random_set(rng);
                    if (uf_contains(F, s) != uf_contains(F, image_of_set(f, s))) {
                      return fail(input + "; S = " + s.str(), "S in F differs from f(S) in F");
                    }
                  }
                }
                return std::nullopt;
              }};
    }

    Plan plan_uf_forms(std::uint64_t seed, std::uint64_t cases) {
      auto cls = std::make_shared<std::vector<ClassId>>(classes_of(Family::V));
      return {cases, [=](std::uint64_t i, std::string& input) -> std::optional<Outcome> {
                ClassId const& c   = (*cls)[i % cls->size()];
                Rng            rng = sampling::case_rng(seed, i);
                Chart          f   = sampling::class_candidate(rng, c);
                input              = "class = " + c.str() + "; f = " + f.str();
                if (in_class(c, f) != in_class_V_alternative(c, f)) {
                  return fail(input, "the two forms disagree");
                }
                return std::nullopt;
              }};
    }

    struct SuiteEntry {
      SuiteInfo info;
      Planner   plan;
    };

    std::vector<SuiteEntry> const& registry() {
      static std::vector<SuiteEntry> const r = {
          {{"rank-relations", "rank, collapse and defect relations on random pairs and all of I_3 x I_3", 10000},
           plan_rank_relations},
          {{"closure-S", "symmetric group classes closed under composition", 10000}, plan_closure(Family::S)},
          {{"closure-P", "pointwise stabiliser classes closed under composition", 10000},
           plan_closure(Family::P)},
          {{"closure-V", "ultrafilter classes closed under composition", 10000}, plan_closure(Family::V)},
          {{"closure-A", "partition classes closed under composition", 10000}, plan_closure(Family::A)},
          {{"duality", "inverse variant is the mirror image and meet is the conjunction", 10000},
           plan_duality},
          {{"witnesses", "separating charts for the curated class pairs", 0}, plan_witnesses},
          {{"finite-classify-n2", "predicted maximals of I_2 against the powerset", 0}, plan_classify(2)},
          {{"finite-classify-n3", "predicted maximals of I_3 verified and compared exhaustively", 0},
           plan_classify(3)},
          {{"finite-classify-n4", "predicted maximals of I_4 verified", 0}, plan_classify(4)},
          {{"mutt", "injective mutt products of random U in I_4 lie in the closure", 200}, plan_mutt},
          {{"nxn", "every admissible pair generates n x n, n = 2, 3", 0}, plan_nxn},
          {{"padding", "padding permutations make rho multiplicative", 1000}, plan_padding},
          {{"rho-lax", "rho(fg) inside rho(f) rho(g)", 10000}, plan_rho_lax},
          {{"sandwich", "sandwich factorization through a permutation fixing the rest", 1000}, plan_sandwich},
          {{"ultrafilter-axioms", "zero tower satisfies the ultrafilter axioms", 10000}, plan_uf_axioms},
          {{"ultrafilter-stabiliser", "stabiliser decision against sampled sets", 500}, plan_uf_stabiliser},
          {{"ultrafilter-forms", "two definitions of the ultrafilter classes agree", 10000}, plan_uf_forms},
          {{"ideal-in-every-class", "ideal and idempotents in every class, others excluded", 1000}, plan_ideal},
      };
      return r;
    }

    SuiteEntry const& find_suite(std::string_view name) {
      for (auto const& e : registry()) {
        if (e.info.name == name) {
          return e;
        }
      }
      throw InvalidParameter("unknown suite '" + std::string(name) + "'");
    }

    std::optional<CaseFailure> run_case(Plan const& plan, std::uint64_t i) {
      std::string input;
      try {
        if (auto bad = plan.run(i, input)) {
          return CaseFailure{i, "fail", bad->input, bad->message};
        }
        return std::nullopt;
      } catch (ResourceError const& e) {
        return CaseFailure{i, "resource", input, e.what()};
      } catch (std::exception const& e) {
        return CaseFailure{i, "error", input, e.what()};
      }
    }

    void fnv(std::uint64_t& h, std::string_view s) {
      for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
      }
      h ^= 0xff;
      h *= 0x100000001b3ULL;
    }

    std::uint64_t content_hash(SuiteReport const& r) {
      std::uint64_t h = 0xcbf29ce484222325ULL;
      fnv(h, r.suite);
      fnv(h, std::to_string(r.seed));
      fnv(h, std::to_string(r.cases));
      for (auto const& f : r.failures) {
        fnv(h, std::to_string(f.index));
        fnv(h, f.kind);
        fnv(h, f.input);
        fnv(h, f.message);
      }
      return h;
    }

    SuiteReport run(std::string_view name, std::uint64_t seed, std::uint64_t cases, bool parallel) {
      auto const& entry = find_suite(name);
      if (cases == 0) {
        cases = entry.info.default_cases;
      }
      auto start = std::chrono::steady_clock::now();
      Plan plan  = entry.plan(seed, cases);

      std::vector<std::optional<CaseFailure>> slots(plan.count);
      auto const n = static_cast<std::int64_t>(plan.count);
      if (parallel) {
#pragma omp parallel for schedule(dynamic, 4)
        for (std::int64_t i = 0; i < n; ++i) {
          slots[static_cast<std::size_t>(i)] = run_case(plan, static_cast<std::uint64_t>(i));
        }
      } else {
        for (std::int64_t i = 0; i < n; ++i) {
          slots[static_cast<std::size_t>(i)] = run_case(plan, static_cast<std::uint64_t>(i));
        }
      }

      SuiteReport r;
      r.suite = entry.info.name;
      r.seed  = seed;
      r.cases = plan.count;
      for (auto& s : slots) {
        if (s) {
          r.failures.push_back(std::move(*s));
        }
      }
      r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      r.hash    = content_hash(r);
      return r;
    }

    std::string hex(std::uint64_t h) {
      std::ostringstream os;
      os << std::hex << h;
      std::string s = os.str();
      return std::string(16 - s.size(), '0') + s;
    }

  }  // namespace

  bool SuiteReport::resource_only() const {
    return !failures.empty()
           && std::all_of(failures.begin(), failures.end(), [](auto const& f) { return f.kind == "resource"; });
  }

  std::vector<SuiteInfo> const& suites() {
    static std::vector<SuiteInfo> const s = [] {
      std::vector<SuiteInfo> v;
      for (auto const& e : registry()) {
        v.push_back(e.info);
      }
      return v;
    }();
    return s;
  }

  SuiteReport run_suite(std::string_view name, std::uint64_t seed, std::uint64_t cases) {
    return run(name, seed, cases, true);
  }

  SuiteReport run_suite_serial(std::string_view name, std::uint64_t seed, std::uint64_t cases) {
    return run(name, seed, cases, false);
  }

  std::string report_records(SuiteReport const& r) {
    using nlohmann::json;
    std::string out = json{{"type", "suite"},
                           {"suite", r.suite},
                           {"seed", r.seed},
                           {"cases", r.cases},
                           {"failures", r.failures.size()},
                           {"wall_ms", r.wall_ms},
                           {"hash", hex(r.hash)}}
                          .dump()
                      + "\n";
    for (auto const& f : r.failures) {
      out += json{{"type", "failure"},
                  {"suite", r.suite},
                  {"index", f.index},
                  {"kind", f.kind},
                  {"input", f.input},
                  {"message", f.message}}
                 .dump()
             + "\n";
    }
    return out;
  }

  std::string report_text(SuiteReport const& r) {
    std::ostringstream os;
    os << r.suite << ": " << (r.passed() ? "pass" : "FAIL") << ", " << r.cases << " cases, " << r.failures.size()
       << " failures, seed " << r.seed << ", hash " << hex(r.hash) << ", " << static_cast<long>(r.wall_ms)
       << " ms\n";
    std::size_t shown = 0;
    for (auto const& f : r.failures) {
      if (++shown > 10) {
        os << "  ... " << r.failures.size() - 10 << " more\n";
        break;
      }
      os << "  case " << f.index << " [" << f.kind << "] " << f.message << "\n    " << f.input << "\n";
    }
    return os.str();
  }

  std::vector<ConditionResult> check_conditions(std::vector<FMap> const& gens, std::vector<FSet> const& family,
                                                int n) {
    if (n < 1 || n > 5) {
      throw PreconditionError("check_conditions needs 1 <= n <= 5, got " + std::to_string(n));
    }
    auto check_size = [n](FMap const& f) {
      if (f.n != n) {
        throw PreconditionError("chart " + f.str() + " is not on " + std::to_string(n) + " points");
      }
    };
    for (auto const& g : gens) {
      check_size(g);
    }
    for (auto const& m : family) {
      for (auto const& f : m.elems) {
        check_size(f);
      }
    }
    auto        universe = all_charts(n);
    FSet const  group    = gens.empty() ? FSet{} : closure(gens);
    std::size_t total    = universe.size();

    std::vector<ConditionResult> out;

    ConditionResult c1{"i", "G is contained in every member", true, true, ""};
    for (std::size_t k = 0; k < family.size() && c1.passed; ++k) {
      for (auto const& g : group.elems) {
        if (!family[k].contains(g)) {
          c1.passed         = false;
          c1.counterexample = "member " + std::to_string(k) + " misses " + g.str();
          break;
        }
      }
    }
    out.push_back(c1);

    ConditionResult c2{"ii", "every member is a proper subsemigroup", true, true, ""};
    for (std::size_t k = 0; k < family.size() && c2.passed; ++k) {
      if (family[k].size() == total) {
        c2.passed         = false;
        c2.counterexample = "member " + std::to_string(k) + " is all of I_" + std::to_string(n);
        break;
      }
      for (auto const& a : family[k].elems) {
        for (auto const& b : family[k].elems) {
          if (!family[k].contains(fcompose(a, b))) {
            c2.passed         = false;
            c2.counterexample = "member " + std::to_string(k) + ": " + a.str() + " " + b.str() + " = "
                                + fcompose(a, b).str() + " is missing";
            break;
          }
        }
        if (!c2.passed) {
          break;
        }
      }
    }
    out.push_back(c2);

    ConditionResult c3{"iii", "no member contains another", true, true, ""};
    for (std::size_t a = 0; a < family.size() && c3.passed; ++a) {
      for (std::size_t b = 0; b < family.size(); ++b) {
        if (a != b && fset_subset(family[a], family[b])) {
          c3.passed         = false;
          c3.counterexample = "member " + std::to_string(a) + " is contained in member " + std::to_string(b);
          break;
        }
      }
    }
    out.push_back(c3);

    ConditionResult c4{"iv", "the family is closed under inversion", true, true, ""};
    for (std::size_t k = 0; k < family.size(); ++k) {
      FSet inv = fset_inverse(family[k]);
      if (std::find(family.begin(), family.end(), inv) == family.end()) {
        c4.passed         = false;
        c4.counterexample = "the inverse of member " + std::to_string(k) + " is not in the family";
        break;
      }
    }
    out.push_back(c4);

    out.push_back({"v", "every maximal subsemigroup containing G is in the family", false, false,
                   "not checked; use the exhaustive search for n <= 3"});
    return out;
  }

}  // namespace ixm
