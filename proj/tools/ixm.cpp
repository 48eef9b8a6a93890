// ixm: command-line front end.
//
// Exit codes: 0 pass, 1 failures, 2 usage, 3 resource guard.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ixm/chart.hpp"
#include "ixm/classes.hpp"
#include "ixm/error.hpp"
#include "ixm/finite_model.hpp"
#include "ixm/harness.hpp"
#include "ixm/partition.hpp"
#include "ixm/ultrafilter.hpp"

namespace {

  constexpr int kPass     = 0;
  constexpr int kFailures = 1;
  constexpr int kUsage    = 2;
  constexpr int kResource = 3;

  // keys print in insertion order
  using json = nlohmann::ordered_json;

  struct Output {
    std::string const* format = nullptr;

    bool records() const {
      return *format == "records";
    }

    // text: "key: value" lines; records: one JSON object
    void emit(json const& j) const {
      if (records()) {
        std::cout << j.dump() << "\n";
        return;
      }
      for (auto const& [k, v] : j.items()) {
        std::cout << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
      }
    }
  };

  std::vector<ixm::FMap> parse_fmaps(std::vector<std::string> const& texts) {
    std::vector<ixm::FMap> out;
    for (auto const& t : texts) {
      out.push_back(ixm::FMap::parse(t));
    }
    return out;
  }

  json fset_json(ixm::FSet const& s) {
    json a = json::array();
    for (auto const& f : s.elems) {
      a.push_back(f.str());
    }
    return a;
  }

  json stats_json(ixm::Chart const& f) {
    auto s = ixm::stats(f);
    json j = {{"chart", f.str()},
              {"rank", s.rank.str()},
              {"collapse", s.collapse.str()},
              {"defect", s.defect.str()},
              {"dom", s.dom.str()},
              {"im", s.im.str()}};
    if (s.support) {
      j["support"] = s.support->str();
    }
    return j;
  }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symbolic partial bijections of N and their maximal inverse subsemigroups"};
  app.require_subcommand(1);

  std::string format = "text";
  app.add_option("--format", format, "text or records")->check(CLI::IsMember({"text", "records"}));

  Output out{&format};
  int    status = kPass;

  // chart
  auto* chart = app.add_subcommand("chart", "parse, compose, invert and measure charts");
  chart->require_subcommand(1);
  std::string chart_f, chart_g;
  auto*       chart_parse = chart->add_subcommand("parse", "canonical form");
  chart_parse->add_option("f", chart_f)->required();
  chart_parse->callback([&] { out.emit({{"chart", ixm::Chart::parse(chart_f).str()}}); });
  auto* chart_compose = chart->add_subcommand("compose", "x |-> ((x)f)g");
  chart_compose->add_option("f", chart_f)->required();
  chart_compose->add_option("g", chart_g)->required();
  chart_compose->callback([&] {
    out.emit({{"chart", ixm::compose(ixm::Chart::parse(chart_f), ixm::Chart::parse(chart_g)).str()}});
  });
  auto* chart_invert = chart->add_subcommand("invert", "inverse chart");
  chart_invert->add_option("f", chart_f)->required();
  chart_invert->callback([&] { out.emit({{"chart", ixm::invert(ixm::Chart::parse(chart_f)).str()}}); });
  auto* chart_stats = chart->add_subcommand("stats", "rank, collapse, defect, domain, image");
  chart_stats->add_option("f", chart_f)->required();
  chart_stats->callback([&] { out.emit(stats_json(ixm::Chart::parse(chart_f))); });

  // class
  auto* cls = app.add_subcommand("class", "class membership and separating witnesses");
  cls->require_subcommand(1);
  std::string class_a, class_b, class_f;
  auto*       cls_member = cls->add_subcommand("member", "is the chart in the class");
  cls_member->add_option("class", class_a)->required();
  cls_member->add_option("f", class_f)->required();
  cls_member->callback([&] {
    auto c = ixm::ClassId::parse(class_a);
    auto f = ixm::Chart::parse(class_f);
    out.emit({{"class", c.str()}, {"chart", f.str()}, {"member", ixm::in_class(c, f)}});
  });
  auto* cls_witness = cls->add_subcommand("witness", "chart in the first class and not the second");
  cls_witness->add_option("in", class_a)->required();
  cls_witness->add_option("out", class_b)->required();
  cls_witness->callback([&] {
    auto w = ixm::witness(ixm::ClassId::parse(class_a), ixm::ClassId::parse(class_b));
    out.emit({{"in", w.in.str()}, {"out", w.out.str()}, {"recipe", w.recipe}, {"chart", w.chart.str()}});
  });
  auto* cls_list = cls->add_subcommand("list", "the instantiated classes");
  cls_list->callback([&] {
    for (auto const& c : ixm::instantiated_classes()) {
      out.emit({{"class", c.str()}});
    }
  });

  // uf
  auto* uf = app.add_subcommand("uf", "ultrafilters on eventually periodic sets");
  uf->require_subcommand(1);
  std::string uf_text, uf_arg;
  auto*       uf_contains = uf->add_subcommand("contains", "is the set in the ultrafilter");
  uf_contains->add_option("uf", uf_text)->required();
  uf_contains->add_option("set", uf_arg)->required();
  uf_contains->callback([&] {
    auto F = ixm::UFOracle::parse(uf_text);
    auto s = ixm::EPSet::parse(uf_arg);
    out.emit({{"uf", F.str()}, {"set", s.str()}, {"contains", ixm::uf_contains(F, s)}});
  });
  auto* uf_stab = uf->add_subcommand("stabilises", "does the chart stabilise the ultrafilter");
  uf_stab->add_option("uf", uf_text)->required();
  uf_stab->add_option("f", uf_arg)->required();
  uf_stab->callback([&] {
    auto F = ixm::UFOracle::parse(uf_text);
    auto f = ixm::Chart::parse(uf_arg);
    json j = {{"uf", F.str()}, {"chart", f.str()}, {"stabilises", ixm::stabilises_filter(F, f)}};
    if (auto w = ixm::stabiliser_witness(F, f)) {
      j["witness"] = w->str();
    }
    out.emit(j);
  });

  // rel
  auto* rel = app.add_subcommand("rel", "binary relations and the partition action");
  rel->require_subcommand(1);
  std::string rel_a, rel_b, rel_c;
  auto*       rel_compose = rel->add_subcommand("compose", "relational product");
  rel_compose->add_option("r", rel_a)->required();
  rel_compose->add_option("s", rel_b)->required();
  rel_compose->callback([&] {
    out.emit({{"rel", ixm::rel_compose(ixm::BinRel::parse(rel_a), ixm::BinRel::parse(rel_b)).str()}});
  });
  auto* rel_rho = rel->add_subcommand("rho", "block relation of a chart");
  rel_rho->add_option("partition", rel_a)->required();
  rel_rho->add_option("f", rel_b)->required();
  rel_rho->callback([&] {
    out.emit({{"rel", ixm::rho_of(ixm::FinPartition::parse(rel_a), ixm::Chart::parse(rel_b)).str()}});
  });
  auto* rel_padding = rel->add_subcommand("padding", "a in Stab(p) with rho(fag) = rho(f) rho(g)");
  rel_padding->add_option("partition", rel_a)->required();
  rel_padding->add_option("f", rel_b)->required();
  rel_padding->add_option("g", rel_c)->required();
  rel_padding->callback([&] {
    auto p = ixm::FinPartition::parse(rel_a);
    auto f = ixm::Chart::parse(rel_b);
    auto g = ixm::Chart::parse(rel_c);
    auto a = ixm::padding_perm(p, f, g);
    out.emit({{"a", a.str()}, {"rho_fag", ixm::rho_of(p, ixm::compose(ixm::compose(f, a), g)).str()}});
  });

  // finite
  auto* finite = app.add_subcommand("finite", "the finite model I_n");
  finite->require_subcommand(1);
  int   finite_n       = 3;
  auto* finite_closure = finite->add_subcommand("closure", "semigroup generated by charts such as [1,_,0]");
  // raw arguments: CLI11 would split [a,b] into a list
  finite_closure->allow_extras();
  finite_closure->callback([&] {
    auto gens = finite_closure->remaining();
    if (gens.empty()) {
      throw CLI::RequiredError("generators");
    }
    auto s = ixm::closure(parse_fmaps(gens));
    out.emit({{"size", s.size()}, {"elements", fset_json(s)}});
  });
  auto* finite_classify = finite->add_subcommand("classify", "predicted maximal subsemigroups, verified");
  finite_classify->add_option("n", finite_n)->required()->check(CLI::Range(2, 4));
  finite_classify->callback([&] {
    for (auto const& m : ixm::predicted_finite_maximals(finite_n)) {
      bool ok = ixm::is_maximal(m.set, finite_n);
      out.emit({{"name", m.name}, {"size", m.set.size()}, {"maximal", ok}});
      if (!ok) {
        status = kFailures;
      }
    }
  });
  auto* finite_complete = finite->add_subcommand("completeness", "every maximal subsemigroup, exhaustively");
  finite_complete->add_option("n", finite_n)->required()->check(CLI::Range(1, 3));
  finite_complete->callback([&] {
    auto r = ixm::completeness_search(finite_n);
    if (r.partial) {
      std::cerr << "search stopped by the budget\n";
      status = kResource;
    }
    out.emit({{"closed_sets", r.closed_sets},
              {"maximal", r.maximal.size()},
              {"maximal_inverse", r.maximal_inverse.size()},
              {"partial", r.partial}});
    for (auto const& m : r.maximal) {
      out.emit({{"maximal", fset_json(m)}});
    }
  });

  // laws
  auto*         laws = app.add_subcommand("laws", "run property suites");
  std::uint64_t seed = 1, cases = 0;
  std::string   suite;
  bool          list = false;
  laws->add_option("--seed", seed, "seed of the run");
  laws->add_option("--cases", cases, "random cases; 0 for the suite default");
  laws->add_option("--suite", suite, "suite id, or all");
  laws->add_flag("--list", list, "list suites");
  laws->callback([&] {
    if (list || suite.empty()) {
      for (auto const& s : ixm::suites()) {
        out.emit({{"suite", s.name}, {"default_cases", s.default_cases}, {"summary", s.summary}});
      }
      if (!list) {
        throw CLI::RequiredError("--suite");
      }
      return;
    }
    std::vector<std::string> names;
    if (suite == "all") {
      for (auto const& s : ixm::suites()) {
        names.push_back(s.name);
      }
    } else {
      names.push_back(suite);
    }
    for (auto const& name : names) {
      auto r = ixm::run_suite(name, seed, cases);
      std::cout << (out.records() ? ixm::report_records(r) : ixm::report_text(r));
      if (r.resource_only()) {
        status = std::max(status, kResource);
      } else if (!r.passed()) {
        status = kFailures;
      }
    }
  });

  // conditions
  auto*                    cond = app.add_subcommand("conditions", "conditions on a family of maximals");
  int   cond_n = 3;
  cond->add_option("n", cond_n)->required()->check(CLI::Range(1, 5));
  cond->footer("Extra arguments are generators of G, default Sym(n).");
  cond->allow_extras();
  cond->callback([&] {
    auto extra = cond->remaining();
    auto gens  = extra.empty() ? ixm::all_perms(cond_n) : parse_fmaps(extra);
    std::vector<ixm::FSet> family;
    for (auto const& m : ixm::predicted_finite_maximals(cond_n)) {
      family.push_back(m.set);
    }
    for (auto const& c : ixm::check_conditions(gens, family, cond_n)) {
      out.emit({{"condition", c.label},
                {"description", c.description},
                {"result", c.checked ? (c.passed ? "pass" : "fail") : "out of scope"},
                {"counterexample", c.counterexample}});
      if (c.checked && !c.passed) {
        status = kFailures;
      }
    }
  });

  try {
    app.parse(argc, argv);
  } catch (CLI::CallForHelp const& e) {
    return app.exit(e) == 0 ? kPass : kUsage;
  } catch (CLI::CallForAllHelp const& e) {
    return app.exit(e) == 0 ? kPass : kUsage;
  } catch (CLI::ParseError const& e) {
    app.exit(e);
    return kUsage;
  } catch (ixm::ResourceError const& e) {
    std::cerr << "resource guard: " << e.what() << "\n";
    return kResource;
  } catch (ixm::ParseError const& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (ixm::InvalidParameter const& e) {
    std::cerr << "invalid parameter: " << e.what() << "\n";
    return kUsage;
  } catch (ixm::PreconditionError const& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    return kUsage;
  } catch (std::exception const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailures;
  }
  return status;
}
