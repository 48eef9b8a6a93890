#include "ixm/classes.hpp"

#include <algorithm>
#include <sstream>

#include "ixm/error.hpp"

namespace ixm {

  // ---------------------------------------------------------------------
  // class identifiers

  ClassId ClassId::S(Card mu, Variant v) {
    ClassId c;
    c.family  = Family::S;
    c.variant = v;
    c.mu      = mu;
    c.validate();
    return c;
  }

  ClassId ClassId::P(EPSet gamma, Card mu, Variant v) {
    ClassId c;
    c.family  = Family::P;
    c.variant = v;
    c.gamma   = std::move(gamma);
    c.mu      = mu;
    c.validate();
    return c;
  }

  ClassId ClassId::V(UFOracle uf, Card mu, Variant v, bool relaxed) {
    ClassId c;
    c.family  = Family::V;
    c.variant = v;
    c.uf      = std::move(uf);
    c.mu      = mu;
    c.relaxed = relaxed;
    c.validate();
    return c;
  }

  ClassId ClassId::A(FinPartition p, Variant v) {
    ClassId c;
    c.family    = Family::A;
    c.variant   = v;
    c.partition = std::move(p);
    c.validate();
    return c;
  }

  void ClassId::validate() const {
    switch (family) {
      case Family::S:
        if (mu != Card::fin(1) && mu != Card::aleph0()) {
          throw InvalidParameter("S classes need mu = 1 or mu = aleph0, got " + mu.str());
        }
        break;
      case Family::P:
        if (!gamma.is_finite() || gamma.is_empty()) {
          throw InvalidParameter("P classes need a finite non-empty gamma, got " + gamma.str());
        }
        if (mu != Card::aleph0() && mu != Card::aleph1()) {
          throw InvalidParameter("P classes need mu = aleph0 or aleph1, got " + mu.str());
        }
        break;
      case Family::V:
        if (uf.is_principal()) {
          throw InvalidParameter("V classes need a non-principal ultrafilter, got " + uf.str());
        }
        if (mu != Card::aleph0() && mu != Card::aleph1()) {
          throw InvalidParameter("V classes need mu = aleph0 or aleph1, got " + mu.str());
        }
        if (!relaxed && !(uf_min(uf) < mu)) {
          throw InvalidParameter("V classes need min(uf) = " + uf_min(uf).str() + " < mu = "
                                 + mu.str());
        }
        break;
      case Family::A:
        break;
    }
  }

  ClassId ClassId::with_variant(Variant v) const {
    ClassId c = *this;
    c.variant = v;
    return c;
  }

  ClassId ClassId::mirrored() const {
    switch (variant) {
      case Variant::plain:
        return with_variant(Variant::inverse);
      case Variant::inverse:
        return with_variant(Variant::plain);
      case Variant::meet:
        break;
    }
    return *this;
  }

  namespace {

    std::string mu_text(Card mu) {
      return mu.is_finite() ? std::to_string(mu.value()) : mu.str();
    }

    Card parse_mu(std::string const& s) {
      if (!s.empty() && std::all_of(s.begin(), s.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
        return Card::fin(std::stoull(s));
      }
      return Card::parse(s);
    }

    std::string gamma_text(EPSet const& g) {
      std::string s = "{";
      for (std::size_t i = 0; i < g.low().size(); ++i) {
        s += (i ? "," : "") + std::to_string(g.low()[i]);
      }
      return s + "}";
    }

    std::string uf_text(UFOracle const& F) {
      if (F.is_principal()) {
        return "principal(" + std::to_string(F.point()) + ")";
      }
      if (F.is_zero_tower()) {
        return "tower";
      }
      std::string full = F.str();  // uf tower [..]
      auto        open = full.find('[');
      return "tower(" + full.substr(open + 1, full.size() - open - 2) + ")";
    }

    std::string trim(std::string_view s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
      }
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
      }
      return std::string(s);
    }

    // key=value items separated by ';' outside brackets
    std::vector<std::pair<std::string, std::string>> split_params(std::string_view body) {
      std::vector<std::pair<std::string, std::string>> out;
      int                                              depth = 0;
      std::size_t                                      start = 0;
      auto flush = [&](std::size_t end) {
        std::string item = trim(body.substr(start, end - start));
        if (item.empty()) {
          throw ParseError("class: empty parameter");
        }
        auto eq = item.find('=');
        if (eq == std::string::npos) {
          out.emplace_back(item, "");
        } else {
          out.emplace_back(trim(item.substr(0, eq)), trim(item.substr(eq + 1)));
        }
      };
      for (std::size_t i = 0; i < body.size(); ++i) {
        char ch = body[i];
        if (ch == '[' || ch == '(' || ch == '{') {
          ++depth;
        } else if (ch == ']' || ch == ')' || ch == '}') {
          --depth;
        } else if (ch == ';' && depth == 0) {
          flush(i);
          start = i + 1;
        }
      }
      if (depth != 0) {
        throw ParseError("class: unbalanced brackets");
      }
      if (trim(body).size()) {
        flush(body.size());
      }
      return out;
    }

    EPSet parse_gamma(std::string const& s) {
      if (s.size() < 2 || s.front() != '{' || s.back() != '}') {
        throw ParseError("class: gamma must look like {0,2}, got '" + s + "'");
      }
      std::vector<Int>  xs;
      std::stringstream in(s.substr(1, s.size() - 2));
      std::string       item;
      while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty() || !std::all_of(item.begin(), item.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
          throw ParseError("class: bad gamma element '" + item + "'");
        }
        xs.push_back(std::stoll(item));
      }
      return EPSet::finite(xs);
    }

    UFOracle parse_uf(std::string const& s) {
      if (s == "tower") {
        return UFOracle::tower();
      }
      auto inner = [&](std::string_view head) {
        if (!s.starts_with(head) || s.back() != ')') {
          throw ParseError("class: bad ultrafilter '" + s + "'");
        }
        return s.substr(head.size(), s.size() - head.size() - 1);
      };
      if (s.starts_with("tower(")) {
        return UFOracle::parse("uf tower [" + inner("tower(") + "]");
      }
      if (s.starts_with("principal(")) {
        return UFOracle::parse("uf principal " + inner("principal("));
      }
      throw ParseError("class: bad ultrafilter '" + s + "'");
    }

  }  // namespace

  std::string ClassId::str() const {
    static constexpr char const* kFamily[]  = {"S", "P", "V", "A"};
    static constexpr char const* kVariant[] = {"", "inv", "meet"};
    std::string s = std::string(kFamily[static_cast<int>(family)]) + kVariant[static_cast<int>(variant)] + "[";
    switch (family) {
      case Family::S:
        s += "mu=" + mu_text(mu);
        break;
      case Family::P:
        s += "gamma=" + gamma_text(gamma) + ";mu=" + mu_text(mu);
        break;
      case Family::V:
        s += "uf=" + uf_text(uf) + ";mu=" + mu_text(mu) + (relaxed ? ";relaxed" : "");
        break;
      case Family::A:
        if (partition == FinPartition::residues(partition.size())) {
          s += "blocks=" + std::to_string(partition.size());
        } else {
          s += "part=" + partition.str();
        }
        break;
    }
    return s + "]";
  }

  ClassId ClassId::parse(std::string_view text) {
    std::string t     = trim(text);
    auto        open  = t.find('[');
    if (open == std::string::npos || t.back() != ']') {
      throw ParseError("class: expected NAME[params], got '" + t + "'");
    }
    std::string head = t.substr(0, open);
    ClassId     c;
    if (head.empty() || std::string("SPVA").find(head[0]) == std::string::npos) {
      throw ParseError("class: unknown family '" + head + "'");
    }
    c.family         = static_cast<Family>(std::string("SPVA").find(head[0]));
    std::string rest = head.substr(1);
    if (rest.empty()) {
      c.variant = Variant::plain;
    } else if (rest == "inv") {
      c.variant = Variant::inverse;
    } else if (rest == "meet") {
      c.variant = Variant::meet;
    } else {
      throw ParseError("class: unknown variant '" + rest + "'");
    }
    bool have_mu = false, have_gamma = false, have_uf = false, have_part = false;
    for (auto const& [key, value] : split_params(std::string_view(t).substr(open + 1, t.size() - open - 2))) {
      if (key == "mu" && c.family != Family::A) {
        c.mu    = parse_mu(value);
        have_mu = true;
      } else if (key == "gamma" && c.family == Family::P) {
        c.gamma    = parse_gamma(value);
        have_gamma = true;
      } else if (key == "uf" && c.family == Family::V) {
        c.uf    = parse_uf(value);
        have_uf = true;
      } else if (key == "relaxed" && c.family == Family::V && value.empty()) {
        c.relaxed = true;
      } else if (key == "blocks" && c.family == Family::A) {
        try {
          c.partition = FinPartition::residues(std::stoi(value));
        } catch (std::exception const&) {
          throw ParseError("class: bad block count '" + value + "'");
        }
        have_part = true;
      } else if (key == "part" && c.family == Family::A) {
        c.partition = FinPartition::parse(value);
        have_part   = true;
      } else {
        throw ParseError("class: unexpected parameter '" + key + "' for " + head);
      }
    }
    bool complete = c.family == Family::S   ? have_mu
                    : c.family == Family::P ? have_mu && have_gamma
                    : c.family == Family::V ? have_mu && have_uf
                                            : have_part;
    if (!complete) {
      throw ParseError("class: missing parameters in '" + t + "'");
    }
    try {
      c.validate();
    } catch (InvalidParameter const& e) {
      throw ParseError(std::string("class: ") + e.what());
    }
    return c;
  }

  // ---------------------------------------------------------------------
  // membership

  bool in_F_ideal(Chart const& f) {
    return rank(f).is_finite();
  }

  bool is_partial_identity(Chart const& f) {
    return f.is_idempotent();
  }

  namespace {

    struct Facts {
      Card  c, d;
      EPSet dom, im;
    };

    Facts facts(Chart const& f) {
      EPSet dom = f.dom(), im = f.im();
      return {dom.complement().card(), im.complement().card(), dom, im};
    }

    bool gamma_fixed(EPSet const& gamma, Chart const& f, Facts const& x) {
      return gamma.subset_of(x.dom) && image_of_set(f, gamma) == gamma;
    }

    // Each predicate takes the two-sided condition as a callback so the
    // alternative V forms can reuse the same disjunctions.
    template <class Stab, class StabInv>
    bool evaluate(ClassId const& c, Chart const& f, Stab stab, StabInv stab_inv) {
      c.validate();
      Facts const x = facts(f);
      switch (c.family) {
        case Family::S: {
          bool plain = x.c >= c.mu || x.d < c.mu;
          bool inv   = x.c < c.mu || x.d >= c.mu;
          return c.variant == Variant::plain ? plain : c.variant == Variant::inverse ? inv : plain && inv;
        }
        case Family::P: {
          if (in_F_ideal(f)) {
            return true;
          }
          auto plain = [&] {
            return x.c >= c.mu || !c.gamma.subset_of(x.dom) || (gamma_fixed(c.gamma, f, x) && x.d < c.mu);
          };
          auto inv = [&] {
            return x.d >= c.mu || !c.gamma.subset_of(x.im) || (gamma_fixed(c.gamma, f, x) && x.c < c.mu);
          };
          return c.variant == Variant::plain ? plain() : c.variant == Variant::inverse ? inv() : plain() && inv();
        }
        case Family::V: {
          if (in_F_ideal(f)) {
            return true;
          }
          auto plain = [&] {
            return x.c >= c.mu || !uf_contains(c.uf, x.dom) || (x.d < c.mu && stab());
          };
          auto inv = [&] {
            return x.d >= c.mu || !uf_contains(c.uf, x.im) || (x.c < c.mu && stab_inv());
          };
          return c.variant == Variant::plain ? plain() : c.variant == Variant::inverse ? inv() : plain() && inv();
        }
        case Family::A: {
          BinRel   r     = rho_of(c.partition, f);
          unsigned all   = (1u << r.n) - 1;
          bool     perm  = r.is_permutation();
          bool     plain = perm || r.dom_mask() != all;
          bool     inv   = perm || r.im_mask() != all;
          return c.variant == Variant::plain ? plain : c.variant == Variant::inverse ? inv : plain && inv;
        }
      }
      throw InternalError("unknown class family");
    }

  }  // namespace

  bool in_class(ClassId const& c, Chart const& f) {
    auto stab = [&] { return stabilises_filter(c.uf, f); };
    return evaluate(c, f, stab, stab);
  }

  bool in_class_V_alternative(ClassId const& c, Chart const& f) {
    if (c.family != Family::V) {
      throw InvalidParameter("alternative form is defined for V classes only, got " + c.str());
    }
    return evaluate(
        c, f, [&] { return maps_filter_forward(c.uf, f); }, [&] { return keeps_nonmembers_out(c.uf, f); });
  }

  StabCheck in_stabiliser(StabKind kind, StabParam const& param, Chart const& f) {
    auto need = [&]<class T>(T const*) -> T const& {
      if (auto const* p = std::get_if<T>(&param)) {
        return *p;
      }
      throw InvalidParameter("in_stabiliser: parameter does not fit the stabiliser kind");
    };
    // validate the parameter before looking at f
    switch (kind) {
      case StabKind::pointwise:
      case StabKind::setwise:
        need(static_cast<EPSet const*>(nullptr));
        break;
      case StabKind::partition_stab:
      case StabKind::partition_astab:
        need(static_cast<FinPartition const*>(nullptr));
        break;
      case StabKind::filter_stab:
        need(static_cast<UFOracle const*>(nullptr));
        break;
    }
    StabCheck out;
    out.permutation = f.is_permutation();
    if (!out.permutation) {
      return out;
    }
    switch (kind) {
      case StabKind::pointwise: {
        EPSet const& s = std::get<EPSet>(param);
        out.member     = restrict(f, s) == Chart::identity(s);
        break;
      }
      case StabKind::setwise: {
        EPSet const& s = std::get<EPSet>(param);
        out.member     = image_of_set(f, s) == s;
        break;
      }
      case StabKind::partition_stab:
        out.member = in_partition_stab(std::get<FinPartition>(param), f);
        break;
      case StabKind::partition_astab:
        out.member = in_partition_astab(std::get<FinPartition>(param), f);
        break;
      case StabKind::filter_stab:
        out.member = stabilises_filter(std::get<UFOracle>(param), f);
        break;
    }
    return out;
  }

  // ---------------------------------------------------------------------
  // witnesses

  namespace {

    EPSet everything_but(EPSet const& s) {
      return s.complement();
    }

    // An infinite, co-infinite part of an infinite set.
    EPSet half(EPSet const& s) {
      return s.split(2)[0];
    }

    Chart transposition(Int x, Int y) {
      EPSet moved = EPSet::finite({x, y});
      return disjoint_union(Chart::from_pairs({{x, y}, {y, x}}), Chart::identity(moved.complement()));
    }

    // Identity on s, the rest of N shifted past its least point or onto a
    // half of itself.
    Chart fix_and_shrink(EPSet const& s, bool by_one) {
      EPSet rest = everything_but(s);
      EPSet onto = by_one ? rest - EPSet::singleton(rest.min()) : half(rest);
      return disjoint_union(Chart::identity(s), bijection_between(rest, onto));
    }

    struct Candidate {
      std::string recipe;
      Chart       chart;
    };

    std::vector<Candidate> candidates(ClassId const& c1, ClassId const& c2) {
      std::vector<Candidate> out;
      auto                   add = [&](std::string r, Chart f) { out.push_back({std::move(r), std::move(f)}); };
      Chart const            dbl = Chart::affine(2, 0);
      switch (c1.family) {
        case Family::S: {
          add("c = |X|, d = 0", invert(dbl));
          add("c = 0, d = 1", Chart::affine(1, 1));
          if (c1.mu.is_finite()) {
            add("c = mu, d = |X|", restrict(dbl, EPSet::first(static_cast<Int>(c1.mu.value())).complement()));
          } else {
            add("c = mu, d = |X|", restrict(dbl, EPSet::residue_class(0, 2)));
          }
          if (c2.family == Family::P) {
            Int x = c2.gamma.min();
            add("permutation moving gamma", transposition(x, everything_but(c2.gamma).min()));
          }
          if (c2.family == Family::V) {
            add("permutation moving the filter",
                block_permutation(FinPartition::residues(2), {1, 0}));
          }
          if (c2.family == Family::A) {
            FinPartition const& p  = c2.partition;
            auto                s0 = p.block(0).split(2), s1 = p.block(1).split(2);
            EPSet               u  = p.block(0) | p.block(1);
            Chart mix = disjoint_union(bijection_between(p.block(0), s0[0] | s1[0]),
                                       bijection_between(p.block(1), s0[1] | s1[1]));
            add("permutation mixing two blocks", disjoint_union(mix, Chart::identity(u.complement())));
          }
          break;
        }
        case Family::P: {
          EPSet sigma = c1.gamma;
          if (c2.family == Family::P) {
            sigma = sigma | c2.gamma;
          }
          EPSet rest = everything_but(sigma);
          add("f1: fixes gamma, c = 0, d = 1", fix_and_shrink(c1.gamma, true));
          add("f2: dom = X \\ Sigma, d = |X|", bijection_between(rest, half(rest)));
          add("f3: c = |X|, gamma outside dom, d = 0", bijection_between(half(rest), EPSet::naturals()));
          add("f4: dom = X \\ Sigma, im = X", bijection_between(rest, EPSet::naturals()));
          if (c2.family == Family::P) {
            EPSet const& delta = c2.gamma;
            if (!c1.gamma.subset_of(delta)) {
              add("g: gamma not inside delta", bijection_between(everything_but(c1.gamma - delta), rest));
            }
            if (!delta.subset_of(c1.gamma)) {
              add("g: permutation fixing gamma, moving delta", transposition((delta - c1.gamma).min(), rest.min()));
            }
            if (c1.mu < c2.mu) {
              add("g: c = mu, Sigma in dom, im misses Sigma", bijection_between(sigma | half(rest), rest));
            }
            if (c2.mu < c1.mu) {
              add("g: total, fixes Sigma, d = nu", fix_and_shrink(sigma, !c2.mu.is_infinite()));
            }
          }
          break;
        }
        case Family::V: {
          EPSet sigma = tower_neighbourhood(c1.uf, 2);
          EPSet rest  = everything_but(sigma);
          add("surjective with dom = X \\ Sigma", bijection_between(rest, EPSet::naturals()));
          add("g_1: total, fixes Sigma, d = 1", fix_and_shrink(sigma, true));
          add("g_nu: total, fixes Sigma, d = aleph0", fix_and_shrink(sigma, false));
          add("g_nu: c = mu, Sigma in dom, im = X \\ Sigma", bijection_between(sigma | half(rest), rest));
          break;
        }
        case Family::A: {
          FinPartition const& p = c1.partition;
          add("dom = Sigma_0, im = X", bijection_between(p.block(0), EPSet::naturals()));
          Chart g;
          for (auto const& b : p.blocks()) {
            g = disjoint_union(g, bijection_between(b, half(b)));
          }
          add("each block onto a moiety of itself", g);
          break;
        }
      }
      return out;
    }

  }  // namespace

  Witness witness(ClassId const& c1, ClassId const& c2) {
    c1.validate();
    c2.validate();
    if (c1 == c2) {
      throw PreconditionError("witness: the classes are equal");
    }
    if (c1.variant == Variant::inverse) {
      Witness w = witness(c1.mirrored(), c2.mirrored());
      return {c1, c2, "inverse of " + w.recipe, invert(w.chart)};
    }
    std::string tried;
    for (auto const& [recipe, chart] : candidates(c1, c2)) {
      if (in_class(c1, chart) && !in_class(c2, chart)) {
        return {c1, c2, recipe, chart};
      }
      tried += (tried.empty() ? "" : "; ") + recipe;
    }
    throw NotImplemented("no separating recipe for " + c1.str() + " outside " + c2.str()
                         + " (recipes for this family: " + tried + ")");
  }

  std::vector<Witness> witness_table() {
    Card const one = Card::fin(1), a0 = Card::aleph0(), a1 = Card::aleph1();
    auto const plain = Variant::plain, inv = Variant::inverse, meet = Variant::meet;
    EPSet const g0 = EPSet::finite({0}), g02 = EPSet::finite({0, 2});
    UFOracle const t0 = UFOracle::tower(), t1 = UFOracle::tower({{8, 5}, {3, 1}});
    FinPartition const p2 = FinPartition::residues(2), p3 = FinPartition::residues(3);
    std::vector<std::pair<ClassId, ClassId>> pairs = {
        {ClassId::S(one), ClassId::S(one, inv)},
        {ClassId::S(a0), ClassId::S(a0, inv)},
        {ClassId::S(a0), ClassId::S(one)},
        {ClassId::S(one), ClassId::S(a0)},
        {ClassId::S(one, inv), ClassId::S(a0, inv)},
        {ClassId::P(g0, a0, meet), ClassId::S(one)},
        {ClassId::P(g0, a1, meet), ClassId::S(a0)},
        {ClassId::P(g0, a0), ClassId::S(one, inv)},
        {ClassId::P(g0, a1), ClassId::P(g02, a0, inv)},
        {ClassId::P(g02, a1, meet), ClassId::P(g0, a1)},
        {ClassId::P(g0, a1, meet), ClassId::P(g02, a1)},
        {ClassId::P(g0, a0, meet), ClassId::P(g0, a1)},
        {ClassId::P(g0, a1, meet), ClassId::P(g0, a0)},
        {ClassId::V(t0, a1), ClassId::S(one, inv)},
        {ClassId::V(t1, a1), ClassId::V(t1, a1, inv)},
        {ClassId::V(t0, a1, meet), ClassId::S(one)},
        {ClassId::V(t1, a1, meet), ClassId::S(a0)},
        {ClassId::V(t0, a1, meet), ClassId::V(t0, a0, plain, true)},
        {ClassId::A(p2), ClassId::A(p2, inv)},
        {ClassId::A(p3, meet), ClassId::S(one)},
        {ClassId::A(p2, meet), ClassId::S(a0)},
        {ClassId::A(p3, inv), ClassId::S(a0, inv)},
        {ClassId::S(a0), ClassId::P(g02, a1)},
        {ClassId::S(one), ClassId::A(p3)},
    };
    std::vector<Witness> out;
    for (auto const& [a, b] : pairs) {
      Witness w = witness(a, b);
      if (!in_class(a, w.chart) || in_class(b, w.chart)) {
        throw InternalError("witness for " + a.str() + " / " + b.str() + " does not separate");
      }
      out.push_back(std::move(w));
    }
    return out;
  }

  ClassId excluding_maximal(Chart const& h) {
    if (in_F_ideal(h)) {
      throw PreconditionError("excluding_maximal: h has finite rank; every maximal subsemigroup contains it");
    }
    if (is_partial_identity(h)) {
      throw PreconditionError("excluding_maximal: h is a partial identity; every maximal subsemigroup contains it");
    }
    // a moved point shows up below the horizon or within one period past it
    Int bound = h.horizon() + 2 * h.modulus() + 1;
    for (Int x : h.dom().elements_below(bound)) {
      if (*h.apply(x) != x) {
        return ClassId::P(EPSet::singleton(x), Card::aleph1());
      }
    }
    throw InternalError("excluding_maximal: no moved point found for " + h.str());
  }

  std::vector<ClassId> instantiated_classes() {
    std::vector<ClassId> out;
    auto                 all_variants = [&](auto make) {
      for (auto v : {Variant::plain, Variant::inverse, Variant::meet}) {
        out.push_back(make(v));
      }
    };
    for (Card mu : {Card::fin(1), Card::aleph0()}) {
      all_variants([&](Variant v) { return ClassId::S(mu, v); });
    }
    for (auto const& g : {EPSet::finite({0}), EPSet::finite({0, 2})}) {
      for (Card mu : {Card::aleph0(), Card::aleph1()}) {
        all_variants([&](Variant v) { return ClassId::P(g, mu, v); });
      }
    }
    for (auto const& F : {UFOracle::tower(), UFOracle::tower({{8, 5}, {3, 1}})}) {
      all_variants([&](Variant v) { return ClassId::V(F, Card::aleph1(), v); });
    }
    for (int n : {2, 3}) {
      all_variants([&](Variant v) { return ClassId::A(FinPartition::residues(n), v); });
    }
    return out;
  }

}  // namespace ixm
