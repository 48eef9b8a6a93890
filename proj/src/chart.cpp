#include "ixm/chart.hpp"

#include <algorithm>
#include <sstream>

#include "ixm/error.hpp"
#include "scan.hpp"

namespace ixm {

  namespace {

    using PairVec = std::vector<std::pair<Int, Int>>;

    // Far enough below 2^63 that sums of two products cannot overflow.
    constexpr Int kCoordCap = Int(1) << 50;

    Int checked_mul(Int a, Int b) {
      __int128 p = static_cast<__int128>(a) * b;
      if (p > kCoordCap || p < -kCoordCap) {
        throw ResourceError("chart coordinates grew beyond the supported range");
      }
      return static_cast<Int>(p);
    }

    // Affine law y = slope*x + intercept of a piece.
    struct Law {
      arith::Rational slope;
      arith::Rational intercept;
      friend bool operator==(Law const&, Law const&) = default;
    };

    Law law_of(Piece const& p) {
      Int num = checked_mul(p.dst_start, p.src_step) - checked_mul(p.dst_step, p.src_start);
      return {arith::Rational::make(p.dst_step, p.src_step),
              arith::Rational::make(num, p.src_step)};
    }

    // Smallest common point of two progressions, with the common step.
    std::optional<std::pair<Int, Int>> meet(Int s1, Int m1, Int s2, Int m2) {
      auto c = arith::crt(s1, m1, s2, m2);
      if (!c) {
        return std::nullopt;
      }
      if (c->modulus > arith::kModulusCap) {
        throw ResourceError("progression intersection step exceeds the cap");
      }
      return std::pair{arith::first_at_least(c->residue, c->modulus, std::max(s1, s2)),
                       c->modulus};
    }

    std::string piece_str(Piece const& p) {
      std::ostringstream os;
      auto               s = p.src();
      auto               d = p.dst();
      os << "piece (" << s.r << " mod " << s.m << " from " << s.t0 << ") -> (" << d.r << " mod "
         << d.m << " from " << d.t0 << ")";
      return os.str();
    }

    [[noreturn]] void clash(std::string const& msg) {
      throw PreconditionError("not a partial injection: " + msg);
    }

    // Checks that pairs and pieces describe a partial injection; drops pairs
    // that merely repeat a piece point.
    void validate(PairVec& pairs, std::vector<Piece> const& pieces) {
      for (auto const& p : pieces) {
        if (p.src_step <= 0 || p.dst_step <= 0 || p.src_start < 0 || p.dst_start < 0) {
          throw InvalidParameter("piece needs positive steps and natural starts: " + piece_str(p));
        }
      }
      for (auto const& [x, y] : pairs) {
        if (x < 0 || y < 0) {
          throw InvalidParameter("pair (" + std::to_string(x) + ", " + std::to_string(y)
                                 + ") has a negative coordinate");
        }
      }
      std::erase_if(pairs, [&](auto const& xy) {
        return std::any_of(pieces.begin(), pieces.end(), [&](Piece const& p) {
          return p.covers(xy.first) && p.at(xy.first) == xy.second;
        });
      });
      std::sort(pairs.begin(), pairs.end());
      pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
      for (std::size_t i = 1; i < pairs.size(); ++i) {
        if (pairs[i].first == pairs[i - 1].first) {
          clash("source point " + std::to_string(pairs[i].first) + " is sent to both "
                + std::to_string(pairs[i - 1].second) + " and " + std::to_string(pairs[i].second));
        }
      }
      PairVec rev;
      for (auto const& [x, y] : pairs) {
        rev.emplace_back(y, x);
      }
      std::sort(rev.begin(), rev.end());
      for (std::size_t i = 1; i < rev.size(); ++i) {
        if (rev[i].first == rev[i - 1].first) {
          clash("target point " + std::to_string(rev[i].first) + " is hit from both "
                + std::to_string(rev[i - 1].second) + " and " + std::to_string(rev[i].second));
        }
      }
      for (std::size_t i = 0; i < pieces.size(); ++i) {
        Piece const& p = pieces[i];
        for (auto const& [x, y] : pairs) {
          if (p.covers(x)) {
            clash("source point " + std::to_string(x) + " is sent to both " + std::to_string(y)
                  + " and " + std::to_string(p.at(x)));
          }
          if (p.hits(y)) {
            clash("target point " + std::to_string(y) + " is hit from both " + std::to_string(x)
                  + " and " + std::to_string(p.back(y)));
          }
        }
        for (std::size_t j = i + 1; j < pieces.size(); ++j) {
          Piece const& q = pieces[j];
          if (auto m = meet(p.src_start, p.src_step, q.src_start, q.src_step)) {
            Int x = m->first;
            clash("source point " + std::to_string(x) + " is sent to both "
                  + std::to_string(p.at(x)) + " and " + std::to_string(q.at(x)));
          }
          if (auto m = meet(p.dst_start, p.dst_step, q.dst_start, q.dst_step)) {
            Int y = m->first;
            clash("target point " + std::to_string(y) + " is hit from both "
                  + std::to_string(p.back(y)) + " and " + std::to_string(q.back(y)));
          }
        }
      }
    }

  }  // namespace

  Chart Chart::canonical(PairVec pairs, std::vector<Piece> pieces) {
    std::sort(pairs.begin(), pairs.end());
    Int L = 1;
    Int B = 0;
    for (auto const& p : pieces) {
      L = arith::checked_lcm(L, p.src_step);
      B = std::max(B, p.src_start);
    }
    if (!pairs.empty()) {
      B = std::max(B, pairs.back().first + 1);
    }

    std::vector<Law> laws;
    std::vector<int> piece_law(pieces.size());
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      Law  l  = law_of(pieces[i]);
      auto it = std::find(laws.begin(), laws.end(), l);
      piece_law[i] = static_cast<int>(it - laws.begin());
      if (it == laws.end()) {
        laws.push_back(l);
      }
    }
    std::vector<int> owner(static_cast<std::size_t>(L), -1);
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      for (Int c = pieces[i].src_start % pieces[i].src_step; c < L; c += pieces[i].src_step) {
        owner[static_cast<std::size_t>(c)] = static_cast<int>(i);
      }
    }
    auto law_at = [&](Int c) {
      int o = owner[static_cast<std::size_t>(c)];
      return o < 0 ? -1 : piece_law[static_cast<std::size_t>(o)];
    };

    Int M = L;
    for (Int d : arith::divisors(L)) {
      bool ok = true;
      for (Int c = d; c < L && ok; ++c) {
        ok = law_at(c) == law_at(c % d);
      }
      if (ok) {
        M = d;
        break;
      }
    }

    auto raw = [&](Int x) -> std::optional<Int> {
      auto it = std::lower_bound(pairs.begin(), pairs.end(), std::pair<Int, Int>{x, INT64_MIN});
      if (it != pairs.end() && it->first == x) {
        return it->second;
      }
      int o = owner[static_cast<std::size_t>(x % L)];
      if (o >= 0 && x >= pieces[static_cast<std::size_t>(o)].src_start) {
        return pieces[static_cast<std::size_t>(o)].at(x);
      }
      return std::nullopt;
    };

    Chart out;
    out._modulus = M;
    for (Int c = 0; c < M; ++c) {
      int id = law_at(c);
      if (id < 0) {
        continue;
      }
      auto const& slope = laws[static_cast<std::size_t>(id)].slope;
      if ((slope.num * M) % slope.den != 0) {
        throw InternalError("canonical piece step is not integral");
      }
      Int dstep = slope.num * M / slope.den;
      Int x     = arith::first_at_least(c, M, B);
      auto y    = raw(x);
      if (!y) {
        throw InternalError("canonical piece start is undefined");
      }
      Int yy = *y;
      while (x >= M) {
        auto prev = raw(x - M);
        if (!prev || *prev != yy - dstep) {
          break;
        }
        x -= M;
        yy -= dstep;
      }
      out._pieces.push_back({x, M, yy, dstep});
    }

    auto covered = [&](Int x) {
      auto it = std::lower_bound(out._pieces.begin(), out._pieces.end(), x % M,
                                 [M](Piece const& p, Int c) { return p.src_start % M < c; });
      return it != out._pieces.end() && it->src_start % M == x % M && x >= it->src_start;
    };
    for (auto const& xy : pairs) {
      if (!covered(xy.first)) {
        out._pairs.push_back(xy);
      }
    }
    for (auto const& p : pieces) {
      for (Int x = p.src_start; x < B; x += p.src_step) {
        if (!covered(x)) {
          out._pairs.emplace_back(x, p.at(x));
        }
      }
    }
    std::sort(out._pairs.begin(), out._pairs.end());
    return out;
  }

  Chart Chart::make(PairVec pairs, std::vector<Piece> pieces) {
    validate(pairs, pieces);
    return canonical(std::move(pairs), std::move(pieces));
  }

  Chart Chart::identity(EPSet const& s) {
    auto               d = s.decompose();
    PairVec            pairs;
    std::vector<Piece> pieces;
    for (Int x : d.finite) {
      pairs.emplace_back(x, x);
    }
    for (auto const& p : d.progressions) {
      pieces.push_back({p.start(), p.m, p.start(), p.m});
    }
    return canonical(std::move(pairs), std::move(pieces));
  }

  Chart Chart::identity_on_naturals() {
    return identity(EPSet::naturals());
  }

  Chart Chart::affine(Int a, Int b) {
    if (a < 1 || b < 0) {
      throw InvalidParameter("affine chart needs a >= 1 and b >= 0");
    }
    return canonical({}, {{0, 1, b, a}});
  }

  Chart Chart::from_pairs(PairVec pairs) {
    return make(std::move(pairs), {});
  }

  Chart Chart::from_piece(Piece p) {
    return make({}, {p});
  }

  std::optional<Int> Chart::apply(Int x) const {
    if (x < 0) {
      return std::nullopt;
    }
    auto it = std::lower_bound(_pairs.begin(), _pairs.end(), std::pair<Int, Int>{x, INT64_MIN});
    if (it != _pairs.end() && it->first == x) {
      return it->second;
    }
    Int  c  = x % _modulus;
    auto pt = std::lower_bound(_pieces.begin(), _pieces.end(), c,
                               [this](Piece const& p, Int k) { return p.src_start % _modulus < k; });
    if (pt != _pieces.end() && pt->src_start % _modulus == c && x >= pt->src_start) {
      return pt->at(x);
    }
    return std::nullopt;
  }

  std::optional<Int> Chart::preimage(Int y) const {
    for (auto const& [a, b] : _pairs) {
      if (b == y) {
        return a;
      }
    }
    for (auto const& p : _pieces) {
      if (p.hits(y)) {
        return p.back(y);
      }
    }
    return std::nullopt;
  }

  Int Chart::horizon() const {
    Int h = _pairs.empty() ? 0 : _pairs.back().first + 1;
    for (auto const& p : _pieces) {
      h = std::max(h, p.src_start);
    }
    return h;
  }

  EPSet Chart::dom() const {
    return EPSet::from_predicate(horizon(), _modulus, [this](Int x) { return apply(x).has_value(); });
  }

  EPSet Chart::im() const {
    Int n = 0;
    Int m = 1;
    for (auto const& [a, b] : _pairs) {
      n = std::max(n, b + 1);
    }
    for (auto const& p : _pieces) {
      n = std::max(n, p.dst_start);
      m = arith::checked_lcm(m, p.dst_step);
    }
    std::vector<std::uint8_t> hit(static_cast<std::size_t>(n), 0);
    for (auto const& [a, b] : _pairs) {
      hit[static_cast<std::size_t>(b)] = 1;
    }
    for (auto const& p : _pieces) {
      for (Int y = p.dst_start; y < n; y += p.dst_step) {
        hit[static_cast<std::size_t>(y)] = 1;
      }
    }
    return EPSet::from_predicate(n, m, [&](Int y) {
      if (y < n) {
        return hit[static_cast<std::size_t>(y)] != 0;
      }
      return std::any_of(_pieces.begin(), _pieces.end(), [y](Piece const& p) { return p.hits(y); });
    });
  }

  bool Chart::is_total() const {
    return dom().is_naturals();
  }

  bool Chart::is_permutation() const {
    return is_total() && im().is_naturals();
  }

  bool Chart::is_idempotent() const {
    return std::all_of(_pairs.begin(), _pairs.end(), [](auto const& xy) { return xy.first == xy.second; })
           && std::all_of(_pieces.begin(), _pieces.end(), [](Piece const& p) {
                return p.src_start == p.dst_start && p.src_step == p.dst_step;
              });
  }

  std::string Chart::str() const {
    std::ostringstream os;
    os << "chart { ";
    for (auto const& [x, y] : _pairs) {
      os << "pair " << x << " -> " << y << "; ";
    }
    for (auto const& p : _pieces) {
      os << piece_str(p) << "; ";
    }
    os << "}";
    return os.str();
  }

  Chart Chart::parse(std::string_view text) {
    detail::Scanner    sc(text, "chart");
    PairVec            pairs;
    std::vector<Piece> pieces;
    sc.expect("chart");
    sc.expect("{");
    auto read_prog = [&]() {
      sc.expect("(");
      Int r = sc.read_nat();
      sc.expect("mod");
      Int m = sc.read_int();
      if (m <= 0) {
        sc.fail("modulus must be positive");
      }
      sc.expect("from");
      Int t0 = sc.read_nat();
      sc.expect(")");
      return std::pair<Int, Int>{r + m * t0, m};
    };
    while (!sc.try_consume("}")) {
      if (sc.try_consume("pair")) {
        Int x = sc.read_nat();
        sc.expect("->");
        Int y = sc.read_nat();
        pairs.emplace_back(x, y);
      } else if (sc.try_consume("piece")) {
        auto [s0, sm] = read_prog();
        sc.expect("->");
        auto [d0, dm] = read_prog();
        pieces.push_back({s0, sm, d0, dm});
      } else {
        sc.fail("expected 'pair', 'piece' or '}'");
      }
      if (!sc.try_consume(";") && sc.peek() != '}') {
        sc.fail("expected ';'");
      }
    }
    if (!sc.at_end()) {
      sc.fail("trailing input");
    }
    try {
      return make(std::move(pairs), std::move(pieces));
    } catch (PreconditionError const& e) {
      throw ParseError(std::string("chart: ") + e.what());
    } catch (InvalidParameter const& e) {
      throw ParseError(std::string("chart: ") + e.what());
    }
  }

  Chart compose(Chart const& f, Chart const& g) {
    PairVec            pairs;
    std::vector<Piece> pieces;
    for (auto const& [x, y] : f.pairs()) {
      if (auto z = g.apply(y)) {
        pairs.emplace_back(x, *z);
      }
    }
    for (auto const& p : f.pieces()) {
      for (auto const& [y, z] : g.pairs()) {
        if (p.hits(y)) {
          pairs.emplace_back(p.back(y), z);
        }
      }
      for (auto const& q : g.pieces()) {
        auto m = meet(p.dst_start, p.dst_step, q.src_start, q.src_step);
        if (!m) {
          continue;
        }
        auto [y0, l] = *m;
        pieces.push_back({p.back(y0), checked_mul(p.src_step, l / p.dst_step), q.at(y0),
                          checked_mul(q.dst_step, l / q.src_step)});
      }
    }
    return Chart::make(std::move(pairs), std::move(pieces));
  }

  Chart invert(Chart const& f) {
    PairVec            pairs;
    std::vector<Piece> pieces;
    for (auto const& [x, y] : f.pairs()) {
      pairs.emplace_back(y, x);
    }
    for (auto const& p : f.pieces()) {
      pieces.push_back(p.inverse());
    }
    return Chart::make(std::move(pairs), std::move(pieces));
  }

  Chart restrict(Chart const& f, EPSet const& s) {
    return compose(Chart::identity(s), f);
  }

  Chart disjoint_union(Chart const& f, Chart const& g) {
    if (!f.dom().disjoint_from(g.dom())) {
      throw PreconditionError("disjoint_union: domains overlap");
    }
    if (!f.im().disjoint_from(g.im())) {
      throw PreconditionError("disjoint_union: images overlap");
    }
    auto pairs  = f.pairs();
    auto pieces = f.pieces();
    pairs.insert(pairs.end(), g.pairs().begin(), g.pairs().end());
    pieces.insert(pieces.end(), g.pieces().begin(), g.pieces().end());
    return Chart::make(std::move(pairs), std::move(pieces));
  }

  Card rank(Chart const& f) {
    return f.im().card();
  }

  Card collapse(Chart const& f) {
    return f.dom().complement().card();
  }

  Card defect(Chart const& f) {
    return f.im().complement().card();
  }

  ChartStats stats(Chart const& f) {
    ChartStats s{.rank = {}, .collapse = {}, .defect = {}, .dom = f.dom(), .im = f.im(), .support = {}};
    s.rank     = s.im.card();
    s.collapse = s.dom.complement().card();
    s.defect   = s.im.complement().card();
    if (s.dom.is_naturals() && s.im.is_naturals()) {
      s.support = support(f);
    }
    return s;
  }

  EPSet image_of_set(Chart const& f, EPSet const& s) {
    return restrict(f, s).im();
  }

  EPSet support(Chart const& f) {
    if (!f.is_permutation()) {
      throw PreconditionError("support is only defined for permutations of N");
    }
    Int n = f.horizon();
    Int M = f.modulus();
    for (auto const& p : f.pieces()) {
      // Fixed point of x |-> d0 + ds*(x - s0)/M, if the law is not the identity.
      if (p.dst_step != M) {
        Int num = M * p.dst_start - p.dst_step * p.src_start;
        Int den = M - p.dst_step;
        n       = std::max(n, (num < 0 ? -num : num) / (den < 0 ? -den : den) + 1);
      }
    }
    return EPSet::from_predicate(n, M, [&](Int x) { return f.apply(x) != x; });
  }

  Chart bijection_between(EPSet const& a, EPSet const& b) {
    if (a.card() != b.card()) {
      throw PreconditionError("bijection_between: |a| = " + a.card().str() + " but |b| = "
                              + b.card().str());
    }
    PairVec pairs;
    if (a.is_finite()) {
      auto const& xa = a.low();
      auto const& xb = b.low();
      for (std::size_t i = 0; i < xa.size(); ++i) {
        pairs.emplace_back(xa[i], xb[i]);
      }
      return Chart::make(std::move(pairs), {});
    }
    auto da = a.decompose();
    auto db = b.decompose();
    using Prog = std::pair<Int, Int>;  // (start, step)
    std::vector<Prog> pa, pb;
    for (auto const& p : da.progressions) {
      pa.emplace_back(p.start(), p.m);
    }
    for (auto const& p : db.progressions) {
      pb.emplace_back(p.start(), p.m);
    }
    auto split_front = [](std::vector<Prog>& v) {
      auto [s, st] = v.front();
      v.erase(v.begin());
      v.emplace_back(s, 2 * st);
      v.emplace_back(s + st, 2 * st);
    };
    while (pa.size() < pb.size()) {
      split_front(pa);
    }
    while (pb.size() < pa.size()) {
      split_front(pb);
    }
    // The finite parts go in front of the first progressions.
    Int  k  = static_cast<Int>(da.finite.size());
    Int  l  = static_cast<Int>(db.finite.size());
    Int  K  = std::max(k, l);
    auto at = [](std::vector<Int> const& fin, Prog const& p, Int i) {
      Int n = static_cast<Int>(fin.size());
      return i < n ? fin[static_cast<std::size_t>(i)] : p.first + p.second * (i - n);
    };
    for (Int i = 0; i < K; ++i) {
      pairs.emplace_back(at(da.finite, pa[0], i), at(db.finite, pb[0], i));
    }
    std::vector<Piece> pieces;
    pieces.push_back({pa[0].first + pa[0].second * (K - k), pa[0].second,
                      pb[0].first + pb[0].second * (K - l), pb[0].second});
    for (std::size_t i = 1; i < pa.size(); ++i) {
      pieces.push_back({pa[i].first, pa[i].second, pb[i].first, pb[i].second});
    }
    return Chart::make(std::move(pairs), std::move(pieces));
  }

  Chart extend_to_permutation(Chart const& p, EPSet const& y) {
    EPSet dom = p.dom();
    EPSet im  = p.im();
    if (!dom.subset_of(y)) {
      throw PreconditionError("extend_to_permutation: dom(p) is not contained in y");
    }
    if (!im.subset_of(y)) {
      throw PreconditionError("extend_to_permutation: im(p) is not contained in y");
    }
    EPSet free_src = y - dom;
    EPSet free_dst = y - im;
    if (free_src.card() != free_dst.card()) {
      throw PreconditionError("extend_to_permutation: |y \\ dom p| = " + free_src.card().str()
                              + " differs from |y \\ im p| = " + free_dst.card().str());
    }
    return disjoint_union(p, bijection_between(free_src, free_dst));
  }

  Chart sandwich_factorize(Chart const& h, Chart const& f, Chart const& g, EPSet const& y) {
    if (!y.is_moiety()) {
      throw PreconditionError("sandwich_factorize: y is not a moiety of N");
    }
    if (!f.is_total()) {
      throw PreconditionError("sandwich_factorize: f is not total");
    }
    EPSet imf  = f.im();
    EPSet domg = g.dom();
    if (!imf.subset_of(y) || imf.is_finite() || (y - imf).is_finite()) {
      throw PreconditionError("sandwich_factorize: im(f) is not a moiety of y");
    }
    if (!domg.subset_of(y) || domg.is_finite() || (y - domg).is_finite()) {
      throw PreconditionError("sandwich_factorize: dom(g) is not a moiety of y");
    }
    if (!g.im().is_naturals()) {
      throw PreconditionError("sandwich_factorize: im(g) is not N");
    }
    Chart p    = compose(compose(invert(f), h), invert(g));
    EPSet domp = p.dom();
    EPSet imp  = p.im();
    // Points of im f outside dom p must leave dom g, so they go to y \ dom g.
    EPSet a1   = imf - domp;
    EPSet a2   = y - imf;
    EPSet b1   = y - domg;
    EPSet b1_used;
    if (a1.is_finite()) {
      b1_used = EPSet::finite(b1.first_elements(a1.low().size()));
    } else {
      b1_used = b1.split(2)[0];
    }
    Chart q = disjoint_union(p, bijection_between(a1, b1_used));
    q       = disjoint_union(q, bijection_between(a2, (y - imp) - b1_used));
    q       = disjoint_union(q, Chart::identity(y.complement()));
    if (!(compose(compose(f, q), g) == h)) {
      throw InternalError("sandwich_factorize: f p'' g differs from h");
    }
    return q;
  }

}  // namespace ixm
