#include "ixm/ultrafilter.hpp"

#include <cstdlib>
#include <sstream>

#include "ixm/error.hpp"
#include "scan.hpp"

namespace ixm {

  namespace {

    Int ipow(Int p, int e) {
      Int r = 1;
      while (e-- > 0) {
        r *= p;
      }
      return r;
    }

    bool is_prime(Int n) {
      if (n < 2) {
        return false;
      }
      for (Int d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
          return false;
        }
      }
      return true;
    }

    Int capped_mul(Int a, Int b) {
      __int128 p = static_cast<__int128>(a) * b;
      if (p > arith::kModulusCap) {
        throw ResourceError("separating neighbourhood modulus exceeds the cap");
      }
      return static_cast<Int>(p);
    }

    Piece const& piece_for_class(Chart const& f, Int c) {
      for (auto const& p : f.pieces()) {
        if (arith::mod(p.src_start, f.modulus()) == c) {
          return p;
        }
      }
      throw InternalError("no piece for an accepted domain class");
    }

    // The piece acts on its class as z |-> d0 + m'(z - s0)/M; it fixes the
    // tower point a iff k*a = rhs with k = m' - M and rhs = m'*s0 - M*d0.
    struct Action {
      Int k;
      Int rhs;
    };

    Action action_of(Piece const& p, Int M) {
      return {p.dst_step - M, p.dst_step * p.src_start - M * p.dst_start};
    }

    // A multiple K of M such that the class of a mod K is carried into F by
    // the piece iff the piece fixes a. With delta = k*a - rhs the image
    // class is in F iff delta = 0 mod M*m'*(K/M); one prime where delta is
    // visibly non-zero is enough.
    Int separating_modulus(UFOracle const& F, Int M, Action act) {
      if (act.rhs != 0) {
        // at an unlisted prime the point is 0 and delta = -rhs
        Int P = 2;
        while (!is_prime(P) || F.components().contains(P) || act.rhs % P == 0) {
          ++P;
        }
        return capped_mul(M, P);
      }
      if (act.k != 0 && !F.is_zero_tower()) {
        auto const& [q, comp] = *F.components().begin();
        Int v                 = act.k * comp.second;
        Int qv                = q;
        while (v % q == 0) {
          v /= q;
          qv = capped_mul(qv, q);
        }
        return capped_mul(M, qv);
      }
      return M;
    }

  }  // namespace

  UFOracle UFOracle::principal(Int x) {
    if (x < 0) {
      throw InvalidParameter("principal ultrafilter point must be a natural number");
    }
    UFOracle F;
    F._kind  = Kind::principal;
    F._point = x;
    return F;
  }

  UFOracle UFOracle::tower(std::vector<std::pair<Int, Int>> const& choices) {
    UFOracle F;
    F._kind = Kind::tower;
    std::map<Int, std::vector<std::pair<int, Int>>> by_prime;
    for (auto const& [q, r] : choices) {
      auto pp = arith::prime_power(q);
      if (!pp) {
        throw InvalidParameter("tower modulus " + std::to_string(q) + " is not a prime power");
      }
      if (r < 0 || r >= q) {
        throw InvalidParameter("tower residue " + std::to_string(r) + " outside 0.."
                               + std::to_string(q - 1));
      }
      by_prime[pp->first].emplace_back(pp->second, r);
    }
    for (auto& [p, list] : by_prime) {
      std::sort(list.begin(), list.end());
      auto const& [top_e, top_r] = list.back();
      for (auto const& [e, r] : list) {
        if (top_r % ipow(p, e) != r) {
          throw InvalidParameter("tower residues for " + std::to_string(p)
                                 + " are not compatible: " + std::to_string(top_r) + " mod "
                                 + std::to_string(ipow(p, top_e)) + " does not reduce to "
                                 + std::to_string(r) + " mod " + std::to_string(ipow(p, e)));
        }
      }
      if (top_r != 0) {
        F._components[p] = {top_e, top_r};
      }
    }
    return F;
  }

  Int UFOracle::residue(Int m) const {
    if (m < 1) {
      throw InvalidParameter("residue modulus must be positive");
    }
    if (_kind == Kind::principal) {
      return _point % m;
    }
    Int r = 0, mod = 1;
    for (auto const& [p, e] : arith::factorize(m)) {
      Int  pe  = ipow(p, e);
      auto it  = _components.find(p);
      Int  n_p = it == _components.end() ? 0 : it->second.second;
      auto c   = arith::crt(r, mod, n_p % pe, pe);
      r        = c->residue;
      mod      = c->modulus;
    }
    return r;
  }

  std::string UFOracle::str() const {
    if (_kind == Kind::principal) {
      return "uf principal " + std::to_string(_point);
    }
    std::ostringstream os;
    os << "uf tower [";
    bool first = true;
    for (auto const& [p, comp] : _components) {
      os << (first ? "" : ", ") << p << "^" << comp.first << "=" << comp.second;
      first = false;
    }
    os << "]";
    return os.str();
  }

  UFOracle UFOracle::parse(std::string_view text) {
    detail::Scanner sc(text, "ultrafilter");
    sc.expect("uf");
    UFOracle F;
    if (sc.try_consume("principal")) {
      F = principal(sc.read_nat());
    } else if (sc.try_consume("tower")) {
      std::vector<std::pair<Int, Int>> choices;
      if (sc.try_consume("[")) {
        if (!sc.try_consume("]")) {
          do {
            Int q = sc.read_nat();
            if (sc.try_consume("^")) {
              Int e = sc.read_nat();
              if (e < 1 || e > 62) {
                sc.fail("bad exponent");
              }
              Int base = q;
              q        = 1;
              for (Int i = 0; i < e; ++i) {
                if (q > arith::kModulusCap) {
                  sc.fail("modulus too large");
                }
                q *= base;
              }
            }
            sc.expect("=");
            choices.emplace_back(q, sc.read_nat());
          } while (sc.try_consume(","));
          sc.expect("]");
        }
      }
      try {
        F = tower(choices);
      } catch (InvalidParameter const& e) {
        throw ParseError(std::string("ultrafilter: ") + e.what());
      }
    } else {
      sc.fail("expected 'principal' or 'tower'");
    }
    if (!sc.at_end()) {
      sc.fail("trailing input");
    }
    return F;
  }

  bool uf_contains(UFOracle const& F, EPSet const& s) {
    if (F.is_principal()) {
      return s.contains(F.point());
    }
    if (s.is_finite()) {
      return false;
    }
    Int m = s.period();
    return s.contains(arith::first_at_least(F.residue(m), m, s.threshold()));
  }

  Card uf_min(UFOracle const& F) {
    return F.is_principal() ? Card::fin(1) : Card::aleph0();
  }

  EPSet tower_neighbourhood(UFOracle const& F, Int k) {
    return EPSet::residue_class(F.residue(k), k);
  }

  bool stabilises_filter(UFOracle const& F, Chart const& f) {
    if (F.is_principal()) {
      return f.apply(F.point()) == F.point();
    }
    if (!uf_contains(F, f.dom())) {
      return false;
    }
    Int          M   = f.modulus();
    Piece const& p   = piece_for_class(f, F.residue(M));
    Action       act = action_of(p, M);
    if (act.k == 0) {
      return act.rhs == 0;
    }
    // k*a = rhs has the integer solution rhs/k at most, and the only
    // integer point with infinitely many zero components is 0.
    return act.rhs == 0 && F.is_zero_tower();
  }

  std::optional<EPSet> stabiliser_witness(UFOracle const& F, Chart const& f) {
    if (stabilises_filter(F, f)) {
      return std::nullopt;
    }
    if (F.is_principal()) {
      return EPSet::singleton(F.point());
    }
    EPSet dom = f.dom();
    if (!uf_contains(F, dom)) {
      return dom.complement();
    }
    Int   M = f.modulus();
    Int   K = separating_modulus(F, M, action_of(piece_for_class(f, F.residue(M)), M));
    EPSet s = tower_neighbourhood(F, K) & dom;
    if (!uf_contains(F, s) || uf_contains(F, image_of_set(f, s))) {
      throw InternalError("stabiliser witness failed to separate for " + f.str());
    }
    return s;
  }

  bool maps_filter_forward(UFOracle const& F, Chart const& f) {
    if (F.is_principal()) {
      return f.apply(F.point()) == F.point();
    }
    EPSet dom = f.dom();
    if (!uf_contains(F, dom)) {
      return false;
    }
    // Every member of F contains a tail of some class of the point, and
    // images of finer classes are smaller, so one fine class decides.
    Int M = f.modulus();
    Int K = separating_modulus(F, M, action_of(piece_for_class(f, F.residue(M)), M));
    return uf_contains(F, image_of_set(f, tower_neighbourhood(F, K) & dom));
  }

  bool keeps_nonmembers_out(UFOracle const& F, Chart const& f) {
    if (F.is_principal()) {
      auto x = f.preimage(F.point());
      return !x || *x == F.point();
    }
    // Sf lies inside im f; when im f is in F the condition is the forward
    // condition for the inverse.
    if (!uf_contains(F, f.im())) {
      return true;
    }
    return maps_filter_forward(F, invert(f));
  }

}  // namespace ixm
