#include "ixm/epset.hpp"

#include <algorithm>
#include <sstream>

#include "ixm/error.hpp"
#include "scan.hpp"

namespace ixm {

  EPSet::EPSet() = default;

  EPSet EPSet::empty() {
    return EPSet();
  }

  EPSet EPSet::naturals() {
    EPSet s;
    s._tail = {1};
    return s;
  }

  EPSet EPSet::finite(std::vector<Int> elems) {
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    if (!elems.empty() && elems.front() < 0) {
      throw InvalidParameter("negative element " + std::to_string(elems.front()));
    }
    EPSet s;
    s._threshold = elems.empty() ? 0 : elems.back() + 1;
    s._low       = std::move(elems);
    s.canonicalize();
    return s;
  }

  EPSet EPSet::singleton(Int x) {
    return finite({x});
  }

  EPSet EPSet::first(Int k) {
    EPSet s;
    s._threshold = k;
    for (Int i = 0; i < k; ++i) {
      s._low.push_back(i);
    }
    s.canonicalize();
    return s;
  }

  EPSet EPSet::progression(Int start, Int step) {
    if (start < 0 || step <= 0) {
      throw InvalidParameter("progression needs start >= 0 and step > 0");
    }
    if (step > arith::kModulusCap) {
      throw ResourceError("progression step " + std::to_string(step) + " exceeds the cap");
    }
    return from_predicate(start, step, [&](Int x) {
      return x >= start && (x - start) % step == 0;
    });
  }

  EPSet EPSet::progression(Progression const& p) {
    return progression(p.start(), p.m);
  }

  EPSet EPSet::residue_class(Int r, Int m) {
    return progression(arith::mod(r, m), m);
  }

  EPSet EPSet::from_predicate(Int n, Int m, std::function<bool(Int)> const& pred) {
    if (n < 0 || m <= 0) {
      throw InvalidParameter("from_predicate needs n >= 0 and m > 0");
    }
    if (m > arith::kModulusCap) {
      throw ResourceError("period " + std::to_string(m) + " exceeds the cap");
    }
    EPSet s;
    s._threshold = n;
    s._period    = m;
    s._tail.assign(static_cast<std::size_t>(m), 0);
    for (Int x = 0; x < n; ++x) {
      if (pred(x)) {
        s._low.push_back(x);
      }
    }
    for (Int r = 0; r < m; ++r) {
      s._tail[static_cast<std::size_t>(r)] = pred(arith::first_at_least(r, m, n)) ? 1 : 0;
    }
    s.canonicalize();
    return s;
  }

  EPSet EPSet::from_parts(Int n, Int m, std::vector<Int> residues, std::vector<Int> low) {
    if (n < 0 || m <= 0) {
      throw InvalidParameter("EPSet needs N >= 0 and m > 0");
    }
    if (m > arith::kModulusCap) {
      throw ResourceError("period " + std::to_string(m) + " exceeds the cap");
    }
    EPSet s;
    s._threshold = n;
    s._period    = m;
    s._tail.assign(static_cast<std::size_t>(m), 0);
    for (Int r : residues) {
      if (r < 0 || r >= m) {
        throw InvalidParameter("residue " + std::to_string(r) + " outside [0, "
                               + std::to_string(m) + ")");
      }
      s._tail[static_cast<std::size_t>(r)] = 1;
    }
    std::sort(low.begin(), low.end());
    low.erase(std::unique(low.begin(), low.end()), low.end());
    for (Int x : low) {
      if (x < 0 || x >= n) {
        throw InvalidParameter("low element " + std::to_string(x) + " outside [0, "
                               + std::to_string(n) + ")");
      }
    }
    s._low = std::move(low);
    s.canonicalize();
    return s;
  }

  void EPSet::canonicalize() {
    for (Int d : arith::divisors(_period)) {
      bool ok = true;
      for (Int r = d; r < _period && ok; ++r) {
        ok = _tail[static_cast<std::size_t>(r)] == _tail[static_cast<std::size_t>(r % d)];
      }
      if (ok) {
        _tail.resize(static_cast<std::size_t>(d));
        _period = d;
        break;
      }
    }
    while (_threshold > 0) {
      Int  x      = _threshold - 1;
      bool in_low = !_low.empty() && _low.back() == x;
      if (in_low != (_tail[static_cast<std::size_t>(x % _period)] != 0)) {
        break;
      }
      if (in_low) {
        _low.pop_back();
      }
      --_threshold;
    }
  }

  std::vector<Int> EPSet::residues() const {
    std::vector<Int> out;
    for (Int r = 0; r < _period; ++r) {
      if (_tail[static_cast<std::size_t>(r)]) {
        out.push_back(r);
      }
    }
    return out;
  }

  bool EPSet::contains(Int x) const {
    if (x < 0) {
      return false;
    }
    if (x < _threshold) {
      return std::binary_search(_low.begin(), _low.end(), x);
    }
    return _tail[static_cast<std::size_t>(x % _period)] != 0;
  }

  bool EPSet::is_finite() const {
    return std::none_of(_tail.begin(), _tail.end(), [](auto b) { return b != 0; });
  }

  bool EPSet::is_empty() const {
    return is_finite() && _low.empty();
  }

  bool EPSet::is_naturals() const {
    return _threshold == 0 && _period == 1 && _tail[0] != 0;
  }

  Card EPSet::card() const {
    return is_finite() ? Card::fin(_low.size()) : Card::aleph0();
  }

  bool EPSet::is_moiety() const {
    return !is_finite() && !complement().is_finite();
  }

  Int EPSet::min() const {
    if (!_low.empty()) {
      return _low.front();
    }
    for (Int x = _threshold; x < _threshold + _period; ++x) {
      if (contains(x)) {
        return x;
      }
    }
    throw PreconditionError("min of the empty set");
  }

  std::vector<Int> EPSet::elements_below(Int bound) const {
    std::vector<Int> out;
    for (Int x : _low) {
      if (x < bound) {
        out.push_back(x);
      }
    }
    for (Int x = _threshold; x < bound; ++x) {
      if (_tail[static_cast<std::size_t>(x % _period)]) {
        out.push_back(x);
      }
    }
    return out;
  }

  std::vector<Int> EPSet::first_elements(std::size_t k) const {
    std::vector<Int> out;
    for (Int x : _low) {
      if (out.size() == k) {
        return out;
      }
      out.push_back(x);
    }
    if (is_finite()) {
      return out;
    }
    for (Int x = _threshold; out.size() < k; ++x) {
      if (_tail[static_cast<std::size_t>(x % _period)]) {
        out.push_back(x);
      }
    }
    return out;
  }

  namespace {
    template <class Op>
    EPSet combine(EPSet const& a, EPSet const& b, Op op) {
      Int n = std::max(a.threshold(), b.threshold());
      Int m = arith::checked_lcm(a.period(), b.period());
      return EPSet::from_predicate(n, m, [&](Int x) { return op(a.contains(x), b.contains(x)); });
    }
  }  // namespace

  EPSet EPSet::operator|(EPSet const& b) const {
    return combine(*this, b, [](bool p, bool q) { return p || q; });
  }

  EPSet EPSet::operator&(EPSet const& b) const {
    return combine(*this, b, [](bool p, bool q) { return p && q; });
  }

  EPSet EPSet::operator-(EPSet const& b) const {
    return combine(*this, b, [](bool p, bool q) { return p && !q; });
  }

  EPSet EPSet::complement() const {
    EPSet s = *this;
    for (auto& t : s._tail) {
      t = t ? 0 : 1;
    }
    std::vector<Int> low;
    for (Int x = 0, i = 0; x < _threshold; ++x) {
      if (i < static_cast<Int>(_low.size()) && _low[static_cast<std::size_t>(i)] == x) {
        ++i;
      } else {
        low.push_back(x);
      }
    }
    s._low = std::move(low);
    return s;
  }

  bool EPSet::subset_of(EPSet const& b) const {
    return (*this - b).is_empty();
  }

  bool EPSet::disjoint_from(EPSet const& b) const {
    return (*this & b).is_empty();
  }

  Decomposition EPSet::decompose() const {
    Decomposition d;
    d.finite = _low;
    for (Int r = 0; r < _period; ++r) {
      if (_tail[static_cast<std::size_t>(r)]) {
        Int t0 = _threshold <= r ? 0 : (_threshold - r + _period - 1) / _period;
        d.progressions.push_back({r, _period, t0});
      }
    }
    return d;
  }

  std::vector<EPSet> EPSet::split(int k) const {
    if (k < 2) {
      throw InvalidParameter("split needs at least two parts");
    }
    if (is_finite()) {
      throw PreconditionError("cannot split a finite set into infinite parts");
    }
    Decomposition      d = decompose();
    std::vector<EPSet> parts(static_cast<std::size_t>(k));
    parts[0] = finite(d.finite);
    for (auto const& p : d.progressions) {
      Int step = p.m * k;
      for (int i = 0; i < k; ++i) {
        parts[static_cast<std::size_t>(i)] =
            parts[static_cast<std::size_t>(i)] | progression(p.start() + i * p.m, step);
      }
    }
    return parts;
  }

  std::string EPSet::str() const {
    std::ostringstream os;
    os << "ep N=" << _threshold << " m=" << _period << " R={";
    bool first_item = true;
    for (Int r : residues()) {
      os << (first_item ? "" : ",") << r;
      first_item = false;
    }
    os << "} L={";
    first_item = true;
    for (Int x : _low) {
      os << (first_item ? "" : ",") << x;
      first_item = false;
    }
    os << "}";
    return os.str();
  }

  EPSet EPSet::parse(std::string_view text) {
    detail::Scanner sc(text, "epset");
    sc.expect("ep");
    sc.expect("N=");
    Int n = sc.read_nat();
    sc.expect("m=");
    Int m = sc.read_int();
    if (m <= 0) {
      sc.fail("period must be positive");
    }
    auto read_list = [&](std::string_view head) {
      std::vector<Int> out;
      sc.expect(head);
      if (sc.try_consume("}")) {
        return out;
      }
      do {
        out.push_back(sc.read_nat());
      } while (sc.try_consume(","));
      sc.expect("}");
      return out;
    };
    auto r = read_list("R={");
    auto l = read_list("L={");
    if (!sc.at_end()) {
      sc.fail("trailing input");
    }
    try {
      return from_parts(n, m, std::move(r), std::move(l));
    } catch (InvalidParameter const& e) {
      throw ParseError(std::string("epset: ") + e.what());
    }
  }

  EPSet ep_boolean(BoolOp op, EPSet const& a, EPSet const* b) {
    if (op == BoolOp::complement) {
      return a.complement();
    }
    if (b == nullptr) {
      throw InvalidParameter("binary set operation needs two operands");
    }
    switch (op) {
      case BoolOp::union_:
        return a | *b;
      case BoolOp::intersection:
        return a & *b;
      case BoolOp::difference:
        return a - *b;
      case BoolOp::complement:
        break;
    }
    return a.complement();
  }

  Int comparison_window(EPSet const& a, EPSet const& b) {
    return 4 * std::lcm(a.period(), b.period()) + std::max(a.threshold(), b.threshold());
  }

}  // namespace ixm
