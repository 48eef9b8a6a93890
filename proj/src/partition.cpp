#include "ixm/partition.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <queue>
#include <sstream>
#include <unordered_map>

#include "ixm/error.hpp"
#include "scan.hpp"

namespace ixm {

  // ---------------------------------------------------------------------
  // partitions

  FinPartition FinPartition::residues(int n) {
    if (n < 2 || n > 8) {
      throw InvalidParameter("a partition needs 2 <= n <= 8 blocks");
    }
    std::vector<EPSet> blocks;
    for (int i = 0; i < n; ++i) {
      blocks.push_back(EPSet::residue_class(i, n));
    }
    return FinPartition(std::move(blocks));
  }

  FinPartition FinPartition::from_blocks(std::vector<EPSet> blocks) {
    if (blocks.size() < 2 || blocks.size() > 8) {
      throw InvalidParameter("a partition needs 2 <= n <= 8 blocks");
    }
    EPSet seen;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      if (blocks[i].is_finite()) {
        throw InvalidParameter("block " + std::to_string(i) + " is finite");
      }
      if (!blocks[i].disjoint_from(seen)) {
        throw InvalidParameter("block " + std::to_string(i) + " meets an earlier block");
      }
      seen = seen | blocks[i];
    }
    if (!seen.is_naturals()) {
      throw InvalidParameter("blocks do not cover N; first uncovered point "
                             + std::to_string(seen.complement().min()));
    }
    return FinPartition(std::move(blocks));
  }

  int FinPartition::block_of(Int x) const {
    for (int i = 0; i < size(); ++i) {
      if (block(i).contains(x)) {
        return i;
      }
    }
    throw InvalidParameter("block_of: negative point");
  }

  std::string FinPartition::str() const {
    if (*this == residues(size())) {
      return "part mod " + std::to_string(size());
    }
    std::string s = "part [";
    for (int i = 0; i < size(); ++i) {
      s += (i ? "; " : "") + block(i).str();
    }
    return s + "]";
  }

  FinPartition FinPartition::parse(std::string_view text) {
    detail::Scanner sc(text, "partition");
    sc.expect("part");
    if (sc.try_consume("mod")) {
      Int n = sc.read_nat();
      if (!sc.at_end()) {
        sc.fail("trailing input");
      }
      if (n < 2 || n > 8) {
        sc.fail("need 2 <= n <= 8");
      }
      return residues(static_cast<int>(n));
    }
    sc.expect("[");
    auto open  = text.find('[');
    auto close = text.rfind(']');
    if (close == std::string_view::npos || close < open) {
      sc.fail("expected ']'");
    }
    for (char c : text.substr(close + 1)) {
      if (!std::isspace(static_cast<unsigned char>(c))) {
        throw ParseError("partition: trailing input after ']'");
      }
    }
    std::vector<EPSet> blocks;
    std::string_view   body = text.substr(open + 1, close - open - 1);
    while (true) {
      auto cut = body.find(';');
      blocks.push_back(EPSet::parse(body.substr(0, cut)));
      if (cut == std::string_view::npos) {
        break;
      }
      body.remove_prefix(cut + 1);
    }
    try {
      return from_blocks(std::move(blocks));
    } catch (InvalidParameter const& e) {
      throw ParseError(std::string("partition: ") + e.what());
    }
  }

  // ---------------------------------------------------------------------
  // relations

  namespace {

    void check_n(int n) {
      if (n < 1 || n > 8) {
        throw InvalidParameter("relations are limited to 1 <= n <= 8");
      }
    }

    unsigned row(std::uint64_t bits, int n, int i) {
      return static_cast<unsigned>((bits >> (i * n)) & ((1u << n) - 1));
    }

    std::uint64_t compose_bits(std::uint64_t r, std::uint64_t s, int n) {
      std::uint64_t out = 0;
      for (int i = 0; i < n; ++i) {
        unsigned acc = 0;
        for (unsigned k = row(r, n, i); k; k &= k - 1) {
          acc |= row(s, n, std::countr_zero(k));
        }
        out |= std::uint64_t(acc) << (i * n);
      }
      return out;
    }

  }  // namespace

  BinRel BinRel::empty(int n) {
    check_n(n);
    return {n, 0};
  }

  BinRel BinRel::identity(int n) {
    BinRel r = empty(n);
    for (int i = 0; i < n; ++i) {
      r.set(i, i);
    }
    return r;
  }

  BinRel BinRel::full(int n) {
    check_n(n);
    return {n, n * n == 64 ? ~std::uint64_t(0) : (std::uint64_t(1) << (n * n)) - 1};
  }

  BinRel BinRel::from_pairs(int n, std::vector<std::pair<int, int>> const& pairs) {
    BinRel r = empty(n);
    for (auto [i, j] : pairs) {
      if (i < 0 || j < 0 || i >= n || j >= n) {
        throw InvalidParameter("pair (" + std::to_string(i) + "," + std::to_string(j)
                               + ") outside n = " + std::to_string(n));
      }
      r.set(i, j);
    }
    return r;
  }

  BinRel BinRel::from_perm(std::vector<int> const& perm) {
    BinRel r = empty(static_cast<int>(perm.size()));
    for (int i = 0; i < r.n; ++i) {
      r.set(i, perm[static_cast<std::size_t>(i)]);
    }
    return r;
  }

  unsigned BinRel::dom_mask() const {
    unsigned m = 0;
    for (int i = 0; i < n; ++i) {
      if (row(bits, n, i)) {
        m |= 1u << i;
      }
    }
    return m;
  }

  unsigned BinRel::im_mask() const {
    unsigned m = 0;
    for (int i = 0; i < n; ++i) {
      m |= row(bits, n, i);
    }
    return m;
  }

  bool BinRel::is_permutation() const {
    if (dom_mask() != (1u << n) - 1 || im_mask() != (1u << n) - 1) {
      return false;
    }
    return std::popcount(bits) == n;
  }

  std::vector<std::pair<int, int>> BinRel::pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (has(i, j)) {
          out.emplace_back(i, j);
        }
      }
    }
    return out;
  }

  std::string BinRel::str() const {
    std::ostringstream os;
    os << "rel n=" << n << " {";
    bool first = true;
    for (auto [i, j] : pairs()) {
      os << (first ? "" : ",") << "(" << i << "," << j << ")";
      first = false;
    }
    os << "}";
    return os.str();
  }

  BinRel BinRel::parse(std::string_view text) {
    detail::Scanner sc(text, "relation");
    sc.expect("rel");
    sc.expect("n");
    sc.expect("=");
    Int n = sc.read_nat();
    if (n < 1 || n > 8) {
      sc.fail("need 1 <= n <= 8");
    }
    std::vector<std::pair<int, int>> pairs;
    sc.expect("{");
    if (!sc.try_consume("}")) {
      do {
        sc.expect("(");
        Int i = sc.read_nat();
        sc.expect(",");
        Int j = sc.read_nat();
        sc.expect(")");
        if (i >= n || j >= n) {
          sc.fail("pair outside n");
        }
        pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
      } while (sc.try_consume(","));
      sc.expect("}");
    }
    if (!sc.at_end()) {
      sc.fail("trailing input");
    }
    return from_pairs(static_cast<int>(n), pairs);
  }

  BinRel rel_compose(BinRel const& r, BinRel const& s) {
    if (r.n != s.n) {
      throw InvalidParameter("composing relations on " + std::to_string(r.n) + " and "
                             + std::to_string(s.n) + " points");
    }
    return {r.n, compose_bits(r.bits, s.bits, r.n)};
  }

  BinRel rel_converse(BinRel const& r) {
    BinRel c = BinRel::empty(r.n);
    for (auto [i, j] : r.pairs()) {
      c.set(j, i);
    }
    return c;
  }

  std::pair<unsigned, unsigned> rel_dom_im(BinRel const& r) {
    return {r.dom_mask(), r.im_mask()};
  }

  // ---------------------------------------------------------------------
  // the relation of a chart and the partition stabilisers

  BinRel rho_of(FinPartition const& p, Chart const& f) {
    BinRel r = BinRel::empty(p.size());
    for (int i = 0; i < p.size(); ++i) {
      EPSet img = image_of_set(f, p.block(i));
      for (int j = 0; j < p.size(); ++j) {
        if (!(img & p.block(j)).is_finite()) {
          r.set(i, j);
        }
      }
    }
    return r;
  }

  bool in_partition_stab(FinPartition const& p, Chart const& f) {
    if (!f.is_permutation()) {
      return false;
    }
    for (int i = 0; i < p.size(); ++i) {
      EPSet img = image_of_set(f, p.block(i));
      if (std::none_of(p.blocks().begin(), p.blocks().end(),
                       [&](EPSet const& b) { return b == img; })) {
        return false;
      }
    }
    return true;
  }

  bool in_partition_astab(FinPartition const& p, Chart const& f) {
    if (!f.is_permutation()) {
      return false;
    }
    for (int i = 0; i < p.size(); ++i) {
      EPSet img = image_of_set(f, p.block(i));
      if (std::none_of(p.blocks().begin(), p.blocks().end(), [&](EPSet const& b) {
            return (img - b).is_finite() && (b - img).is_finite();
          })) {
        return false;
      }
    }
    return true;
  }

  Chart block_permutation(FinPartition const& p, std::vector<int> const& perm) {
    if (static_cast<int>(perm.size()) != p.size()
        || !BinRel::from_perm(perm).is_permutation()) {
      throw InvalidParameter("block_permutation: not a permutation of the blocks");
    }
    Chart a;
    for (int i = 0; i < p.size(); ++i) {
      a = disjoint_union(a, bijection_between(p.block(i), p.block(perm[static_cast<std::size_t>(i)])));
    }
    return a;
  }

  Chart padding_perm(FinPartition const& p, Chart const& f, Chart const& g) {
    int const n     = p.size();
    BinRel    rf    = rho_of(p, f);
    BinRel    rg    = rho_of(p, g);
    Chart     g_inv = invert(g);
    std::vector<EPSet> img_f, pre_g;
    for (int j = 0; j < n; ++j) {
      img_f.push_back(image_of_set(f, p.block(j)));
      pre_g.push_back(image_of_set(g_inv, p.block(j)));
    }
    Chart a;
    for (int i = 0; i < n; ++i) {
      EPSet const&     sigma = p.block(i);
      std::vector<int> from, to;  // j with (j,i) in rho_f; k with (i,k) in rho_g
      for (int j = 0; j < n; ++j) {
        if (rf.has(j, i)) {
          from.push_back(j);
        }
        if (rg.has(i, j)) {
          to.push_back(j);
        }
      }
      if (from.empty() || to.empty()) {
        a = disjoint_union(a, Chart::identity(sigma));
        continue;
      }
      // One moiety of each Sigma_j f cap Sigma_i per k, one of each
      // Sigma_k g^-1 cap Sigma_i per j, with a spare part left over on both
      // sides.
      std::vector<std::vector<EPSet>> src, dst;
      for (int j : from) {
        src.push_back((img_f[static_cast<std::size_t>(j)] & sigma).split(static_cast<int>(to.size()) + 1));
      }
      for (int k : to) {
        dst.push_back((pre_g[static_cast<std::size_t>(k)] & sigma).split(static_cast<int>(from.size()) + 1));
      }
      Chart part;
      for (std::size_t x = 0; x < from.size(); ++x) {
        for (std::size_t y = 0; y < to.size(); ++y) {
          part = disjoint_union(part, bijection_between(src[x][y], dst[y][x]));
        }
      }
      a = disjoint_union(a, extend_to_permutation(part, sigma));
    }
    if (!in_partition_stab(p, a)) {
      throw InternalError("padding_perm: result is not in the partition stabiliser");
    }
    if (rho_of(p, compose(compose(f, a), g)) != rel_compose(rf, rg)) {
      throw InternalError("padding_perm: rho(f a g) differs from rho(f) rho(g)");
    }
    return a;
  }

  // ---------------------------------------------------------------------
  // closure in B_n

  namespace {

    std::vector<std::uint64_t> perm_relations(int n) {
      std::vector<int> perm(static_cast<std::size_t>(n));
      std::iota(perm.begin(), perm.end(), 0);
      std::vector<std::uint64_t> out;
      do {
        out.push_back(BinRel::from_perm(perm).bits);
      } while (std::next_permutation(perm.begin(), perm.end()));
      return out;
    }

    // Breadth-first closure by right multiplication, stopping at n x n.
    bool reaches_full(int n, std::vector<std::uint64_t> const& gens,
                      std::vector<std::uint8_t>& seen) {
      std::uint64_t const full = BinRel::full(n).bits;
      std::fill(seen.begin(), seen.end(), 0);
      std::vector<std::uint64_t> queue;
      for (auto g : gens) {
        if (!seen[g]) {
          seen[g] = 1;
          queue.push_back(g);
        }
      }
      for (std::size_t i = 0; i < queue.size(); ++i) {
        if (queue[i] == full) {
          return true;
        }
        for (auto g : gens) {
          std::uint64_t c = compose_bits(queue[i], g, n);
          if (!seen[c]) {
            seen[c] = 1;
            queue.push_back(c);
          }
        }
      }
      return false;
    }

    void check_admissible(int n, BinRel const& rho, BinRel const& sigma) {
      unsigned all = (1u << n) - 1;
      if (rho.n != n || sigma.n != n) {
        throw InvalidParameter("relations of the wrong size");
      }
      if (rho.dom_mask() != all) {
        throw PreconditionError("nxn: dom(rho) is not all of n for " + rho.str());
      }
      if (sigma.im_mask() != all) {
        throw PreconditionError("nxn: im(sigma) is not all of n for " + sigma.str());
      }
      if (rho.is_permutation() || sigma.is_permutation()) {
        throw PreconditionError("nxn: rho and sigma must not be permutations");
      }
    }

    std::vector<BinRel> admissible(int n, bool by_domain) {
      std::vector<BinRel> out;
      unsigned            all = (1u << n) - 1;
      for (std::uint64_t b = 0; b < (std::uint64_t(1) << (n * n)); ++b) {
        BinRel r{n, b};
        if ((by_domain ? r.dom_mask() : r.im_mask()) == all && !r.is_permutation()) {
          out.push_back(r);
        }
      }
      return out;
    }

  }  // namespace

  bool nxn_closure_check(int n, BinRel const& rho, BinRel const& sigma) {
    if (n < 1 || n > 4) {
      throw ResourceError("nxn closure is limited to n <= 4");
    }
    check_admissible(n, rho, sigma);
    auto gens = perm_relations(n);
    gens.push_back(rho.bits);
    gens.push_back(sigma.bits);
    std::vector<std::uint8_t> seen(std::size_t(1) << (n * n));
    return reaches_full(n, gens, seen);
  }

  NxnReport nxn_exhaustive_serial(int n) {
    if (n < 1 || n > 3) {
      throw ResourceError("exhaustive nxn check is limited to n <= 3");
    }
    auto const rhos   = admissible(n, true);
    auto const sigmas = admissible(n, false);
    auto       gens   = perm_relations(n);
    gens.resize(gens.size() + 2);
    std::vector<std::uint8_t> seen(std::size_t(1) << (n * n));
    NxnReport                 rep;
    for (auto const& r : rhos) {
      for (auto const& s : sigmas) {
        gens[gens.size() - 2] = r.bits;
        gens[gens.size() - 1] = s.bits;
        ++rep.pairs;
        if (!reaches_full(n, gens, seen)) {
          ++rep.failures;
          if (!rep.first_failure) {
            rep.first_failure = std::pair{r, s};
          }
        }
      }
    }
    return rep;
  }

  NxnReport nxn_exhaustive(int n) {
    if (n < 1 || n > 3) {
      throw ResourceError("exhaustive nxn check is limited to n <= 3");
    }
    auto const rhos   = admissible(n, true);
    auto const sigmas = admissible(n, false);
    auto const perms  = perm_relations(n);
    // first failing sigma index per rho, merged in rho order afterwards
    std::vector<std::size_t> fails(rhos.size(), 0);
    std::vector<long>        first(rhos.size(), -1);
#pragma omp parallel
    {
      auto gens = perms;
      gens.resize(gens.size() + 2);
      std::vector<std::uint8_t> seen(std::size_t(1) << (n * n));
#pragma omp for schedule(dynamic)
      for (std::size_t i = 0; i < rhos.size(); ++i) {
        gens[gens.size() - 2] = rhos[i].bits;
        for (std::size_t j = 0; j < sigmas.size(); ++j) {
          gens[gens.size() - 1] = sigmas[j].bits;
          if (!reaches_full(n, gens, seen)) {
            ++fails[i];
            if (first[i] < 0) {
              first[i] = static_cast<long>(j);
            }
          }
        }
      }
    }
    NxnReport rep;
    rep.pairs = rhos.size() * sigmas.size();
    for (std::size_t i = 0; i < rhos.size(); ++i) {
      rep.failures += fails[i];
      if (first[i] >= 0 && !rep.first_failure) {
        rep.first_failure = std::pair{rhos[i], sigmas[static_cast<std::size_t>(first[i])]};
      }
    }
    return rep;
  }

  // ---------------------------------------------------------------------
  // factored constructions

  Chart replay(std::vector<Letter> const& word) {
    if (word.empty()) {
      throw PreconditionError("replay of an empty word");
    }
    Chart v = word.front().chart;
    for (std::size_t i = 1; i < word.size(); ++i) {
      v = compose(v, word[i].chart);
    }
    return v;
  }

  namespace {

    constexpr Int kInfinite = -1;

    // How many points of source block l (after the block permutation) go
    // to target block j. kInfinite routes an infinite, co-infinite part.
    using Plan = std::vector<std::vector<Int>>;

    // A in Stab(p): block l onto block perm[l], carrying the planned number
    // of missing points of block l into pre[j] for each j.
    Chart realize_route(FinPartition const& p, EPSet const& missing, std::vector<EPSet> const& pre,
                        std::vector<int> const& perm, Plan const& plan) {
      int const n = p.size();
      Chart     a;
      for (int l = 0; l < n; ++l) {
        EPSet const& from   = p.block(l);
        EPSet const& onto   = p.block(perm[static_cast<std::size_t>(l)]);
        EPSet        tokens = missing & from;
        auto const&  row    = plan[static_cast<std::size_t>(l)];
        int          inf    = static_cast<int>(std::count(row.begin(), row.end(), kInfinite));
        std::vector<EPSet> inf_parts;
        if (inf > 0) {
          inf_parts = tokens.split(inf + 1);
        }
        Chart part;
        Int   used = 0;
        int   next = 0;
        for (int j = 0; j < n; ++j) {
          Int   k      = row[static_cast<std::size_t>(j)];
          EPSet target = onto & pre[static_cast<std::size_t>(j)];
          if (k == kInfinite) {
            part = disjoint_union(part, bijection_between(inf_parts[static_cast<std::size_t>(next++)],
                                                          target.split(2)[0]));
          } else if (k > 0) {
            auto xs = tokens.first_elements(static_cast<std::size_t>(used + k));
            auto ys = target.first_elements(static_cast<std::size_t>(k));
            if (static_cast<Int>(xs.size()) < used + k || static_cast<Int>(ys.size()) < k) {
              throw InternalError("defect routing ran out of points");
            }
            std::vector<std::pair<Int, Int>> pairs;
            for (Int t = 0; t < k; ++t) {
              pairs.emplace_back(xs[static_cast<std::size_t>(used + t)], ys[static_cast<std::size_t>(t)]);
            }
            used += k;
            part = disjoint_union(part, Chart::from_pairs(pairs));
          }
        }
        a = disjoint_union(a, disjoint_union(part, bijection_between(from - part.dom(), onto - part.im())));
      }
      return a;
    }

    // Max flow on a bipartite graph with source supplies and target
    // demands; returns the per-edge amounts when every demand is met.
    std::optional<Plan> finite_flow(std::vector<Int> const& supply, std::vector<Int> const& demand,
                                    std::vector<std::vector<bool>> const& edge) {
      int const n = static_cast<int>(supply.size());
      // node 0 source, 1..n sources, n+1..2n targets, 2n+1 sink
      int const                     V = 2 * n + 2;
      std::vector<std::vector<Int>> cap(static_cast<std::size_t>(V), std::vector<Int>(static_cast<std::size_t>(V), 0));
      Int                           need = 0;
      for (int l = 0; l < n; ++l) {
        cap[0][static_cast<std::size_t>(1 + l)] = supply[static_cast<std::size_t>(l)];
        for (int j = 0; j < n; ++j) {
          if (edge[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)]) {
            cap[static_cast<std::size_t>(1 + l)][static_cast<std::size_t>(1 + n + j)] = INT64_MAX / 4;
          }
        }
        cap[static_cast<std::size_t>(1 + n + l)][static_cast<std::size_t>(V - 1)] = demand[static_cast<std::size_t>(l)];
        need += demand[static_cast<std::size_t>(l)];
      }
      auto residual = cap;
      Int  flow     = 0;
      for (;;) {
        std::vector<int> prev(static_cast<std::size_t>(V), -1);
        prev[0] = 0;
        std::queue<int> q;
        q.push(0);
        while (!q.empty() && prev[static_cast<std::size_t>(V - 1)] < 0) {
          int u = q.front();
          q.pop();
          for (int v = 0; v < V; ++v) {
            if (prev[static_cast<std::size_t>(v)] < 0 && residual[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] > 0) {
              prev[static_cast<std::size_t>(v)] = u;
              q.push(v);
            }
          }
        }
        if (prev[static_cast<std::size_t>(V - 1)] < 0) {
          break;
        }
        Int push = INT64_MAX;
        for (int v = V - 1; v != 0; v = prev[static_cast<std::size_t>(v)]) {
          push = std::min(push, residual[static_cast<std::size_t>(prev[static_cast<std::size_t>(v)])][static_cast<std::size_t>(v)]);
        }
        for (int v = V - 1; v != 0; v = prev[static_cast<std::size_t>(v)]) {
          residual[static_cast<std::size_t>(prev[static_cast<std::size_t>(v)])][static_cast<std::size_t>(v)] -= push;
          residual[static_cast<std::size_t>(v)][static_cast<std::size_t>(prev[static_cast<std::size_t>(v)])] += push;
        }
        flow += push;
      }
      if (flow < need) {
        return std::nullopt;
      }
      Plan plan(static_cast<std::size_t>(n), std::vector<Int>(static_cast<std::size_t>(n), 0));
      for (int l = 0; l < n; ++l) {
        for (int j = 0; j < n; ++j) {
          auto u = static_cast<std::size_t>(1 + l), v = static_cast<std::size_t>(1 + n + j);
          if (cap[u][v] > 0) {
            plan[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)] = cap[u][v] - residual[u][v];
          }
        }
      }
      return plan;
    }

    std::vector<std::vector<int>> all_block_perms(int n) {
      std::vector<int> perm(static_cast<std::size_t>(n));
      std::iota(perm.begin(), perm.end(), 0);
      std::vector<std::vector<int>> out;
      do {
        out.push_back(perm);
      } while (std::next_permutation(perm.begin(), perm.end()));
      return out;
    }

    bool spread_enough(FinPartition const& p, Chart const& f, Card d) {
      EPSet missing = f.im().complement();
      for (auto const& b : p.blocks()) {
        if ((missing & b).card() < d) {
          return false;
        }
      }
      return true;
    }

    // Each block needs `need` more missing points beyond what f alone misses.
    std::optional<Plan> plan_step(FinPartition const& p, BinRel const& rf, std::vector<Card> const& base,
                                  std::vector<Card> const& have, std::vector<int> const& perm, Card d) {
      int const n = p.size();
      std::vector<std::vector<bool>> edge(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n)));
      for (int l = 0; l < n; ++l) {
        for (int j = 0; j < n; ++j) {
          edge[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)] = rf.has(perm[static_cast<std::size_t>(l)], j);
        }
      }
      Plan plan(static_cast<std::size_t>(n), std::vector<Int>(static_cast<std::size_t>(n), 0));
      if (d.is_infinite()) {
        // every short block needs one infinite source with an edge into it
        for (int j = 0; j < n; ++j) {
          if (base[static_cast<std::size_t>(j)].is_infinite()) {
            continue;
          }
          bool ok = false;
          for (int l = 0; l < n && !ok; ++l) {
            if (have[static_cast<std::size_t>(l)].is_infinite() && edge[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)]) {
              plan[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)] = kInfinite;
              ok                                                   = true;
            }
          }
          if (!ok) {
            return std::nullopt;
          }
        }
        return plan;
      }
      std::vector<Int> supply, demand;
      for (int l = 0; l < n; ++l) {
        Card h = have[static_cast<std::size_t>(l)];
        supply.push_back(h.is_infinite() ? INT64_MAX / 4 : static_cast<Int>(h.value()));
        Int b = static_cast<Int>(base[static_cast<std::size_t>(l)].value());
        demand.push_back(std::max<Int>(0, static_cast<Int>(d.value()) - b));
      }
      return finite_flow(supply, demand, edge);
    }

    // Spread the missing points of every block evenly over its targets.
    Plan even_plan(FinPartition const& p, BinRel const& rf, std::vector<Card> const& have,
                   std::vector<int> const& perm) {
      int const n = p.size();
      Plan      plan(static_cast<std::size_t>(n), std::vector<Int>(static_cast<std::size_t>(n), 0));
      for (int l = 0; l < n; ++l) {
        if (have[static_cast<std::size_t>(l)].is_infinite()) {
          continue;
        }
        std::vector<int> targets;
        for (int j = 0; j < n; ++j) {
          if (rf.has(perm[static_cast<std::size_t>(l)], j)) {
            targets.push_back(j);
          }
        }
        Int c = static_cast<Int>(have[static_cast<std::size_t>(l)].value());
        for (std::size_t t = 0; t < targets.size(); ++t) {
          plan[static_cast<std::size_t>(l)][static_cast<std::size_t>(targets[t])] =
              c / static_cast<Int>(targets.size()) + (static_cast<Int>(t) < c % static_cast<Int>(targets.size()));
        }
      }
      return plan;
    }

    std::vector<Card> block_counts(FinPartition const& p, EPSet const& s) {
      std::vector<Card> out;
      for (auto const& b : p.blocks()) {
        out.push_back((s & b).card());
      }
      return out;
    }

  }  // namespace

  Factored defect_spreader(FinPartition const& p, Chart const& f) {
    if (!f.is_total()) {
      throw PreconditionError("defect_spreader: f is not total");
    }
    Card d = defect(f);
    if (d == Card::fin(0)) {
      throw PreconditionError("defect_spreader: f is surjective");
    }
    Factored out{f, {{"f", f}}};
    if (spread_enough(p, f, d)) {
      return out;
    }
    BinRel             rf = rho_of(p, f);
    std::vector<EPSet> pre;
    Chart              f_inv = invert(f);
    for (auto const& b : p.blocks()) {
      pre.push_back(image_of_set(f_inv, b));
    }
    auto const base  = block_counts(p, f.im().complement());
    auto const perms = all_block_perms(p.size());
    // f_{t+1} = f_t a f misses M plus (missing of f_t) a f, where M is what
    // f misses; a routes the old missing points to the short blocks.
    for (int step = 0; step < 4 * p.size() + 4; ++step) {
      EPSet missing = out.value.im().complement();
      auto  have    = block_counts(p, missing);
      std::optional<Plan>     plan;
      std::vector<int> const* chosen = nullptr;
      for (auto const& perm : perms) {
        plan = plan_step(p, rf, base, have, perm, d);
        if (plan) {
          chosen = &perm;
          break;
        }
      }
      bool   last = plan.has_value();
      auto&  perm = last ? *chosen : perms[static_cast<std::size_t>(step) % perms.size()];
      Plan   use  = last ? *plan : even_plan(p, rf, have, perm);
      Chart  a    = realize_route(p, missing, pre, perm, use);
      out.value   = compose(compose(out.value, a), f);
      out.word.push_back({"stab", a});
      out.word.push_back({"f", f});
      if (spread_enough(p, out.value, d)) {
        if (!out.value.is_total()) {
          throw InternalError("defect_spreader: result is not total");
        }
        return out;
      }
    }
    throw InternalError("defect_spreader: routing did not converge for " + f.str());
  }

  namespace {

    // a in Stab(p) fixing every block, with (s cap block i) a inside
    // targets[i], targets[i] an infinite subset of block i.
    Chart block_map_into(FinPartition const& p, EPSet const& s, std::vector<EPSet> const& targets) {
      Chart a;
      for (int i = 0; i < p.size(); ++i) {
        EPSet const& sigma = p.block(i);
        EPSet        from  = s & sigma;
        EPSet const& into  = targets[static_cast<std::size_t>(i)];
        EPSet        rest  = sigma - from;
        EPSet        onto;
        if (from.is_finite()) {
          onto = EPSet::finite(into.first_elements(from.low().size()));
        } else if (rest.is_finite()) {
          // leave exactly |rest| points of the block outside the image
          auto outside = (sigma - into).low().size();
          if (!(sigma - into).is_finite() || outside > rest.low().size()) {
            throw InternalError("block map: too few missing points in block " + std::to_string(i));
          }
          onto = into - EPSet::finite(into.first_elements(rest.low().size() - outside));
        } else {
          onto = into.split(2)[0];
        }
        Chart part = bijection_between(from, onto);
        a = disjoint_union(a, disjoint_union(part, bijection_between(sigma - from, sigma - onto)));
      }
      return a;
    }

    void append(Factored& w, Factored const& tail) {
      w.value = compose(w.value, tail.value);
      w.word.insert(w.word.end(), tail.word.begin(), tail.word.end());
    }

  }  // namespace

  Factored block_evader(FinPartition const& p, EvaderBundle const& u) {
    int const n   = p.size();
    unsigned  all = (1u << n) - 1;
    if (!u.f.is_total() || defect(u.f) == Card::fin(0)) {
      throw PreconditionError("block_evader: f must be total and not surjective (f outside S_1)");
    }
    BinRel rg = rho_of(p, u.g);
    if (rg.is_permutation() || rg.dom_mask() != all) {
      throw PreconditionError("block_evader: g lies in A_P (rho_g = " + rg.str() + ")");
    }
    BinRel rh = rho_of(p, u.h);
    if (rh.is_permutation() || rh.im_mask() != all) {
      throw PreconditionError("block_evader: h lies in the inverse of A_P (rho_h = " + rh.str() + ")");
    }

    // total element missing infinitely many points of every block
    Factored fx;
    if (defect(u.f).is_infinite()) {
      fx = defect_spreader(p, u.f);
    } else {
      if (!u.k) {
        throw PreconditionError("block_evader: d(f) is finite and no element outside S_aleph0 was given");
      }
      Card ck = collapse(*u.k);
      if (ck.is_infinite() || !defect(*u.k).is_infinite()) {
        throw PreconditionError("block_evader: k must have finite collapse and infinite defect");
      }
      // f^mu misses at least mu = c(k) points, then spread over the blocks
      Int      mu = std::max<Int>(1, static_cast<Int>(ck.value()));
      Factored fm{u.f, {{"f", u.f}}};
      for (Int i = 1; i < mu; ++i) {
        fm.value = compose(fm.value, u.f);
        fm.word.push_back({"f", u.f});
      }
      Factored spread = defect_spreader(p, fm.value);
      // replace the leading power by its letters
      Factored fmu{fm.value, fm.word};
      for (std::size_t i = 1; i < spread.word.size(); ++i) {
        auto const& l = spread.word[i];
        if (l.label == "f") {
          for (auto const& x : fm.word) {
            fmu.word.push_back(x);
          }
        } else {
          fmu.word.push_back(l);
        }
      }
      fmu.value = spread.value;
      // a takes im f_mu into dom k: the points k misses come from missing
      // points of f_mu in the same block
      EPSet              hole = u.k->dom().complement();
      std::vector<EPSet> targets;
      for (int i = 0; i < n; ++i) {
        targets.push_back(p.block(i) - hole);
      }
      Chart a = block_map_into(p, fmu.value.im(), targets);
      Factored step{compose(a, *u.k), {{"stab", a}, {"k", *u.k}}};
      append(fmu, step);
      if (!fmu.value.is_total()) {
        throw InternalError("block_evader: f_mu a k is not total");
      }
      Factored again = defect_spreader(p, fmu.value);
      fx             = fmu;
      for (std::size_t i = 1; i < again.word.size(); ++i) {
        auto const& l = again.word[i];
        if (l.label == "f") {
          fx.word.insert(fx.word.end(), fmu.word.begin(), fmu.word.end());
        } else {
          fx.word.push_back(l);
        }
      }
      fx.value = again.value;
    }

    // t with rho_t = n x n: a shortest word in B_n over Sym(n), rho_g, rho_h
    std::vector<std::uint64_t> gens;
    std::vector<std::vector<int>> perms = all_block_perms(n);
    for (auto const& pm : perms) {
      gens.push_back(BinRel::from_perm(pm).bits);
    }
    gens.push_back(rg.bits);
    gens.push_back(rh.bits);
    std::unordered_map<std::uint64_t, std::pair<std::uint64_t, int>> parent;
    std::vector<std::uint64_t>                                       queue;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      if (parent.emplace(gens[i], std::pair{gens[i], -1 - static_cast<int>(i)}).second) {
        queue.push_back(gens[i]);
      }
    }
    std::uint64_t const full = BinRel::full(n).bits;
    for (std::size_t i = 0; i < queue.size() && !parent.contains(full); ++i) {
      for (std::size_t g = 0; g < gens.size(); ++g) {
        std::uint64_t c = compose_bits(queue[i], gens[g], n);
        if (parent.emplace(c, std::pair{queue[i], static_cast<int>(g)}).second) {
          queue.push_back(c);
        }
      }
    }
    if (!parent.contains(full)) {
      throw InternalError("block_evader: n x n not generated by rho_g, rho_h and Sym(n)");
    }
    std::vector<int> letters;
    for (std::uint64_t cur = full;;) {
      auto [prev, g] = parent.at(cur);
      if (g < 0) {
        letters.push_back(-1 - g);
        break;
      }
      letters.push_back(g);
      cur = prev;
    }
    std::reverse(letters.begin(), letters.end());
    auto letter_of = [&](int g) -> Letter {
      auto const np = static_cast<int>(perms.size());
      if (g < np) {
        return {"stab", block_permutation(p, perms[static_cast<std::size_t>(g)])};
      }
      return g == np ? Letter{"g", u.g} : Letter{"h", u.h};
    };
    Letter   first = letter_of(letters.front());
    Factored t{first.chart, {first}};
    for (std::size_t i = 1; i < letters.size(); ++i) {
      Letter next = letter_of(letters[i]);
      Chart  a    = padding_perm(p, t.value, next.chart);
      t.value     = compose(compose(t.value, a), next.chart);
      t.word.push_back({"stab", a});
      t.word.push_back(next);
    }
    if (rho_of(p, t.value) != BinRel::full(n)) {
      throw InternalError("block_evader: rho_t is not n x n");
    }

    // a maps im f_X into Sigma_0 t^-1 within every block
    EPSet              back = image_of_set(invert(t.value), p.block(0));
    std::vector<EPSet> targets;
    for (int i = 0; i < n; ++i) {
      targets.push_back(back & p.block(i));
    }
    Chart    a = block_map_into(p, fx.value.im(), targets);
    Factored out = fx;
    append(out, Factored{a, {{"stab", a}}});
    append(out, t);
    if (!out.value.is_total() || !out.value.im().subset_of(p.block(0))) {
      throw InternalError("block_evader: result is not total with image in block 0");
    }
    return out;
  }

}  // namespace ixm
