#include "ixm/sampling.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

#include "ixm/error.hpp"

namespace ixm::sampling {

  std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z               = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z               = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  Rng case_rng(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed ^ (index * 0xd1b54a32d192ed03ULL);
    std::seed_seq seq{splitmix64(s), splitmix64(s), splitmix64(s), splitmix64(s)};
    return Rng(seq);
  }

  Int uni(Rng& rng, Int lo, Int hi) {
    return std::uniform_int_distribution<Int>(lo, hi)(rng);
  }

  EPSet random_set(Rng& rng) {
    Int              n = uni(rng, 0, 20);
    Int              m = uni(rng, 1, 12);
    std::vector<Int> residues, low;
    int              density = static_cast<int>(uni(rng, 0, 4));
    for (Int r = 0; r < m; ++r) {
      if (uni(rng, 0, 4) < density) {
        residues.push_back(r);
      }
    }
    for (Int x = 0; x < n; ++x) {
      if (rng() % 2) {
        low.push_back(x);
      }
    }
    return EPSet::from_parts(n, m, residues, low);
  }

  Chart random_chart(Rng& rng) {
    for (;;) {
      Int              m1 = uni(rng, 1, 6), m2 = uni(rng, 1, 6);
      std::vector<Int> src(static_cast<std::size_t>(m1)), dst(static_cast<std::size_t>(m2));
      std::iota(src.begin(), src.end(), 0);
      std::iota(dst.begin(), dst.end(), 0);
      std::shuffle(src.begin(), src.end(), rng);
      std::shuffle(dst.begin(), dst.end(), rng);
      std::vector<Piece> pieces;
      Int                count = uni(rng, 0, std::min<Int>({m1, m2, 3}));
      for (Int i = 0; i < count; ++i) {
        Int r = src[static_cast<std::size_t>(i)], s = dst[static_cast<std::size_t>(i)];
        pieces.push_back({r + m1 * uni(rng, 0, 2), m1, s + m2 * uni(rng, 0, 2), m2});
      }
      std::vector<std::pair<Int, Int>> pairs;
      Int                              np = uni(rng, 0, 5);
      for (Int i = 0; i < np; ++i) {
        pairs.emplace_back(uni(rng, 0, 15), uni(rng, 0, 15));
      }
      try {
        return Chart::make(pairs, pieces);
      } catch (PreconditionError const&) {
        // clashing pairs; draw again
      }
    }
  }

  Chart random_permutation(Rng& rng) {
    Int                m1 = uni(rng, 1, 4), m2 = uni(rng, 1, 4);
    std::vector<EPSet> a, b;
    Int                k = std::min(m1, m2);
    // k classes each side: the first k-1 residues, then the rest lumped
    for (Int i = 0; i < k; ++i) {
      EPSet sa = i + 1 < k ? EPSet::residue_class(i, m1) : EPSet();
      EPSet sb = i + 1 < k ? EPSet::residue_class(i, m2) : EPSet();
      if (i + 1 == k) {
        for (Int r = i; r < m1; ++r) {
          sa = sa | EPSet::residue_class(r, m1);
        }
        for (Int r = i; r < m2; ++r) {
          sb = sb | EPSet::residue_class(r, m2);
        }
      }
      a.push_back(sa);
      b.push_back(sb);
    }
    std::shuffle(b.begin(), b.end(), rng);
    Chart f;
    for (Int i = 0; i < k; ++i) {
      f = disjoint_union(f, bijection_between(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(i)]));
    }
    std::vector<Int> p(static_cast<std::size_t>(uni(rng, 0, 5)));
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    std::vector<std::pair<Int, Int>> pairs;
    for (std::size_t i = 0; i < p.size(); ++i) {
      pairs.emplace_back(static_cast<Int>(i), p[i]);
    }
    Chart sigma = extend_to_permutation(Chart::from_pairs(pairs), EPSet::naturals());
    return compose(sigma, f);
  }

  Chart permutation_inside(Rng& rng, EPSet const& s) {
    if (s.is_finite()) {
      auto xs = s.low();
      std::shuffle(xs.begin(), xs.end(), rng);
      std::vector<std::pair<Int, Int>> pairs;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        pairs.emplace_back(s.low()[i], xs[i]);
      }
      return disjoint_union(Chart::from_pairs(pairs), Chart::identity(s.complement()));
    }
    // transport a permutation of N onto s
    Chart b = bijection_between(EPSet::naturals(), s);
    Chart g = compose(compose(invert(b), random_permutation(rng)), b);
    return disjoint_union(g, Chart::identity(s.complement()));
  }

  Chart pointwise_stabiliser_element(Rng& rng, EPSet const& sigma) {
    return permutation_inside(rng, sigma.complement());
  }

  Chart filter_stabiliser_element(Rng& rng, UFOracle const& F) {
    if (F.is_principal()) {
      return pointwise_stabiliser_element(rng, EPSet::singleton(F.point()));
    }
    // moves only points outside a neighbourhood of the point, or permutes
    // inside the neighbourhood by a stabilising affine shuffle
    Int   k    = uni(rng, 1, 6);
    EPSet near = tower_neighbourhood(F, k);
    Chart out  = permutation_inside(rng, near.complement());
    if (rng() % 2) {
      // swap two far classes modulo 3k inside the neighbourhood, fixing the
      // class of the point
      Int   r  = F.residue(3 * k);
      auto  xs = std::vector<Int>{};
      for (Int c = 0; c < 3 * k; ++c) {
        if (c % k == r % k && c != r) {
          xs.push_back(c);
        }
      }
      EPSet a = EPSet::residue_class(xs[0], 3 * k), b = EPSet::residue_class(xs[1], 3 * k);
      EPSet rest = (a | b).complement();
      Chart swap = disjoint_union(disjoint_union(bijection_between(a, b), bijection_between(b, a)),
                                  Chart::identity(rest));
      out = compose(out, swap);
    }
    return out;
  }

  Chart partition_stabiliser_element(Rng& rng, FinPartition const& p) {
    std::vector<int> perm(static_cast<std::size_t>(p.size()));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Chart out = block_permutation(p, perm);
    for (auto const& b : p.blocks()) {
      if (rng() % 2) {
        out = compose(out, permutation_inside(rng, b));
      }
    }
    return out;
  }

  Chart partition_astabiliser_element(Rng& rng, FinPartition const& p) {
    Chart out = partition_stabiliser_element(rng, p);
    // a finite shuffle across blocks
    std::vector<Int> xs(static_cast<std::size_t>(uni(rng, 2, 6)));
    std::iota(xs.begin(), xs.end(), 0);
    std::shuffle(xs.begin(), xs.end(), rng);
    std::vector<std::pair<Int, Int>> pairs;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      pairs.emplace_back(static_cast<Int>(i), xs[i]);
    }
    return compose(out, extend_to_permutation(Chart::from_pairs(pairs), EPSet::naturals()));
  }

  Chart group_element(Rng& rng, ClassId const& c) {
    switch (c.family) {
      case Family::S:
        return random_permutation(rng);
      case Family::P:
        return pointwise_stabiliser_element(rng, c.gamma);
      case Family::V:
        return filter_stabiliser_element(rng, c.uf);
      case Family::A:
        return partition_stabiliser_element(rng, c.partition);
    }
    throw InternalError("unknown class family");
  }

  namespace {

    // Identity on keep, and f pushed off keep on the rest.
    Chart keep_and_move(Rng& rng, EPSet const& keep) {
      EPSet rest = keep.complement();
      if (rest.is_finite()) {
        return permutation_inside(rng, rest);
      }
      Chart f    = rng() % 2 ? random_chart(rng) : random_permutation(rng);
      Chart into = bijection_between(EPSet::naturals(), rest);
      Chart g    = compose(restrict(f, rest), into);
      if (rng() % 3 == 0) {
        // a partial identity on a random part of keep
        return disjoint_union(Chart::identity(keep & random_set(rng)), g);
      }
      return disjoint_union(Chart::identity(keep), g);
    }

    Chart structured(Rng& rng, ClassId const& c) {
      switch (c.family) {
        case Family::S: {
          switch (rng() % 3) {
            case 0:
              return compose(random_permutation(rng), Chart::affine(uni(rng, 1, 3), uni(rng, 0, 3)));
            case 1:
              return restrict(random_permutation(rng), random_set(rng));
            default:
              return invert(compose(random_permutation(rng), Chart::affine(uni(rng, 1, 3), uni(rng, 0, 3))));
          }
        }
        case Family::P:
          return keep_and_move(rng, c.gamma);
        case Family::V:
          return keep_and_move(rng, tower_neighbourhood(c.uf, uni(rng, 1, 6)));
        case Family::A: {
          FinPartition const& p = c.partition;
          Chart               a = partition_stabiliser_element(rng, p);
          if (rng() % 2) {
            // every block into a part of itself
            Chart g;
            for (auto const& b : p.blocks()) {
              g = disjoint_union(g, bijection_between(b, rng() % 2 ? b : b.split(2)[0]));
            }
            return compose(a, g);
          }
          // forget some blocks
          EPSet keep;
          for (auto const& b : p.blocks()) {
            if (rng() % 2) {
              keep = keep | b;
            }
          }
          return compose(restrict(a, keep), rng() % 2 ? random_permutation(rng) : random_chart(rng));
        }
      }
      throw InternalError("unknown class family");
    }

  }  // namespace

  namespace {

    bool small(Chart const& f) {
      return f.modulus() <= kCandidateModulus && invert(f).modulus() <= kCandidateModulus;
    }

    // Products are only formed from small factors; nullopt asks for a redraw.
    std::optional<Chart> product(Chart const& f, Chart const& g) {
      if (!small(f) || !small(g)) {
        return std::nullopt;
      }
      return compose(f, g);
    }

    std::optional<Chart> raw_candidate(Rng& rng, ClassId const& c) {
      switch (rng() % 6) {
        case 0:
          return random_chart(rng);
        case 1:
          return random_permutation(rng);
        case 2:
          return group_element(rng, c);
        case 3: {
          Chart f = structured(rng, c);
          return product(f, group_element(rng, c));
        }
        case 4: {
          Chart f = structured(rng, c);
          return product(f, rng() % 2 ? random_chart(rng) : structured(rng, c));
        }
        default:
          return structured(rng, c);
      }
    }

  }  // namespace

  Chart class_candidate(Rng& rng, ClassId const& c) {
    // keep moduli small so products stay cheap to decide
    for (;;) {
      auto f = raw_candidate(rng, c);
      if (f && small(*f)) {
        return *f;
      }
    }
  }

  Chart class_member(Rng& rng, ClassId const& c) {
    for (int i = 0; i < 64; ++i) {
      Chart f = class_candidate(rng, c);
      if (in_class(c, f)) {
        return f;
      }
    }
    return group_element(rng, c);
  }

  Chart ideal_or_idempotent(Rng& rng) {
    switch (rng() % 3) {
      case 0: {
        std::vector<std::pair<Int, Int>> pairs;
        std::vector<Int>                 ys(static_cast<std::size_t>(uni(rng, 0, 8)));
        std::iota(ys.begin(), ys.end(), uni(rng, 0, 10));
        std::shuffle(ys.begin(), ys.end(), rng);
        for (std::size_t i = 0; i < ys.size(); ++i) {
          pairs.emplace_back(static_cast<Int>(i) * uni(rng, 1, 3) + static_cast<Int>(i), ys[i]);
        }
        try {
          return Chart::from_pairs(pairs);
        } catch (PreconditionError const&) {
          return Chart();
        }
      }
      case 1:
        return Chart::identity(random_set(rng));
      default:
        return restrict(random_chart(rng), EPSet::first(uni(rng, 0, 30)));
    }
  }

  Chart outside_ideal_and_idempotents(Rng& rng) {
    for (;;) {
      Chart f = rng() % 2 ? random_chart(rng) : random_permutation(rng);
      if (rng() % 3 == 0) {
        f = compose(f, Chart::affine(uni(rng, 1, 3), uni(rng, 0, 4)));
      }
      if (rank(f).is_infinite() && !f.is_idempotent()) {
        return f;
      }
    }
  }

}  // namespace ixm::sampling
