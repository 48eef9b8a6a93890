#ifndef IXM_PARTITION_HPP_
#define IXM_PARTITION_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ixm/chart.hpp"
#include "ixm/epset.hpp"

namespace ixm {

  // Partition of N into n >= 2 infinite eventually periodic blocks.
  class FinPartition {
   public:
    FinPartition() : FinPartition(residues(2)) {}

    static FinPartition residues(int n);  // blocks x = i mod n
    static FinPartition from_blocks(std::vector<EPSet> blocks);

    int size() const {
      return static_cast<int>(_blocks.size());
    }
    EPSet const& block(int i) const {
      return _blocks[static_cast<std::size_t>(i)];
    }
    std::vector<EPSet> const& blocks() const {
      return _blocks;
    }
    // index of the block containing x
    int block_of(Int x) const;

    // part mod 3 | part [ep ...; ep ...]
    std::string         str() const;
    static FinPartition parse(std::string_view text);

    friend bool operator==(FinPartition const&, FinPartition const&) = default;

   private:
    explicit FinPartition(std::vector<EPSet> blocks) : _blocks(std::move(blocks)) {}

    std::vector<EPSet> _blocks;
  };

  // Binary relation on {0, .., n-1}, n <= 8; bit i*n + j holds (i, j).
  struct BinRel {
    int           n    = 1;
    std::uint64_t bits = 0;

    static BinRel empty(int n);
    static BinRel identity(int n);
    static BinRel full(int n);
    static BinRel from_pairs(int n, std::vector<std::pair<int, int>> const& pairs);
    // i |-> perm[i]
    static BinRel from_perm(std::vector<int> const& perm);

    bool has(int i, int j) const {
      return (bits >> (i * n + j)) & 1;
    }
    void set(int i, int j) {
      bits |= std::uint64_t(1) << (i * n + j);
    }
    unsigned dom_mask() const;
    unsigned im_mask() const;
    bool     is_permutation() const;
    std::vector<std::pair<int, int>> pairs() const;

    // rel n=3 {(0,1),(2,2)}
    std::string   str() const;
    static BinRel parse(std::string_view text);

    friend bool operator==(BinRel const&, BinRel const&) = default;
  };

  BinRel rel_compose(BinRel const& r, BinRel const& s);
  BinRel rel_converse(BinRel const& r);
  std::pair<unsigned, unsigned> rel_dom_im(BinRel const& r);

  // (i, j) iff the image of block i meets block j in an infinite set.
  BinRel rho_of(FinPartition const& p, Chart const& f);

  // Permutations of N mapping every block onto a block.
  bool in_partition_stab(FinPartition const& p, Chart const& f);
  // Permutations mapping every block onto a block up to finite difference.
  bool in_partition_astab(FinPartition const& p, Chart const& f);

  // The permutation sending block i onto block perm[i] in increasing order.
  Chart block_permutation(FinPartition const& p, std::vector<int> const& perm);

  // a in Stab(p), fixing every block setwise, with rho(f a g) = rho(f) rho(g).
  Chart padding_perm(FinPartition const& p, Chart const& f, Chart const& g);

  // Whether the semigroup generated by Sym(n), rho and sigma contains n x n.
  // PreconditionError unless dom rho = n = im sigma and neither is a
  // permutation. n <= 4.
  bool nxn_closure_check(int n, BinRel const& rho, BinRel const& sigma);

  struct NxnReport {
    std::size_t                         pairs    = 0;
    std::size_t                         failures = 0;
    std::optional<std::pair<BinRel, BinRel>> first_failure;
  };

  // Every admissible (rho, sigma) for n <= 3.
  NxnReport nxn_exhaustive_serial(int n);
  NxnReport nxn_exhaustive(int n);  // OpenMP over rho

  struct Letter {
    std::string label;
    Chart       chart;
  };

  // A chart with a factorization certifying membership in a generated
  // semigroup; value == replay(word).
  struct Factored {
    Chart               value;
    std::vector<Letter> word;
  };

  Chart replay(std::vector<Letter> const& word);

  // Total f* in the semigroup generated by Stab(p) and f with at least d(f)
  // points of every block missing from its image. f total, not surjective.
  Factored defect_spreader(FinPartition const& p, Chart const& f);

  struct EvaderBundle {
    Chart f;  // total, not surjective
    Chart g;  // dom rho_g = n, rho_g not a permutation
    Chart h;  // im rho_h = n, rho_h not a permutation
    // c(k) finite and d(k) infinite; needed only when d(f) is finite
    std::optional<Chart> k;
  };

  // A total chart with image inside block 0, built from the bundle and
  // Stab(p). PreconditionError naming the first failed requirement.
  Factored block_evader(FinPartition const& p, EvaderBundle const& u);

}  // namespace ixm

#endif  // IXM_PARTITION_HPP_
