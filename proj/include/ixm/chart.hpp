#ifndef IXM_CHART_HPP_
#define IXM_CHART_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ixm/cardinal.hpp"
#include "ixm/epset.hpp"

namespace ixm {

  // src_start + src_step*s  |->  dst_start + dst_step*s   for s >= 0
  struct Piece {
    Int src_start = 0;
    Int src_step  = 1;
    Int dst_start = 0;
    Int dst_step  = 1;

    bool covers(Int x) const {
      return x >= src_start && (x - src_start) % src_step == 0;
    }
    bool hits(Int y) const {
      return y >= dst_start && (y - dst_start) % dst_step == 0;
    }
    Int at(Int x) const {
      return dst_start + dst_step * ((x - src_start) / src_step);
    }
    Int back(Int y) const {
      return src_start + src_step * ((y - dst_start) / dst_step);
    }
    Progression src() const {
      return {src_start % src_step, src_step, src_start / src_step};
    }
    Progression dst() const {
      return {dst_start % dst_step, dst_step, dst_start / dst_step};
    }
    Piece inverse() const {
      return {dst_start, dst_step, src_start, src_step};
    }
    friend bool operator==(Piece const&, Piece const&) = default;
  };

  struct ChartStats {
    Card                 rank;
    Card                 collapse;
    Card                 defect;
    EPSet                dom;
    EPSet                im;
    std::optional<EPSet> support;  // only for permutations of N
  };

  // A partial injection of N given by finitely many exceptional pairs and
  // order-preserving progression pieces.
  //
  // Kept canonical: all pieces share one source modulus (the minimal period
  // of the eventual affine law), each starts as early as the law allows, and
  // every other point is a pair. Equal functions have identical fields.
  class Chart {
   public:
    Chart() = default;  // empty chart

    // Builds from raw data. Throws PreconditionError naming the clash if the
    // data is not a partial injection.
    static Chart make(std::vector<std::pair<Int, Int>> pairs, std::vector<Piece> pieces);

    static Chart identity(EPSet const& s);
    static Chart identity_on_naturals();
    // x |-> a*x + b on N (a >= 1, b >= 0)
    static Chart affine(Int a, Int b);
    static Chart from_pairs(std::vector<std::pair<Int, Int>> pairs);
    static Chart from_piece(Piece p);

    std::vector<std::pair<Int, Int>> const& pairs() const {
      return _pairs;
    }
    std::vector<Piece> const& pieces() const {
      return _pieces;
    }
    Int modulus() const {
      return _modulus;
    }
    bool is_empty() const {
      return _pairs.empty() && _pieces.empty();
    }

    std::optional<Int> apply(Int x) const;
    std::optional<Int> preimage(Int y) const;

    EPSet dom() const;
    EPSet im() const;
    // Every x >= horizon() in a class with a piece is covered by that piece.
    Int horizon() const;

    bool is_total() const;
    bool is_permutation() const;
    bool is_idempotent() const;

    std::string        str() const;
    static Chart       parse(std::string_view text);
    friend bool        operator==(Chart const&, Chart const&) = default;

   private:
    static Chart canonical(std::vector<std::pair<Int, Int>> pairs, std::vector<Piece> pieces);

    std::vector<std::pair<Int, Int>> _pairs;   // sorted by source
    std::vector<Piece>               _pieces;  // sorted by source class
    Int                              _modulus = 1;
  };

  // x |-> ((x)f)g
  Chart compose(Chart const& f, Chart const& g);
  Chart invert(Chart const& f);
  // f restricted to s as domain
  Chart restrict(Chart const& f, EPSet const& s);
  // Union of charts with disjoint domains and disjoint images.
  Chart disjoint_union(Chart const& f, Chart const& g);

  ChartStats stats(Chart const& f);
  Card       rank(Chart const& f);
  Card       collapse(Chart const& f);
  Card       defect(Chart const& f);

  EPSet image_of_set(Chart const& f, EPSet const& s);
  // {x : xf != x} for a permutation f; PreconditionError otherwise.
  EPSet support(Chart const& f);

  Chart bijection_between(EPSet const& a, EPSet const& b);
  Chart extend_to_permutation(Chart const& p, EPSet const& y);
  Chart sandwich_factorize(Chart const& h, Chart const& f, Chart const& g, EPSet const& y);

}  // namespace ixm

#endif  // IXM_CHART_HPP_
