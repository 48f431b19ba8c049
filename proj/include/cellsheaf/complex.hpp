#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace cellsheaf {

using CellId = std::string;
using CellIndex = std::size_t;

struct Cell {
  CellId id;
  int dim = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
};

/// Signed codimension-one incidence [face : coface].
struct Incidence {
  CellIndex face = 0;
  CellIndex coface = 0;
  int sign = 1;

  friend bool operator==(const Incidence&, const Incidence&) = default;
};

/// Incidence spelled with cell ids, as used by builders and file formats.
struct IncidenceSpec {
  CellId face;
  CellId coface;
  int sign = 1;
};

struct EdgeSpec {
  CellId id;
  CellId tail;
  CellId head;
};

/// A regular cell complex stored as a graded face poset with signed
/// codimension-one incidences. Immutable once built.
///
/// Cells keep their insertion order. Within each dimension that order fixes
/// the block layout of cochain vectors.
class CellComplex {
 public:
  CellComplex() = default;

  /// Validates ids, dimensions, and incidence shape. The signed-incidence
  /// condition itself is not enforced here; see validate_incidence().
  CellComplex(std::vector<Cell> cells, const std::vector<IncidenceSpec>& incidences);

  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }
  /// Largest cell dimension, or -1 for the empty complex.
  int dimension() const { return static_cast<int>(by_dim_.size()) - 1; }

  const Cell& cell(CellIndex i) const { return cells_.at(i); }
  const std::vector<Cell>& cells() const { return cells_; }
  int dim(CellIndex i) const { return cells_.at(i).dim; }
  const CellId& id(CellIndex i) const { return cells_.at(i).id; }

  std::optional<CellIndex> find(const CellId& id) const;
  /// Throws Error naming the id when absent.
  CellIndex index_of(const CellId& id) const;

  /// Cells of dimension k in cochain order; empty outside [0, dimension()].
  const std::vector<CellIndex>& cells_of_dim(int k) const;
  /// Position of a cell inside cells_of_dim(dim(cell)).
  std::size_t position_in_dim(CellIndex i) const { return position_.at(i); }

  const std::vector<Incidence>& incidences() const { return incidences_; }
  /// Incidence indices whose coface is `c` (the codim-1 faces of c).
  std::span<const std::size_t> faces(CellIndex c) const { return faces_.at(c); }
  /// Incidence indices whose face is `c` (the codim-1 cofaces of c).
  std::span<const std::size_t> cofaces(CellIndex c) const { return cofaces_.at(c); }
  std::optional<std::size_t> incidence_between(CellIndex face, CellIndex coface) const;
  /// [face : coface], zero when not a codim-1 incident pair.
  int sign(CellIndex face, CellIndex coface) const;

  /// face relation: a is a (not necessarily proper) face of b.
  bool is_face(CellIndex a, CellIndex b) const;
  /// Every coface of a member is a member.
  bool is_upward_closed(const std::vector<CellIndex>& cells) const;
  /// Every face of a member is a member.
  bool is_subcomplex(const std::vector<CellIndex>& cells) const;

  std::vector<IncidenceSpec> incidence_specs() const;

  friend bool operator==(const CellComplex& a, const CellComplex& b) {
    return a.cells_ == b.cells_ && a.incidences_ == b.incidences_;
  }

 private:
  std::vector<Cell> cells_;
  std::vector<Incidence> incidences_;
  std::unordered_map<CellId, CellIndex> lookup_;
  std::vector<std::vector<CellIndex>> by_dim_;
  std::vector<std::size_t> position_;
  std::vector<std::vector<std::size_t>> faces_;
  std::vector<std::vector<std::size_t>> cofaces_;
};

/// Multigraph as a 1-dimensional complex: [tail:e] = -1, [head:e] = +1.
/// Self-loops are rejected; parallel edges are allowed.
CellComplex build_graph(const std::vector<CellId>& vertices, const std::vector<EdgeSpec>& edges);

/// Simplicial complex generated by its maximal simplices. A simplex's id is
/// its sorted vertex ids joined by ','. [sigma : tau] = (-1)^i when sigma
/// omits the i-th vertex of tau.
CellComplex build_simplicial(const std::vector<std::vector<CellId>>& maximal_simplices);

/// X minus an upward-closed set of cells, with inherited signs.
CellComplex delete_upward_closed(const CellComplex& x, const std::vector<CellId>& removed);

/// Id of the product cell sigma x tau.
CellId product_cell_id(const CellId& a, const CellId& b);

/// Product complex with Koszul signs:
/// [s x t : s' x t] = [s : s'],  [s x t : s x t'] = (-1)^{dim s} [t : t'].
/// Cells are ordered by dimension, then by (index in X, index in Y).
CellComplex product_complex(const CellComplex& x, const CellComplex& y);

struct IncidenceViolation {
  CellId face;
  CellId coface;
  int sum = 0;
};

/// Every codim-2 pair whose signed sum over intermediate cells is nonzero.
std::vector<IncidenceViolation> validate_incidence(const CellComplex& x);

inline bool is_graph(const CellComplex& x) { return x.dimension() <= 1; }

/// A map of cell complexes given as a cell-to-cell table.
struct CellMap {
  CellComplex source;
  CellComplex target;
  std::vector<CellIndex> image;  // indexed by source cell
};

/// Every source id must appear in `table`.
CellMap make_cell_map(const CellComplex& source, const CellComplex& target,
                      const std::map<CellId, CellId>& table);
CellMap identity_map(const CellComplex& x);

/// Requirement for pullback: every incident pair maps to an incident
/// codim-1 pair or collapses to one cell, and dimensions never increase.
/// Returns a description of the first violation.
std::optional<std::string> cell_map_violation(const CellMap& f);

/// Requirement for pushforward: dimension-preserving, incidence-preserving,
/// and the open stars of cells in each fiber are disjoint.
std::optional<std::string> local_injectivity_violation(const CellMap& f);

/// Covering map: locally injective, surjective, and every incidence of the
/// target lifts uniquely at every preimage of its face.
std::optional<std::string> covering_violation(const CellMap& f);

/// Preimage sizes of the target's cells.
std::vector<std::size_t> fiber_sizes(const CellMap& f);

}  // namespace cellsheaf
