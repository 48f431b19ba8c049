#include "cellsheaf/complex.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "cellsheaf/types.hpp"

namespace cellsheaf {

CellComplex::CellComplex(std::vector<Cell> cells, const std::vector<IncidenceSpec>& incidences)
    : cells_(std::move(cells)) {
  int top = -1;
  for (CellIndex i = 0; i < cells_.size(); ++i) {
    const Cell& c = cells_[i];
    if (c.id.empty()) throw Error("cell " + std::to_string(i) + " has an empty id");
    if (c.dim < 0) throw Error("cell '" + c.id + "' has negative dimension");
    if (!lookup_.emplace(c.id, i).second) throw Error("duplicate cell id '" + c.id + "'");
    top = std::max(top, c.dim);
  }
  by_dim_.assign(static_cast<std::size_t>(top + 1), {});
  position_.resize(cells_.size());
  for (CellIndex i = 0; i < cells_.size(); ++i) {
    auto& bucket = by_dim_[static_cast<std::size_t>(cells_[i].dim)];
    position_[i] = bucket.size();
    bucket.push_back(i);
  }

  faces_.assign(cells_.size(), {});
  cofaces_.assign(cells_.size(), {});
  std::set<std::pair<CellIndex, CellIndex>> seen;
  incidences_.reserve(incidences.size());
  for (const auto& spec : incidences) {
    const auto f = find(spec.face);
    const auto c = find(spec.coface);
    if (!f) throw Error("incidence references unknown cell '" + spec.face + "'");
    if (!c) throw Error("incidence references unknown cell '" + spec.coface + "'");
    const std::string pair = "(" + spec.face + ", " + spec.coface + ")";
    if (cells_[*c].dim != cells_[*f].dim + 1)
      throw Error("incidence " + pair + " does not join cells of adjacent dimension");
    if (spec.sign != 1 && spec.sign != -1)
      throw Error("incidence " + pair + " has sign other than +1 or -1");
    if (!seen.emplace(*f, *c).second) throw Error("duplicate incidence " + pair);
    faces_[*c].push_back(incidences_.size());
    cofaces_[*f].push_back(incidences_.size());
    incidences_.push_back({*f, *c, spec.sign});
  }
}

std::optional<CellIndex> CellComplex::find(const CellId& id) const {
  auto it = lookup_.find(id);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

CellIndex CellComplex::index_of(const CellId& id) const {
  auto i = find(id);
  if (!i) throw Error("unknown cell '" + id + "'");
  return *i;
}

const std::vector<CellIndex>& CellComplex::cells_of_dim(int k) const {
  static const std::vector<CellIndex> none;
  if (k < 0 || k >= static_cast<int>(by_dim_.size())) return none;
  return by_dim_[static_cast<std::size_t>(k)];
}

std::optional<std::size_t> CellComplex::incidence_between(CellIndex face, CellIndex coface) const {
  for (std::size_t k : faces_.at(coface))
    if (incidences_[k].face == face) return k;
  return std::nullopt;
}

int CellComplex::sign(CellIndex face, CellIndex coface) const {
  auto k = incidence_between(face, coface);
  return k ? incidences_[*k].sign : 0;
}

bool CellComplex::is_face(CellIndex a, CellIndex b) const {
  if (a == b) return true;
  if (cells_.at(a).dim >= cells_.at(b).dim) return false;
  std::vector<CellIndex> stack{b};
  std::vector<char> visited(cells_.size(), 0);
  while (!stack.empty()) {
    CellIndex c = stack.back();
    stack.pop_back();
    for (std::size_t k : faces_[c]) {
      CellIndex f = incidences_[k].face;
      if (f == a) return true;
      if (!visited[f] && cells_[f].dim > cells_[a].dim) {
        visited[f] = 1;
        stack.push_back(f);
      }
    }
  }
  return false;
}

bool CellComplex::is_upward_closed(const std::vector<CellIndex>& cells) const {
  std::vector<char> member(cells_.size(), 0);
  for (CellIndex c : cells) member.at(c) = 1;
  for (CellIndex c : cells)
    for (std::size_t k : cofaces_[c])
      if (!member[incidences_[k].coface]) return false;
  return true;
}

bool CellComplex::is_subcomplex(const std::vector<CellIndex>& cells) const {
  std::vector<char> member(cells_.size(), 0);
  for (CellIndex c : cells) member.at(c) = 1;
  for (CellIndex c : cells)
    for (std::size_t k : faces_[c])
      if (!member[incidences_[k].face]) return false;
  return true;
}

std::vector<IncidenceSpec> CellComplex::incidence_specs() const {
  std::vector<IncidenceSpec> out;
  out.reserve(incidences_.size());
  for (const auto& inc : incidences_)
    out.push_back({cells_[inc.face].id, cells_[inc.coface].id, inc.sign});
  return out;
}

CellComplex build_graph(const std::vector<CellId>& vertices, const std::vector<EdgeSpec>& edges) {
  std::vector<Cell> cells;
  std::unordered_set<CellId> vertex_set;
  for (const auto& v : vertices) {
    cells.push_back({v, 0});
    vertex_set.insert(v);
  }
  std::vector<IncidenceSpec> incidences;
  for (const auto& e : edges) {
    if (!vertex_set.count(e.tail))
      throw Error("edge '" + e.id + "' has unknown endpoint '" + e.tail + "'");
    if (!vertex_set.count(e.head))
      throw Error("edge '" + e.id + "' has unknown endpoint '" + e.head + "'");
    if (e.tail == e.head) throw Error("edge '" + e.id + "' is a self-loop");
    cells.push_back({e.id, 1});
    incidences.push_back({e.tail, e.id, -1});
    incidences.push_back({e.head, e.id, 1});
  }
  return CellComplex(std::move(cells), incidences);
}

namespace {

std::string join_ids(const std::vector<CellId>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ',';
    out += ids[i];
  }
  return out;
}

}  // namespace

CellComplex build_simplicial(const std::vector<std::vector<CellId>>& maximal_simplices) {
  auto by_size = [](const std::vector<CellId>& a, const std::vector<CellId>& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  };
  std::set<std::vector<CellId>, decltype(by_size)> simplices(by_size);
  for (auto s : maximal_simplices) {
    if (s.empty()) throw Error("empty simplex");
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
      throw Error("simplex {" + join_ids(s) + "} repeats a vertex");
    const std::size_t n = s.size();
    if (n > 20) throw Error("simplex {" + join_ids(s) + "} is too large");
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
      std::vector<CellId> face;
      for (std::size_t i = 0; i < n; ++i)
        if (mask & (std::size_t{1} << i)) face.push_back(s[i]);
      simplices.insert(std::move(face));
    }
  }
  std::vector<Cell> cells;
  std::vector<IncidenceSpec> incidences;
  for (const auto& s : simplices) {
    cells.push_back({join_ids(s), static_cast<int>(s.size()) - 1});
    if (s.size() < 2) continue;
    for (std::size_t i = 0; i < s.size(); ++i) {
      std::vector<CellId> face = s;
      face.erase(face.begin() + static_cast<std::ptrdiff_t>(i));
      incidences.push_back({join_ids(face), cells.back().id, i % 2 == 0 ? 1 : -1});
    }
  }
  return CellComplex(std::move(cells), incidences);
}

CellComplex delete_upward_closed(const CellComplex& x, const std::vector<CellId>& removed) {
  std::vector<CellIndex> idx;
  for (const auto& id : removed) idx.push_back(x.index_of(id));
  std::vector<char> gone(x.size(), 0);
  for (CellIndex c : idx) gone[c] = 1;
  for (CellIndex c : idx)
    for (std::size_t k : x.cofaces(c)) {
      CellIndex up = x.incidences()[k].coface;
      if (!gone[up])
        throw Error("deleted set is not upward-closed: '" + x.id(c) + "' has coface '" + x.id(up) +
                    "' outside it");
    }
  std::vector<Cell> cells;
  for (CellIndex i = 0; i < x.size(); ++i)
    if (!gone[i]) cells.push_back(x.cell(i));
  std::vector<IncidenceSpec> incidences;
  for (const auto& inc : x.incidences())
    if (!gone[inc.face] && !gone[inc.coface])
      incidences.push_back({x.id(inc.face), x.id(inc.coface), inc.sign});
  return CellComplex(std::move(cells), incidences);
}

CellId product_cell_id(const CellId& a, const CellId& b) { return a + " x " + b; }

CellComplex product_complex(const CellComplex& x, const CellComplex& y) {
  std::vector<std::pair<CellIndex, CellIndex>> pairs;
  for (CellIndex i = 0; i < x.size(); ++i)
    for (CellIndex j = 0; j < y.size(); ++j) pairs.emplace_back(i, j);
  std::stable_sort(pairs.begin(), pairs.end(), [&](const auto& a, const auto& b) {
    return x.dim(a.first) + y.dim(a.second) < x.dim(b.first) + y.dim(b.second);
  });
  std::vector<Cell> cells;
  cells.reserve(pairs.size());
  for (const auto& [i, j] : pairs)
    cells.push_back({product_cell_id(x.id(i), y.id(j)), x.dim(i) + y.dim(j)});

  std::vector<IncidenceSpec> incidences;
  for (const auto& [i, j] : pairs) {
    const CellId here = product_cell_id(x.id(i), y.id(j));
    for (std::size_t k : x.cofaces(i)) {
      const auto& inc = x.incidences()[k];
      incidences.push_back({here, product_cell_id(x.id(inc.coface), y.id(j)), inc.sign});
    }
    const int koszul = x.dim(i) % 2 == 0 ? 1 : -1;
    for (std::size_t k : y.cofaces(j)) {
      const auto& inc = y.incidences()[k];
      incidences.push_back({here, product_cell_id(x.id(i), y.id(inc.coface)), koszul * inc.sign});
    }
  }
  return CellComplex(std::move(cells), incidences);
}

std::vector<IncidenceViolation> validate_incidence(const CellComplex& x) {
  std::map<std::pair<CellIndex, CellIndex>, int> sums;
  for (const auto& lower : x.incidences())
    for (std::size_t k : x.cofaces(lower.coface)) {
      const auto& upper = x.incidences()[k];
      sums[{lower.face, upper.coface}] += lower.sign * upper.sign;
    }
  std::vector<IncidenceViolation> out;
  for (const auto& [pair, sum] : sums)
    if (sum != 0) out.push_back({x.id(pair.first), x.id(pair.second), sum});
  return out;
}

CellMap make_cell_map(const CellComplex& source, const CellComplex& target,
                      const std::map<CellId, CellId>& table) {
  CellMap f{source, target, std::vector<CellIndex>(source.size())};
  for (CellIndex i = 0; i < source.size(); ++i) {
    auto it = table.find(source.id(i));
    if (it == table.end()) throw Error("cell map has no image for '" + source.id(i) + "'");
    f.image[i] = target.index_of(it->second);
  }
  for (const auto& [from, to] : table) source.index_of(from);
  return f;
}

CellMap identity_map(const CellComplex& x) {
  CellMap f{x, x, std::vector<CellIndex>(x.size())};
  for (CellIndex i = 0; i < x.size(); ++i) f.image[i] = i;
  return f;
}

std::optional<std::string> cell_map_violation(const CellMap& f) {
  const auto& x = f.source;
  const auto& y = f.target;
  if (f.image.size() != x.size()) return "cell map table has wrong length";
  for (CellIndex i = 0; i < x.size(); ++i)
    if (y.dim(f.image[i]) > x.dim(i))
      return "'" + x.id(i) + "' maps to the higher-dimensional cell '" + y.id(f.image[i]) + "'";
  for (const auto& inc : x.incidences()) {
    CellIndex a = f.image[inc.face], b = f.image[inc.coface];
    if (a == b || y.incidence_between(a, b)) continue;
    return "incident pair (" + x.id(inc.face) + ", " + x.id(inc.coface) + ") maps to (" + y.id(a) +
           ", " + y.id(b) + "), which is neither a codimension-one incidence nor a single cell";
  }
  return std::nullopt;
}

namespace {

std::vector<CellIndex> open_star(const CellComplex& x, CellIndex c) {
  std::vector<char> seen(x.size(), 0);
  std::vector<CellIndex> out{c}, stack{c};
  seen[c] = 1;
  while (!stack.empty()) {
    CellIndex s = stack.back();
    stack.pop_back();
    for (std::size_t k : x.cofaces(s)) {
      CellIndex up = x.incidences()[k].coface;
      if (!seen[up]) {
        seen[up] = 1;
        out.push_back(up);
        stack.push_back(up);
      }
    }
  }
  return out;
}

std::vector<std::vector<CellIndex>> fibers(const CellMap& f) {
  std::vector<std::vector<CellIndex>> out(f.target.size());
  for (CellIndex i = 0; i < f.image.size(); ++i) out[f.image[i]].push_back(i);
  return out;
}

}  // namespace

std::optional<std::string> local_injectivity_violation(const CellMap& f) {
  const auto& x = f.source;
  const auto& y = f.target;
  if (f.image.size() != x.size()) return "cell map table has wrong length";
  for (CellIndex i = 0; i < x.size(); ++i)
    if (y.dim(f.image[i]) != x.dim(i))
      return "'" + x.id(i) + "' maps to '" + y.id(f.image[i]) + "' of a different dimension";
  for (const auto& inc : x.incidences())
    if (!y.incidence_between(f.image[inc.face], f.image[inc.coface]))
      return "incident pair (" + x.id(inc.face) + ", " + x.id(inc.coface) +
             ") does not map to an incident pair";
  for (const auto& fiber : fibers(f)) {
    std::vector<int> owner(x.size(), -1);
    for (std::size_t m = 0; m < fiber.size(); ++m)
      for (CellIndex c : open_star(x, fiber[m])) {
        if (owner[c] >= 0)
          return "open stars of '" + x.id(fiber[static_cast<std::size_t>(owner[c])]) + "' and '" +
                 x.id(fiber[m]) + "' overlap at '" + x.id(c) + "'";
        owner[c] = static_cast<int>(m);
      }
  }
  return std::nullopt;
}

std::optional<std::string> covering_violation(const CellMap& f) {
  if (auto v = local_injectivity_violation(f)) return v;
  const auto& x = f.source;
  const auto& y = f.target;
  const auto fib = fibers(f);
  for (CellIndex c = 0; c < y.size(); ++c)
    if (fib[c].empty()) return "'" + y.id(c) + "' has no preimage";
  for (const auto& inc : y.incidences()) {
    for (CellIndex lower : fib[inc.face]) {
      int lifts = 0;
      for (CellIndex upper : fib[inc.coface])
        if (x.incidence_between(lower, upper)) ++lifts;
      if (lifts != 1)
        return "incidence (" + y.id(inc.face) + ", " + y.id(inc.coface) + ") lifts " +
               std::to_string(lifts) + " times at '" + x.id(lower) + "'";
    }
    for (CellIndex upper : fib[inc.coface]) {
      int lifts = 0;
      for (CellIndex lower : fib[inc.face])
        if (x.incidence_between(lower, upper)) ++lifts;
      if (lifts != 1)
        return "incidence (" + y.id(inc.face) + ", " + y.id(inc.coface) + ") lifts " +
               std::to_string(lifts) + " times below '" + x.id(upper) + "'";
    }
  }
  return std::nullopt;
}

std::vector<std::size_t> fiber_sizes(const CellMap& f) {
  std::vector<std::size_t> out(f.target.size(), 0);
  for (CellIndex c : f.image) ++out.at(c);
  return out;
}

}  // namespace cellsheaf
