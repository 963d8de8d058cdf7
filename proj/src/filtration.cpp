#include "couplex/filtration.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <unordered_map>

#include "couplex/errors.hpp"

namespace couplex {

int FilteredChainComplex::max_level() const {
  int out = -1;
  for (const auto& c : cells) out = std::max(out, c.level);
  return out;
}

int FilteredChainComplex::max_dim() const {
  int out = -1;
  for (const auto& c : cells) out = std::max(out, c.dim);
  return out;
}

namespace {

// Cells grouped by dimension in input order, with lookup by id.
struct CellIndex {
  std::vector<std::vector<std::size_t>> by_dim;   // dim -> cell indices
  std::vector<std::size_t> pos_in_dim;            // cell index -> position in by_dim
  std::unordered_map<std::string, std::size_t> by_id;

  explicit CellIndex(const FilteredChainComplex& f) {
    by_dim.resize(static_cast<std::size_t>(std::max(0, f.max_dim() + 1)));
    pos_in_dim.resize(f.cells.size());
    for (std::size_t c = 0; c < f.cells.size(); ++c) {
      const auto& cell = f.cells[c];
      by_id.emplace(cell.id, c);
      if (cell.dim < 0) continue;
      auto& list = by_dim[static_cast<std::size_t>(cell.dim)];
      pos_in_dim[c] = list.size();
      list.push_back(c);
    }
  }
};

// A subset of cells (by predicate on the level) with local coordinates.
struct CellSubset {
  std::vector<std::vector<std::size_t>> cells;          // dim -> global cell indices
  std::vector<std::unordered_map<std::size_t, std::size_t>> local;  // dim -> (cell index -> local position)

  CellSubset(const FilteredChainComplex& f, const CellIndex& idx, const std::function<bool(int)>& keep) {
    cells.resize(idx.by_dim.size());
    local.resize(idx.by_dim.size());
    for (std::size_t d = 0; d < idx.by_dim.size(); ++d) {
      for (std::size_t c : idx.by_dim[d]) {
        if (!keep(f.cells[c].level)) continue;
        local[d][c] = cells[d].size();
        cells[d].push_back(c);
      }
    }
  }

  std::size_t dim(int n) const {
    if (n < 0 || n >= static_cast<int>(cells.size())) return 0;
    return cells[static_cast<std::size_t>(n)].size();
  }

  std::vector<std::string> labels(const FilteredChainComplex& f, int n) const {
    std::vector<std::string> out;
    if (n < 0 || n >= static_cast<int>(cells.size())) return out;
    for (std::size_t c : cells[static_cast<std::size_t>(n)]) out.push_back(f.cells[c].id);
    return out;
  }

  // Boundary C_n -> C_{n-1} restricted to this subset (faces outside dropped).
  Matrix boundary(const FilteredChainComplex& f, const CellIndex& idx, int n) const {
    Matrix m(f.field, dim(n - 1), dim(n));
    if (n <= 0 || n >= static_cast<int>(cells.size())) return m;
    const auto& faces = local[static_cast<std::size_t>(n - 1)];
    const auto& cols = cells[static_cast<std::size_t>(n)];
    for (std::size_t col = 0; col < cols.size(); ++col) {
      for (const auto& [face, coeff] : f.cells[cols[col]].boundary) {
        auto it = faces.find(idx.by_id.at(face));
        if (it != faces.end()) m(it->second, col) += coeff;
      }
    }
    return m;
  }

  ChainComplex complex(const FilteredChainComplex& f, const CellIndex& idx) const {
    ChainComplex c;
    c.field = f.field;
    c.lowest_degree = 0;
    for (int n = 0; n < static_cast<int>(cells.size()); ++n) {
      auto l = labels(f, n);
      const std::size_t size = l.size();
      c.bases.push_back({std::move(l), Matrix::identity(f.field, size)});
      c.boundaries.push_back(boundary(f, idx, n));
    }
    return c;
  }

  // Re-express a chain given in `other` coordinates (same dimension n) here;
  // entries on cells outside this subset are dropped.
  Vector transfer(const CellSubset& other, int n, const Vector& v, FieldSpec field) const {
    Vector out = zero_vector(field, dim(n));
    const auto& src = other.cells[static_cast<std::size_t>(n)];
    const auto& here = local[static_cast<std::size_t>(n)];
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i].is_zero()) continue;
      auto it = here.find(src[i]);
      if (it != here.end()) out[it->second] = v[i];
    }
    return out;
  }

  // True if every nonzero entry of v (in `other` coordinates) lies in this subset.
  bool covers(const CellSubset& other, int n, const Vector& v) const {
    const auto& src = other.cells[static_cast<std::size_t>(n)];
    const auto& here = local[static_cast<std::size_t>(n)];
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_zero() && !here.contains(src[i])) return false;
    }
    return true;
  }
};

// Homology of a subset complex per degree as subquotients with cell labels.
std::vector<Subquotient> subset_homology(const FilteredChainComplex& f, const CellIndex& idx, const CellSubset& s) {
  std::vector<Subquotient> out;
  const int top = static_cast<int>(s.cells.size()) - 1;
  for (int n = 0; n <= top; ++n) {
    const Subspace cycles = kernel_basis(s.boundary(f, idx, n));
    const Subspace bounds = image_basis(s.boundary(f, idx, n + 1));
    out.emplace_back(cycles, bounds, s.labels(f, n));
  }
  return out;
}

struct FiltrationData {
  const FilteredChainComplex& f;
  CellIndex idx;
  int top_level;
  int top_dim;
  std::vector<CellSubset> levels;     // levels[p + 1] = L_p, p = -1 .. top_level
  std::vector<CellSubset> strata;     // strata[p] = cells at exactly level p
  std::vector<std::vector<Subquotient>> abs;  // abs[p + 1][n] = H_n(L_p)
  std::vector<std::vector<Subquotient>> rel;  // rel[p][n] = H_n(L_p, L_{p-1})

  explicit FiltrationData(const FilteredChainComplex& fc)
      : f(fc), idx(fc), top_level(fc.max_level()), top_dim(fc.max_dim()) {
    for (int p = -1; p <= top_level; ++p) {
      levels.emplace_back(f, idx, [p](int l) { return l <= p; });
      abs.push_back(subset_homology(f, idx, levels.back()));
    }
    for (int p = 0; p <= top_level; ++p) {
      strata.emplace_back(f, idx, [p](int l) { return l == p; });
      rel.push_back(subset_homology(f, idx, strata.back()));
    }
  }

  const CellSubset& level(int p) const { return levels[static_cast<std::size_t>(std::clamp(p, -1, top_level) + 1)]; }
  const Subquotient& h_abs(int p, int n) const {
    return abs[static_cast<std::size_t>(std::clamp(p, -1, top_level) + 1)][static_cast<std::size_t>(n)];
  }
  const Subquotient& h_rel(int p, int n) const { return rel[static_cast<std::size_t>(p)][static_cast<std::size_t>(n)]; }

  Matrix i_map(int p, int n) const {
    const Subquotient& from = h_abs(p, n);
    const Subquotient& to = h_abs(p + 1, n);
    Matrix m(f.field, to.dim(), from.dim());
    for (std::size_t col = 0; col < from.dim(); ++col) {
      const Vector v = level(p + 1).transfer(level(p), n, from.representatives().row(col), f.field);
      const Vector c = to.coordinates(v);
      for (std::size_t row = 0; row < to.dim(); ++row) m(row, col) = c[row];
    }
    return m;
  }

  Matrix j_map(int p, int n) const {
    const Subquotient& from = h_abs(p, n);
    const Subquotient& to = h_rel(p, n);
    Matrix m(f.field, to.dim(), from.dim());
    const CellSubset& stratum = strata[static_cast<std::size_t>(p)];
    for (std::size_t col = 0; col < from.dim(); ++col) {
      const Vector v = stratum.transfer(level(p), n, from.representatives().row(col), f.field);
      const Vector c = to.coordinates(v);
      for (std::size_t row = 0; row < to.dim(); ++row) m(row, col) = c[row];
    }
    return m;
  }

  Matrix k_map(int p, int n) const {
    const Subquotient& from = h_rel(p, n);
    const Subquotient& to = h_abs(p - 1, n - 1 < 0 ? 0 : n - 1);
    if (n == 0) return Matrix(f.field, 0, from.dim());
    Matrix m(f.field, to.dim(), from.dim());
    const CellSubset& stratum = strata[static_cast<std::size_t>(p)];
    const CellSubset& here = level(p);
    const CellSubset& below = level(p - 1);
    const Matrix bd = here.boundary(f, idx, n);
    for (std::size_t col = 0; col < from.dim(); ++col) {
      // Relative representatives are level-p cells, hence chains of L_p.
      const Vector lifted = here.transfer(stratum, n, from.representatives().row(col), f.field);
      const Vector boundary = bd.apply(lifted);
      if (!below.covers(here, n - 1, boundary)) throw InternalError("lift failed: boundary leaves L_{p-1}");
      const Vector c = to.coordinates(below.transfer(here, n - 1, boundary, f.field));
      for (std::size_t row = 0; row < to.dim(); ++row) m(row, col) = c[row];
    }
    return m;
  }
};

}  // namespace

std::optional<std::string> validate_filtered(const FilteredChainComplex& f) {
  std::unordered_map<std::string, std::size_t> ids;
  for (std::size_t c = 0; c < f.cells.size(); ++c) {
    const auto& cell = f.cells[c];
    if (cell.id.empty()) return "cell #" + std::to_string(c) + " has an empty id";
    if (!ids.emplace(cell.id, c).second) return "duplicate cell id '" + cell.id + "'";
    if (cell.dim < 0) return "cell '" + cell.id + "' has negative dimension";
    if (cell.level < 0) return "cell '" + cell.id + "' has negative level";
  }
  for (const auto& cell : f.cells) {
    std::set<std::string> seen;
    for (const auto& [face, coeff] : cell.boundary) {
      auto it = ids.find(face);
      if (it == ids.end()) return "cell '" + cell.id + "' has unknown face '" + face + "'";
      if (!seen.insert(face).second) return "cell '" + cell.id + "' lists face '" + face + "' twice";
      const auto& fc = f.cells[it->second];
      if (fc.dim != cell.dim - 1) return "cell '" + cell.id + "' has face '" + face + "' of the wrong dimension";
      if (fc.level > cell.level) {
        return "cell '" + cell.id + "' (level " + std::to_string(cell.level) + ") has face '" + face + "' at higher level " +
               std::to_string(fc.level);
      }
      if (!(coeff.field() == f.field)) return "cell '" + cell.id + "' has a coefficient over a different field";
    }
  }
  const CellIndex idx(f);
  const CellSubset all(f, idx, [](int) { return true; });
  for (int n = 2; n <= f.max_dim(); ++n) {
    const Matrix dd = all.boundary(f, idx, n - 1) * all.boundary(f, idx, n);
    if (dd.is_zero()) continue;
    for (std::size_t col = 0; col < dd.cols(); ++col) {
      if (!is_zero(dd.column(col))) {
        return "boundary of the boundary of cell '" + f.cells[all.cells[static_cast<std::size_t>(n)][col]].id +
               "' is nonzero";
      }
    }
  }
  return std::nullopt;
}

void require_valid(const FilteredChainComplex& f) {
  if (auto msg = validate_filtered(f)) throw ValidationError("invalid filtered complex: " + *msg);
}

ChainComplex level_complex(const FilteredChainComplex& f, int p) {
  require_valid(f);
  const CellIndex idx(f);
  return CellSubset(f, idx, [p](int l) { return l <= p; }).complex(f, idx);
}

ChainComplex quotient_complex(const FilteredChainComplex& f, int p) {
  require_valid(f);
  const CellIndex idx(f);
  return CellSubset(f, idx, [p](int l) { return l == p; }).complex(f, idx);
}

std::vector<LabeledBasis> relative_homology(const FilteredChainComplex& f, int p) {
  require_valid(f);
  const CellIndex idx(f);
  const CellSubset stratum(f, idx, [p](int l) { return l == p; });
  std::vector<LabeledBasis> out;
  for (const auto& sq : subset_homology(f, idx, stratum)) out.push_back(sq.basis());
  return out;
}

Matrix connecting_map(const FilteredChainComplex& f, int p, int n) {
  require_valid(f);
  const FiltrationData data(f);
  if (p < 0 || p > data.top_level || n < 0 || n > data.top_dim) {
    const std::size_t rows = (p - 1 >= -1 && n - 1 >= 0 && n - 1 <= data.top_dim) ? data.h_abs(p - 1, n - 1).dim() : 0;
    return Matrix(f.field, rows, 0);
  }
  return data.k_map(p, n);
}

LesMaps les_maps(const FilteredChainComplex& f) {
  require_valid(f);
  const FiltrationData data(f);
  LesMaps out;
  for (int p = 0; p <= data.top_level; ++p) {
    for (int n = 0; n <= data.top_dim; ++n) {
      if (p < data.top_level) out.i.emplace(std::pair{p, n}, data.i_map(p, n));
      out.j.emplace(std::pair{p, n}, data.j_map(p, n));
      out.k.emplace(std::pair{p, n}, data.k_map(p, n));
    }
  }
  return out;
}

ExactCouple exact_couple_of_filtration(const FilteredChainComplex& f) {
  require_valid(f);
  ExactCouple ec;
  ec.field = f.field;
  ec.order = 0;
  ec.j.degree = {0, 0};
  if (f.cells.empty()) return ec;
  const FiltrationData data(f);
  ec.colimit_level = data.top_level;
  for (int p = 0; p <= data.top_level; ++p) {
    for (int n = 0; n <= data.top_dim; ++n) {
      const Bidegree b{p, n - p};
      const Subquotient& d = data.h_abs(p, n);
      const Subquotient& e = data.h_rel(p, n);
      if (d.dim() > 0) ec.D.terms[b] = {d.labels(), Matrix::identity(f.field, d.dim())};
      if (e.dim() > 0) ec.E.terms[b] = {e.labels(), Matrix::identity(f.field, e.dim())};
    }
  }
  const LesMaps les = les_maps(f);
  for (const auto& [key, m] : les.i) {
    if (m.rows() > 0 && m.cols() > 0) ec.i.blocks[{key.first, key.second - key.first}] = m;
  }
  for (const auto& [key, m] : les.j) {
    if (m.rows() > 0 && m.cols() > 0) ec.j.blocks[{key.first, key.second - key.first}] = m;
  }
  for (const auto& [key, m] : les.k) {
    if (m.rows() > 0 && m.cols() > 0) ec.k.blocks[{key.first, key.second - key.first}] = m;
  }
  return ec;
}

std::vector<long long> total_homology(const FilteredChainComplex& f) {
  const ChainComplex c = level_complex(f, f.max_level());
  const auto h = homology(c);
  std::vector<long long> out;
  for (int n = 0; n <= c.highest_degree(); ++n) out.push_back(static_cast<long long>(h.betti_at(n)));
  return out;
}

namespace {

std::string simplex_id(const std::vector<std::string>& vertices) {
  std::string out;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (i > 0) out += "-";
    out += vertices[i];
  }
  return out;
}

// All faces of all facets, each simplex once, ordered by dimension then id.
std::vector<std::vector<std::string>> closure(const std::vector<std::vector<std::string>>& facets) {
  std::set<std::pair<std::size_t, std::vector<std::string>>> all;
  for (auto facet : facets) {
    std::sort(facet.begin(), facet.end());
    facet.erase(std::unique(facet.begin(), facet.end()), facet.end());
    const std::size_t n = facet.size();
    if (n == 0 || n > 20) throw ValidationError("facet must have between 1 and 20 vertices");
    for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
      std::vector<std::string> face;
      for (std::size_t i = 0; i < n; ++i) {
        if ((mask >> i) & 1U) face.push_back(facet[i]);
      }
      all.insert({face.size(), face});
    }
  }
  std::vector<std::vector<std::string>> out;
  for (const auto& [size, s] : all) out.push_back(s);
  return out;
}

std::vector<std::pair<std::string, Scalar>> oriented_boundary(FieldSpec field, const std::vector<std::string>& s) {
  std::vector<std::pair<std::string, Scalar>> out;
  if (s.size() < 2) return out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::vector<std::string> face = s;
    face.erase(face.begin() + static_cast<std::ptrdiff_t>(i));
    const Scalar sign(field, i % 2 == 0 ? 1L : -1L);
    out.emplace_back(simplex_id(face), sign);
  }
  return out;
}

}  // namespace

FilteredChainComplex simplicial_complex(FieldSpec field, const std::vector<std::vector<std::string>>& facets,
                                        bool skeleton_levels) {
  FilteredChainComplex f;
  f.field = field;
  for (const auto& s : closure(facets)) {
    Cell c;
    c.id = simplex_id(s);
    c.dim = static_cast<int>(s.size()) - 1;
    c.level = skeleton_levels ? c.dim : 0;
    c.boundary = oriented_boundary(field, s);
    f.cells.push_back(std::move(c));
  }
  return f;
}

FilteredChainComplex random_filtered_complex(std::uint64_t seed, const RandomComplexBounds& bounds) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const int nv = uniform(1, std::max(1, bounds.max_vertices));
  std::vector<std::string> names;
  for (int v = 0; v < nv; ++v) names.push_back(std::to_string(v));
  std::vector<std::vector<std::string>> facets;
  const int nf = uniform(1, std::max(1, bounds.max_facets));
  for (int t = 0; t < nf; ++t) {
    const int d = uniform(0, std::min(bounds.max_dim, nv - 1));
    std::vector<std::string> pool = names;
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(static_cast<std::size_t>(d + 1));
    facets.push_back(pool);
  }
  // Isolated vertices keep every vertex in the complex.
  for (const auto& v : names) facets.push_back({v});
  FilteredChainComplex f = simplicial_complex(bounds.field, facets, false);
  // Cells come ordered by dimension, so faces get their level first.
  std::unordered_map<std::string, int> level;
  for (auto& c : f.cells) {
    int lv = uniform(0, std::max(0, bounds.max_level));
    for (const auto& [face, coeff] : c.boundary) lv = std::max(lv, level.at(face));
    c.level = lv;
    level[c.id] = lv;
  }
  return f;
}

}  // namespace couplex
