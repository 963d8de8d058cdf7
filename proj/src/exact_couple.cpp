#include "couplex/exact_couple.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <tuple>

#include "couplex/errors.hpp"

namespace couplex {

std::string Bidegree::key() const { return std::to_string(p) + "," + std::to_string(q); }

Bidegree Bidegree::parse(const std::string& key) {
  const auto comma = key.find(',');
  if (comma == std::string::npos) throw ParseError("bidegree key '" + key + "' is not of the form \"p,q\"");
  auto read = [&](std::size_t first, std::size_t last) {
    int value = 0;
    std::size_t b = first;
    while (b < last && key[b] == ' ') ++b;
    const char* begin = key.data() + b;
    const char* end = key.data() + last;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || begin == end) {
      throw ParseError("bidegree key '" + key + "' is not of the form \"p,q\"");
    }
    return value;
  };
  return {read(0, comma), read(comma + 1, key.size())};
}

std::size_t BigradedSpace::dim(Bidegree b) const {
  auto it = terms.find(b);
  return it == terms.end() ? 0 : it->second.size();
}

const std::vector<std::string>& BigradedSpace::labels(Bidegree b) const {
  static const std::vector<std::string> none;
  auto it = terms.find(b);
  return it == terms.end() ? none : it->second.labels;
}

std::size_t BigradedSpace::total_dim(int n) const {
  std::size_t out = 0;
  for (const auto& [b, basis] : terms) {
    if (b.total() == n) out += basis.size();
  }
  return out;
}

void BigradedSpace::prune() {
  std::erase_if(terms, [](const auto& kv) { return kv.second.size() == 0; });
}

Matrix BigradedMap::block(Bidegree src, FieldSpec field, std::size_t rows, std::size_t cols) const {
  auto it = blocks.find(src);
  if (it == blocks.end()) return Matrix(field, rows, cols);
  return it->second;
}

std::size_t ExactCouple::d_dim(Bidegree b) const {
  if (colimit_level && b.p > *colimit_level) return D.dim({*colimit_level, b.q + b.p - *colimit_level});
  return D.dim(b);
}

std::vector<std::string> ExactCouple::d_labels(Bidegree b) const {
  if (colimit_level && b.p > *colimit_level) return D.labels({*colimit_level, b.q + b.p - *colimit_level});
  return D.labels(b);
}

Matrix ExactCouple::i_block(Bidegree src) const {
  if (colimit_level && src.p >= *colimit_level) return Matrix::identity(field, d_dim(src));
  return i.block(src, field, d_dim(src + i.degree), d_dim(src));
}

Matrix ExactCouple::j_block(Bidegree src) const {
  if (colimit_level && src.p > *colimit_level) return Matrix(field, e_dim(src + j.degree), d_dim(src));
  return j.block(src, field, e_dim(src + j.degree), d_dim(src));
}

Matrix ExactCouple::k_block(Bidegree src) const { return k.block(src, field, d_dim(src + k.degree), e_dim(src)); }

Matrix ExactCouple::i_power(Bidegree src, int r) const {
  Matrix m = Matrix::identity(field, d_dim(src));
  Bidegree cur = src;
  for (int s = 0; s < r; ++s) {
    if (colimit_level && cur.p >= *colimit_level) break;  // identity from here on
    m = i_block(cur) * m;
    cur = cur + Bidegree{1, -1};
  }
  return m;
}

std::pair<int, int> ExactCouple::p_range() const {
  bool any = false;
  int lo = 0;
  int hi = -1;
  auto see = [&](int p) {
    if (!any) {
      lo = hi = p;
      any = true;
    }
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  };
  for (const auto& [b, basis] : D.terms) {
    if (basis.size() > 0) see(b.p);
  }
  for (const auto& [b, basis] : E.terms) {
    if (basis.size() > 0) see(b.p);
  }
  if (any && colimit_level) see(*colimit_level + 1);
  return {lo, hi};
}

namespace {

const Bidegree kIDeg{1, -1};
const Bidegree kKDeg{-1, 0};

Bidegree neg(Bidegree b) { return {-b.p, -b.q}; }

void check_map_shapes(const ExactCouple& ec, const BigradedMap& map, const char* name, bool from_d, bool to_d,
                      std::vector<ExactnessViolation>& out) {
  for (const auto& [src, m] : map.blocks) {
    const Bidegree tgt = src + map.degree;
    const std::size_t rows = to_d ? ec.d_dim(tgt) : ec.e_dim(tgt);
    const std::size_t cols = from_d ? ec.d_dim(src) : ec.e_dim(src);
    if (!(m.field() == ec.field)) {
      out.push_back({"shape", src, std::string(name) + " block over a different field"});
    } else if (m.rows() != rows || m.cols() != cols) {
      out.push_back({"shape", src,
                     std::string(name) + " block at " + src.key() + " has shape " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", expected " + std::to_string(rows) + "x" +
                         std::to_string(cols)});
    }
  }
}

std::vector<ExactnessViolation> shape_violations(const ExactCouple& ec) {
  std::vector<ExactnessViolation> out;
  if (!(ec.i.degree == kIDeg)) out.push_back({"shape", {}, "i must have bidegree (1,-1)"});
  if (!(ec.k.degree == kKDeg)) out.push_back({"shape", {}, "k must have bidegree (-1,0)"});
  if (!(ec.j.degree == Bidegree{-ec.order, ec.order})) {
    out.push_back({"shape", {}, "j must have bidegree (-a,a) for the couple's order a"});
  }
  for (const auto* space : {&ec.D, &ec.E}) {
    for (const auto& [b, basis] : space->terms) {
      if (basis.vectors.rows() != basis.labels.size() || !(basis.vectors.field() == ec.field)) {
        out.push_back({"shape", b, "term basis at " + b.key() + " is malformed"});
      }
    }
  }
  if (ec.colimit_level) {
    const int c = *ec.colimit_level;
    for (const auto& [b, basis] : ec.D.terms) {
      if (b.p > c) out.push_back({"shape", b, "D term stored above the colimit level"});
    }
    for (const auto& [b, basis] : ec.E.terms) {
      if (b.p > c && basis.size() > 0) out.push_back({"shape", b, "E term above the colimit level"});
    }
    for (const auto& [b, m] : ec.i.blocks) {
      if (b.p >= c) out.push_back({"shape", b, "i block stored at or above the colimit level"});
    }
    for (const auto& [b, m] : ec.j.blocks) {
      if (b.p > c) out.push_back({"shape", b, "j block stored above the colimit level"});
    }
  }
  if (!out.empty()) return out;
  check_map_shapes(ec, ec.i, "i", true, true, out);
  check_map_shapes(ec, ec.j, "j", true, false, out);
  check_map_shapes(ec, ec.k, "k", false, true, out);
  return out;
}

std::set<Bidegree> d_positions(const ExactCouple& ec) {
  std::set<Bidegree> out;
  const Bidegree jdeg = ec.j.degree;
  for (const auto& [b, basis] : ec.D.terms) {
    out.insert(b);
    out.insert(b + kIDeg);
  }
  for (const auto& [b, basis] : ec.E.terms) {
    out.insert(b + kKDeg);
    out.insert(b + neg(jdeg));
  }
  std::set<Bidegree> filtered;
  for (const auto& b : out) {
    if (ec.colimit_level && b.p > *ec.colimit_level + 1) continue;
    if (ec.d_dim(b) > 0) filtered.insert(b);
  }
  return filtered;
}

Subspace image_of(const Matrix& m) { return image_basis(m); }

}  // namespace

std::vector<ExactnessViolation> exactness_violations(const ExactCouple& ec) {
  auto shapes = shape_violations(ec);
  if (!shapes.empty()) return shapes;
  std::vector<ExactnessViolation> at_e, at_i, at_j;
  const Bidegree jdeg = ec.j.degree;
  for (const auto& [b, basis] : ec.E.terms) {
    if (basis.size() == 0) continue;
    const Subspace ker = kernel_basis(ec.k_block(b));
    const Subspace im = image_of(ec.j_block(b + neg(jdeg)));
    if (!(ker == im)) {
      at_e.push_back({"ker(k)=im(j)", b,
                      "ker(k) has dim " + std::to_string(ker.dim()) + " but im(j) has dim " + std::to_string(im.dim()) +
                          (ker.dim() == im.dim() ? " (different subspaces)" : "")});
    }
  }
  for (const auto& b : d_positions(ec)) {
    const Subspace ker_i = kernel_basis(ec.i_block(b));
    const Subspace im_k = image_of(ec.k_block(b + neg(kKDeg)));
    if (!(ker_i == im_k)) {
      at_i.push_back({"ker(i)=im(k)", b,
                      "ker(i) has dim " + std::to_string(ker_i.dim()) + " but im(k) has dim " +
                          std::to_string(im_k.dim())});
    }
    const Subspace ker_j = kernel_basis(ec.j_block(b));
    const Subspace im_i = image_of(ec.i_block(b + neg(kIDeg)));
    if (!(ker_j == im_i)) {
      at_j.push_back({"ker(j)=im(i)", b,
                      "ker(j) has dim " + std::to_string(ker_j.dim()) + " but im(i) has dim " +
                          std::to_string(im_i.dim())});
    }
  }
  std::vector<ExactnessViolation> out = std::move(at_e);
  out.insert(out.end(), at_i.begin(), at_i.end());
  out.insert(out.end(), at_j.begin(), at_j.end());
  return out;
}

std::optional<ExactnessViolation> validate_exactness(const ExactCouple& ec) {
  auto all = exactness_violations(ec);
  if (all.empty()) return std::nullopt;
  return all.front();
}

namespace {

void require_exact(const ExactCouple& ec) {
  if (auto v = validate_exactness(ec)) {
    throw ValidationError("exact couple violates " + v->position + " at " + v->bidegree.key() + ": " + v->message);
  }
}

LabeledBasis labeled_rows(const Subspace& s, const std::vector<std::string>& ambient_labels) {
  LabeledBasis out;
  out.vectors = s.basis();
  for (std::size_t r = 0; r < s.dim(); ++r) out.labels.push_back(combination_label(s.basis().row(r), ambient_labels));
  return out;
}

Subspace z_subspace(const ExactCouple& ec, Bidegree b, int r) {
  const std::size_t n = ec.e_dim(b);
  const Bidegree kt = b + kKDeg;
  if (ec.d_dim(kt) == 0) return Subspace::full(ec.field, n);
  const Bidegree src{kt.p - r, kt.q + r};
  return preimage(ec.k_block(b), image_basis(ec.i_power(src, r)));
}

Subspace b_subspace(const ExactCouple& ec, Bidegree b, int r) {
  const Bidegree src = b + neg(ec.j.degree);
  if (ec.d_dim(src) == 0) return Subspace::zero(ec.field, ec.e_dim(b));
  const Subspace ker = kernel_basis(ec.i_power(src, r));
  return image_basis(ec.j_block(src) * ker.basis().transpose());
}

// Positions of D^(r) = i^r(D): D support pushed forward by up to r steps.
std::set<Bidegree> shifted_d_positions(const ExactCouple& ec, int r) {
  std::set<Bidegree> out;
  for (const auto& [b, basis] : ec.D.terms) {
    if (basis.size() == 0) continue;
    for (int s = 0; s <= r; ++s) {
      const Bidegree t{b.p + s, b.q - s};
      if (ec.colimit_level && t.p > *ec.colimit_level + r) continue;
      out.insert(t);
    }
  }
  return out;
}

// Shared construction of the r-th derived couple from the subspaces
// D^(r)_b ⊆ D_b and E^(r)_b = Z_b / B_b.
ExactCouple assemble_derived(const ExactCouple& ec, int r, const std::map<Bidegree, Subspace>& dsub,
                             const std::map<Bidegree, Subquotient>& esub) {
  ExactCouple out;
  out.field = ec.field;
  out.order = ec.order + r;
  if (ec.colimit_level) out.colimit_level = *ec.colimit_level + r;
  out.i.degree = kIDeg;
  out.j.degree = {-out.order, out.order};
  out.k.degree = kKDeg;

  for (const auto& [b, s] : dsub) {
    if (s.dim() > 0) out.D.terms[b] = labeled_rows(s, ec.d_labels(b));
  }
  for (const auto& [b, sq] : esub) {
    if (sq.dim() > 0) out.E.terms[b] = sq.basis();
  }
  auto dsub_at = [&](Bidegree b) -> const Subspace* {
    auto it = dsub.find(b);
    return it == dsub.end() || it->second.dim() == 0 ? nullptr : &it->second;
  };
  auto esub_at = [&](Bidegree b) -> const Subquotient* {
    auto it = esub.find(b);
    return it == esub.end() || it->second.dim() == 0 ? nullptr : &it->second;
  };

  // i^(r): restriction of i.
  for (const auto& [b, s] : dsub) {
    if (s.dim() == 0) continue;
    if (out.colimit_level && b.p >= *out.colimit_level) continue;
    const Subspace* tgt = dsub_at(b + kIDeg);
    if (tgt == nullptr) continue;
    out.i.blocks[b] = restrict_map(ec.i_block(b), s, *tgt);
  }
  // j^(r)(i^r x) = [j x].
  for (const auto& [b, s] : dsub) {
    if (s.dim() == 0) continue;
    const Bidegree tgt = b + out.j.degree;
    const Subquotient* e = esub_at(tgt);
    if (e == nullptr) continue;
    const Bidegree src{b.p - r, b.q + r};
    const Matrix ir = ec.i_power(src, r);
    const Matrix jb = ec.j_block(src);
    Matrix block(ec.field, e->dim(), s.dim());
    for (std::size_t col = 0; col < s.dim(); ++col) {
      auto x = solve(ir, s.basis().row(col));
      if (!x) throw InternalError("derived couple: element of i^r(D) has no preimage");
      const Vector coords = e->coordinates(jb.apply(*x));
      for (std::size_t row = 0; row < e->dim(); ++row) block(row, col) = coords[row];
    }
    out.j.blocks[b] = block;
  }
  // k^(r)[α] = k(α).
  for (const auto& [b, e] : esub) {
    if (e.dim() == 0) continue;
    const Subspace* tgt = dsub_at(b + kKDeg);
    if (tgt == nullptr) continue;
    const RowSolver solver(tgt->basis());
    const Matrix kb = ec.k_block(b);
    Matrix block(ec.field, tgt->dim(), e.dim());
    for (std::size_t col = 0; col < e.dim(); ++col) {
      auto c = solver.coordinates(kb.apply(e.representatives().row(col)));
      if (!c) throw InternalError("derived couple: k of a cycle misses i^r(D)");
      for (std::size_t row = 0; row < tgt->dim(); ++row) block(row, col) = (*c)[row];
    }
    out.k.blocks[b] = block;
  }
  return out;
}

}  // namespace

ExactCouple derived_couple(const ExactCouple& ec) {
  require_exact(ec);
  std::map<Bidegree, Subspace> dsub;
  for (const auto& b : shifted_d_positions(ec, 1)) {
    const Bidegree src = b + neg(kIDeg);
    dsub[b] = image_basis(ec.i_block(src));
  }
  std::map<Bidegree, Subquotient> esub;
  const Bidegree ddeg = kKDeg + ec.j.degree;  // bidegree of d = jk
  for (const auto& [b, basis] : ec.E.terms) {
    if (basis.size() == 0) continue;
    const Matrix d_out = ec.j_block(b + kKDeg) * ec.k_block(b);
    const Bidegree in = b + neg(ddeg);
    const Matrix d_in = ec.j_block(in + kKDeg) * ec.k_block(in);
    esub.emplace(b, Subquotient(kernel_basis(d_out), image_basis(d_in), basis.labels));
  }
  return assemble_derived(ec, 1, dsub, esub);
}

ExactCouple rth_derived(const ExactCouple& ec, int r) {
  if (r < 0) throw ValidationError("derivation index must be nonnegative");
  require_exact(ec);
  if (r == 0) return ec;
  std::map<Bidegree, Subspace> dsub;
  for (const auto& b : shifted_d_positions(ec, r)) {
    dsub[b] = image_basis(ec.i_power({b.p - r, b.q + r}, r));
  }
  std::map<Bidegree, Subquotient> esub;
  for (const auto& [b, basis] : ec.E.terms) {
    if (basis.size() == 0) continue;
    esub.emplace(b, Subquotient(z_subspace(ec, b, r), b_subspace(ec, b, r), basis.labels));
  }
  return assemble_derived(ec, r, dsub, esub);
}

std::size_t Page::dim(Bidegree b) const {
  auto it = terms.find(b);
  return it == terms.end() ? 0 : it->second.dim();
}

namespace {

using SubspaceMap = std::map<Bidegree, Subspace>;

Page make_page(const BigradedSpace& first, int number, const SubspaceMap& z, const SubspaceMap& b) {
  Page page;
  page.number = number;
  page.d.degree = {-number, number - 1};
  for (const auto& [pos, basis] : first.terms) {
    page.terms.emplace(pos, Subquotient(z.at(pos), b.at(pos), basis.labels));
  }
  return page;
}

void check_d_squared(const Page& page) {
  for (const auto& [src, m] : page.d.blocks) {
    const Bidegree mid = src + page.d.degree;
    auto it = page.d.blocks.find(mid);
    if (it == page.d.blocks.end()) continue;
    if (!(it->second * m).is_zero()) {
      throw ValidationError("d∘d ≠ 0 on page " + std::to_string(page.number) + " starting at " + src.key());
    }
  }
}

// Z^(r+1) = B^(r) + lift(ker d^(r)), B^(r+1) = B^(r) + lift(im d^(r)).
std::pair<SubspaceMap, SubspaceMap> advance(const Page& page, const SubspaceMap& z, const SubspaceMap& b) {
  SubspaceMap z_next = z;
  SubspaceMap b_next = b;
  for (const auto& [pos, term] : page.terms) {
    const Matrix d = page.d.block(pos, term.field(), page.dim(pos + page.d.degree), term.dim());
    const Subspace ker = kernel_basis(d);
    std::vector<Vector> lifts;
    for (std::size_t r = 0; r < ker.dim(); ++r) lifts.push_back(term.lift(ker.basis().row(r)));
    z_next[pos] = b.at(pos) + Subspace::span(Matrix::from_rows(term.field(), lifts, term.ambient_dim()));
  }
  for (const auto& [src, m] : page.d.blocks) {
    const Bidegree tgt = src + page.d.degree;
    auto it = page.terms.find(tgt);
    if (it == page.terms.end()) continue;
    const Subspace im = image_basis(m);
    std::vector<Vector> lifts;
    for (std::size_t r = 0; r < im.dim(); ++r) lifts.push_back(it->second.lift(im.basis().row(r)));
    b_next[tgt] = b_next[tgt] + Subspace::span(Matrix::from_rows(it->second.field(), lifts, it->second.ambient_dim()));
  }
  return {z_next, b_next};
}

bool page_has_nonzero_d(const Page& page) {
  for (const auto& [src, m] : page.d.blocks) {
    if (!m.is_zero()) return true;
  }
  return false;
}

}  // namespace

SpectralSequence spectral_sequence(const ExactCouple& ec) {
  require_exact(ec);
  SpectralSequence ss;
  ss.field = ec.field;
  ss.start_page = ec.order + 1;
  for (const auto& [b, basis] : ec.E.terms) {
    if (basis.size() > 0) ss.first.terms[b] = {basis.labels, Matrix::identity(ec.field, basis.size())};
  }
  const auto [pmin, pmax] = ec.p_range();
  const int bound = std::max(2, pmax - pmin + 2);
  std::vector<SubspaceMap> zd(static_cast<std::size_t>(bound) + 1), bd(static_cast<std::size_t>(bound) + 1);
  for (int r = 0; r <= bound; ++r) {
    for (const auto& [b, basis] : ss.first.terms) {
      zd[static_cast<std::size_t>(r)][b] = z_subspace(ec, b, r);
      bd[static_cast<std::size_t>(r)][b] = b_subspace(ec, b, r);
    }
  }
  int stable = bound;
  while (stable > 0 && zd[static_cast<std::size_t>(stable - 1)] == zd.back() &&
         bd[static_cast<std::size_t>(stable - 1)] == bd.back()) {
    --stable;
  }
  ss.stable_r = stable;

  const Bidegree jdeg = ec.j.degree;
  for (int r = 0; r <= stable; ++r) {
    const auto& z = zd[static_cast<std::size_t>(r)];
    const auto& b = bd[static_cast<std::size_t>(r)];
    Page page = make_page(ss.first, ss.start_page + r, z, b);
    for (const auto& [pos, term] : page.terms) {
      const Bidegree tgt = pos + page.d.degree;
      auto tit = page.terms.find(tgt);
      if (term.dim() == 0 || tit == page.terms.end() || tit->second.dim() == 0) continue;
      const Subquotient& target = tit->second;
      const Bidegree kt = pos + kKDeg;
      const Bidegree src{kt.p - r, kt.q + r};
      const Matrix ir = ec.i_power(src, r);
      const Matrix jb = ec.j_block(src);
      const Matrix kb = ec.k_block(pos);
      if (!(src + jdeg == tgt)) throw InternalError("page differential bidegree bookkeeping");
      Matrix block(ec.field, target.dim(), term.dim());
      for (std::size_t col = 0; col < term.dim(); ++col) {
        auto x = solve(ir, kb.apply(term.representatives().row(col)));
        if (!x) throw InternalError("Z^(r) element whose k-image is not in im(i^r)");
        const Vector coords = target.coordinates(jb.apply(*x));
        for (std::size_t row = 0; row < target.dim(); ++row) block(row, col) = coords[row];
      }
      page.d.blocks[pos] = block;
    }
    check_d_squared(page);
    if (r == stable && page_has_nonzero_d(page)) throw InternalError("nonzero differential on the stable page");
    if (r < stable) {
      auto [zn, bn] = advance(page, z, b);
      if (!(zn == zd[static_cast<std::size_t>(r) + 1]) || !(bn == bd[static_cast<std::size_t>(r) + 1])) {
        throw InternalError("page recursion disagrees with direct Z/B subspaces at r = " + std::to_string(r + 1));
      }
    }
    ss.pages.push_back(std::move(page));
    ss.Z.push_back(z);
    ss.B.push_back(b);
  }
  return ss;
}

SpectralSequence sequence_from_pages(FieldSpec field, int start_page, const BigradedSpace& first,
                                     const std::map<int, BigradedMap>& differentials) {
  SpectralSequence ss;
  ss.field = field;
  ss.start_page = start_page;
  for (const auto& [b, basis] : first.terms) {
    if (basis.size() > 0) ss.first.terms[b] = basis;
  }
  int last_nonzero = start_page - 1;
  for (const auto& [number, map] : differentials) {
    if (number < start_page) {
      throw ValidationError("differential supplied for page " + std::to_string(number) + " before the first page");
    }
    for (const auto& [src, m] : map.blocks) {
      if (!m.is_zero()) last_nonzero = std::max(last_nonzero, number);
    }
  }
  SubspaceMap z, b;
  for (const auto& [pos, basis] : ss.first.terms) {
    z[pos] = Subspace::full(field, basis.size());
    b[pos] = Subspace::zero(field, basis.size());
  }
  const int stable = last_nonzero - start_page + 1;
  ss.stable_r = stable;
  for (int r = 0; r <= stable; ++r) {
    const int number = start_page + r;
    Page page = make_page(ss.first, number, z, b);
    auto dit = differentials.find(number);
    if (dit != differentials.end()) {
      for (const auto& [src, m] : dit->second.blocks) {
        const Bidegree tgt = src + page.d.degree;
        const std::size_t rows = page.dim(tgt);
        const std::size_t cols = page.dim(src);
        if (!(m.field() == field)) throw ValidationError("page " + std::to_string(number) + " block over a different field");
        if (m.rows() != rows || m.cols() != cols) {
          throw ValidationError("page " + std::to_string(number) + " differential at " + src.key() + " has shape " +
                                std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ", expected " +
                                std::to_string(rows) + "x" + std::to_string(cols) + " (canonical page bases)");
        }
        if (rows > 0 && cols > 0) page.d.blocks[src] = m;
      }
    }
    check_d_squared(page);
    auto [zn, bn] = advance(page, z, b);
    ss.pages.push_back(std::move(page));
    ss.Z.push_back(z);
    ss.B.push_back(b);
    z = std::move(zn);
    b = std::move(bn);
  }
  return ss;
}

BigradedSpace infinity_page(const SpectralSequence& ss) {
  BigradedSpace out;
  if (ss.pages.empty()) return out;
  for (const auto& [b, term] : ss.infinity().terms) {
    if (term.dim() > 0) out.terms[b] = term.basis();
  }
  return out;
}

LimitHomology limit_homology(const ExactCouple& ec, int n) {
  LimitHomology out;
  if (!ec.colimit_level) return out;
  const Bidegree b{*ec.colimit_level, n - *ec.colimit_level};
  auto it = ec.D.terms.find(b);
  if (it == ec.D.terms.end()) return out;
  out.dim = it->second.size();
  out.basis = it->second;
  return out;
}

std::map<int, std::size_t> diagonal_dims(const Page& page) {
  std::map<int, std::size_t> out;
  for (const auto& [b, term] : page.terms) out[b.total()] += term.dim();
  return out;
}

std::map<int, std::size_t> diagonal_dims(const BigradedSpace& space) {
  std::map<int, std::size_t> out;
  for (const auto& [b, basis] : space.terms) out[b.total()] += basis.size();
  return out;
}

namespace {

const std::set<Bidegree> kSurfaceSupport = {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {2, 0}, {2, -1}};

struct Summand {
  Bidegree pos;
  Subquotient sq;
};

struct Arrow {
  std::size_t src;  // indices into the summand list
  std::size_t tgt;
  int r;
  bool must_be_isomorphism;
};

struct Layout {
  std::vector<Summand> summands;
  std::vector<Arrow> arrows;
};

Layout strict_layout(const SpectralSequence& ss) {
  Layout out;
  const int n = ss.stable_r;
  const int a = ss.start_page - 1;
  // (pos, 'B' or 'Z', r) -> summand index
  std::map<std::tuple<Bidegree, char, int>, std::size_t> index;
  std::map<int, std::vector<Bidegree>> by_degree;
  for (const auto& [pos, basis] : ss.first.terms) by_degree[pos.total()].push_back(pos);
  for (const auto& [deg, positions] : by_degree) {
    for (const auto& pos : positions) {
      const auto& labels = ss.first.labels(pos);
      for (int r = 1; r <= n; ++r) {
        index[{pos, 'B', r}] = out.summands.size();
        out.summands.push_back({pos, Subquotient(ss.b(r).at(pos), ss.b(r - 1).at(pos), labels)});
      }
      out.summands.push_back({pos, Subquotient(ss.z(n).at(pos), ss.b(n).at(pos), labels)});
      for (int r = n - 1; r >= 0; --r) {
        index[{pos, 'Z', r}] = out.summands.size();
        out.summands.push_back({pos, Subquotient(ss.z(r).at(pos), ss.z(r + 1).at(pos), labels)});
      }
    }
  }
  for (const auto& [key, idx] : index) {
    const auto& [pos, kind, r] = key;
    if (kind != 'Z' || out.summands[idx].sq.dim() == 0) continue;
    const Bidegree tgt{pos.p - 1 - a - r, pos.q + a + r};
    auto it = index.find({tgt, 'B', r + 1});
    if (it == index.end()) throw InternalError("Z^(r)/Z^(r+1) summand without a B^(r+1)/B^(r) partner at " + tgt.key());
    out.arrows.push_back({idx, it->second, r, true});
  }
  return out;
}

Layout surface_layout(const SpectralSequence& ss) {
  Layout out;
  const FieldSpec f = ss.field;
  auto full = [&](Bidegree b) { return Subspace::full(f, ss.first.dim(b)); };
  auto zero = [&](Bidegree b) { return Subspace::zero(f, ss.first.dim(b)); };
  auto z1 = [&](Bidegree b) { return ss.z(1).at(b); };
  auto b1 = [&](Bidegree b) { return ss.b(1).at(b); };
  std::map<std::string, std::size_t> index;
  auto add = [&](const std::string& name, Bidegree pos, auto outer, auto inner) {
    if (ss.first.dim(pos) == 0) return;
    index[name] = out.summands.size();
    out.summands.push_back({pos, Subquotient(outer(pos), inner(pos), ss.first.labels(pos))});
  };
  // degree 0
  add("E00/B", {0, 0}, full, b1);
  add("B00", {0, 0}, b1, zero);
  // degree 1
  add("E01/B", {0, 1}, full, b1);
  add("B01", {0, 1}, b1, zero);
  add("E10", {1, 0}, full, zero);
  add("E2-1", {2, -1}, full, zero);
  // degree 2
  add("E11", {1, 1}, full, zero);
  add("Z20", {2, 0}, z1, zero);
  add("E20/Z", {2, 0}, full, z1);
  auto arrow = [&](const std::string& s, const std::string& t, int r) {
    auto si = index.find(s);
    auto ti = index.find(t);
    if (si == index.end() || ti == index.end()) return;
    out.arrows.push_back({si->second, ti->second, r, false});
  };
  arrow("E11", "B01", 0);
  arrow("Z20", "E01/B", 1);
  arrow("E20/Z", "E10", 0);
  arrow("E10", "B00", 0);
  arrow("E2-1", "E00/B", 1);
  return out;
}

Matrix arrow_block(const SpectralSequence& ss, const Summand& src, const Summand& tgt, int r) {
  Matrix block(ss.field, tgt.sq.dim(), src.sq.dim());
  if (r >= static_cast<int>(ss.pages.size())) return block;
  const Page& page = ss.pages[static_cast<std::size_t>(r)];
  const Subquotient& from = page.terms.at(src.pos);
  const Subquotient& to = page.terms.at(tgt.pos);
  if (!(src.pos + page.d.degree == tgt.pos)) throw InternalError("chain complex arrow with the wrong bidegree");
  const Matrix d = page.d.block(src.pos, ss.field, to.dim(), from.dim());
  for (std::size_t col = 0; col < src.sq.dim(); ++col) {
    const Vector page_coords = from.coordinates(src.sq.representatives().row(col));
    const Vector lifted = to.lift(d.apply(page_coords));
    const Vector coords = tgt.sq.coordinates(lifted);
    for (std::size_t row = 0; row < tgt.sq.dim(); ++row) block(row, col) = coords[row];
  }
  return block;
}

ChainComplex assemble(const SpectralSequence& ss, const Layout& layout) {
  ChainComplex c;
  c.field = ss.field;
  if (ss.first.terms.empty()) return c;
  int lo = 0;
  int hi = 0;
  bool any = false;
  for (const auto& [pos, basis] : ss.first.terms) {
    if (!any) lo = hi = pos.total();
    any = true;
    lo = std::min(lo, pos.total());
    hi = std::max(hi, pos.total());
  }
  c.lowest_degree = lo;
  // Offsets of nonempty summands inside their degree.
  std::vector<std::size_t> offset(layout.summands.size(), 0);
  std::vector<std::vector<std::string>> labels(static_cast<std::size_t>(hi - lo + 1));
  for (std::size_t s = 0; s < layout.summands.size(); ++s) {
    const auto& sm = layout.summands[s];
    auto& l = labels[static_cast<std::size_t>(sm.pos.total() - lo)];
    offset[s] = l.size();
    l.insert(l.end(), sm.sq.labels().begin(), sm.sq.labels().end());
  }
  for (auto& l : labels) {
    const std::size_t n = l.size();
    c.bases.push_back({std::move(l), Matrix::identity(ss.field, n)});
  }
  for (int n = lo; n <= hi; ++n) c.boundaries.emplace_back(ss.field, c.dim(n - 1), c.dim(n));
  for (const auto& arrow : layout.arrows) {
    const auto& src = layout.summands[arrow.src];
    const auto& tgt = layout.summands[arrow.tgt];
    if (src.sq.dim() == 0 && tgt.sq.dim() == 0) continue;
    const Matrix block = arrow_block(ss, src, tgt, arrow.r);
    if (arrow.must_be_isomorphism) {
      if (block.rows() != block.cols() || rank(block) != block.rows()) {
        throw InternalError("induced d̄^(" + std::to_string(arrow.r) + ") at " + src.pos.key() + " is not invertible");
      }
    }
    const int n = src.pos.total();
    if (tgt.pos.total() != n - 1) throw InternalError("chain complex arrow does not lower degree by one");
    Matrix& bd = c.boundaries[static_cast<std::size_t>(n - lo)];
    for (std::size_t row = 0; row < block.rows(); ++row)
      for (std::size_t col = 0; col < block.cols(); ++col) bd(offset[arrow.tgt] + row, offset[arrow.src] + col) = block(row, col);
  }
  if (auto v = validate(c)) throw InternalError("assembled chain complex is invalid: " + v->message);
  return c;
}

}  // namespace

bool surface_layout_applies(const SpectralSequence& ss) {
  if (ss.start_page != 1) return false;
  for (const auto& [pos, basis] : ss.first.terms) {
    if (basis.size() > 0 && !kSurfaceSupport.contains(pos)) return false;
  }
  return true;
}

ChainComplex chain_complex_of_sequence(const SpectralSequence& ss, ChainLayout layout) {
  if (layout == ChainLayout::surface && !surface_layout_applies(ss)) {
    throw ValidationError("surface layout needs start page 1 and first-page support in rows p <= 2 of a surface");
  }
  const bool surface = layout == ChainLayout::surface || (layout == ChainLayout::automatic && surface_layout_applies(ss));
  return assemble(ss, surface ? surface_layout(ss) : strict_layout(ss));
}

ChainComplex couple_chain_complex(const ExactCouple& ec, ChainLayout layout) {
  return chain_complex_of_sequence(spectral_sequence(ec), layout);
}

InfinityComparison compare_homology_with_infinity(const SpectralSequence& ss, const ChainComplex& c) {
  InfinityComparison out;
  const auto inf = ss.pages.empty() ? std::map<int, std::size_t>{} : diagonal_dims(ss.infinity());
  const auto h = homology(c);
  int lo = c.empty() ? 0 : c.lowest_degree;
  int hi = c.empty() ? -1 : c.highest_degree();
  for (const auto& [n, d] : inf) {
    if (d == 0) continue;
    lo = std::min(lo, n);
    hi = std::max(hi, n);
  }
  out.lowest_degree = lo;
  for (int n = lo; n <= hi; ++n) {
    const auto betti = static_cast<long long>(h.betti_at(n));
    auto it = inf.find(n);
    const auto e = static_cast<long long>(it == inf.end() ? 0 : it->second);
    out.betti.push_back(betti);
    out.infinity_dims.push_back(e);
    if (betti != e) out.matches = false;
  }
  return out;
}

InfinityComparison homology_matches_infinity(const ExactCouple& ec) {
  const SpectralSequence ss = spectral_sequence(ec);
  return compare_homology_with_infinity(ss, chain_complex_of_sequence(ss));
}

}  // namespace couplex
