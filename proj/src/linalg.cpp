#include "couplex/linalg.hpp"

#include <algorithm>
#include <utility>

#include "couplex/errors.hpp"

namespace couplex {

Vector zero_vector(FieldSpec field, std::size_t n) { return Vector(n, Scalar::zero(field)); }

bool is_zero(const Vector& v) {
  for (const auto& x : v) {
    if (!x.is_zero()) return false;
  }
  return true;
}

Matrix::Matrix(FieldSpec field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), data_(rows * cols, Scalar::zero(field)) {}

Matrix Matrix::identity(FieldSpec field, std::size_t n) {
  Matrix m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Scalar::one(field);
  return m;
}

Matrix Matrix::from_rows(FieldSpec field, const std::vector<Vector>& rows, std::size_t cols) {
  Matrix m(field, rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw ValidationError("ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!(rows[r][c].field() == field)) throw FieldMismatch("matrix entry from a different field");
      m(r, c) = rows[r][c];
    }
  }
  return m;
}

Matrix Matrix::from_ints(FieldSpec field, std::initializer_list<std::initializer_list<long>> rows,
                         std::size_t cols) {
  if (rows.size() > 0) cols = rows.begin()->size();
  Matrix m(field, rows.size(), cols);
  std::size_t r = 0;
  for (const auto& row : rows) {
    if (row.size() != cols) throw ValidationError("ragged matrix rows");
    std::size_t c = 0;
    for (long v : row) m(r, c++) = Scalar(field, v);
    ++r;
  }
  return m;
}

Vector Matrix::row(std::size_t r) const {
  return Vector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

Vector Matrix::column(std::size_t c) const {
  Vector out;
  out.reserve(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out.push_back((*this)(r, c));
  return out;
}

std::vector<Vector> Matrix::row_vectors() const {
  std::vector<Vector> out;
  out.reserve(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out.push_back(row(r));
  return out;
}

Matrix Matrix::transpose() const {
  Matrix t(field_, cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
  if (!(field_ == rhs.field_)) throw FieldMismatch("matrix product across fields");
  if (cols_ != rhs.rows_) {
    throw ValidationError("matrix product shape mismatch: " + std::to_string(rows_) + "x" +
                          std::to_string(cols_) + " * " + std::to_string(rhs.rows_) + "x" +
                          std::to_string(rhs.cols_));
  }
  Matrix out(field_, rows_, rhs.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const Scalar& a = (*this)(r, k);
      if (a.is_zero()) continue;
      for (std::size_t c = 0; c < rhs.cols_; ++c) {
        const Scalar& b = rhs(k, c);
        if (!b.is_zero()) out(r, c) += a * b;
      }
    }
  }
  return out;
}

Matrix Matrix::operator+(const Matrix& rhs) const {
  if (!(field_ == rhs.field_)) throw FieldMismatch("matrix sum across fields");
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw ValidationError("matrix sum shape mismatch");
  Matrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += rhs.data_[i];
  return out;
}

Vector Matrix::apply(const Vector& v) const {
  if (v.size() != cols_) throw ValidationError("vector length does not match matrix columns");
  Vector out = zero_vector(field_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      if (!v[c].is_zero() && !(*this)(r, c).is_zero()) out[r] += (*this)(r, c) * v[c];
    }
  }
  return out;
}

Matrix Matrix::row_block(std::size_t first, std::size_t count) const {
  Matrix out(field_, count, cols_);
  for (std::size_t r = 0; r < count; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(r, c) = (*this)(first + r, c);
  return out;
}

Matrix Matrix::vstack(const Matrix& top, const Matrix& bottom) {
  if (top.cols_ != bottom.cols_) throw ValidationError("vstack column mismatch");
  if (!(top.field_ == bottom.field_)) throw FieldMismatch("vstack across fields");
  Matrix out(top.field_, top.rows_ + bottom.rows_, top.cols_);
  std::copy(top.data_.begin(), top.data_.end(), out.data_.begin());
  std::copy(bottom.data_.begin(), bottom.data_.end(),
            out.data_.begin() + static_cast<std::ptrdiff_t>(top.data_.size()));
  return out;
}

bool Matrix::is_zero() const {
  for (const auto& x : data_) {
    if (!x.is_zero()) return false;
  }
  return true;
}

bool Matrix::operator==(const Matrix& rhs) const {
  return field_ == rhs.field_ && rows_ == rhs.rows_ && cols_ == rhs.cols_ && data_ == rhs.data_;
}

namespace {

// Gauss-Jordan in place; applies the same row operations to `companion` when
// it is non-null (used to track transforms).
std::vector<std::size_t> reduce_in_place(Matrix& m, Matrix* companion) {
  std::vector<std::size_t> pivots;
  std::size_t lead = 0;
  for (std::size_t c = 0; c < m.cols() && lead < m.rows(); ++c) {
    std::size_t found = lead;
    while (found < m.rows() && m(found, c).is_zero()) ++found;
    if (found == m.rows()) continue;
    if (found != lead) {
      for (std::size_t k = 0; k < m.cols(); ++k) std::swap(m(found, k), m(lead, k));
      if (companion != nullptr)
        for (std::size_t k = 0; k < companion->cols(); ++k) std::swap((*companion)(found, k), (*companion)(lead, k));
    }
    const Scalar scale = m(lead, c).inverse();
    if (!scale.is_one()) {
      for (std::size_t k = 0; k < m.cols(); ++k) m(lead, k) *= scale;
      if (companion != nullptr)
        for (std::size_t k = 0; k < companion->cols(); ++k) (*companion)(lead, k) *= scale;
    }
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == lead || m(r, c).is_zero()) continue;
      const Scalar factor = m(r, c);
      for (std::size_t k = 0; k < m.cols(); ++k) {
        if (!m(lead, k).is_zero()) m(r, k) -= factor * m(lead, k);
      }
      if (companion != nullptr) {
        for (std::size_t k = 0; k < companion->cols(); ++k) {
          if (!(*companion)(lead, k).is_zero()) (*companion)(r, k) -= factor * (*companion)(lead, k);
        }
      }
    }
    pivots.push_back(c);
    ++lead;
  }
  return pivots;
}

}  // namespace

RrefResult rref(const Matrix& m) {
  RrefResult out{m, {}};
  out.pivots = reduce_in_place(out.reduced, nullptr);
  return out;
}

std::size_t rank(const Matrix& m) { return rref(m).pivots.size(); }

std::optional<Vector> solve(const Matrix& a, const Vector& b) {
  if (b.size() != a.rows()) throw ValidationError("right-hand side length mismatch");
  Matrix aug(a.field(), a.rows(), a.cols() + 1);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) aug(r, c) = a(r, c);
    aug(r, a.cols()) = b[r];
  }
  auto [red, pivots] = rref(aug);
  if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;
  Vector x = zero_vector(a.field(), a.cols());
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = red(i, a.cols());
  return x;
}

Subspace::Subspace(FieldSpec field, std::size_t ambient_dim) : basis_(field, 0, ambient_dim) {}

Subspace Subspace::full(FieldSpec field, std::size_t ambient_dim) {
  return span(Matrix::identity(field, ambient_dim));
}

Subspace Subspace::span(const Matrix& generators) {
  auto [red, pivots] = rref(generators);
  Subspace s;
  s.basis_ = red.row_block(0, pivots.size());
  s.pivots_ = std::move(pivots);
  return s;
}

bool Subspace::contains(const Vector& v) const {
  if (v.size() != ambient_dim()) throw ValidationError("vector outside the ambient space");
  // Reduce v against the RREF rows; v is inside iff it reduces to zero.
  Vector w = v;
  for (std::size_t i = 0; i < pivots_.size(); ++i) {
    const Scalar factor = w[pivots_[i]];
    if (factor.is_zero()) continue;
    for (std::size_t c = 0; c < w.size(); ++c) {
      if (!basis_(i, c).is_zero()) w[c] -= factor * basis_(i, c);
    }
  }
  return is_zero(w);
}

bool Subspace::contains(const Subspace& other) const {
  for (std::size_t r = 0; r < other.dim(); ++r) {
    if (!contains(other.basis_.row(r))) return false;
  }
  return true;
}

Subspace Subspace::operator+(const Subspace& other) const {
  if (ambient_dim() != other.ambient_dim()) throw ValidationError("subspace sum across ambients");
  return span(Matrix::vstack(basis_, other.basis_));
}

RowSolver::RowSolver(const Matrix& independent_rows)
    : field_(independent_rows.field()),
      count_(independent_rows.rows()),
      ambient_(independent_rows.cols()),
      reduced_(independent_rows),
      transform_(Matrix::identity(independent_rows.field(), independent_rows.rows())) {
  pivots_ = reduce_in_place(reduced_, &transform_);
  if (pivots_.size() != count_) throw InternalError("RowSolver given dependent rows");
}

std::optional<Vector> RowSolver::coordinates(const Vector& v) const {
  if (v.size() != ambient_) throw ValidationError("vector outside the ambient space");
  // v = Σ y_i reduced_i with y_i = v[pivot_i]; then c = y · transform_.
  Vector w = v;
  Vector y = zero_vector(field_, count_);
  for (std::size_t i = 0; i < count_; ++i) {
    y[i] = w[pivots_[i]];
    if (y[i].is_zero()) continue;
    for (std::size_t c = 0; c < ambient_; ++c) {
      if (!reduced_(i, c).is_zero()) w[c] -= y[i] * reduced_(i, c);
    }
  }
  if (!is_zero(w)) return std::nullopt;
  Vector out = zero_vector(field_, count_);
  for (std::size_t i = 0; i < count_; ++i) {
    if (y[i].is_zero()) continue;
    for (std::size_t k = 0; k < count_; ++k) {
      if (!transform_(i, k).is_zero()) out[k] += y[i] * transform_(i, k);
    }
  }
  return out;
}

EchelonBuilder::EchelonBuilder(FieldSpec field, std::size_t ambient_dim) : field_(field), ambient_(ambient_dim) {}

Vector EchelonBuilder::reduce(Vector v) const {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Scalar factor = v[pivots_[i]];
    if (factor.is_zero()) continue;
    for (std::size_t c = 0; c < ambient_; ++c) {
      if (!rows_[i][c].is_zero()) v[c] -= factor * rows_[i][c];
    }
  }
  return v;
}

bool EchelonBuilder::is_independent(const Vector& v) const {
  if (v.size() != ambient_) throw ValidationError("vector outside the ambient space");
  return !is_zero(reduce(v));
}

bool EchelonBuilder::insert(const Vector& v) {
  if (v.size() != ambient_) throw ValidationError("vector outside the ambient space");
  Vector w = reduce(v);
  std::size_t pivot = 0;
  while (pivot < ambient_ && w[pivot].is_zero()) ++pivot;
  if (pivot == ambient_) return false;
  const Scalar scale = w[pivot].inverse();
  for (auto& x : w) x *= scale;
  // Keep every stored row reduced at the new pivot.
  for (auto& row : rows_) {
    const Scalar factor = row[pivot];
    if (factor.is_zero()) continue;
    for (std::size_t c = 0; c < ambient_; ++c) {
      if (!w[c].is_zero()) row[c] -= factor * w[c];
    }
  }
  rows_.push_back(std::move(w));
  pivots_.push_back(pivot);
  return true;
}

std::vector<std::string> default_labels(std::size_t n) {
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back("e" + std::to_string(i));
  return out;
}

std::string combination_label(const Vector& v, std::span<const std::string> labels) {
  if (labels.size() != v.size()) throw ValidationError("label count does not match vector length");
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].is_zero()) continue;
    Scalar c = v[i];
    bool negative = false;
    if (c.field().is_rational() && c.rational() < 0) {
      negative = true;
      c = -c;
    }
    if (out.empty()) {
      if (negative) out += "-";
    } else {
      out += negative ? "-" : "+";
    }
    if (!c.is_one()) out += c.to_string() + "*";
    out += labels[i];
  }
  return out.empty() ? std::string("0") : out;
}

namespace {

std::vector<std::string> labels_or_default(std::span<const std::string> labels, std::size_t n) {
  if (labels.empty()) return default_labels(n);
  if (labels.size() != n) throw ValidationError("label count does not match ambient dimension");
  return {labels.begin(), labels.end()};
}

}  // namespace

Subquotient::Subquotient(Subspace outer, Subspace inner, std::span<const std::string> ambient_labels)
    : outer_(std::move(outer)), inner_(std::move(inner)) {
  if (outer_.ambient_dim() != inner_.ambient_dim()) throw ValidationError("subquotient ambient mismatch");
  if (!outer_.contains(inner_)) throw ValidationError("subquotient inner space is not contained in outer space");
  const auto names = labels_or_default(ambient_labels, outer_.ambient_dim());
  const FieldSpec f = outer_.field();
  EchelonBuilder builder(f, outer_.ambient_dim());
  for (std::size_t r = 0; r < inner_.dim(); ++r) builder.insert(inner_.basis().row(r));
  std::vector<Vector> reps;
  for (std::size_t r = 0; r < outer_.dim(); ++r) {
    Vector v = outer_.basis().row(r);
    if (builder.insert(v)) reps.push_back(std::move(v));
  }
  representatives_ = Matrix::from_rows(f, reps, outer_.ambient_dim());
  const bool bracket = inner_.dim() > 0;
  for (const auto& v : reps) {
    std::string name = combination_label(v, names);
    labels_.push_back(bracket ? "[" + name + "]" : name);
  }
  solver_ = RowSolver(Matrix::vstack(representatives_, inner_.basis()));
}

Vector Subquotient::coordinates(const Vector& v) const {
  auto c = solver_.coordinates(v);
  if (!c) throw ValidationError("vector does not lie in the subquotient's outer space");
  c->resize(dim());
  return *c;
}

Vector Subquotient::lift(const Vector& coords) const {
  if (coords.size() != dim()) throw ValidationError("coordinate length does not match subquotient dimension");
  return representatives_.transpose().apply(coords);
}

Subspace image_basis(const Matrix& m) { return Subspace::span(m.transpose()); }

Subspace kernel_basis(const Matrix& m) {
  auto [red, pivots] = rref(m);
  const FieldSpec f = m.field();
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<Vector> gens;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vector v = zero_vector(f, m.cols());
    v[free] = Scalar::one(f);
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -red(i, free);
    gens.push_back(std::move(v));
  }
  return Subspace::span(Matrix::from_rows(f, gens, m.cols()));
}

LabeledBasis quotient_basis(const Subspace& sub, std::span<const std::string> ambient_labels) {
  Subquotient q(Subspace::full(sub.field(), sub.ambient_dim()), sub, ambient_labels);
  LabeledBasis out = q.basis();
  if (sub.dim() == 0) {
    for (auto& l : out.labels) l = "[" + l + "]";
  }
  return out;
}

Subspace preimage(const Matrix& m, const Subspace& target) {
  if (target.ambient_dim() != m.rows()) throw ValidationError("preimage target lives in the wrong space");
  // x ↦ m·x ∈ target  ⇔  N·m·x = 0 where the rows of N span the annihilator of target.
  const Subspace annihilator = kernel_basis(target.basis());
  return kernel_basis(annihilator.basis() * m);
}

Matrix restrict_map(const Matrix& m, const Subspace& dom, const Subspace& cod) {
  if (dom.ambient_dim() != m.cols() || cod.ambient_dim() != m.rows()) {
    throw ValidationError("restrict_map shape mismatch");
  }
  RowSolver solver(cod.basis());
  Matrix out(m.field(), cod.dim(), dom.dim());
  for (std::size_t j = 0; j < dom.dim(); ++j) {
    auto c = solver.coordinates(m.apply(dom.basis().row(j)));
    if (!c) throw ValidationError("not invariant");
    for (std::size_t i = 0; i < cod.dim(); ++i) out(i, j) = (*c)[i];
  }
  return out;
}

Matrix induced_map(const Matrix& m, const Subquotient& dom, const Subquotient& cod) {
  if (dom.ambient_dim() != m.cols() || cod.ambient_dim() != m.rows()) {
    throw ValidationError("induced_map shape mismatch");
  }
  for (std::size_t r = 0; r < dom.inner().dim(); ++r) {
    if (!cod.inner().contains(m.apply(dom.inner().basis().row(r)))) throw ValidationError("does not descend");
  }
  Matrix out(m.field(), cod.dim(), dom.dim());
  for (std::size_t j = 0; j < dom.dim(); ++j) {
    const Vector image = m.apply(dom.representatives().row(j));
    if (!cod.outer().contains(image)) throw ValidationError("not invariant");
    const Vector c = cod.coordinates(image);
    for (std::size_t i = 0; i < cod.dim(); ++i) out(i, j) = c[i];
  }
  return out;
}

Matrix induced_quotient_map(const Matrix& m, const Subspace& dom_sub, const Subspace& cod_sub) {
  const FieldSpec f = m.field();
  const Subquotient dom(Subspace::full(f, m.cols()), dom_sub);
  const Subquotient cod(Subspace::full(f, m.rows()), cod_sub);
  return induced_map(m, dom, cod);
}

}  // namespace couplex
