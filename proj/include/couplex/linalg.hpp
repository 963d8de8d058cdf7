#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "couplex/field.hpp"

namespace couplex {

using Vector = std::vector<Scalar>;

Vector zero_vector(FieldSpec field, std::size_t n);
bool is_zero(const Vector& v);

/// Dense row-major matrix over an exact field. A matrix with `rows` rows and
/// `cols` columns represents a linear map F^cols -> F^rows acting on column
/// vectors; subspaces are stored as matrices whose rows span them.
class Matrix {
 public:
  Matrix() = default;
  Matrix(FieldSpec field, std::size_t rows, std::size_t cols);

  static Matrix identity(FieldSpec field, std::size_t n);
  /// `cols` fixes the width when `rows` is empty.
  static Matrix from_rows(FieldSpec field, const std::vector<Vector>& rows, std::size_t cols);
  static Matrix from_ints(FieldSpec field, std::initializer_list<std::initializer_list<long>> rows,
                          std::size_t cols = 0);

  FieldSpec field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  const Scalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  Vector row(std::size_t r) const;
  Vector column(std::size_t c) const;
  std::vector<Vector> row_vectors() const;

  Matrix transpose() const;
  Matrix operator*(const Matrix& rhs) const;
  Matrix operator+(const Matrix& rhs) const;
  Vector apply(const Vector& v) const;

  /// Rows [first, first + count).
  Matrix row_block(std::size_t first, std::size_t count) const;
  static Matrix vstack(const Matrix& top, const Matrix& bottom);

  bool is_zero() const;
  bool operator==(const Matrix& rhs) const;

 private:
  FieldSpec field_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

struct RrefResult {
  Matrix reduced;
  std::vector<std::size_t> pivots;
};

/// Unique reduced row echelon form; zero rows trail.
RrefResult rref(const Matrix& m);
std::size_t rank(const Matrix& m);

/// Solves A·x = b; returns the solution with all free variables zero, or
/// nullopt when b is not in the column span of A.
std::optional<Vector> solve(const Matrix& a, const Vector& b);

/// A subspace of F^n in canonical form: the RREF of any spanning set with the
/// zero rows dropped. Two values compare equal iff the subspaces coincide.
class Subspace {
 public:
  Subspace() = default;
  Subspace(FieldSpec field, std::size_t ambient_dim);

  static Subspace zero(FieldSpec field, std::size_t ambient_dim) { return Subspace(field, ambient_dim); }
  static Subspace full(FieldSpec field, std::size_t ambient_dim);
  /// Span of the rows of `generators`.
  static Subspace span(const Matrix& generators);

  FieldSpec field() const { return basis_.field(); }
  std::size_t ambient_dim() const { return basis_.cols(); }
  std::size_t dim() const { return basis_.rows(); }
  const Matrix& basis() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  bool contains(const Vector& v) const;
  bool contains(const Subspace& other) const;
  Subspace operator+(const Subspace& other) const;

  bool operator==(const Subspace& rhs) const { return basis_ == rhs.basis_; }

 private:
  Matrix basis_;
  std::vector<std::size_t> pivots_;
};

/// Ordered generator names together with the vectors (rows) they denote.
struct LabeledBasis {
  std::vector<std::string> labels;
  Matrix vectors;

  std::size_t size() const { return labels.size(); }
  bool operator==(const LabeledBasis&) const = default;
};

/// Expresses vectors in terms of a fixed set of linearly independent rows.
class RowSolver {
 public:
  RowSolver() = default;
  explicit RowSolver(const Matrix& independent_rows);

  /// Coefficients c with Σ c_i row_i = v, or nullopt if v is outside the span.
  std::optional<Vector> coordinates(const Vector& v) const;
  std::size_t size() const { return count_; }

 private:
  FieldSpec field_;
  std::size_t count_ = 0;
  std::size_t ambient_ = 0;
  Matrix reduced_;    // RREF of the rows
  Matrix transform_;  // transform_ · rows = reduced_
  std::vector<std::size_t> pivots_;
};

/// Incremental independence test used for greedy basis completion.
class EchelonBuilder {
 public:
  EchelonBuilder(FieldSpec field, std::size_t ambient_dim);

  /// Inserts v if it is independent of what is already held; returns whether
  /// it was inserted.
  bool insert(const Vector& v);
  bool is_independent(const Vector& v) const;
  std::size_t size() const { return rows_.size(); }

 private:
  Vector reduce(Vector v) const;

  FieldSpec field_;
  std::size_t ambient_ = 0;
  std::vector<Vector> rows_;
  std::vector<std::size_t> pivots_;
};

/// The subquotient outer/inner (inner ⊆ outer ⊆ F^n) with a deterministic
/// basis of coset representatives: the RREF rows of `outer` are scanned in
/// order and each one independent of inner + the previously kept rows is kept.
/// When outer is the whole space the representatives are the lowest-index
/// standard vectors that complement inner.
class Subquotient {
 public:
  Subquotient() = default;
  /// `ambient_labels` names the standard basis of F^n; when empty, "e0", "e1",
  /// ... are used.
  Subquotient(Subspace outer, Subspace inner, std::span<const std::string> ambient_labels = {});

  FieldSpec field() const { return outer_.field(); }
  std::size_t dim() const { return representatives_.rows(); }
  std::size_t ambient_dim() const { return outer_.ambient_dim(); }
  const Subspace& outer() const { return outer_; }
  const Subspace& inner() const { return inner_; }
  const Matrix& representatives() const { return representatives_; }
  const std::vector<std::string>& labels() const { return labels_; }
  LabeledBasis basis() const { return {labels_, representatives_}; }

  /// Coordinates of the class of v; throws ValidationError if v ∉ outer.
  Vector coordinates(const Vector& v) const;
  /// Σ c_i rep_i.
  Vector lift(const Vector& coords) const;

 private:
  Subspace outer_;
  Subspace inner_;
  Matrix representatives_;
  std::vector<std::string> labels_;
  RowSolver solver_;  // over [representatives; inner basis]
};

/// Basis of the column span of m (as rows), i.e. im(m) ⊆ F^rows.
Subspace image_basis(const Matrix& m);
/// Basis of {x : m·x = 0} ⊆ F^cols.
Subspace kernel_basis(const Matrix& m);
/// Coset representatives of F^n / sub with bracketed labels.
LabeledBasis quotient_basis(const Subspace& sub, std::span<const std::string> ambient_labels = {});
/// {x : m·x ∈ target}.
Subspace preimage(const Matrix& m, const Subspace& target);
/// Matrix of m restricted to dom -> cod in their RREF bases; throws
/// ValidationError("not invariant") if m·dom ⊄ cod.
Matrix restrict_map(const Matrix& m, const Subspace& dom, const Subspace& cod);
/// Matrix of the map F^n/dom_sub -> F^k/cod_sub induced by m, in the bases of
/// quotient_basis; throws ValidationError("does not descend") if m·dom_sub ⊄ cod_sub.
Matrix induced_quotient_map(const Matrix& m, const Subspace& dom_sub, const Subspace& cod_sub);
/// Matrix of the map between subquotients induced by m.
Matrix induced_map(const Matrix& m, const Subquotient& dom, const Subquotient& cod);

/// Human-readable name of a vector, e.g. "q1+q3", "a-2*b", "0".
std::string combination_label(const Vector& v, std::span<const std::string> labels);
std::vector<std::string> default_labels(std::size_t n);

}  // namespace couplex
