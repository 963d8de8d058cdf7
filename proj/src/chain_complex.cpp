#include "couplex/chain_complex.hpp"

#include "couplex/errors.hpp"

namespace couplex {

ChainComplex ChainComplex::from_labels(FieldSpec field, int lowest, std::vector<std::vector<std::string>> labels,
                                       std::vector<Matrix> boundaries_above_lowest) {
  ChainComplex c;
  c.field = field;
  c.lowest_degree = lowest;
  for (auto& l : labels) {
    const std::size_t n = l.size();
    c.bases.push_back({std::move(l), Matrix::identity(field, n)});
  }
  if (!c.bases.empty()) {
    c.boundaries.emplace_back(field, 0, c.bases[0].size());
    for (auto& m : boundaries_above_lowest) c.boundaries.push_back(std::move(m));
  }
  if (c.boundaries.size() != c.bases.size()) throw ValidationError("boundary count does not match degree count");
  return c;
}

std::size_t ChainComplex::dim(int n) const {
  return in_range(n) ? bases[static_cast<std::size_t>(n - lowest_degree)].size() : 0;
}

const std::vector<std::string>& ChainComplex::labels(int n) const {
  static const std::vector<std::string> none;
  return in_range(n) ? bases[static_cast<std::size_t>(n - lowest_degree)].labels : none;
}

Matrix ChainComplex::boundary(int n) const {
  if (in_range(n)) return boundaries[static_cast<std::size_t>(n - lowest_degree)];
  return Matrix(field, dim(n - 1), dim(n));
}

std::vector<long long> ChainComplex::dims_from_zero() const {
  std::vector<long long> out;
  for (int n = lowest_degree; n < 0 && n <= highest_degree(); ++n) {
    if (dim(n) != 0) throw ValidationError("complex has nonzero negative degrees");
  }
  for (int n = 0; n <= highest_degree(); ++n) out.push_back(static_cast<long long>(dim(n)));
  return out;
}

std::optional<ChainViolation> validate(const ChainComplex& c) {
  if (c.boundaries.size() != c.bases.size()) return ChainViolation{c.lowest_degree, "boundary count mismatch"};
  for (int n = c.lowest_degree; n <= c.highest_degree(); ++n) {
    const Matrix& d = c.boundaries[static_cast<std::size_t>(n - c.lowest_degree)];
    if (!(d.field() == c.field)) return ChainViolation{n, "boundary matrix over a different field"};
    if (d.rows() != c.dim(n - 1) || d.cols() != c.dim(n)) {
      return ChainViolation{n, "boundary in degree " + std::to_string(n) + " has shape " + std::to_string(d.rows()) +
                                   "x" + std::to_string(d.cols()) + ", expected " + std::to_string(c.dim(n - 1)) +
                                   "x" + std::to_string(c.dim(n))};
    }
    const auto& b = c.bases[static_cast<std::size_t>(n - c.lowest_degree)];
    if (b.vectors.rows() != b.labels.size()) return ChainViolation{n, "basis label count mismatch"};
  }
  for (int n = c.lowest_degree + 1; n <= c.highest_degree(); ++n) {
    if (!(c.boundary(n - 1) * c.boundary(n)).is_zero()) {
      return ChainViolation{n, "boundary does not square to zero at degree " + std::to_string(n)};
    }
  }
  return std::nullopt;
}

std::size_t HomologyResult::betti_at(int n) const {
  if (n < lowest_degree || n >= lowest_degree + static_cast<int>(betti.size())) return 0;
  return betti[static_cast<std::size_t>(n - lowest_degree)];
}

std::vector<long long> HomologyResult::betti_from_zero() const {
  std::vector<long long> out;
  for (int n = 0; n < lowest_degree + static_cast<int>(betti.size()); ++n) {
    out.push_back(static_cast<long long>(betti_at(n)));
  }
  return out;
}

HomologyResult homology(const ChainComplex& c) {
  if (auto v = validate(c)) throw ValidationError("invalid chain complex: " + v->message);
  HomologyResult h;
  h.lowest_degree = c.lowest_degree;
  for (int n = c.lowest_degree; n <= c.highest_degree(); ++n) {
    const Subspace cycles = kernel_basis(c.boundary(n));
    const Subspace boundaries = image_basis(c.boundary(n + 1));
    const Subquotient hq(cycles, boundaries, c.labels(n));
    h.betti.push_back(hq.dim());
    h.cycle_basis.push_back(hq.basis());
  }
  return h;
}

long long euler_characteristic(const ChainComplex& c) {
  long long chi = 0;
  for (int n = c.lowest_degree; n <= c.highest_degree(); ++n) {
    const auto d = static_cast<long long>(c.dim(n));
    chi += (n % 2 == 0) ? d : -d;
  }
  return chi;
}

std::vector<MorseInequality> morse_inequalities(const std::vector<long long>& dims,
                                                const std::vector<long long>& betti) {
  if (dims.size() != betti.size()) throw ValidationError("Morse inequalities need equal-length lists");
  int top = -1;
  for (std::size_t q = 0; q < dims.size(); ++q) {
    if (dims[q] < 0 || betti[q] < 0) throw ValidationError("Morse inequalities need nonnegative counts");
    if (dims[q] != 0 || betti[q] != 0) top = static_cast<int>(q);
  }
  std::vector<MorseInequality> out;
  long long lhs = 0;
  long long rhs = 0;
  for (std::size_t q = 0; q < dims.size(); ++q) {
    // Running alternating sums: S_q = M_q - S_{q-1}.
    lhs = dims[q] - lhs;
    rhs = betti[q] - rhs;
    MorseInequality m;
    m.degree = static_cast<int>(q);
    m.lhs = lhs;
    m.rhs = rhs;
    m.holds = lhs >= rhs;
    m.top = static_cast<int>(q) == top;
    m.equality = lhs == rhs;
    out.push_back(m);
  }
  return out;
}

bool morse_inequalities_hold(const std::vector<MorseInequality>& report) {
  for (const auto& m : report) {
    if (!m.holds) return false;
    if (m.top && !m.equality) return false;
  }
  return true;
}

}  // namespace couplex
