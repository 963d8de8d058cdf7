#include <algorithm>
#include <utility>

#include "couplex/corpus.hpp"
#include "couplex/errors.hpp"

namespace couplex {

namespace {

Cell cell(FieldSpec f, std::string id, int dim, int level, const std::vector<std::string>& faces) {
  Cell c{std::move(id), dim, level, {}};
  for (const auto& face : faces) c.boundary.emplace_back(face, Scalar::one(f));
  return c;
}

std::vector<std::vector<std::string>> triangles(const std::vector<std::vector<int>>& vertex_lists) {
  std::vector<std::vector<std::string>> out;
  for (const auto& t : vertex_lists) {
    std::vector<std::string> names;
    for (int v : t) names.push_back("v" + std::to_string(v));
    out.push_back(std::move(names));
  }
  return out;
}

}  // namespace

FilteredChainComplex example1_complex() {
  const FieldSpec f;
  FilteredChainComplex c;
  c.field = f;
  c.cells = {
      cell(f, "q0", 0, 0, {}),
      cell(f, "q1", 0, 0, {}),
      cell(f, "q2", 0, 0, {}),
      cell(f, "s", 1, 1, {"q1", "q2"}),
      cell(f, "γ⁻", 1, 2, {"q0", "q1"}),
      cell(f, "γ⁺", 2, 2, {}),
  };
  return c;
}

FilteredChainComplex example2_complex() {
  const FieldSpec f;
  FilteredChainComplex c;
  c.field = f;
  c.cells = {
      cell(f, "q0", 0, 0, {}),
      cell(f, "q1", 0, 0, {}),
      cell(f, "q2", 0, 0, {}),
      cell(f, "q3", 0, 0, {}),
      cell(f, "s1", 1, 1, {"q1", "q2"}),
      cell(f, "s2", 1, 1, {"q2", "q3"}),
      cell(f, "s3", 1, 1, {"q1", "q3"}),
      cell(f, "s4", 1, 1, {"q2", "q3"}),
      cell(f, "γ⁻", 1, 2, {"q0", "q1"}),
      cell(f, "p1", 2, 2, {"s1", "s3", "s4"}),
      cell(f, "p2", 2, 2, {"s2", "s4"}),
      cell(f, "γ⁺", 2, 2, {"s1", "s2", "s3"}),
  };
  return c;
}

FilteredChainComplex circle_complex(FieldSpec field) {
  return simplicial_complex(field, triangles({{0, 1}, {1, 2}, {0, 2}}));
}

FilteredChainComplex sphere_complex(FieldSpec field) {
  return simplicial_complex(field, triangles({{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}));
}

FilteredChainComplex torus_complex(FieldSpec field) {
  std::vector<std::vector<int>> t;
  for (int i = 0; i < 7; ++i) {
    t.push_back({i, (i + 1) % 7, (i + 3) % 7});
    t.push_back({i, (i + 2) % 7, (i + 3) % 7});
  }
  return simplicial_complex(field, triangles(t));
}

FilteredChainComplex projective_plane_complex(FieldSpec field) {
  return simplicial_complex(field, triangles({{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 5, 1},
                                              {1, 2, 4}, {2, 3, 5}, {3, 4, 1}, {4, 5, 2}, {5, 1, 3}}));
}

namespace {

CriticalElement element(std::string id, ElementKind kind, int index, std::vector<std::string> attaches = {}) {
  return {std::move(id), kind, index, std::move(attaches)};
}

Matrix ints(std::initializer_list<std::initializer_list<long>> rows) { return Matrix::from_ints(FieldSpec{}, rows); }

MorseSmaleModel model_base(int ambient_dim, std::vector<CriticalElement> elements) {
  MorseSmaleModel m;
  m.ambient_dim = ambient_dim;
  m.elements = std::move(elements);
  return m;
}

}  // namespace

MorseSmaleModel example1_model(ModelMode mode) {
  using enum ElementKind;
  MorseSmaleModel m = model_base(2, {element("q0", fixed, 0), element("q1", fixed, 0), element("q2", fixed, 0),
                                     element("s", fixed, 1, {"q1", "q2"}), element("γ", orbit, 1, {"s"})});
  m.mode = mode;
  if (mode == ModelMode::chain) {
    m.complex = example1_complex();
  } else {
    m.d1[{1, 0}] = ints({{0}, {1}, {1}});
    m.d1[{2, 0}] = ints({{0}});
    m.higher[2][{2, -1}] = ints({{1}, {1}});
  }
  return m;
}

MorseSmaleModel example2_model(ModelMode mode) {
  using enum ElementKind;
  MorseSmaleModel m = model_base(
      2, {element("q0", fixed, 0), element("q1", fixed, 0), element("q2", fixed, 0), element("q3", fixed, 0),
          element("s1", fixed, 1, {"q1", "q2"}), element("s2", fixed, 1, {"q2", "q3"}),
          element("s3", fixed, 1, {"q1", "q3"}), element("s4", fixed, 1, {"q2", "q3"}),
          element("p1", fixed, 2, {"s1", "s3", "s4"}), element("p2", fixed, 2, {"s2", "s4"}),
          element("γ", orbit, 1, {"s1", "s2", "s3"})});
  m.mode = mode;
  if (mode == ModelMode::chain) {
    m.complex = example2_complex();
  } else {
    m.d1[{1, 0}] = ints({{0, 0, 0, 0}, {1, 0, 1, 0}, {1, 1, 0, 1}, {0, 1, 1, 1}});
    m.d1[{2, 0}] = ints({{1, 0, 1}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
    m.higher[2][{2, -1}] = ints({{1}, {1}});
  }
  return m;
}

FilteredChainComplex product_complex(const FilteredChainComplex& a, const FilteredChainComplex& b) {
  if (!(a.field == b.field)) throw FieldMismatch("product of complexes over different fields");
  const FieldSpec f = a.field;
  auto name = [](const std::string& x, const std::string& y) { return x + "×" + y; };
  FilteredChainComplex out;
  out.field = f;
  const int top = std::max(-1, a.max_dim() + b.max_dim());
  for (int n = 0; n <= top; ++n) {
    for (const auto& x : a.cells) {
      for (const auto& y : b.cells) {
        if (x.dim + y.dim != n) continue;
        Cell c{name(x.id, y.id), n, std::max(x.level, y.level), {}};
        for (const auto& [face, coeff] : x.boundary) c.boundary.emplace_back(name(face, y.id), coeff);
        const Scalar sign(f, x.dim % 2 == 0 ? 1L : -1L);
        for (const auto& [face, coeff] : y.boundary) c.boundary.emplace_back(name(x.id, face), sign * coeff);
        out.cells.push_back(std::move(c));
      }
    }
  }
  return out;
}

FilteredChainComplex simplex_boundary(FieldSpec field, int k) {
  std::vector<std::vector<int>> facets;
  for (int skip = 0; skip <= k; ++skip) {
    std::vector<int> facet;
    for (int v = 0; v <= k; ++v)
      if (v != skip) facet.push_back(v);
    facets.push_back(facet);
  }
  return simplicial_complex(field, triangles(facets), false);
}

FilteredChainComplex disk_circle_pair(FieldSpec field, int k) {
  std::vector<int> top;
  for (int v = 0; v <= k; ++v) top.push_back(v);
  FilteredChainComplex disk = simplicial_complex(field, triangles({top}), false);
  for (auto& c : disk.cells)
    if (c.dim == k) c.level = 1;
  const FilteredChainComplex circle = simplicial_complex(field, {{"w0", "w1"}, {"w1", "w2"}, {"w0", "w2"}}, false);
  return product_complex(disk, circle);
}

KunnethReport kunneth_check(int k, FieldSpec field) {
  if (k < 1 || k > 3) throw ValidationError("kunneth_check supports k = 1, 2, 3");
  KunnethReport r;
  r.k = k;
  const FilteredChainComplex circle = simplicial_complex(field, {{"w0", "w1"}, {"w1", "w2"}, {"w0", "w2"}}, false);
  r.betti = total_homology(product_complex(simplex_boundary(field, k), circle));
  static const std::vector<long long> table[] = {{2, 2}, {1, 2, 1}, {1, 1, 1, 1}};
  r.expected = table[k - 1];
  r.matches = r.betti == r.expected;
  return r;
}

PairReport disk_circle_pair_check(int k, FieldSpec field) {
  if (k < 1 || k > 2) throw ValidationError("disk_circle_pair_check supports k = 1, 2");
  PairReport r;
  r.k = k;
  const FilteredChainComplex pair = disk_circle_pair(field, k);
  for (const auto& basis : relative_homology(pair, 1)) r.relative.push_back(static_cast<long long>(basis.size()));
  r.absolute = total_homology(pair);
  r.expected_relative.assign(static_cast<std::size_t>(k) + 2, 0);
  r.expected_relative[static_cast<std::size_t>(k)] = 1;
  r.expected_relative[static_cast<std::size_t>(k) + 1] = 1;
  r.expected_absolute.assign(static_cast<std::size_t>(k) + 2, 0);
  r.expected_absolute[0] = 1;
  r.expected_absolute[1] = 1;
  r.matches = r.relative == r.expected_relative && r.absolute == r.expected_absolute;
  return r;
}

namespace {

using Dims = std::map<Bidegree, std::size_t>;

Fixture model_fixture(std::string name, std::string description, MorseSmaleModel model) {
  Fixture f;
  f.name = std::move(name);
  f.description = std::move(description);
  f.model = std::move(model);
  return f;
}

Fixture complex_fixture(std::string name, std::string description, FilteredChainComplex complex) {
  Fixture f;
  f.name = std::move(name);
  f.description = std::move(description);
  f.complex = std::move(complex);
  return f;
}

void example1_expectation(FixtureExpectation& e) {
  e.betti = {1, 0, 1};
  e.chain_dims = {3, 2, 1};
  e.first_page = Dims{{{0, 0}, 3}, {{1, 0}, 1}, {{2, 0}, 1}, {{2, -1}, 1}};
  e.infinity_page = Dims{{{0, 0}, 1}, {{2, 0}, 1}};
  e.matrices["d1 1,0"] = ints({{0}, {1}, {1}});
  e.matrices["d1 2,0"] = ints({{0}});
  e.matrices["d2 2,-1"] = ints({{1}, {1}});
  e.matrices["boundary 1"] = ints({{0, 1}, {0, 1}, {1, 0}});
  e.matrices["boundary 2"] = Matrix(FieldSpec{}, 2, 1);
  e.provenance = "published first sphere example (three sinks, saddle, repelling orbit)";
}

void example2_expectation(FixtureExpectation& e) {
  e.betti = {1, 0, 1};
  e.chain_dims = {4, 5, 3};
  e.first_page = Dims{{{0, 0}, 4}, {{1, 0}, 4}, {{2, 0}, 3}, {{2, -1}, 1}};
  e.infinity_page = Dims{{{0, 0}, 1}, {{2, 0}, 1}};
  e.matrices["d1 1,0"] = ints({{0, 0, 0, 0}, {1, 0, 1, 0}, {1, 1, 0, 1}, {0, 1, 1, 1}});
  e.matrices["d1 2,0"] = ints({{1, 0, 1}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
  e.matrices["d2 2,-1"] = ints({{1}, {1}});
  e.matrices["boundary 1"] = ints({{0, 0, 0, 0, 1}, {0, 0, 0, 0, 1}, {1, 0, 1, 0, 0}, {1, 1, 0, 1, 0}});
  e.matrices["boundary 2"] = ints({{0, 1, 0}, {0, 0, 1}, {0, 1, 0}, {0, 1, 1}, {0, 0, 0}});
  e.provenance = "published second sphere example (four sinks, four saddles, two sources, repelling orbit)";
}

}  // namespace

std::vector<std::string> fixture_names() {
  return {"example1",         "example1_chain", "example2", "example2_chain", "height_sphere",
          "gradient_sphere",  "attracting_orbit", "empty",  "circle",         "sphere",
          "torus",            "projective_plane", "annulus_pair", "solid_torus_pair"};
}

Fixture fixture(const std::string& name) {
  using enum ElementKind;
  if (name == "example1" || name == "example1_chain") {
    const bool chain = name == "example1_chain";
    Fixture f = model_fixture(name, std::string("sphere with three sinks, a saddle and a repelling orbit (") +
                                        (chain ? "chain" : "pages") + " mode)",
                              example1_model(chain ? ModelMode::chain : ModelMode::pages));
    example1_expectation(f.expected);
    return f;
  }
  if (name == "example2" || name == "example2_chain") {
    const bool chain = name == "example2_chain";
    Fixture f = model_fixture(name,
                              std::string("sphere with four sinks, four saddles, two sources and a repelling orbit (") +
                                  (chain ? "chain" : "pages") + " mode)",
                              example2_model(chain ? ModelMode::chain : ModelMode::pages));
    example2_expectation(f.expected);
    return f;
  }
  if (name == "height_sphere") {
    Fixture f = model_fixture(name, "height function on the sphere: one minimum, one maximum, d¹ = 0",
                              model_base(2, {element("max", fixed, 2, {"min"}), element("min", fixed, 0)}));
    f.expected.betti = {1, 0, 1};
    f.expected.chain_dims = {1, 0, 1};
    f.expected.first_page = Dims{{{0, 0}, 1}, {{1, 1}, 1}};
    f.expected.infinity_page = f.expected.first_page;
    f.expected.provenance = "gradient-like model without differentials";
    return f;
  }
  if (name == "gradient_sphere") {
    MorseSmaleModel m = model_base(2, {element("q0", fixed, 0), element("q1", fixed, 0),
                                       element("s", fixed, 1, {"q0", "q1"}), element("r", fixed, 2, {"s"})});
    m.d1[{1, 0}] = ints({{1}, {1}});
    Fixture f = model_fixture(name, "gradient-like sphere: two minima, a saddle, a maximum", m);
    f.expected.betti = {1, 0, 1};
    f.expected.chain_dims = {2, 1, 1};
    f.expected.first_page = Dims{{{0, 0}, 2}, {{1, 0}, 1}, {{2, 0}, 1}};
    f.expected.infinity_page = Dims{{{0, 0}, 1}, {{2, 0}, 1}};
    f.expected.matrices["boundary 1"] = ints({{0}, {1}});
    f.expected.provenance = "Morse complex of the height function with two minima";
    return f;
  }
  if (name == "attracting_orbit") {
    MorseSmaleModel m =
        model_base(2, {element("γ", orbit, 0), element("n", fixed, 2, {"γ"}), element("s", fixed, 2, {"γ"})});
    m.d1[{1, 1}] = ints({{1, 1}});
    Fixture f = model_fixture(name, "sphere with an attracting equatorial orbit and two sources", m);
    f.expected.betti = {1, 0, 1};
    f.expected.chain_dims = {1, 1, 2};
    f.expected.first_page = Dims{{{0, 0}, 1}, {{0, 1}, 1}, {{1, 1}, 2}};
    f.expected.infinity_page = Dims{{{0, 0}, 1}, {{1, 1}, 1}};
    f.expected.provenance = "hand computation: both polar disks bound the orbit";
    return f;
  }
  if (name == "empty") {
    Fixture f = model_fixture(name, "model without critical elements", model_base(2, {}));
    f.expected.provenance = "trivial";
    return f;
  }
  if (name == "circle") {
    Fixture f = complex_fixture(name, "triangle boundary, skeleton filtration", circle_complex());
    f.expected.betti = {1, 1};
    f.expected.first_page = Dims{{{0, 0}, 3}, {{1, 0}, 3}};
    f.expected.provenance = "simplicial homology of the circle";
    return f;
  }
  if (name == "sphere") {
    Fixture f = complex_fixture(name, "tetrahedron boundary, skeleton filtration", sphere_complex());
    f.expected.betti = {1, 0, 1};
    f.expected.first_page = Dims{{{0, 0}, 4}, {{1, 0}, 6}, {{2, 0}, 4}};
    f.expected.provenance = "simplicial homology of the 2-sphere";
    return f;
  }
  if (name == "torus") {
    Fixture f = complex_fixture(name, "7-vertex torus, skeleton filtration", torus_complex());
    f.expected.betti = {1, 2, 1};
    f.expected.first_page = Dims{{{0, 0}, 7}, {{1, 0}, 21}, {{2, 0}, 14}};
    f.expected.provenance = "simplicial homology oracle over F2";
    return f;
  }
  if (name == "projective_plane") {
    Fixture f = complex_fixture(name, "6-vertex real projective plane, skeleton filtration", projective_plane_complex());
    f.expected.betti = {1, 1, 1};
    f.expected.first_page = Dims{{{0, 0}, 6}, {{1, 0}, 15}, {{2, 0}, 10}};
    f.expected.provenance = "simplicial homology oracle over F2";
    return f;
  }
  if (name == "annulus_pair" || name == "solid_torus_pair") {
    const int k = name == "annulus_pair" ? 1 : 2;
    Fixture f = complex_fixture(name,
                                k == 1 ? "annulus D¹×S¹ relative to its boundary S⁰×S¹ (level 0)"
                                       : "solid torus D²×S¹ relative to its boundary S¹×S¹ (level 0)",
                                disk_circle_pair(FieldSpec{}, k));
    f.is_pair = true;
    f.expected.betti.assign(static_cast<std::size_t>(k) + 2, 0);
    f.expected.betti[0] = f.expected.betti[1] = 1;
    f.expected.relative.assign(static_cast<std::size_t>(k) + 2, 0);
    f.expected.relative[static_cast<std::size_t>(k)] = f.expected.relative[static_cast<std::size_t>(k) + 1] = 1;
    f.expected.provenance = "relative homology of a disk bundle over the circle";
    return f;
  }
  throw ValidationError("unknown fixture '" + name + "'");
}

namespace {

// The hand-written data is over F2; other fields read the same 0/1 entries.
Matrix reinterpret(const Matrix& m, FieldSpec field) {
  Matrix out(field, m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = Scalar(field, static_cast<long>(m(r, c).residue()));
  return out;
}

FilteredChainComplex reinterpret(FilteredChainComplex f, FieldSpec field) {
  f.field = field;
  for (auto& cell : f.cells)
    for (auto& [face, coeff] : cell.boundary) coeff = Scalar(field, static_cast<long>(coeff.residue()));
  return f;
}

}  // namespace

Fixture fixture(const std::string& name, FieldSpec field) {
  Fixture f = fixture(name);
  if (field == FieldSpec{}) return f;
  if (f.model) {
    MorseSmaleModel& m = *f.model;
    m.field = field;
    for (auto& [pos, block] : m.d1) block = reinterpret(block, field);
    for (auto& [page, blocks] : m.higher)
      for (auto& [pos, block] : blocks) block = reinterpret(block, field);
    if (m.complex) m.complex = reinterpret(*m.complex, field);
  }
  if (f.complex) {
    if (name == "circle") f.complex = circle_complex(field);
    if (name == "sphere") f.complex = sphere_complex(field);
    if (name == "torus") f.complex = torus_complex(field);
    if (name == "projective_plane") f.complex = projective_plane_complex(field);
    if (name == "annulus_pair") f.complex = disk_circle_pair(field, 1);
    if (name == "solid_torus_pair") f.complex = disk_circle_pair(field, 2);
  }
  f.expected = FixtureExpectation{};
  f.expected.provenance = "expectations are recorded over F2 only";
  return f;
}

namespace {

std::string show(const std::vector<long long>& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out + ")";
}

std::string show(const Dims& d) {
  std::string out = "{";
  bool first = true;
  for (const auto& [b, n] : d) {
    out += (first ? "" : " ") + b.key() + ":" + std::to_string(n);
    first = false;
  }
  return out + "}";
}

template <class Map>
Dims dims_of(const Map& terms) {
  Dims out;
  for (const auto& [b, t] : terms) {
    std::size_t n = 0;
    if constexpr (requires { t.size(); }) {
      n = t.size();
    } else {
      n = t.dim();
    }
    if (n > 0) out[b] = n;
  }
  return out;
}

std::vector<long long> trimmed(std::vector<long long> v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
  return v;
}

}  // namespace

std::vector<std::string> check_fixture(const Fixture& f) {
  std::vector<std::string> failures;
  const FixtureExpectation& e = f.expected;
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok) failures.push_back(f.name + ": " + what);
  };
  if (f.model) {
    const SpectralSequence ss = build_spectral_sequence(*f.model);
    const ChainComplex c = chain_complex_of_sequence(ss);
    const auto betti = homology(c).betti_from_zero();
    const auto dims = c.dims_from_zero();
    expect(trimmed(betti) == trimmed(e.betti), "betti " + show(betti) + ", expected " + show(e.betti));
    expect(trimmed(dims) == trimmed(e.chain_dims), "chain dims " + show(dims) + ", expected " + show(e.chain_dims));
    const Dims first = dims_of(ss.first.terms);
    const Dims inf = dims_of(ss.infinity().terms);
    expect(first == e.first_page, "first page " + show(first) + ", expected " + show(e.first_page));
    expect(inf == e.infinity_page, "infinity page " + show(inf) + ", expected " + show(e.infinity_page));
    for (const auto& [key, m] : e.matrices) {
      const auto space = key.find(' ');
      const std::string kind = key.substr(0, space);
      const std::string where = key.substr(space + 1);
      Matrix actual;
      if (kind == "boundary") {
        actual = c.boundary(std::stoi(where));
      } else {
        const int number = std::stoi(kind.substr(1));
        const std::size_t r = static_cast<std::size_t>(std::min(number - ss.start_page, ss.stable_r));
        const Page& page = ss.pages[r];
        const Bidegree src = Bidegree::parse(where);
        actual = page.d.block(src, ss.field, page.dim(src + page.d.degree), page.dim(src));
      }
      expect(actual == m, "matrix '" + key + "' differs");
    }
  } else if (f.complex) {
    const auto betti = total_homology(*f.complex);
    expect(trimmed(betti) == trimmed(e.betti), "betti " + show(betti) + ", expected " + show(e.betti));
    if (!e.first_page.empty()) {
      const Dims first = dims_of(exact_couple_of_filtration(*f.complex).E.terms);
      expect(first == e.first_page, "first page " + show(first) + ", expected " + show(e.first_page));
    }
    if (f.is_pair) {
      std::vector<long long> rel;
      for (const auto& basis : relative_homology(*f.complex, 1)) rel.push_back(static_cast<long long>(basis.size()));
      expect(trimmed(rel) == trimmed(e.relative), "relative homology " + show(rel) + ", expected " + show(e.relative));
    }
  }
  return failures;
}

}  // namespace couplex
