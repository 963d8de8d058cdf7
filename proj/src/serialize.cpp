#include "couplex/serialize.hpp"

#include <string>

#include "couplex/errors.hpp"
#include "json_io.hpp"

namespace couplex {
namespace json_io {

namespace {

[[noreturn]] void fail(const std::string& what) { throw ParseError(what); }

const Json& member(const Json& j, const char* key) {
  if (!j.is_object()) fail(std::string("expected an object holding \"") + key + "\"");
  auto it = j.find(key);
  if (it == j.end()) fail(std::string("missing \"") + key + "\"");
  return *it;
}

std::string string_of(const Json& j, const char* what) {
  if (!j.is_string()) fail(std::string(what) + " must be a string");
  return j.get<std::string>();
}

int int_of(const Json& j, const char* what) {
  if (!j.is_number_integer()) fail(std::string(what) + " must be an integer");
  return j.get<int>();
}

std::size_t size_of(const Json& j, const char* what) {
  const int v = int_of(j, what);
  if (v < 0) fail(std::string(what) + " must be non-negative");
  return static_cast<std::size_t>(v);
}

FieldSpec field_of(const Json& j, std::optional<FieldSpec> override_field) {
  if (override_field) return *override_field;
  if (!j.contains("field")) return FieldSpec{};
  return FieldSpec::parse(string_of(j.at("field"), "field"));
}

Bidegree key_of(const std::string& key) {
  try {
    return Bidegree::parse(key);
  } catch (const Error&) {
    fail("bad bidegree key \"" + key + "\"");
  }
}

int int_key(const std::string& key) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(key, &used);
    if (used == key.size()) return v;
  } catch (const std::exception&) {
  }
  fail("bad integer key \"" + key + "\"");
}

std::vector<std::string> strings_of(const Json& j, const char* what) {
  if (!j.is_array()) fail(std::string(what) + " must be an array");
  std::vector<std::string> out;
  for (const auto& s : j) out.push_back(string_of(s, what));
  return out;
}

}  // namespace

Json parse_text(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::exception& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
}

Json scalar_json(const Scalar& s) { return s.to_string(); }

Scalar scalar_from(const Json& j, FieldSpec field) {
  if (j.is_string()) return Scalar::parse(field, j.get<std::string>());
  if (j.is_number_integer()) return Scalar(field, j.get<long>());
  fail("scalar must be a string or an integer");
}

Json matrix_json(const Matrix& m) {
  if (m.rows() == 0) return Json{{"rows", 0}, {"cols", m.cols()}};
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(scalar_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from(const Json& j, FieldSpec field) {
  if (j.is_object()) {
    const std::size_t rows = size_of(member(j, "rows"), "rows");
    const std::size_t cols = size_of(member(j, "cols"), "cols");
    return Matrix(field, rows, cols);
  }
  if (!j.is_array()) fail("matrix must be an array of rows");
  if (j.empty()) return Matrix(field, 0, 0);
  std::size_t cols = 0;
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array()) fail("matrix row must be an array");
    if (r == 0) cols = j[r].size();
    if (j[r].size() != cols) fail("matrix rows have different lengths");
  }
  Matrix m(field, j.size(), cols);
  for (std::size_t r = 0; r < j.size(); ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = scalar_from(j[r][c], field);
  return m;
}

Json basis_json(const LabeledBasis& b) { return Json{{"labels", b.labels}, {"vectors", matrix_json(b.vectors)}}; }

LabeledBasis basis_from(const Json& j, FieldSpec field) {
  LabeledBasis b{strings_of(member(j, "labels"), "labels"), matrix_from(member(j, "vectors"), field)};
  if (b.vectors.rows() != b.labels.size()) fail("basis has " + std::to_string(b.labels.size()) + " labels but " +
                                                std::to_string(b.vectors.rows()) + " vectors");
  return b;
}

Json space_json(const BigradedSpace& s) {
  Json out = Json::object();
  for (const auto& [pos, basis] : s.terms) out[pos.key()] = basis_json(basis);
  return out;
}

BigradedSpace space_from(const Json& j, FieldSpec field) {
  if (!j.is_object()) fail("bigraded space must be an object keyed by \"p,q\"");
  BigradedSpace s;
  for (const auto& [key, value] : j.items()) s.terms[key_of(key)] = basis_from(value, field);
  return s;
}

Json blocks_json(const std::map<Bidegree, Matrix>& blocks) {
  Json out = Json::object();
  for (const auto& [pos, m] : blocks) out[pos.key()] = matrix_json(m);
  return out;
}

std::map<Bidegree, Matrix> blocks_from(const Json& j, FieldSpec field) {
  if (!j.is_object()) fail("blocks must be an object keyed by \"p,q\"");
  std::map<Bidegree, Matrix> out;
  for (const auto& [key, value] : j.items()) out[key_of(key)] = matrix_from(value, field);
  return out;
}

Json map_json(const BigradedMap& m) { return Json{{"degree", m.degree.key()}, {"blocks", blocks_json(m.blocks)}}; }

BigradedMap map_from(const Json& j, FieldSpec field) {
  return {key_of(string_of(member(j, "degree"), "degree")), blocks_from(member(j, "blocks"), field)};
}

Json complex_json(const FilteredChainComplex& f) {
  Json cells = Json::array();
  for (const auto& c : f.cells) {
    Json boundary = Json::object();
    for (const auto& [face, coeff] : c.boundary) boundary[face] = scalar_json(coeff);
    cells.push_back(Json{{"id", c.id}, {"dim", c.dim}, {"level", c.level}, {"boundary", std::move(boundary)}});
  }
  return Json{{"field", f.field.to_string()}, {"cells", std::move(cells)}};
}

FilteredChainComplex complex_from(const Json& j, std::optional<FieldSpec> field) {
  FilteredChainComplex f;
  f.field = field_of(j, field);
  const Json& cells = member(j, "cells");
  if (!cells.is_array()) fail("\"cells\" must be an array");
  for (const auto& cj : cells) {
    Cell c;
    c.id = string_of(member(cj, "id"), "cell id");
    c.dim = int_of(member(cj, "dim"), "cell dim");
    c.level = int_of(member(cj, "level"), "cell level");
    if (cj.contains("boundary")) {
      const Json& b = cj.at("boundary");
      if (!b.is_object()) fail("boundary of cell " + c.id + " must be an object");
      for (const auto& [face, coeff] : b.items()) c.boundary.emplace_back(face, scalar_from(coeff, f.field));
    }
    f.cells.push_back(std::move(c));
  }
  return f;
}

Json model_json(const MorseSmaleModel& m) {
  Json elements = Json::array();
  for (const auto& e : m.elements)
    elements.push_back(
        Json{{"id", e.id}, {"kind", to_string(e.kind)}, {"index", e.index}, {"attaches", e.attaches}});
  Json out{{"ambient_dim", m.ambient_dim},
           {"field", m.field.to_string()},
           {"elements", std::move(elements)},
           {"mode", to_string(m.mode)}};
  if (m.mode == ModelMode::pages || !m.d1.empty()) out["d1"] = blocks_json(m.d1);
  if (m.mode == ModelMode::pages || !m.higher.empty()) {
    Json higher = Json::object();
    for (const auto& [page, blocks] : m.higher) higher[std::to_string(page)] = blocks_json(blocks);
    out["higher"] = std::move(higher);
  }
  if (m.complex) out["complex"] = complex_json(*m.complex);
  return out;
}

MorseSmaleModel model_from(const Json& j, std::optional<FieldSpec> field) {
  MorseSmaleModel m;
  m.ambient_dim = int_of(member(j, "ambient_dim"), "ambient_dim");
  m.field = field_of(j, field);
  const Json& elements = member(j, "elements");
  if (!elements.is_array()) fail("\"elements\" must be an array");
  for (const auto& ej : elements) {
    CriticalElement e;
    e.id = string_of(member(ej, "id"), "element id");
    e.kind = parse_element_kind(string_of(member(ej, "kind"), "element kind"));
    e.index = int_of(member(ej, "index"), "element index");
    if (ej.contains("attaches")) e.attaches = strings_of(ej.at("attaches"), "attaches");
    m.elements.push_back(std::move(e));
  }
  if (j.contains("mode")) m.mode = parse_model_mode(string_of(j.at("mode"), "mode"));
  if (j.contains("d1")) m.d1 = blocks_from(j.at("d1"), m.field);
  if (j.contains("higher")) {
    const Json& h = j.at("higher");
    if (!h.is_object()) fail("\"higher\" must be an object keyed by page number");
    for (const auto& [key, blocks] : h.items()) m.higher[int_key(key)] = blocks_from(blocks, m.field);
  }
  if (j.contains("complex")) m.complex = complex_from(j.at("complex"), m.field);
  return m;
}

Json couple_json(const ExactCouple& ec) {
  Json out{{"field", ec.field.to_string()}, {"order", ec.order}};
  out["colimit_level"] = ec.colimit_level ? Json(*ec.colimit_level) : Json(nullptr);
  out["D"] = space_json(ec.D);
  out["E"] = space_json(ec.E);
  out["i"] = map_json(ec.i);
  out["j"] = map_json(ec.j);
  out["k"] = map_json(ec.k);
  return out;
}

ExactCouple couple_from(const Json& j) {
  ExactCouple ec;
  ec.field = field_of(j, std::nullopt);
  ec.order = int_of(member(j, "order"), "order");
  if (j.contains("colimit_level") && !j.at("colimit_level").is_null())
    ec.colimit_level = int_of(j.at("colimit_level"), "colimit_level");
  ec.D = space_from(member(j, "D"), ec.field);
  ec.E = space_from(member(j, "E"), ec.field);
  ec.i = map_from(member(j, "i"), ec.field);
  ec.j = map_from(member(j, "j"), ec.field);
  ec.k = map_from(member(j, "k"), ec.field);
  return ec;
}

Json chain_json(const ChainComplex& c) {
  Json bases = Json::object();
  Json boundaries = Json::object();
  for (std::size_t k = 0; k < c.bases.size(); ++k) {
    const std::string n = std::to_string(c.lowest_degree + static_cast<int>(k));
    bases[n] = basis_json(c.bases[k]);
    if (k < c.boundaries.size()) boundaries[n] = matrix_json(c.boundaries[k]);
  }
  return Json{{"field", c.field.to_string()},
              {"lowest_degree", c.lowest_degree},
              {"bases", std::move(bases)},
              {"boundaries", std::move(boundaries)}};
}

ChainComplex chain_from(const Json& j) {
  ChainComplex c;
  c.field = field_of(j, std::nullopt);
  c.lowest_degree = int_of(member(j, "lowest_degree"), "lowest_degree");
  const Json& bases = member(j, "bases");
  const Json& boundaries = member(j, "boundaries");
  if (!bases.is_object() || !boundaries.is_object()) fail("bases and boundaries must be objects keyed by degree");
  for (std::size_t k = 0; k < bases.size(); ++k) {
    const std::string n = std::to_string(c.lowest_degree + static_cast<int>(k));
    if (!bases.contains(n)) fail("missing basis in degree " + n);
    c.bases.push_back(basis_from(bases.at(n), c.field));
    if (boundaries.contains(n)) c.boundaries.push_back(matrix_from(boundaries.at(n), c.field));
  }
  if (c.boundaries.size() != boundaries.size()) fail("boundary degrees do not match the basis degrees");
  return c;
}

Json sequence_json(const SpectralSequence& ss) {
  Json pages = Json::object();
  for (std::size_t r = 0; r < ss.pages.size(); ++r) {
    const Page& page = ss.pages[r];
    Json terms = Json::object();
    for (const auto& [pos, sq] : page.terms) {
      terms[pos.key()] = Json{{"dim", sq.dim()},
                              {"labels", sq.labels()},
                              {"z", matrix_json(sq.outer().basis())},
                              {"b", matrix_json(sq.inner().basis())}};
    }
    pages[std::to_string(page.number)] = Json{{"terms", std::move(terms)}, {"d", map_json(page.d)}};
  }
  return Json{{"field", ss.field.to_string()},
              {"start_page", ss.start_page},
              {"stable_r", ss.stable_r},
              {"stabilization_page", ss.stabilization_page()},
              {"first", space_json(ss.first)},
              {"pages", std::move(pages)}};
}

SpectralSequence sequence_from(const Json& j) {
  SpectralSequence ss;
  ss.field = field_of(j, std::nullopt);
  ss.start_page = int_of(member(j, "start_page"), "start_page");
  ss.stable_r = int_of(member(j, "stable_r"), "stable_r");
  ss.first = space_from(member(j, "first"), ss.field);
  const Json& pages = member(j, "pages");
  if (!pages.is_object()) fail("\"pages\" must be an object keyed by page number");
  if (ss.stable_r < 0 || pages.size() != static_cast<std::size_t>(ss.stable_r) + 1)
    fail("page count does not match stable_r");
  for (int r = 0; r <= ss.stable_r; ++r) {
    const std::string key = std::to_string(ss.start_page + r);
    if (!pages.contains(key)) fail("missing page " + key);
    const Json& pj = pages.at(key);
    Page page;
    page.number = ss.start_page + r;
    page.d = map_from(member(pj, "d"), ss.field);
    std::map<Bidegree, Subspace> z, b;
    const Json& terms = member(pj, "terms");
    if (!terms.is_object()) fail("page terms must be an object keyed by \"p,q\"");
    for (const auto& [k, tj] : terms.items()) {
      const Bidegree pos = key_of(k);
      const Subspace outer = Subspace::span(matrix_from(member(tj, "z"), ss.field));
      const Subspace inner = Subspace::span(matrix_from(member(tj, "b"), ss.field));
      if (!outer.contains(inner)) fail("page " + key + " term " + k + ": b is not contained in z");
      auto it = ss.first.terms.find(pos);
      if (it == ss.first.terms.end() || it->second.size() != outer.ambient_dim())
        fail("page " + key + " term " + k + " does not match the first page");
      page.terms.emplace(pos, Subquotient(outer, inner, it->second.labels));
      z.emplace(pos, outer);
      b.emplace(pos, inner);
    }
    ss.pages.push_back(std::move(page));
    ss.Z.push_back(std::move(z));
    ss.B.push_back(std::move(b));
  }
  return ss;
}

}  // namespace json_io

namespace {

template <class F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON document: ") + e.what());
  }
}

std::string dump(const json_io::Json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string to_json(const FilteredChainComplex& f) { return dump(json_io::complex_json(f)); }
std::string to_json(const MorseSmaleModel& m) { return dump(json_io::model_json(m)); }
std::string to_json(const ExactCouple& ec) { return dump(json_io::couple_json(ec)); }
std::string to_json(const ChainComplex& c) { return dump(json_io::chain_json(c)); }
std::string to_json(const SpectralSequence& ss) { return dump(json_io::sequence_json(ss)); }

FilteredChainComplex complex_from_json(std::string_view text, std::optional<FieldSpec> field) {
  return guarded([&] { return json_io::complex_from(json_io::parse_text(text), field); });
}
MorseSmaleModel model_from_json(std::string_view text, std::optional<FieldSpec> field) {
  return guarded([&] { return json_io::model_from(json_io::parse_text(text), field); });
}
ExactCouple couple_from_json(std::string_view text) {
  return guarded([&] { return json_io::couple_from(json_io::parse_text(text)); });
}
ChainComplex chain_complex_from_json(std::string_view text) {
  return guarded([&] { return json_io::chain_from(json_io::parse_text(text)); });
}
SpectralSequence spectral_sequence_from_json(std::string_view text) {
  return guarded([&] { return json_io::sequence_from(json_io::parse_text(text)); });
}

DocumentKind detect_document(std::string_view text) {
  const auto j = json_io::parse_text(text);
  if (j.is_object() && j.contains("elements")) return DocumentKind::model;
  if (j.is_object() && j.contains("cells")) return DocumentKind::complex;
  throw ParseError("document has neither \"elements\" nor \"cells\"");
}

}  // namespace couplex
