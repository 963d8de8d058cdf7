#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "couplex/cli.hpp"
#include "couplex/corpus.hpp"
#include "couplex/errors.hpp"
#include "couplex/serialize.hpp"

namespace py = pybind11;
using namespace couplex;

namespace {

std::vector<std::vector<std::string>> rows_of(const Matrix& m) {
  std::vector<std::vector<std::string>> out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out[r].push_back(m(r, c).to_string());
  return out;
}

ChainComplex chain_of_document(const std::string& text, std::optional<std::string> field) {
  std::optional<FieldSpec> f;
  if (field) f = FieldSpec::parse(*field);
  if (detect_document(text) == DocumentKind::model) return vector_field_chain_complex(model_from_json(text, f));
  const auto complex = complex_from_json(text, f);
  require_valid(complex);
  return chain_complex_of_sequence(spectral_sequence(exact_couple_of_filtration(complex)));
}

py::dict chain_dict(const ChainComplex& c) {
  py::dict d;
  d["field"] = c.field.to_string();
  d["dims"] = c.dims_from_zero();
  d["betti"] = homology(c).betti_from_zero();
  py::dict labels, boundaries;
  for (int n = c.empty() ? 1 : c.lowest_degree; !c.empty() && n <= c.highest_degree(); ++n) {
    labels[py::int_(n)] = c.labels(n);
    if (n > c.lowest_degree) boundaries[py::int_(n)] = rows_of(c.boundary(n));
  }
  d["labels"] = labels;
  d["boundaries"] = boundaries;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact couples, spectral sequences and Morse-Smale chain complexes";

  // Later registrations are tried first, so the base class goes first.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<FieldMismatch>(m, "FieldMismatch", PyExc_ValueError);

  m.def("fixture_names", &fixture_names);
  m.def(
      "fixture_json",
      [](const std::string& name) {
        const Fixture f = fixture(name);
        return f.model ? to_json(*f.model) : to_json(*f.complex);
      },
      py::arg("name"));
  m.def(
      "chain_complex",
      [](const std::string& document, std::optional<std::string> field) {
        return chain_dict(chain_of_document(document, field));
      },
      py::arg("document"), py::arg("field") = py::none(),
      "Canonical chain complex of a model or filtered complex given as JSON.");
  m.def(
      "spectral_sequence_json",
      [](const std::string& document) {
        if (detect_document(document) == DocumentKind::model)
          return to_json(build_spectral_sequence(model_from_json(document)));
        const auto complex = complex_from_json(document);
        require_valid(complex);
        return to_json(spectral_sequence(exact_couple_of_filtration(complex)));
      },
      py::arg("document"));
  m.def(
      "total_homology", [](const std::string& document) { return total_homology(complex_from_json(document)); },
      py::arg("document"));
  m.def(
      "morse_counts", [](const std::string& document) { return morse_counts(model_from_json(document)); },
      py::arg("document"));
  m.def(
      "random_model_json",
      [](std::uint64_t seed, int ambient_dim, int max_elements, const std::string& field) {
        RandomModelBounds b;
        b.ambient_dim = ambient_dim;
        b.max_elements = max_elements;
        b.field = FieldSpec::parse(field);
        return to_json(random_model(seed, b));
      },
      py::arg("seed"), py::arg("ambient_dim") = 2, py::arg("max_elements") = 8, py::arg("field") = "F2");
  m.def(
      "kunneth_check",
      [](int k, const std::string& field) {
        const auto r = kunneth_check(k, FieldSpec::parse(field));
        return py::make_tuple(r.matches, r.betti);
      },
      py::arg("k"), py::arg("field") = "F2");
  m.def(
      "disk_circle_pair_check",
      [](int k, const std::string& field) {
        const auto r = disk_circle_pair_check(k, FieldSpec::parse(field));
        return py::make_tuple(r.matches, r.relative, r.absolute);
      },
      py::arg("k"), py::arg("field") = "F2");
  m.def(
      "cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs a command-line invocation; returns (exit code, stdout, stderr).");
}
