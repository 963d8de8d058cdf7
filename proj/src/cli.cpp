#include "couplex/cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "couplex/corpus.hpp"
#include "couplex/errors.hpp"
#include "couplex/serialize.hpp"
#include "json_io.hpp"

namespace couplex {

namespace {

using json_io::Json;

/// Usage problems found after argument parsing (exit code 2).
class UsageError : public Error {
 public:
  using Error::Error;
};

struct Loaded {
  std::string name;
  std::optional<Fixture> fix;
  bool field_overridden = false;
  std::optional<MorseSmaleModel> model;
  std::optional<FilteredChainComplex> complex;
};

bool is_fixture(const std::string& name) {
  const auto names = fixture_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

/// Name of the other-mode variant of a dual-mode fixture, if any.
std::optional<std::string> partner_fixture(const std::string& name) {
  const std::string suffix = "_chain";
  if (name.size() > suffix.size() && name.ends_with(suffix)) {
    const std::string base = name.substr(0, name.size() - suffix.size());
    if (is_fixture(base)) return base;
    return std::nullopt;
  }
  if (is_fixture(name + suffix)) return name + suffix;
  return std::nullopt;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read input file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Loaded load(const RunConfig& cfg) {
  Loaded l;
  l.field_overridden = cfg.field.has_value();
  if (cfg.fixture) {
    std::string name = *cfg.fixture;
    if (!is_fixture(name)) throw UsageError("unknown fixture '" + name + "' (see the fixtures command)");
    Fixture fx = fixture(name, cfg.field.value_or(FieldSpec{}));
    if (cfg.mode) {
      if (!fx.model) throw UsageError("--mode applies to model inputs; fixture '" + name + "' is a filtered complex");
      if (fx.model->mode != *cfg.mode) {
        if (auto other = partner_fixture(name)) {
          name = *other;
          fx = fixture(name, cfg.field.value_or(FieldSpec{}));
        } else {
          fx.model->mode = *cfg.mode;
        }
      }
    }
    l.name = name;
    l.model = fx.model;
    l.complex = fx.complex;
    l.fix = std::move(fx);
    return l;
  }
  l.name = *cfg.input;
  const Json doc = json_io::parse_text(read_file(*cfg.input));
  try {
    if (doc.is_object() && doc.contains("elements")) {
      l.model = json_io::model_from(doc, cfg.field);
      if (cfg.mode) l.model->mode = *cfg.mode;
    } else if (doc.is_object() && doc.contains("cells")) {
      if (cfg.mode) throw UsageError("--mode applies to model inputs; '" + l.name + "' is a filtered complex");
      l.complex = json_io::complex_from(doc, cfg.field);
    } else {
      throw ParseError("'" + l.name + "' has neither \"elements\" nor \"cells\"");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid document: ") + e.what());
  }
  return l;
}

FieldSpec field_of(const Loaded& l) { return l.model ? l.model->field : l.complex->field; }

/// The filtered complex behind the input, if there is one.
const FilteredChainComplex* underlying_complex(const Loaded& l) {
  if (l.complex) return &*l.complex;
  if (l.model && l.model->complex) return &*l.model->complex;
  return nullptr;
}

struct Analysis {
  std::optional<ExactCouple> couple;
  SpectralSequence ss;
  ChainComplex chain;
};

Analysis analyze(const Loaded& l) {
  Analysis a;
  if (l.model) {
    require_valid(*l.model);
    a.ss = build_spectral_sequence(*l.model);
    if (l.model->complex) a.couple = exact_couple_of_filtration(*l.model->complex);
  } else {
    require_valid(*l.complex);
    a.couple = exact_couple_of_filtration(*l.complex);
    a.ss = spectral_sequence(*a.couple);
  }
  a.chain = chain_complex_of_sequence(a.ss);
  return a;
}

std::vector<long long> padded(std::vector<long long> v, std::size_t n) {
  if (v.size() < n) v.resize(n, 0);
  return v;
}

std::string joined(const std::vector<std::string>& items, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
  return out;
}

std::string tuple_text(const std::vector<long long>& v) {
  std::vector<std::string> parts;
  for (long long x : v) parts.push_back(std::to_string(x));
  return "(" + joined(parts, ", ") + ")";
}

std::string position(Bidegree b) { return "(" + b.key() + ")"; }

void print_matrix(std::ostream& os, const Matrix& m, const std::string& indent) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::vector<std::string> row;
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c).to_string());
    os << indent << "[" << joined(row, " ") << "]\n";
  }
}

Json betti_json(const std::vector<long long>& v) { return Json(v); }

// ---- pages ----

struct PageArrow {
  Bidegree src, tgt;
  Matrix block;
};

std::vector<PageArrow> page_arrows(const SpectralSequence& ss, const Page& page) {
  std::vector<PageArrow> out;
  for (const auto& [src, sq] : page.terms) {
    const Bidegree tgt = src + page.d.degree;
    const std::size_t cols = sq.dim();
    const std::size_t rows = page.dim(tgt);
    if (rows == 0 || cols == 0) continue;
    out.push_back({src, tgt, page.d.block(src, ss.field, rows, cols)});
  }
  return out;
}

void pages_text(std::ostream& os, const Loaded& l, const Analysis& a, int verbosity) {
  const SpectralSequence& ss = a.ss;
  os << "spectral sequence of " << l.name << " over " << ss.field.to_string() << "\n";
  bool any = false;
  for (const auto& [pos, basis] : ss.first.terms) any = any || basis.size() > 0;
  if (!any) {
    os << "no terms: every page is zero\n";
    return;
  }
  os << "pages E" << ss.start_page << " .. E" << ss.stabilization_page() << ", E∞ = E" << ss.stabilization_page()
     << "\n";
  for (const Page& page : ss.pages) {
    os << "\nE" << page.number << "\n";
    for (const auto& [pos, sq] : page.terms) {
      if (sq.dim() == 0) continue;
      os << "  E" << page.number << position(pos) << " dim " << sq.dim() << ": " << joined(sq.labels(), ", ") << "\n";
      if (verbosity > 0) {
        const auto& labels = ss.first.labels(pos);
        for (std::size_t r = 0; r < sq.dim(); ++r)
          os << "    " << sq.labels()[r] << " = " << combination_label(sq.representatives().row(r), labels) << "\n";
      }
    }
    for (const auto& arrow : page_arrows(ss, page)) {
      os << "  d" << page.number << ": " << position(arrow.src) << " -> " << position(arrow.tgt) << "\n";
      print_matrix(os, arrow.block, "    ");
    }
  }
  os << "\nE∞ by total degree:";
  for (const auto& [n, dim] : diagonal_dims(ss.infinity())) os << " " << n << ":" << dim;
  os << "\n";
}

// ---- chain ----

void chain_text(std::ostream& os, const Loaded& l, const ChainComplex& c, const HomologyResult& h) {
  os << "chain complex of " << l.name << " over " << c.field.to_string() << "\n";
  if (c.empty()) {
    os << "empty\n";
    return;
  }
  for (int n = c.highest_degree(); n >= c.lowest_degree; --n)
    os << "C" << n << " dim " << c.dim(n) << ": " << joined(c.labels(n), ", ") << "\n";
  for (int n = c.highest_degree(); n > c.lowest_degree; --n) {
    const Matrix m = c.boundary(n);
    os << "∂" << n << ": C" << n << " -> C" << n - 1;
    if (m.empty()) {
      os << " (" << m.rows() << "x" << m.cols() << ")\n";
      continue;
    }
    os << "\n";
    print_matrix(os, m, "  ");
  }
  os << "betti: " << tuple_text(h.betti_from_zero()) << "\n";
}

// ---- report ----

struct Report {
  std::vector<long long> morse;
  std::vector<long long> betti;
  std::vector<MorseInequality> rows;
  bool holds = true;
  long long chi_morse = 0;
  long long chi_betti = 0;
};

Report make_report(const Loaded& l, const Analysis& a) {
  Report r;
  std::vector<long long> morse = l.model ? morse_counts(*l.model) : a.chain.dims_from_zero();
  std::vector<long long> betti = homology(a.chain).betti_from_zero();
  std::size_t len = 0;
  for (std::size_t q = 0; q < std::max(morse.size(), betti.size()); ++q) {
    const long long m = q < morse.size() ? morse[q] : 0;
    const long long b = q < betti.size() ? betti[q] : 0;
    if (m != 0 || b != 0) len = q + 1;
  }
  r.morse = padded(morse, len);
  r.betti = padded(betti, len);
  r.morse.resize(len);
  r.betti.resize(len);
  if (l.model && len > static_cast<std::size_t>(l.model->ambient_dim) + 1)
    throw ValidationError("homology in degree " + std::to_string(len - 1) + " above the ambient dimension");
  r.rows = morse_inequalities(r.morse, r.betti);
  r.holds = morse_inequalities_hold(r.rows);
  for (std::size_t q = 0; q < len; ++q) {
    const long long sign = q % 2 ? -1 : 1;
    r.chi_morse += sign * r.morse[q];
    r.chi_betti += sign * r.betti[q];
  }
  return r;
}

void report_text(std::ostream& os, const Loaded& l, const Report& r) {
  os << "report for " << l.name << "\n";
  os << "betti R = " << tuple_text(r.betti) << "\n";
  os << "counts M = " << tuple_text(r.morse) << "\n";
  if (r.rows.empty()) {
    os << "no critical elements: the inequality table is empty\n";
    return;
  }
  os << "q    M_q  R_q  lhs  rhs  verdict\n";
  for (const auto& row : r.rows) {
    std::string verdict = row.holds ? "holds" : "FAILS";
    if (row.top) verdict += row.equality ? ", equality" : ", NO EQUALITY";
    os << std::left << std::setw(5) << row.degree << std::setw(5) << r.morse[row.degree] << std::setw(5)
       << r.betti[row.degree] << std::setw(5) << row.lhs << std::setw(5) << row.rhs << verdict << "\n";
  }
  os << std::right;
  os << "Euler characteristic: Σ(-1)^q M_q = " << r.chi_morse << ", Σ(-1)^q R_q = " << r.chi_betti
     << (r.chi_morse == r.chi_betti ? " (equal)" : " (DIFFERENT)") << "\n";
  os << (r.holds ? "all Morse inequalities hold" : "Morse inequalities FAIL") << "\n";
}

Json report_json(const Loaded& l, const Report& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back(Json{{"q", row.degree},
                        {"lhs", row.lhs},
                        {"rhs", row.rhs},
                        {"holds", row.holds},
                        {"top", row.top},
                        {"equality", row.equality}});
  return Json{{"input", l.name},
              {"betti", betti_json(r.betti)},
              {"morse", betti_json(r.morse)},
              {"inequalities", std::move(rows)},
              {"holds", r.holds},
              {"euler", Json{{"morse", r.chi_morse}, {"betti", r.chi_betti}, {"equal", r.chi_morse == r.chi_betti}}}};
}

// ---- verify ----

struct CheckResult {
  std::string name;
  bool ok = true;
  std::string detail;
};

class Verifier {
 public:
  /// Runs `body`, which fills in the detail and returns success; library
  /// errors count as failures of the check.
  bool run(const std::string& name, const std::function<bool(std::string&)>& body) {
    CheckResult c{name, true, ""};
    try {
      c.ok = body(c.detail);
    } catch (const Error& e) {
      c.ok = false;
      c.detail = e.what();
    }
    results.push_back(c);
    return c.ok;
  }

  std::vector<CheckResult> results;
};

std::map<Bidegree, std::size_t> nonzero_dims(const BigradedSpace& s) {
  std::map<Bidegree, std::size_t> out;
  for (const auto& [pos, basis] : s.terms)
    if (basis.size() > 0) out[pos] = basis.size();
  return out;
}

bool same_chain(const ChainComplex& a, const ChainComplex& b, std::string& detail) {
  if (a.dims_from_zero() != b.dims_from_zero()) {
    detail = "dims " + tuple_text(a.dims_from_zero()) + " vs " + tuple_text(b.dims_from_zero());
    return false;
  }
  const int top = std::max(a.empty() ? 0 : a.highest_degree(), b.empty() ? 0 : b.highest_degree());
  for (int n = 1; n <= top; ++n) {
    if (!(a.boundary(n) == b.boundary(n))) {
      detail = "∂" + std::to_string(n) + " differs";
      return false;
    }
  }
  const auto ha = homology(a).betti_from_zero();
  const auto hb = homology(b).betti_from_zero();
  if (ha != hb) {
    detail = "betti " + tuple_text(ha) + " vs " + tuple_text(hb);
    return false;
  }
  detail = "dims " + tuple_text(a.dims_from_zero()) + ", betti " + tuple_text(ha);
  return true;
}

std::vector<CheckResult> verify(const Loaded& l) {
  Verifier v;
  const bool valid = v.run("input validation", [&](std::string& d) {
    auto msg = l.model ? validate_model(*l.model) : validate_filtered(*l.complex);
    if (msg) d = *msg;
    return !msg;
  });
  if (!valid) return v.results;

  if (l.model) {
    v.run("zero-term check", [&](std::string& d) {
      const auto z = zero_term_check(*l.model);
      std::vector<std::string> parts;
      for (const auto& f : z.findings) parts.push_back(f.check + ": " + f.message);
      d = joined(parts, "; ");
      return z.ok();
    });
  }

  Analysis a;
  const bool built = v.run("spectral sequence", [&](std::string& d) {
    a = analyze(l);
    d = "stabilizes at page " + std::to_string(a.ss.stabilization_page());
    return true;
  });
  if (!built) return v.results;

  if (a.couple) {
    const ExactCouple& ec = *a.couple;
    v.run("exactness", [&](std::string& d) {
      auto bad = validate_exactness(ec);
      if (bad) d = bad->position + " at " + bad->bidegree.key() + ": " + bad->message;
      return !bad;
    });
    v.run("derived couples", [&](std::string& d) {
      ExactCouple cur = ec;
      for (int r = 1; r <= a.ss.stable_r; ++r) {
        cur = derived_couple(cur);
        if (auto bad = validate_exactness(cur)) {
          d = "derived couple " + std::to_string(r) + ": " + bad->position + " at " + bad->bidegree.key();
          return false;
        }
        if (nonzero_dims(rth_derived(ec, r).E) != nonzero_dims(cur.E)) {
          d = "E dims of the " + std::to_string(r) + "-th derived couple disagree";
          return false;
        }
      }
      d = std::to_string(a.ss.stable_r) + " derivations";
      return true;
    });
  }

  v.run("∂∘∂ = 0", [&](std::string& d) {
    auto bad = validate(a.chain);
    if (bad) d = "degree " + std::to_string(bad->degree) + ": " + bad->message;
    return !bad;
  });

  v.run("homology matches E∞", [&](std::string& d) {
    const auto cmp = compare_homology_with_infinity(a.ss, a.chain);
    std::vector<long long> inf(cmp.infinity_dims.begin(), cmp.infinity_dims.end());
    d = "betti " + tuple_text(cmp.betti) + ", E∞ " + tuple_text(inf);
    return cmp.matches;
  });

  if (const FilteredChainComplex* f = underlying_complex(l)) {
    v.run("convergence to total homology", [&](std::string& d) {
      const auto total = total_homology(*f);
      const auto betti = homology(a.chain).betti_from_zero();
      const std::size_t n = std::max(total.size(), betti.size());
      d = "total " + tuple_text(total) + ", C(E) " + tuple_text(betti);
      return padded(total, n) == padded(betti, n);
    });
  }

  if (l.model) {
    v.run("dimension formula", [&](std::string& d) {
      const auto counts = morse_counts(*l.model);
      const auto dims = a.chain.dims_from_zero();
      const std::size_t n = std::max(counts.size(), dims.size());
      d = "dim C " + tuple_text(dims) + ", |Fix_k|+|Orb_k-1|+|Orb_k| " + tuple_text(counts);
      return padded(counts, n) == padded(dims, n);
    });
  }

  v.run("Morse inequalities", [&](std::string& d) {
    const Report r = make_report(l, a);
    d = "M " + tuple_text(r.morse) + ", R " + tuple_text(r.betti);
    return r.holds;
  });

  if (l.fix) {
    if (l.field_overridden) {
      v.results.push_back({"fixture expectations", true, "skipped: field overridden"});
    } else {
      v.run("fixture expectations", [&](std::string& d) {
        Fixture fx = *l.fix;
        fx.model = l.model;
        fx.complex = l.complex;
        const auto bad = check_fixture(fx);
        d = bad.empty() ? fx.expected.provenance : joined(bad, "; ");
        return bad.empty();
      });
    }
    if (auto other = partner_fixture(l.name); other && l.model) {
      v.run("pages/chain cross-check with " + *other, [&](std::string& d) {
        const Fixture partner = fixture(*other, l.model->field);
        if (!partner.model) throw ValidationError("partner fixture is not a model");
        return same_chain(a.chain, vector_field_chain_complex(*partner.model), d);
      });
    }
  }
  return v.results;
}

// ---- dispatch ----

int execute(const RunConfig& cfg, std::ostream& os) {
  if (cfg.command == "fixtures") {
    if (cfg.input) throw UsageError("fixtures takes --fixture NAME or nothing");
    if (cfg.fixture) {
      const Loaded l = load(cfg);
      os << (l.model ? json_io::model_json(*l.model) : json_io::complex_json(*l.complex)).dump(2) << "\n";
      return exit_ok;
    }
    Json list = Json::array();
    for (const auto& name : fixture_names()) {
      const Fixture f = fixture(name);
      if (cfg.format == OutputFormat::json) {
        list.push_back(Json{{"name", name},
                            {"kind", f.model ? "model" : "complex"},
                            {"description", f.description},
                            {"provenance", f.expected.provenance}});
      } else {
        os << std::left << std::setw(18) << name << std::right << (f.model ? "model    " : "complex  ")
           << f.description << "\n";
      }
    }
    if (cfg.format == OutputFormat::json) os << list.dump(2) << "\n";
    return exit_ok;
  }

  if (cfg.fixture.has_value() == cfg.input.has_value())
    throw UsageError("give exactly one of --fixture NAME or --input FILE");
  const Loaded l = load(cfg);

  if (cfg.command == "verify") {
    const auto results = verify(l);
    std::size_t failed = 0;
    for (const auto& r : results) failed += r.ok ? 0 : 1;
    if (cfg.format == OutputFormat::json) {
      Json checks = Json::array();
      for (const auto& r : results) checks.push_back(Json{{"name", r.name}, {"ok", r.ok}, {"detail", r.detail}});
      os << Json{{"input", l.name}, {"checks", std::move(checks)}, {"ok", failed == 0}}.dump(2) << "\n";
    } else {
      os << "verify " << l.name << " over " << field_of(l).to_string() << "\n";
      for (const auto& r : results) {
        os << (r.ok ? "PASS " : "FAIL ") << r.name;
        if (!r.ok || cfg.verbosity > 0) os << (r.detail.empty() ? "" : ": " + r.detail);
        os << "\n";
      }
      os << results.size() << " checks, " << failed << " failed\n";
    }
    return failed == 0 ? exit_ok : exit_validation;
  }

  const Analysis a = analyze(l);
  if (cfg.command == "pages") {
    if (cfg.format == OutputFormat::json)
      os << json_io::sequence_json(a.ss).dump(2) << "\n";
    else
      pages_text(os, l, a, cfg.verbosity);
    return exit_ok;
  }
  if (cfg.command == "chain") {
    if (auto bad = validate(a.chain))
      throw ValidationError("∂∘∂ ≠ 0 in degree " + std::to_string(bad->degree) + ": " + bad->message);
    const HomologyResult h = homology(a.chain);
    if (cfg.format == OutputFormat::json) {
      Json j = json_io::chain_json(a.chain);
      j["betti"] = betti_json(h.betti_from_zero());
      os << j.dump(2) << "\n";
    } else {
      chain_text(os, l, a.chain, h);
    }
    return exit_ok;
  }
  if (cfg.command == "report") {
    const Report r = make_report(l, a);
    if (cfg.format == OutputFormat::json)
      os << report_json(l, r).dump(2) << "\n";
    else
      report_text(os, l, r);
    return r.holds && r.chi_morse == r.chi_betti ? exit_ok : exit_validation;
  }
  throw UsageError("unknown command '" + cfg.command + "'");
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::ostringstream buffer;
  int code = exit_ok;
  try {
    code = execute(cfg, buffer);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return exit_parse;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return exit_parse;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return exit_validation;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << "\n";
    return exit_validation;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_validation;
  }
  if (cfg.out) {
    std::ofstream file(*cfg.out, std::ios::binary);
    if (!file) {
      err << "error: cannot write '" << *cfg.out << "'\n";
      return exit_parse;
    }
    file << buffer.str();
  } else {
    out << buffer.str();
  }
  return code;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral sequences of exact couples for Morse-Smale models and filtered complexes", "couplex"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string fixture_name, input_path, field_text, mode_text, format_text = "text", out_path;

  const auto field_check = CLI::Validator(
      [](std::string& s) -> std::string {
        try {
          FieldSpec::parse(s);
          return {};
        } catch (const Error& e) {
          return e.what();
        }
      },
      "F2|F3|F5|Q");

  auto add_common = [&](CLI::App* sub, bool needs_input) {
    auto* fx = sub->add_option("--fixture", fixture_name, "Built-in fixture name");
    if (needs_input) {
      auto* in = sub->add_option("--input", input_path, "JSON model or filtered complex")->check(CLI::ExistingFile);
      fx->excludes(in);
      sub->add_option("--mode", mode_text, "Override the model mode")->check(CLI::IsMember({"pages", "chain"}));
    }
    sub->add_option("--field", field_text, "Coefficient field")->check(field_check);
    sub->add_option("--format", format_text, "Output format")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--out", out_path, "Write output to FILE");
    sub->add_flag("-v,--verbose", "More detail");
  };
  add_common(app.add_subcommand("pages", "Pages E1 .. E∞ with differentials and basis labels"), true);
  add_common(app.add_subcommand("chain", "The based chain complex C(E)"), true);
  add_common(app.add_subcommand("report", "Homology and the Morse inequality table"), true);
  add_common(app.add_subcommand("verify", "Run every consistency check on the input"), true);
  add_common(app.add_subcommand("fixtures", "List fixtures, or export one with --fixture"), false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_parse;
  }

  const CLI::App* sub = app.get_subcommands().front();
  cfg.command = sub->get_name();
  if (!fixture_name.empty()) cfg.fixture = fixture_name;
  if (!input_path.empty()) cfg.input = input_path;
  if (!field_text.empty()) cfg.field = FieldSpec::parse(field_text);
  if (!mode_text.empty()) cfg.mode = parse_model_mode(mode_text);
  cfg.format = format_text == "json" ? OutputFormat::json : OutputFormat::text;
  if (!out_path.empty()) cfg.out = out_path;
  cfg.verbosity = static_cast<int>(sub->count("--verbose"));
  return run(cfg, out, err);
}

}  // namespace couplex
