#include "couplex/morse_smale.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>

#include "couplex/errors.hpp"

namespace couplex {

std::string to_string(ElementKind kind) { return kind == ElementKind::fixed ? "fixed" : "orbit"; }

ElementKind parse_element_kind(const std::string& text) {
  if (text == "fixed") return ElementKind::fixed;
  if (text == "orbit") return ElementKind::orbit;
  throw ParseError("unknown element kind '" + text + "' (expected fixed or orbit)");
}

std::string to_string(ModelMode mode) { return mode == ModelMode::pages ? "pages" : "chain"; }

ModelMode parse_model_mode(const std::string& text) {
  if (text == "pages") return ModelMode::pages;
  if (text == "chain") return ModelMode::chain;
  throw ParseError("unknown mode '" + text + "' (expected pages or chain)");
}

std::string orbit_minus(const std::string& id) { return id + "⁻"; }
std::string orbit_plus(const std::string& id) { return id + "⁺"; }

namespace {

std::map<std::string, const CriticalElement*> element_index(const MorseSmaleModel& model) {
  std::map<std::string, const CriticalElement*> out;
  for (const auto& e : model.elements) out.emplace(e.id, &e);
  return out;
}

std::vector<const CriticalElement*> sorted_elements(const MorseSmaleModel& model) {
  std::vector<const CriticalElement*> out;
  for (const auto& e : model.elements) out.push_back(&e);
  std::sort(out.begin(), out.end(), [](const auto* a, const auto* b) { return a->id < b->id; });
  return out;
}

}  // namespace

std::map<std::string, int> filtration_levels(const MorseSmaleModel& model) {
  const auto index = element_index(model);
  std::map<std::string, int> level;
  std::set<std::string> active;
  std::function<int(const CriticalElement&)> visit = [&](const CriticalElement& e) -> int {
    if (auto it = level.find(e.id); it != level.end()) return it->second;
    if (!active.insert(e.id).second) throw ValidationError("attaches relation has a cycle through '" + e.id + "'");
    int lv = 0;
    for (const auto& a : e.attaches) {
      auto it = index.find(a);
      if (it == index.end()) throw ValidationError("element '" + e.id + "' attaches to unknown element '" + a + "'");
      lv = std::max(lv, visit(*it->second) + 1);
    }
    active.erase(e.id);
    level[e.id] = lv;
    return lv;
  };
  for (const auto& e : model.elements) visit(e);
  return level;
}

std::optional<std::string> validate_model(const MorseSmaleModel& model) {
  if (model.ambient_dim < 0) return "ambient_dim must be nonnegative";
  std::set<std::string> ids;
  for (const auto& e : model.elements) {
    if (e.id.empty()) return "element with an empty id";
    if (!ids.insert(e.id).second) return "duplicate element id '" + e.id + "'";
    if (e.index < 0) return "element '" + e.id + "' has a negative index";
    if (e.kind == ElementKind::fixed && e.index > model.ambient_dim) {
      return "fixed point '" + e.id + "' has index " + std::to_string(e.index) + " above the ambient dimension " +
             std::to_string(model.ambient_dim);
    }
    if (e.kind == ElementKind::orbit && e.index > model.ambient_dim - 1) {
      return "orbit '" + e.id + "' has index " + std::to_string(e.index) + ", at most " +
             std::to_string(model.ambient_dim - 1) + " allowed";
    }
  }
  for (const auto& e : model.elements) {
    std::set<std::string> seen;
    for (const auto& a : e.attaches) {
      if (a == e.id) return "element '" + e.id + "' attaches to itself";
      if (!ids.contains(a)) return "element '" + e.id + "' attaches to unknown element '" + a + "'";
      if (!seen.insert(a).second) return "element '" + e.id + "' lists '" + a + "' twice in attaches";
    }
  }
  try {
    filtration_levels(model);
  } catch (const ValidationError& err) {
    return err.what();
  }
  if (model.mode == ModelMode::chain) {
    if (!model.complex) return "chain mode requires a filtered complex";
    if (!(model.complex->field == model.field)) return "filtered complex is over a different field than the model";
    if (auto msg = validate_filtered(*model.complex)) return "filtered complex: " + *msg;
    if (!model.d1.empty() || !model.higher.empty()) return "chain mode models carry no page differentials";
  } else {
    if (model.complex) return "pages mode models carry no filtered complex";
    for (const auto& [number, blocks] : model.higher) {
      if (number < 2) return "higher differentials start at page 2, got page " + std::to_string(number);
    }
    auto check_field = [&](const std::map<Bidegree, Matrix>& blocks) -> std::optional<std::string> {
      for (const auto& [b, m] : blocks)
        if (!(m.field() == model.field)) return "differential block at " + b.key() + " is over a different field";
      return std::nullopt;
    };
    if (auto msg = check_field(model.d1)) return msg;
    for (const auto& [number, blocks] : model.higher)
      if (auto msg = check_field(blocks)) return msg;
  }
  return std::nullopt;
}

void require_valid(const MorseSmaleModel& model) {
  if (auto msg = validate_model(model)) throw ValidationError("invalid model: " + *msg);
}

BigradedSpace first_page_dims(const MorseSmaleModel& model) {
  const auto levels = filtration_levels(model);
  BigradedSpace out;
  auto add = [&](int p, int degree, const std::string& label) {
    auto& basis = out.terms[{p, degree - p}];
    basis.labels.push_back(label);
  };
  for (const auto* e : sorted_elements(model)) {
    const int p = levels.at(e->id);
    if (e->kind == ElementKind::fixed) {
      add(p, e->index, e->id);
    } else {
      add(p, e->index, orbit_minus(e->id));
      add(p, e->index + 1, orbit_plus(e->id));
    }
  }
  for (auto& [b, basis] : out.terms) basis.vectors = Matrix::identity(model.field, basis.labels.size());
  return out;
}

ZeroTermReport zero_term_check(const MorseSmaleModel& model) {
  ZeroTermReport report;
  for (const auto& e : model.elements) {
    if (e.index == 0 && !e.attaches.empty()) {
      report.findings.push_back({"index-0 attaches", "index-0 element '" + e.id +
                                                         "' attaches to other elements; its unstable manifold has "
                                                         "empty boundary"});
    }
  }
  std::map<std::string, int> levels;
  try {
    levels = filtration_levels(model);
  } catch (const ValidationError& err) {
    report.findings.push_back({"levels", err.what()});
    return report;
  }
  const BigradedSpace first = first_page_dims(model);
  for (const auto& [b, basis] : first.terms) {
    if (b.p == 0 && b.total() >= 2) {
      report.findings.push_back({"(i)", "E¹ at " + b.key() + " has total degree " + std::to_string(b.total()) +
                                            " on level 0"});
    }
    if (b.p >= 1 && b.total() == 0) {
      report.findings.push_back({"(ii)", "E¹ at " + b.key() + " is a degree-0 term above level 0"});
    }
    if (model.ambient_dim == 2 && (b.p == 1 || b.p == 2) && b.total() >= 3) {
      report.findings.push_back({"(iii)", "E¹ at " + b.key() + " has total degree " + std::to_string(b.total())});
    }
  }
  if (model.ambient_dim == 2) {
    int top = 0;
    for (const auto& [id, lv] : levels) top = std::max(top, lv);
    if (top > 2) report.findings.push_back({"(iii)", "filtration has " + std::to_string(top) + " levels above 0"});
  }
  return report;
}

namespace {

std::map<int, BigradedMap> page_differentials(const MorseSmaleModel& model) {
  std::map<int, BigradedMap> out;
  if (!model.d1.empty()) out[1] = {{-1, 0}, model.d1};
  for (const auto& [number, blocks] : model.higher) out[number] = {{-number, number - 1}, blocks};
  return out;
}

}  // namespace

SpectralSequence build_spectral_sequence(const MorseSmaleModel& model) {
  require_valid(model);
  const BigradedSpace first = first_page_dims(model);
  if (model.mode == ModelMode::pages) return sequence_from_pages(model.field, 1, first, page_differentials(model));

  const ExactCouple ec = exact_couple_of_filtration(*model.complex);
  std::set<Bidegree> positions;
  for (const auto& [b, basis] : first.terms) positions.insert(b);
  for (const auto& [b, basis] : ec.E.terms) positions.insert(b);
  for (const auto& b : positions) {
    if (first.dim(b) != ec.e_dim(b)) {
      throw ValidationError("filtered complex gives E¹ at " + b.key() + " of dimension " + std::to_string(ec.e_dim(b)) +
                            ", the critical elements require " + std::to_string(first.dim(b)));
    }
  }
  return spectral_sequence(ec);
}

ChainComplex vector_field_chain_complex(const MorseSmaleModel& model) {
  return chain_complex_of_sequence(build_spectral_sequence(model));
}

std::vector<long long> morse_counts(const MorseSmaleModel& model) {
  std::vector<long long> m(static_cast<std::size_t>(std::max(0, model.ambient_dim) + 1), 0);
  auto bump = [&](int q) {
    if (q < 0) return;
    if (q >= static_cast<int>(m.size())) m.resize(static_cast<std::size_t>(q) + 1, 0);
    ++m[static_cast<std::size_t>(q)];
  };
  for (const auto& e : model.elements) {
    bump(e.index);
    if (e.kind == ElementKind::orbit) bump(e.index + 1);
  }
  return m;
}

InequalityReport morse_inequality_report(const MorseSmaleModel& model, const std::vector<long long>& betti) {
  InequalityReport report;
  report.morse = morse_counts(model);
  const std::size_t len = report.morse.size();
  if (betti.size() < len) {
    throw ValidationError("betti numbers cover degrees 0.." + std::to_string(static_cast<int>(betti.size()) - 1) +
                          ", need 0.." + std::to_string(len - 1));
  }
  for (std::size_t q = len; q < betti.size(); ++q) {
    if (betti[q] != 0) throw ValidationError("nonzero betti number in degree " + std::to_string(q) + " above the ambient dimension");
  }
  report.betti.assign(betti.begin(), betti.begin() + static_cast<std::ptrdiff_t>(len));
  report.rows = morse_inequalities(report.morse, report.betti);
  report.holds = std::all_of(report.rows.begin(), report.rows.end(), [](const auto& r) { return r.holds; });
  report.euler_equality = true;
  for (const auto& r : report.rows)
    if (r.top) report.euler_equality = r.equality;
  return report;
}

namespace {

std::string rename_generator(const std::string& label, const std::map<std::string, std::string>& renaming) {
  if (auto it = renaming.find(label); it != renaming.end()) return it->second;
  for (const std::string& suffix : {std::string("⁻"), std::string("⁺")}) {
    if (label.size() > suffix.size() && label.ends_with(suffix)) {
      auto it = renaming.find(label.substr(0, label.size() - suffix.size()));
      if (it != renaming.end()) return it->second + suffix;
    }
  }
  return label;
}

// new_index[old position] within one bidegree.
std::vector<std::size_t> label_permutation(const std::vector<std::string>& old_labels,
                                           const std::vector<std::string>& new_labels,
                                           const std::map<std::string, std::string>& renaming) {
  std::vector<std::size_t> out;
  for (const auto& label : old_labels) {
    const std::string renamed = rename_generator(label, renaming);
    auto it = std::find(new_labels.begin(), new_labels.end(), renamed);
    if (it == new_labels.end()) throw InternalError("relabel lost generator '" + label + "'");
    out.push_back(static_cast<std::size_t>(it - new_labels.begin()));
  }
  return out;
}

Vector permute(const Vector& v, const std::vector<std::size_t>& perm) {
  Vector out(v.size(), Scalar::zero(v.empty() ? FieldSpec{} : v[0].field()));
  for (std::size_t i = 0; i < v.size(); ++i) out[perm[i]] = v[i];
  return out;
}

Vector unpermute(const Vector& v, const std::vector<std::size_t>& perm) {
  Vector out(v.size(), Scalar::zero(v.empty() ? FieldSpec{} : v[0].field()));
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[perm[i]];
  return out;
}

Subspace permute(const Subspace& s, const std::vector<std::size_t>& perm) {
  std::vector<Vector> rows;
  for (std::size_t r = 0; r < s.dim(); ++r) rows.push_back(permute(s.basis().row(r), perm));
  return Subspace::span(Matrix::from_rows(s.field(), rows, s.ambient_dim()));
}

}  // namespace

MorseSmaleModel relabel(const MorseSmaleModel& model, const std::map<std::string, std::string>& renaming) {
  require_valid(model);
  const auto index = element_index(model);
  std::map<std::string, std::string> full;
  for (const auto& [from, to] : renaming) {
    if (!index.contains(from)) throw ValidationError("relabel: unknown element id '" + from + "'");
    if (to.empty()) throw ValidationError("relabel: empty new id for '" + from + "'");
  }
  std::set<std::string> targets;
  for (const auto& e : model.elements) {
    auto it = renaming.find(e.id);
    const std::string to = it == renaming.end() ? e.id : it->second;
    if (!targets.insert(to).second) throw ValidationError("relabel: renaming is not injective at '" + to + "'");
    full[e.id] = to;
  }

  MorseSmaleModel out = model;
  for (auto& e : out.elements) {
    e.id = full.at(e.id);
    for (auto& a : e.attaches) a = full.at(a);
  }
  if (model.mode == ModelMode::chain) {
    for (auto& c : out.complex->cells) {
      c.id = rename_generator(c.id, full);
      for (auto& face : c.boundary) face.first = rename_generator(face.first, full);
    }
    return out;
  }

  out.d1.clear();
  out.higher.clear();
  const SpectralSequence ss = build_spectral_sequence(model);
  const BigradedSpace new_first = first_page_dims(out);
  std::map<Bidegree, std::vector<std::size_t>> perms;
  for (const auto& [b, basis] : ss.first.terms) perms[b] = label_permutation(basis.labels, new_first.labels(b), full);

  for (const Page& page : ss.pages) {
    for (const auto& [src, block] : page.d.blocks) {
      const Bidegree tgt = src + page.d.degree;
      const Subquotient& qs = page.terms.at(src);
      const Subquotient& qt = page.terms.at(tgt);
      const auto& ps = perms.at(src);
      const auto& pt = perms.at(tgt);
      const Subquotient ns(permute(qs.outer(), ps), permute(qs.inner(), ps), new_first.labels(src));
      const Subquotient nt(permute(qt.outer(), pt), permute(qt.inner(), pt), new_first.labels(tgt));
      Matrix moved(model.field, nt.dim(), ns.dim());
      for (std::size_t col = 0; col < ns.dim(); ++col) {
        const Vector x = qs.coordinates(unpermute(ns.representatives().row(col), ps));
        const Vector w = permute(qt.lift(block.apply(x)), pt);
        const Vector y = nt.coordinates(w);
        for (std::size_t row = 0; row < nt.dim(); ++row) moved(row, col) = y[row];
      }
      if (page.number == 1) {
        out.d1[src] = moved;
      } else {
        out.higher[page.number][src] = moved;
      }
    }
  }
  return out;
}

MorseSmaleModel random_model(std::uint64_t seed, const RandomModelBounds& bounds) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  std::bernoulli_distribution coin(bounds.density);
  std::bernoulli_distribution orbit_coin(0.3);

  MorseSmaleModel model;
  model.ambient_dim = std::max(0, bounds.ambient_dim);
  model.field = bounds.field;
  model.mode = ModelMode::pages;
  const int m = model.ambient_dim;
  const int count = uniform(1, std::max(1, bounds.max_elements));
  for (int n = 0; n < count; ++n) {
    CriticalElement e;
    e.id = (n < 10 ? "e0" : "e") + std::to_string(n);
    if (n > 0 && m >= 1 && orbit_coin(rng)) {
      e.kind = ElementKind::orbit;
      e.index = uniform(0, m - 1);
    } else {
      e.kind = ElementKind::fixed;
      e.index = n == 0 ? 0 : uniform(0, m);
    }
    model.elements.push_back(std::move(e));
  }
  // Boundaries of unstable manifolds meet strictly lower-dimensional ones.
  for (auto& e : model.elements) {
    if (e.index == 0) continue;
    std::vector<std::string> candidates;
    for (const auto& other : model.elements)
      if (other.unstable_dim() < e.unstable_dim()) candidates.push_back(other.id);
    std::shuffle(candidates.begin(), candidates.end(), rng);
    const int take = uniform(1, static_cast<int>(candidates.size()));
    e.attaches.assign(candidates.begin(), candidates.begin() + take);
    std::sort(e.attaches.begin(), e.attaches.end());
  }

  const BigradedSpace first = first_page_dims(model);
  int top = 0;
  for (const auto& [b, basis] : first.terms) top = std::max(top, b.p);
  std::map<int, BigradedMap> diffs;
  for (int s = 1; s <= top; ++s) {
    const SpectralSequence prefix = sequence_from_pages(model.field, 1, first, diffs);
    const Page& page = prefix.pages[static_cast<std::size_t>(std::min(s - 1, prefix.stable_r))];
    BigradedMap d{{-s, s - 1}, {}};
    for (const auto& [src, term] : page.terms) {
      const Bidegree tgt = src + d.degree;
      const std::size_t cols = term.dim();
      const std::size_t rows = page.dim(tgt);
      if (rows == 0 || cols == 0 || !coin(rng)) continue;
      // Columns must lie in the kernel of the block leaving the target.
      const Matrix out_of_target = d.block(tgt, model.field, page.dim(tgt + d.degree), rows);
      const Subspace ker = kernel_basis(out_of_target);
      if (ker.dim() == 0) continue;
      Matrix coeff(model.field, cols, ker.dim());
      std::uniform_int_distribution<long> value(0, 4);
      for (std::size_t r = 0; r < cols; ++r)
        for (std::size_t c = 0; c < ker.dim(); ++c) coeff(r, c) = Scalar(model.field, value(rng) - 2);
      const Matrix block = (coeff * ker.basis()).transpose();
      if (!block.is_zero()) d.blocks[src] = block;
    }
    if (d.blocks.empty()) continue;
    if (s == 1) {
      model.d1 = d.blocks;
    } else {
      model.higher[s] = d.blocks;
    }
    diffs[s] = std::move(d);
  }
  return model;
}

}  // namespace couplex
