#include "paulikern/io.hpp"

#include <cmath>
#include <sstream>

#include "paulikern/error.hpp"

namespace paulikern {

namespace {

[[noreturn]] void schema_error(const std::string& what) { throw Error(Errc::schema, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) schema_error(std::string("expected an object holding '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) schema_error(std::string("missing field '") + key + "'");
  return *it;
}

Index positive_dim(const Json& j) {
  const Json& d = field(j, "dim");
  if (!d.is_number_integer() || d.get<long long>() < 1) schema_error("'dim' must be a positive integer");
  return static_cast<Index>(d.get<long long>());
}

double number(const Json& v, const std::string& where) {
  if (!v.is_number()) schema_error(where + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) schema_error(where + " must be finite");
  return x;
}

Vector vector_from(const Json& v, Index dim, const std::string& where) {
  if (!v.is_array() || static_cast<Index>(v.size()) != dim) {
    std::ostringstream os;
    os << where << " must be an array of " << dim << " numbers";
    schema_error(os.str());
  }
  Vector out(dim);
  for (Index i = 0; i < dim; ++i) out(i) = number(v[static_cast<std::size_t>(i)], where);
  return out;
}

Json vector_json(const Eigen::Ref<const Vector>& v) {
  Json a = Json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Json matrix_rows(const Matrix& m) {
  Json rows = Json::array();
  for (Index r = 0; r < m.rows(); ++r) rows.push_back(vector_json(m.row(r).transpose()));
  return rows;
}

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::ostringstream os;
    os << "JSON parse error at byte " << e.byte << ": " << e.what();
    schema_error(os.str());
  }
}

Json to_json(const Operator& op) {
  Json j;
  j["dim"] = op.dim();
  j["entries"] = matrix_rows(op.matrix());
  return j;
}

Operator operator_from_json(const Json& j) {
  const Index dim = positive_dim(j);
  const Json& entries = field(j, "entries");
  if (!entries.is_array() || static_cast<Index>(entries.size()) != dim) {
    std::ostringstream os;
    os << "'entries' must hold " << dim << " rows";
    schema_error(os.str());
  }
  Matrix m(dim, dim);
  for (Index r = 0; r < dim; ++r) {
    m.row(r) = vector_from(entries[static_cast<std::size_t>(r)], dim, "entries row " + std::to_string(r)).transpose();
  }
  return Operator(std::move(m));
}

Json to_json(const ProjectorSet& set) {
  Json j;
  j["dim"] = set.dim();
  Json projectors = Json::array();
  for (const auto& p : set) {
    Json span = Json::array();
    for (Index c = 0; c < p.rank(); ++c) span.push_back(vector_json(p.span().col(c)));
    projectors.push_back(Json{{"span", std::move(span)}});
  }
  j["projectors"] = std::move(projectors);
  return j;
}

ProjectorSet projector_set_from_json(const Json& j) {
  const Index dim = positive_dim(j);
  const Json& list = field(j, "projectors");
  if (!list.is_array() || list.empty()) schema_error("'projectors' must be a nonempty array");
  std::vector<Projector> projectors;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const Json& span = field(list[i], "span");
    const std::string where = "projectors[" + std::to_string(i) + "].span";
    if (!span.is_array() || span.empty()) schema_error(where + " must be a nonempty array of vectors");
    Matrix columns(dim, static_cast<Index>(span.size()));
    for (std::size_t c = 0; c < span.size(); ++c) {
      columns.col(static_cast<Index>(c)) = vector_from(span[c], dim, where + "[" + std::to_string(c) + "]");
    }
    projectors.push_back(projector_from_span(columns));
  }
  return ProjectorSet(std::move(projectors));
}

Json to_json(const FormalSum& s) {
  Json terms = Json::array();
  for (const auto& [w, c] : s.terms()) terms.push_back(Json{{"word", w.letters()}, {"coeff", c}});
  return Json{{"terms", std::move(terms)}};
}

FormalSum formal_sum_from_json(const Json& j) {
  const Json& terms = field(j, "terms");
  if (!terms.is_array()) schema_error("'terms' must be an array");
  FormalSum out;
  for (const auto& t : terms) {
    const Json& w = field(t, "word");
    const Json& c = field(t, "coeff");
    if (!w.is_array() || !c.is_number_integer()) schema_error("term needs an integer array 'word' and integer 'coeff'");
    std::vector<Letter> letters;
    for (const auto& l : w) {
      if (!l.is_number_integer()) schema_error("word letters must be integers");
      letters.push_back(l.get<Letter>());
    }
    Letter top = 1;
    for (Letter l : letters) top = std::max(top, l);
    out.add_term(reduce_word(letters, top), c.get<Coefficient>());
  }
  return out;
}

Json to_json(const ToyModelParams& p) {
  Json fs = Json::array();
  for (auto f : p.fs.labels) fs.push_back(to_string(f));
  return Json{{"nmax", p.nmax},
              {"fs", std::move(fs)},
              {"rotation_cos", p.rotation_cos},
              {"potential_depth", p.potential_depth},
              {"potential_range", p.potential_range},
              {"oscillator_length", p.oscillator_length}};
}

ToyModelParams toy_params_from_json(const Json& j) {
  ToyModelParams p;
  const Json& nmax = field(j, "nmax");
  if (!nmax.is_number_integer()) schema_error("'nmax' must be an integer");
  p.nmax = nmax.get<int>();
  const Json& fs = field(j, "fs");
  if (!fs.is_array()) schema_error("'fs' must be an array of labels");
  p.fs.labels.clear();
  for (const auto& f : fs) {
    if (!f.is_string()) schema_error("'fs' labels must be strings");
    p.fs.labels.push_back(forbidden_state_from_string(f.get<std::string>()));
  }
  p.rotation_cos = number(field(j, "rotation_cos"), "rotation_cos");
  p.potential_depth = number(field(j, "potential_depth"), "potential_depth");
  p.potential_range = number(field(j, "potential_range"), "potential_range");
  p.oscillator_length = number(field(j, "oscillator_length"), "oscillator_length");
  p.validate();
  return p;
}

Json to_json(const ToyModel& model) {
  Json j;
  j["kind"] = "toy_model";
  j["parameters"] = to_json(model.params);
  const Json set = to_json(model.projectors);
  j["dim"] = set["dim"];
  j["projectors"] = set["projectors"];
  j["hamiltonian"] = to_json(model.hamiltonian);
  Json labels = Json::array();
  for (const auto& b : model.basis) labels.push_back(Json::array({b.nx, b.ny}));
  j["basis_labels"] = std::move(labels);
  return j;
}

ModelDocument model_from_json(const Json& j) {
  ModelDocument doc{projector_set_from_json(j), std::nullopt};
  if (j.contains("hamiltonian")) {
    Operator h = operator_from_json(j["hamiltonian"]);
    if (h.dim() != doc.projectors.dim()) schema_error("hamiltonian dim differs from projector dim");
    doc.hamiltonian = std::move(h);
  }
  return doc;
}

Json to_json(const SpectrumReport& r) {
  Json j;
  j["eigenvalues"] = vector_json(r.eigenvalues);
  j["kernel_dim"] = r.kernel_dim;
  j["contraction_factor"] = r.contraction_factor;
  j["predicted_m"] = r.predicted_m ? Json(*r.predicted_m) : Json(nullptr);
  j["divergent"] = r.divergent;
  j["stagnant"] = r.stagnant;
  j["ambiguous_count"] = r.ambiguous_count;
  j["almost_forbidden"] = r.almost_forbidden;
  j["threshold"] = r.threshold;
  j["target"] = r.target;
  return j;
}

Json to_json(const KernelBasis& k, bool with_vectors) {
  Json j;
  j["kernel_dim"] = k.size();
  j["ambient_dim"] = k.ambient_dim;
  j["threshold"] = k.threshold;
  j["residual"] = k.residual;
  j["intersection_residual"] = k.intersection_residual;
  if (with_vectors) {
    Json vs = Json::array();
    for (Index c = 0; c < k.size(); ++c) vs.push_back(vector_json(k.vectors.col(c)));
    j["vectors"] = std::move(vs);
  }
  return j;
}

Json to_json(const Theorem1Report& r) {
  return Json{{"order", r.order},
              {"expansion_residual", r.expansion_residual},
              {"recursion_residual", r.recursion_residual},
              {"tolerance", r.tolerance},
              {"passed", r.passed}};
}

Json to_json(const Theorem2Report& r) {
  return Json{{"kernel_dim_sum", r.kernel_dim_sum},
              {"kernel_dim_gamma", r.kernel_dim_gamma},
              {"kernel_dim_spectral", r.kernel_dim_spectral},
              {"gamma_on_kernel", r.gamma_on_kernel},
              {"sum_on_gamma_kernel", r.sum_on_gamma_kernel},
              {"gamma_mismatch", r.gamma_mismatch},
              {"threshold", r.threshold},
              {"passed", r.passed}};
}

Json to_json(const CommutationReport& r) {
  return Json{{"left", r.left},
              {"right", r.right},
              {"max_residual", r.max_residual},
              {"tolerance", r.tolerance},
              {"passed", r.passed}};
}

Json to_json(const OverlapStatistics& s) {
  return Json{{"lambda_max", s.lambda_max},
              {"product_norms", matrix_rows(s.product_norms)},
              {"traces", matrix_rows(s.traces)}};
}

Json to_json(const OppSweepResult& r) {
  Json slopes = Json::array();
  for (const auto& s : r.slopes) slopes.push_back(optional_json(s));
  return Json{{"h_norm", r.h_norm},
              {"threshold", r.threshold},
              {"lambda_grid", r.lambda_grid},
              {"energies", r.energies},
              {"gaps", r.gaps},
              {"projected_energies", r.projected_energies},
              {"slopes", std::move(slopes)},
              {"degenerate_tail", r.degenerate_tail},
              {"monotone", r.monotone}};
}

Json to_json(const AlmostForbiddenReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back(Json{{"eps", row.eps},
                        {"band_modes", row.band_modes},
                        {"e_elim", optional_json(row.e_elim)},
                        {"e_keep", optional_json(row.e_keep)},
                        {"e_opp", optional_json(row.e_opp)}});
  }
  return Json{{"threshold", r.threshold}, {"lambda_ref", r.lambda_ref}, {"rows", std::move(rows)}};
}

namespace {
void tsv_number(std::ostream& os, double v) {
  std::ostringstream tmp;
  tmp.precision(17);
  tmp << v;
  os << tmp.str();
}
void tsv_optional(std::ostream& os, const std::optional<double>& v) {
  if (v) tsv_number(os, *v);
  else os << "nan";
}
}  // namespace

std::string sweep_to_tsv(const OppSweepResult& r) {
  std::ostringstream os;
  const std::size_t levels = r.projected_energies.size();
  os << "lambda";
  for (std::size_t k = 0; k < levels; ++k) os << "\tE_" << k;
  for (std::size_t k = 0; k < levels; ++k) os << "\tgap_" << k;
  os << '\n';
  for (std::size_t g = 0; g < r.lambda_grid.size(); ++g) {
    tsv_number(os, r.lambda_grid[g]);
    for (double e : r.energies[g]) {
      os << '\t';
      tsv_number(os, e);
    }
    for (double gap : r.gaps[g]) {
      os << '\t';
      tsv_number(os, gap);
    }
    os << '\n';
  }
  return os.str();
}

std::string almost_forbidden_to_tsv(const AlmostForbiddenReport& r) {
  std::ostringstream os;
  os << "eps\tband_modes\tE_elim\tE_keep\tE_opp\n";
  for (const auto& row : r.rows) {
    tsv_number(os, row.eps);
    os << '\t' << row.band_modes << '\t';
    tsv_optional(os, row.e_elim);
    os << '\t';
    tsv_optional(os, row.e_keep);
    os << '\t';
    tsv_optional(os, row.e_opp);
    os << '\n';
  }
  return os.str();
}

std::string to_string(Status s) {
  switch (s) {
    case Status::ok: return "ok";
    case Status::warning: return "warning";
    case Status::error: return "error";
  }
  return "error";
}

Status status_from_string(const std::string& s) {
  if (s == "ok") return Status::ok;
  if (s == "warning") return Status::warning;
  if (s == "error") return Status::error;
  schema_error("unknown status '" + s + "'");
}

Json to_json(const ReportEnvelope& e) {
  Json residuals = Json::array();
  for (const auto& [name, value] : e.residuals) residuals.push_back(Json{{"name", name}, {"value", value}});
  return Json{{"command", e.command},
              {"parameters", e.parameters},
              {"results", e.results},
              {"status", to_string(e.status)},
              {"residuals", std::move(residuals)}};
}

ReportEnvelope envelope_from_json(const Json& j) {
  ReportEnvelope e;
  const Json& command = field(j, "command");
  if (!command.is_string()) schema_error("'command' must be a string");
  e.command = command.get<std::string>();
  e.parameters = field(j, "parameters");
  e.results = field(j, "results");
  const Json& status = field(j, "status");
  if (!status.is_string()) schema_error("'status' must be a string");
  e.status = status_from_string(status.get<std::string>());
  const Json& residuals = field(j, "residuals");
  if (!residuals.is_array()) schema_error("'residuals' must be an array");
  for (const auto& r : residuals) {
    const Json& name = field(r, "name");
    if (!name.is_string()) schema_error("residual name must be a string");
    e.residuals.emplace_back(name.get<std::string>(), number(field(r, "value"), "residual value"));
  }
  return e;
}

}  // namespace paulikern
