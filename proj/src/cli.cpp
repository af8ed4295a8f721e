#include "paulikern/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "paulikern/error.hpp"
#include "paulikern/io.hpp"
#include "paulikern/models.hpp"
#include "paulikern/opp.hpp"
#include "paulikern/parallel.hpp"
#include "paulikern/projector_algebra.hpp"
#include "paulikern/words.hpp"

namespace paulikern::cli {

namespace {

const CLI::Range kPositiveInt(1, std::numeric_limits<int>::max());

// Thrown for bad flag combinations detected after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ToyOptions {
  int nmax = 8;
  std::string fs = "0S";
  double rotation_cos = -0.5;
  double depth = 3.0;
  double range = 1.0;
  double oscillator_length = 1.0;

  void add_to(CLI::App& app) {
    app.add_option("--nmax", nmax, "oscillator quanta cutoff")->check(CLI::NonNegativeNumber);
    app.add_option("--fs", fs, "forbidden pair states, comma separated (0S, 2S)");
    app.add_option("--rotation-cos", rotation_cos, "cosine of the kinematic rotation")->check(CLI::Range(-1.0, 1.0));
    app.add_option("--depth", depth, "Gaussian pair potential depth");
    app.add_option("--range", range, "Gaussian pair potential range")->check(CLI::PositiveNumber);
    app.add_option("--oscillator-length", oscillator_length, "oscillator length")->check(CLI::PositiveNumber);
  }

  ToyModelParams params() const {
    ToyModelParams p;
    p.nmax = nmax;
    p.fs.labels.clear();
    std::stringstream ss(fs);
    for (std::string label; std::getline(ss, label, ',');) {
      if (!label.empty()) p.fs.labels.push_back(forbidden_state_from_string(label));
    }
    p.rotation_cos = rotation_cos;
    p.potential_depth = depth;
    p.potential_range = range;
    p.oscillator_length = oscillator_length;
    p.validate();
    return p;
  }
};

// Where a projector set (and possibly a Hamiltonian) comes from.
struct SourceOptions {
  std::string input;
  std::optional<double> triple_overlap;
  bool random = false;
  bool toy = false;
  std::optional<int> dim;
  int generators = 3;
  int rank = 2;
  std::uint64_t seed = 0;
  ToyOptions toy_options;

  void add_to(CLI::App& app) {
    app.add_option("--input", input, "ProjectorSet or model JSON file");
    app.add_option("--triple-overlap", triple_overlap, "equal-overlap triple with pairwise overlap c");
    app.add_flag("--random", random, "seeded random ensemble");
    app.add_flag("--toy", toy, "three-particle toy model");
    app.add_option("--dim", dim, "basis dimension")->check(CLI::PositiveNumber);
    app.add_option("--generators", generators, "number of projectors")->check(kPositiveInt);
    app.add_option("--rank", rank, "rank of each random projector")->check(kPositiveInt);
    app.add_option("--seed", seed, "random seed");
    toy_options.add_to(app);
  }

  int chosen() const {
    return (input.empty() ? 0 : 1) + (triple_overlap ? 1 : 0) + (random ? 1 : 0) + (toy ? 1 : 0);
  }

  Json echo() const {
    Json j;
    if (!input.empty()) {
      j["source"] = "input";
      j["input"] = input;
    } else if (triple_overlap) {
      j["source"] = "triple-overlap";
      j["c"] = *triple_overlap;
      j["dim"] = dim.value_or(3);
    } else if (random) {
      j["source"] = "random";
      j["dim"] = dim.value_or(40);
      j["generators"] = generators;
      j["rank"] = rank;
    } else {
      j["source"] = "toy";
      j["toy"] = to_json(toy_options.params());
    }
    j["seed"] = seed;
    return j;
  }

  ModelDocument load() const {
    if (chosen() != 1) throw UsageError("choose exactly one of --input, --triple-overlap, --random, --toy");
    if (!input.empty()) {
      std::ifstream in(input, std::ios::binary);
      if (!in) throw Error(Errc::schema, "cannot open '" + input + "'");
      std::stringstream buffer;
      buffer << in.rdbuf();
      return model_from_json(parse_json(buffer.str()));
    }
    if (triple_overlap) return {equal_overlap_triple(dim.value_or(3), *triple_overlap), std::nullopt};
    if (random) {
      const int d = dim.value_or(40);
      std::vector<int> ranks(static_cast<std::size_t>(generators), std::min(rank, d));
      return {random_ensemble(d, generators, ranks, seed), std::nullopt};
    }
    ToyModel model = build_three_body_toy(toy_options.params());
    return {std::move(model.projectors), std::move(model.hamiltonian)};
  }
};

std::vector<double> parse_grid(const std::string& text, const char* flag) {
  auto to_double = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty()) throw UsageError(std::string(flag) + ": cannot parse '" + s + "'");
    return v;
  };
  std::vector<std::string> parts;
  char sep = text.find(':') != std::string::npos ? ':' : ',';
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, sep);) parts.push_back(p);
  if (sep == ':') {
    if (parts.size() != 3) throw UsageError(std::string(flag) + ": expected lo:hi:count");
    const double lo = to_double(parts[0]);
    const double hi = to_double(parts[1]);
    const double count = to_double(parts[2]);
    if (!(lo > 0.0) || !(hi >= lo) || !(count >= 1.0) || count != std::floor(count)) {
      throw UsageError(std::string(flag) + ": need 0 < lo <= hi and an integer count >= 1");
    }
    return log_grid(lo, hi, static_cast<std::size_t>(count));
  }
  std::vector<double> out;
  for (const auto& p : parts) out.push_back(to_double(p));
  if (out.empty()) throw UsageError(std::string(flag) + ": empty list");
  return out;
}

struct Outcome {
  ReportEnvelope envelope;
  int exit_code = kExitOk;
  std::string summary;
};

void finish_status(Outcome& o, bool failed, bool warn) {
  o.exit_code = failed ? kExitFailure : kExitOk;
  o.envelope.status = failed ? Status::error : (warn ? Status::warning : Status::ok);
}

// verify -----------------------------------------------------------------

struct VerifyOptions {
  int generators = 3;
  int order = 4;
  std::string mode = "symbolic";
  int dim = 40;
  int rank = 2;
  std::uint64_t seed = 0;
  std::optional<double> tolerance;
  double threshold = kDefaultKernelThreshold;
};

Outcome run_verify(const VerifyOptions& o) {
  Outcome out;
  auto& env = out.envelope;
  env.command = "verify";
  env.parameters = Json{{"generators", o.generators}, {"order", o.order}, {"mode", o.mode}};
  bool failed = false;

  if (o.mode == "symbolic") {
    if (count_layer(o.generators, o.order + 1) > 2'000'000) {
      throw UsageError("--order: symbolic expansion too large for --generators " + std::to_string(o.generators));
    }
    Json checks = Json::array();
    for (int m = 1; m <= o.order; ++m) {
      const auto cmp = formal_equal(gamma_terms(o.generators, m), binomial_expansion(o.generators, m));
      const auto tele = telescoping_defect(o.generators, m);
      const auto rec = formal_equal(recursion_step(o.generators, m), gamma_terms(o.generators, m + 1));
      checks.push_back(Json{{"m", m},
                            {"gamma_equals_binomial", cmp.equal},
                            {"difference_terms", cmp.difference.size()},
                            {"telescoping_defect_terms", tele.size()},
                            {"recursion_consistent", rec.equal}});
      env.residuals.emplace_back("formal_difference_m" + std::to_string(m), static_cast<double>(cmp.difference.size()));
      env.residuals.emplace_back("telescoping_defect_m" + std::to_string(m), static_cast<double>(tele.size()));
      failed = failed || !cmp.equal || !tele.empty() || !rec.equal;
    }
    env.results = Json{{"checks", std::move(checks)},
                       {"gamma_preview", to_string(gamma_terms(o.generators, std::min(o.order, 2)))}};
    out.summary = std::string("verify symbolic N=") + std::to_string(o.generators) + " m<=" +
                  std::to_string(o.order) + (failed ? ": FAILED" : ": identity holds");
  } else if (o.mode == "numeric") {
    env.parameters["dim"] = o.dim;
    env.parameters["rank"] = o.rank;
    env.parameters["seed"] = o.seed;
    env.parameters["threshold"] = o.threshold;
    std::vector<int> ranks(static_cast<std::size_t>(o.generators), std::min(o.rank, o.dim));
    const ProjectorSet set = random_ensemble(o.dim, o.generators, ranks, o.seed);
    const double tol = o.tolerance.value_or(1e-10 * o.dim);
    env.parameters["tolerance"] = tol;

    Json theorem1 = Json::array();
    double worst = 0.0;
    for (int m = 1; m <= o.order; ++m) {
      const auto r = verify_theorem1(set, m);
      theorem1.push_back(to_json(r));
      worst = std::max({worst, r.expansion_residual, r.recursion_residual});
      env.residuals.emplace_back("theorem1_m" + std::to_string(m), std::max(r.expansion_residual, r.recursion_residual));
    }
    const auto t2 = verify_theorem2(set, o.threshold);
    const auto comm = commutation_check(set, o.threshold);
    const auto spectrum = convergence_report(set, o.threshold);
    env.residuals.emplace_back("theorem2_gamma_on_kernel", t2.gamma_on_kernel);
    env.residuals.emplace_back("theorem2_sum_on_gamma_kernel", t2.sum_on_gamma_kernel);
    env.residuals.emplace_back("commutation", comm.max_residual);
    env.results = Json{{"theorem1", std::move(theorem1)},
                       {"theorem2", to_json(t2)},
                       {"commutation", to_json(comm)},
                       {"divergent", spectrum.divergent},
                       {"lambda_max", spectrum.eigenvalues.maxCoeff()}};
    failed = worst > tol || !t2.passed || !comm.passed;
    std::ostringstream s;
    s << "verify numeric N=" << o.generators << " dim=" << o.dim << " m<=" << o.order << ": max residual " << worst
      << (failed ? " FAILED" : " ok");
    out.summary = s.str();
  } else {
    throw UsageError("--mode: expected 'symbolic' or 'numeric', got '" + o.mode + "'");
  }
  finish_status(out, failed, false);
  return out;
}

// spectrum / kernel ----------------------------------------------------------

struct SpectrumOptions {
  SourceOptions source;
  double threshold = kDefaultKernelThreshold;
  double target = 1e-12;
  bool require_convergent = false;
};

Outcome run_spectrum(const SpectrumOptions& o) {
  const ModelDocument doc = o.source.load();
  Outcome out;
  auto& env = out.envelope;
  env.command = "spectrum";
  env.parameters = o.source.echo();
  env.parameters["threshold"] = o.threshold;
  env.parameters["target"] = o.target;
  env.parameters["require_convergent"] = o.require_convergent;

  const auto report = convergence_report(doc.projectors, o.threshold, o.target);
  env.results = to_json(report);
  env.results["overlap_statistics"] = to_json(overlap_statistics(doc.projectors));
  const bool nonconvergent = report.divergent || report.stagnant;
  finish_status(out, o.require_convergent && nonconvergent, nonconvergent || report.ambiguous_count > 0);

  std::ostringstream s;
  s << "spectrum: dim " << doc.projectors.dim() << ", kernel_dim " << report.kernel_dim << ", lambda_max "
    << report.eigenvalues.maxCoeff() << ", rho " << report.contraction_factor
    << (report.divergent ? ", divergent" : "") << (report.stagnant ? ", stagnant" : "");
  out.summary = s.str();
  return out;
}

struct KernelOptions {
  SourceOptions source;
  double threshold = kDefaultKernelThreshold;
  bool with_vectors = false;
};

Outcome run_kernel(const KernelOptions& o) {
  const ModelDocument doc = o.source.load();
  Outcome out;
  auto& env = out.envelope;
  env.command = "kernel";
  env.parameters = o.source.echo();
  env.parameters["threshold"] = o.threshold;
  env.parameters["with_vectors"] = o.with_vectors;

  const auto kernel = kernel_basis(doc.projectors, o.threshold);
  const auto t2 = verify_theorem2(doc.projectors, o.threshold);
  const auto comm = commutation_check(doc.projectors, o.threshold);
  env.results = to_json(kernel, o.with_vectors);
  env.results["theorem2"] = to_json(t2);
  env.results["commutation"] = to_json(comm);
  env.residuals = {{"kernel_residual", kernel.residual},
                   {"intersection_residual", kernel.intersection_residual},
                   {"theorem2_gamma_on_kernel", t2.gamma_on_kernel},
                   {"theorem2_sum_on_gamma_kernel", t2.sum_on_gamma_kernel},
                   {"commutation", comm.max_residual}};
  finish_status(out, !t2.passed || !comm.passed || !kernel.intersection_ok(), false);
  std::ostringstream s;
  s << "kernel: kernel_dim " << kernel.size() << " of " << doc.projectors.dim()
    << (t2.passed ? ", kernels of P and Gamma agree" : ", kernel mismatch");
  out.summary = s.str();
  return out;
}

// toy ------------------------------------------------------------------

struct ToyCommandOptions {
  ToyOptions toy;
  std::string save_model;
  double threshold = kDefaultKernelThreshold;
};

Outcome run_toy(const ToyCommandOptions& o) {
  const ToyModelParams params = o.toy.params();
  const ToyModel model = build_three_body_toy(params);
  Outcome out;
  auto& env = out.envelope;
  env.command = "toy";
  env.parameters = to_json(params);
  env.parameters["threshold"] = o.threshold;
  env.parameters["seed"] = 0;

  const auto report = convergence_report(model.projectors, o.threshold);
  Json ranks = Json::array();
  for (const auto& p : model.projectors) ranks.push_back(p.rank());
  const Vector h_spectrum = hermitian_eigenvalues(model.hamiltonian);
  env.results = Json{{"dim", model.projectors.dim()},
                     {"ranks", std::move(ranks)},
                     {"kernel_dim", report.kernel_dim},
                     {"spectrum", to_json(report)},
                     {"hamiltonian_ground", h_spectrum(0)},
                     {"model", to_json(model)}};
  if (!o.save_model.empty()) {
    std::ofstream f(o.save_model, std::ios::binary);
    if (!f) throw UsageError("--save-model: cannot write '" + o.save_model + "'");
    f << to_json(model).dump(2) << '\n';
  }
  finish_status(out, false, false);
  std::ostringstream s;
  s << "toy: nmax " << params.nmax << ", dim " << model.projectors.dim() << ", kernel_dim " << report.kernel_dim;
  out.summary = s.str();
  return out;
}

// opp ------------------------------------------------------------------

struct OppOptions {
  SourceOptions source;
  std::string lambdas = "1e1:1e6:12";
  std::string lambda_units = "hnorm";
  int levels = 2;
  double threshold = kDefaultKernelThreshold;
  std::string tsv;
  std::string eps;
  std::optional<double> lambda_ref;
};

Outcome run_opp(const OppOptions& o) {
  const ModelDocument doc = o.source.load();
  if (!doc.hamiltonian) throw UsageError("opp needs a Hamiltonian: use --toy or a model file with 'hamiltonian'");
  const Operator& h = *doc.hamiltonian;
  if (o.lambda_units != "hnorm" && o.lambda_units != "absolute") {
    throw UsageError("--lambda-units: expected 'hnorm' or 'absolute'");
  }
  std::vector<double> grid = parse_grid(o.lambdas, "--lambdas");
  const double h_norm = h.frobenius_norm();
  if (o.lambda_units == "hnorm") {
    for (double& l : grid) l *= h_norm;
  }

  Outcome out;
  auto& env = out.envelope;
  env.command = "opp";
  env.parameters = o.source.echo();
  env.parameters["lambdas"] = o.lambdas;
  env.parameters["lambda_units"] = o.lambda_units;
  env.parameters["levels"] = o.levels;
  env.parameters["threshold"] = o.threshold;

  const auto sweep = lambda_sweep(h, doc.projectors, grid, o.levels, o.threshold);
  env.results = to_json(sweep);
  std::string tsv = sweep_to_tsv(sweep);
  if (!o.eps.empty()) {
    const auto eps = parse_grid(o.eps, "--eps");
    const double ref = o.lambda_ref.value_or(grid.back());
    env.parameters["eps"] = o.eps;
    env.parameters["lambda_ref"] = ref;
    const auto af = almost_forbidden_report(h, doc.projectors, eps, ref, o.threshold);
    env.results["almost_forbidden"] = to_json(af);
    tsv += "\n" + almost_forbidden_to_tsv(af);
  }
  for (std::size_t k = 0; k < sweep.slopes.size(); ++k) {
    if (sweep.slopes[k]) env.residuals.emplace_back("slope_" + std::to_string(k), *sweep.slopes[k]);
    env.residuals.emplace_back("final_gap_" + std::to_string(k), sweep.gaps.back()[k]);
  }
  if (!o.tsv.empty()) {
    std::ofstream f(o.tsv, std::ios::binary);
    if (!f) throw UsageError("--tsv: cannot write '" + o.tsv + "'");
    f << tsv;
  }
  bool degenerate = false;
  for (bool d : sweep.degenerate_tail) degenerate = degenerate || d;
  finish_status(out, !sweep.monotone, degenerate);

  std::ostringstream s;
  s << "opp: " << grid.size() << " lambdas, levels " << o.levels << ", final gaps";
  for (double g : sweep.gaps.back()) s << ' ' << g;
  s << (sweep.monotone ? "" : ", NOT monotone");
  out.summary = s.str();
  return out;
}

// schema ---------------------------------------------------------------

Outcome run_schema(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::schema, "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const Json doc = parse_json(buffer.str());

  Outcome out;
  auto& env = out.envelope;
  env.command = "schema";
  env.parameters = Json{{"input", path}};

  std::string kind;
  Json first;
  Json second;
  bool failed = false;
  if (doc.is_object() && doc.contains("command") && doc.contains("status")) {
    kind = "envelope";
    first = to_json(envelope_from_json(doc));
    second = to_json(envelope_from_json(first));
  } else if (doc.is_object() && doc.contains("terms")) {
    kind = "formal_sum";
    first = to_json(formal_sum_from_json(doc));
    second = to_json(formal_sum_from_json(first));
  } else if (doc.is_object() && doc.contains("projectors")) {
    const ModelDocument model = model_from_json(doc);
    kind = model.hamiltonian ? "model" : "projector_set";
    auto serialize = [](const ModelDocument& m) {
      Json j = to_json(m.projectors);
      if (m.hamiltonian) j["hamiltonian"] = to_json(*m.hamiltonian);
      return j;
    };
    first = serialize(model);
    second = serialize(model_from_json(first));
    double idem = 0.0;
    for (const auto& p : model.projectors) {
      idem = std::max(idem, is_projector(p.op(), 1e-12 * static_cast<double>(p.dim())).idempotency_residual);
    }
    env.residuals.emplace_back("idempotency_residual", idem);
    failed = idem > 1e-12 * static_cast<double>(model.projectors.dim());
    if (model.hamiltonian) {
      env.residuals.emplace_back("hamiltonian_symmetry_residual", model.hamiltonian->symmetry_residual());
      failed = failed || !model.hamiltonian->is_symmetric();
    }
  } else if (doc.is_object() && doc.contains("entries")) {
    kind = "operator";
    const Operator op = operator_from_json(doc);
    first = to_json(op);
    second = to_json(operator_from_json(first));
    env.residuals.emplace_back("symmetry_residual", op.symmetry_residual());
    failed = !op.is_symmetric();
  } else {
    throw Error(Errc::schema, "unrecognized document: expected an Operator, ProjectorSet, model, formal sum or envelope");
  }
  const bool roundtrip = first.dump() == second.dump();
  env.results = Json{{"kind", kind}, {"roundtrip_identical", roundtrip}};
  finish_status(out, failed || !roundtrip, false);
  out.summary = "schema: " + kind + (roundtrip ? " round-trips" : " does NOT round-trip") +
                (failed ? ", invariant check failed" : "");
  return out;
}

int usage_code(Errc code) {
  switch (code) {
    case Errc::empty_kernel:
    case Errc::quadrature_failure:
    case Errc::diverged:
    case Errc::not_symmetric:
      return kExitFailure;
    default:
      return kExitUsage;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Many-body Pauli projector algebra: expansions, kernels and OPP sweeps", "paulikern"};
  app.require_subcommand(1);
  std::optional<unsigned> threads;
  std::string output;
  app.add_option("--threads", threads, "worker threads (fallback: PAULIKERN_THREADS)")->check(kPositiveInt);

  auto add_output = [&](CLI::App* sub) {
    sub->add_option("-o,--output", output, "write the report envelope here instead of stdout");
  };

  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "check the expansion identity and kernel equivalence");
  verify_cmd->add_option("--generators", verify.generators, "number of projectors")->check(kPositiveInt);
  verify_cmd->add_option("--order", verify.order, "expansion order")->check(kPositiveInt);
  verify_cmd->add_option("--mode", verify.mode, "symbolic or numeric");
  verify_cmd->add_option("--dim", verify.dim, "basis dimension (numeric)")->check(CLI::Range(2, 100000));
  verify_cmd->add_option("--rank", verify.rank, "rank of each projector (numeric)")->check(kPositiveInt);
  verify_cmd->add_option("--seed", verify.seed, "random seed (numeric)");
  verify_cmd->add_option("--tolerance", verify.tolerance, "residual tolerance (numeric)")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--threshold", verify.threshold, "kernel threshold")->check(CLI::PositiveNumber);
  add_output(verify_cmd);

  SpectrumOptions spectrum;
  auto* spectrum_cmd = app.add_subcommand("spectrum", "spectrum of P and convergence diagnostics");
  spectrum.source.add_to(*spectrum_cmd);
  spectrum_cmd->add_option("--threshold", spectrum.threshold, "kernel threshold")->check(CLI::PositiveNumber);
  spectrum_cmd->add_option("--target", spectrum.target, "power-limit accuracy target")->check(CLI::Range(1e-300, 1.0));
  spectrum_cmd->add_flag("--require-convergent", spectrum.require_convergent, "fail unless max eigenvalue < 2");
  add_output(spectrum_cmd);

  KernelOptions kernel;
  auto* kernel_cmd = app.add_subcommand("kernel", "allowed subspace ker P");
  kernel.source.add_to(*kernel_cmd);
  kernel_cmd->add_option("--threshold", kernel.threshold, "kernel threshold")->check(CLI::PositiveNumber);
  kernel_cmd->add_flag("--with-vectors", kernel.with_vectors, "include the kernel basis vectors");
  add_output(kernel_cmd);

  ToyCommandOptions toy;
  auto* toy_cmd = app.add_subcommand("toy", "build the three-particle toy model");
  toy.toy.add_to(*toy_cmd);
  toy_cmd->add_option("--save-model", toy.save_model, "write the bare model JSON here");
  toy_cmd->add_option("--threshold", toy.threshold, "kernel threshold")->check(CLI::PositiveNumber);
  add_output(toy_cmd);

  OppOptions opp;
  auto* opp_cmd = app.add_subcommand("opp", "pseudopotential strength sweep");
  opp.source.add_to(*opp_cmd);
  opp_cmd->add_option("--lambdas", opp.lambdas, "lo:hi:count (log spaced) or a comma list");
  opp_cmd->add_option("--lambda-units", opp.lambda_units, "hnorm (multiples of ||h||_F) or absolute");
  opp_cmd->add_option("--levels", opp.levels, "number of levels")->check(kPositiveInt);
  opp_cmd->add_option("--threshold", opp.threshold, "kernel threshold")->check(CLI::PositiveNumber);
  opp_cmd->add_option("--tsv", opp.tsv, "write the sweep table here");
  opp_cmd->add_option("--eps", opp.eps, "almost-forbidden cutoffs, lo:hi:count or comma list");
  opp_cmd->add_option("--lambda-ref", opp.lambda_ref, "penalty strength for the almost-forbidden table");
  add_output(opp_cmd);

  std::string schema_path;
  auto* schema_cmd = app.add_subcommand("schema", "parse, validate and round-trip a JSON document");
  schema_cmd->add_option("input,--input", schema_path, "document path")->required();
  add_output(schema_cmd);

  std::vector<const char*> argv{"paulikern"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  if (threads) set_thread_count(*threads);

  Outcome outcome;
  try {
    const auto start = std::chrono::steady_clock::now();
    if (verify_cmd->parsed()) outcome = run_verify(verify);
    else if (spectrum_cmd->parsed()) outcome = run_spectrum(spectrum);
    else if (kernel_cmd->parsed()) outcome = run_kernel(kernel);
    else if (toy_cmd->parsed()) outcome = run_toy(toy);
    else if (opp_cmd->parsed()) outcome = run_opp(opp);
    else outcome = run_schema(schema_path);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    outcome.summary += " (" + std::to_string(elapsed.count()) + " s)";
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return usage_code(e.code());
  }

  const std::string text = to_json(outcome.envelope).dump(2) + "\n";
  if (output.empty()) {
    out << text;
  } else {
    std::ofstream f(output, std::ios::binary);
    if (!f) {
      err << "error: --output: cannot write '" << output << "'\n";
      return kExitUsage;
    }
    f << text;
  }
  err << outcome.summary << '\n';
  return outcome.exit_code;
}

}  // namespace paulikern::cli
