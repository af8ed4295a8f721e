#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "paulikern/cli.hpp"
#include "paulikern/error.hpp"
#include "paulikern/io.hpp"
#include "paulikern/models.hpp"
#include "paulikern/words.hpp"

using namespace paulikern;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli_run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "paulikern_tests";
  fs::create_directories(dir);
  return dir / name;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  f << text;
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("operator JSON round trip") {
  Matrix m(2, 2);
  m << 1.0 / 3.0, 0.1, 0.1, 2.0;
  const Operator op(m);
  const Json j = to_json(op);
  CHECK(j["dim"] == 2);
  CHECK(j["entries"][0][1] == 0.1);
  CHECK(operator_from_json(parse_json(j.dump())).matrix() == m);
  CHECK_THROWS_AS(operator_from_json(parse_json(R"({"dim": 2, "entries": [[1, 0]]})")), Error);
  CHECK_THROWS_AS(operator_from_json(parse_json(R"({"entries": [[1]]})")), Error);
}

TEST_CASE("projector set and formal sum JSON round trip") {
  const ProjectorSet set = equal_overlap_triple(4, 0.3);
  const ProjectorSet back = projector_set_from_json(parse_json(to_json(set).dump()));
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(back[i].op().matrix() == set[i].op().matrix());

  const FormalSum g = gamma_terms(3, 3);
  const Json j = to_json(g);
  CHECK(j["terms"][0]["word"] == Json::array({1}));
  CHECK(formal_sum_from_json(parse_json(j.dump())) == g);
}

TEST_CASE("parse errors carry the byte offset") {
  try {
    parse_json("{\"dim\": 2,, }");
    FAIL("expected schema error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::schema);
    CHECK(std::string(e.what()).find("byte") != std::string::npos);
  }
}

TEST_CASE("report envelope round trip") {
  ReportEnvelope e;
  e.command = "spectrum";
  e.parameters = Json{{"seed", 0}, {"c", 0.4}};
  e.results = Json{{"kernel_dim", 2}};
  e.status = Status::warning;
  e.residuals = {{"a", 1e-15}, {"b", 0.25}};
  const ReportEnvelope back = envelope_from_json(parse_json(to_json(e).dump()));
  CHECK(back == e);
  CHECK(to_string(Status::error) == "error");
  CHECK(status_from_string("ok") == Status::ok);
  CHECK_THROWS_AS(status_from_string("fine"), Error);
}

TEST_CASE("toy model document round trip") {
  ToyModelParams p;
  p.nmax = 4;
  p.fs.labels = {ForbiddenState::s0, ForbiddenState::s2};
  const ToyModel m = build_three_body_toy(p);
  const Json j = to_json(m);
  CHECK(j["kind"] == "toy_model");
  CHECK(toy_params_from_json(j["parameters"]).fs.labels == p.fs.labels);
  const ModelDocument doc = model_from_json(parse_json(j.dump()));
  REQUIRE(doc.hamiltonian.has_value());
  CHECK(doc.hamiltonian->matrix() == m.hamiltonian.matrix());
  for (std::size_t i = 0; i < 3; ++i) CHECK(distance(doc.projectors[i].op(), m.projectors[i].op()) <= 1e-15);
}

TEST_CASE("cli: verify") {
  const Run sym = cli_run({"verify", "--generators", "3", "--order", "4"});
  CHECK(sym.code == cli::kExitOk);
  const Json j = parse_json(sym.out);
  CHECK(j["command"] == "verify");
  CHECK(j["status"] == "ok");
  CHECK(j["results"]["checks"].size() == 4);

  const Run num = cli_run({"verify", "--mode", "numeric", "--order", "3", "--dim", "20", "--seed", "4"});
  CHECK(num.code == cli::kExitOk);
  CHECK(parse_json(num.out)["parameters"]["seed"] == 4);

  const Run bad = cli_run({"verify", "--generators", "0"});
  CHECK(bad.code == cli::kExitUsage);
  CHECK(bad.err.find("--generators") != std::string::npos);

  CHECK(cli_run({"verify", "--mode", "fuzzy"}).code == cli::kExitUsage);
  CHECK(cli_run({}).code == cli::kExitUsage);
  CHECK(cli_run({"frobnicate"}).code == cli::kExitUsage);
  CHECK(cli_run({"--help"}).code == cli::kExitOk);
}

TEST_CASE("cli: spectrum and kernel") {
  const Run ok = cli_run({"spectrum", "--triple-overlap", "0.4", "--dim", "5"});
  CHECK(ok.code == cli::kExitOk);
  const Json j = parse_json(ok.out);
  CHECK(j["results"]["kernel_dim"] == 2);
  CHECK(j["parameters"]["seed"] == 0);

  CHECK(cli_run({"spectrum", "--triple-overlap", "0.6", "--require-convergent"}).code == cli::kExitFailure);
  const Run warn = cli_run({"spectrum", "--triple-overlap", "0.6"});
  CHECK(warn.code == cli::kExitOk);
  CHECK(parse_json(warn.out)["status"] == "warning");
  CHECK(cli_run({"spectrum", "--triple-overlap", "1.5"}).code == cli::kExitUsage);
  CHECK(cli_run({"spectrum", "--random", "--toy"}).code == cli::kExitUsage);
  CHECK(cli_run({"spectrum"}).code == cli::kExitUsage);

  const Run k = cli_run({"kernel", "--random", "--dim", "12", "--generators", "3", "--rank", "2", "--with-vectors"});
  CHECK(k.code == cli::kExitOk);
  const Json kj = parse_json(k.out);
  CHECK(kj["results"]["kernel_dim"] == 6);
  CHECK(kj["results"]["vectors"].size() == 6);
}

TEST_CASE("cli: input files and schema") {
  const fs::path set_file = scratch("set.json");
  write_file(set_file, to_json(equal_overlap_triple(4, 0.2)).dump());
  const Run from_file = cli_run({"spectrum", "--input", set_file.string()});
  CHECK(from_file.code == cli::kExitOk);
  CHECK(parse_json(from_file.out)["results"]["kernel_dim"] == 1);

  const Run schema = cli_run({"schema", set_file.string()});
  CHECK(schema.code == cli::kExitOk);
  CHECK(parse_json(schema.out)["results"]["kind"] == "projector_set");
  CHECK(parse_json(schema.out)["results"]["roundtrip_identical"] == true);

  const fs::path broken = scratch("broken.json");
  write_file(broken, "{\"dim\": 3, \"projectors\": [");
  const Run parse = cli_run({"schema", broken.string()});
  CHECK(parse.code == cli::kExitUsage);
  CHECK(parse.err.find("byte") != std::string::npos);
  CHECK(cli_run({"spectrum", "--input", broken.string()}).code == cli::kExitUsage);

  const fs::path skew = scratch("skew.json");
  write_file(skew, R"({"dim": 2, "entries": [[1.0, 0.5], [0.0, 1.0]]})");
  const Run asym = cli_run({"schema", skew.string()});
  CHECK(asym.code == cli::kExitFailure);
  CHECK(asym.out.find("symmetry_residual") != std::string::npos);

  const fs::path envelope = scratch("envelope.json");
  const Run produced = cli_run({"spectrum", "--triple-overlap", "0.3", "--output", envelope.string()});
  CHECK(produced.code == cli::kExitOk);
  CHECK(produced.out.empty());
  const Run env = cli_run({"schema", envelope.string()});
  CHECK(env.code == cli::kExitOk);
  CHECK(parse_json(env.out)["results"]["kind"] == "envelope");

  CHECK(cli_run({"schema", scratch("missing.json").string()}).code == cli::kExitUsage);
}

TEST_CASE("cli: toy and opp") {
  const fs::path model = scratch("toy.json");
  const Run toy = cli_run({"toy", "--nmax", "6", "--save-model", model.string()});
  CHECK(toy.code == cli::kExitOk);
  CHECK(parse_json(toy.out)["results"]["kernel_dim"] == 10);
  CHECK(cli_run({"toy", "--fs", "2D"}).code == cli::kExitUsage);
  CHECK(cli_run({"toy", "--nmax", "1", "--fs", "2S"}).code == cli::kExitUsage);

  const fs::path tsv = scratch("sweep.tsv");
  const Run opp = cli_run({"opp", "--input", model.string(), "--lambdas", "1e1:1e6:12", "--levels", "2", "--tsv",
                           tsv.string()});
  CHECK(opp.code == cli::kExitOk);
  const std::string table = read_file(tsv);
  CHECK(table.rfind("lambda\tE_0\tE_1\tgap_0\tgap_1\n", 0) == 0);
  CHECK(table.find('\r') == std::string::npos);
  CHECK(std::count(table.begin(), table.end(), '\n') == 13);

  const Run direct = cli_run({"opp", "--toy", "--nmax", "6", "--lambdas", "1e1:1e6:12", "--levels", "2"});
  CHECK(parse_json(direct.out)["results"]["energies"] == parse_json(opp.out)["results"]["energies"]);

  const Run af = cli_run({"opp", "--toy", "--nmax", "6", "--fs", "0S,2S", "--eps", "0.1,0.3,0.6", "--levels", "1"});
  CHECK(af.code == cli::kExitOk);
  CHECK(parse_json(af.out)["results"]["almost_forbidden"]["rows"].size() == 3);

  CHECK(cli_run({"opp", "--triple-overlap", "0.3"}).code == cli::kExitUsage);
  CHECK(cli_run({"opp", "--toy", "--lambdas", "1:2"}).code == cli::kExitUsage);
  CHECK(cli_run({"opp", "--toy", "--lambdas", "5,1"}).code == cli::kExitUsage);
  CHECK(cli_run({"opp", "--toy", "--lambda-units", "furlongs"}).code == cli::kExitUsage);
}

TEST_CASE("cli: output is deterministic and independent of the thread count") {
  const std::vector<std::string> args{"opp", "--toy", "--nmax", "6", "--levels", "2"};
  const Run a = cli_run(args);
  const Run b = cli_run(args);
  CHECK(a.out == b.out);
  std::vector<std::string> threaded{"--threads", "4"};
  threaded.insert(threaded.end(), args.begin(), args.end());
  CHECK(cli_run(threaded).out == a.out);

  const Run r1 = cli_run({"verify", "--mode", "numeric", "--seed", "9", "--order", "2"});
  const Run r2 = cli_run({"verify", "--mode", "numeric", "--seed", "9", "--order", "2"});
  CHECK(r1.out == r2.out);
  CHECK(cli_run({"--threads", "0", "toy"}).code == cli::kExitUsage);
}
