#pragma once

// JSON and TSV formats shared by the library and the command-line tool.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "paulikern/models.hpp"
#include "paulikern/operator.hpp"
#include "paulikern/opp.hpp"
#include "paulikern/projector_algebra.hpp"
#include "paulikern/words.hpp"

namespace paulikern {

using Json = nlohmann::ordered_json;

// Operator: {"dim": n, "entries": [[row 0], [row 1], ...]}
Json to_json(const Operator& op);
Operator operator_from_json(const Json& j);

// ProjectorSet: {"dim": n, "projectors": [{"span": [[v0], [v1], ...]}, ...]}
// Spans that are not orthonormal are orthonormalized on read.
Json to_json(const ProjectorSet& set);
ProjectorSet projector_set_from_json(const Json& j);

// FormalSum: {"terms": [{"word": [1, 2], "coeff": -1}, ...]}
Json to_json(const FormalSum& s);
FormalSum formal_sum_from_json(const Json& j);

Json to_json(const ToyModelParams& p);
ToyModelParams toy_params_from_json(const Json& j);

// Model: ProjectorSet fields plus "kind", "parameters", "hamiltonian",
// "basis_labels".
Json to_json(const ToyModel& model);

struct ModelDocument {
  ProjectorSet projectors;
  std::optional<Operator> hamiltonian;
};

/// Accepts a bare ProjectorSet document or a model document.
ModelDocument model_from_json(const Json& j);

Json to_json(const SpectrumReport& r);
Json to_json(const KernelBasis& k, bool with_vectors);
Json to_json(const Theorem1Report& r);
Json to_json(const Theorem2Report& r);
Json to_json(const CommutationReport& r);
Json to_json(const OverlapStatistics& s);
Json to_json(const OppSweepResult& r);
Json to_json(const AlmostForbiddenReport& r);

/// Header row "lambda E_0 .. E_{k-1} gap_0 .. gap_{k-1}", tab separated, LF.
std::string sweep_to_tsv(const OppSweepResult& r);
std::string almost_forbidden_to_tsv(const AlmostForbiddenReport& r);

enum class Status { ok, warning, error };

std::string to_string(Status s);
Status status_from_string(const std::string& s);

struct ReportEnvelope {
  std::string command;
  Json parameters = Json::object();
  Json results = Json::object();
  Status status = Status::ok;
  std::vector<std::pair<std::string, double>> residuals;

  friend bool operator==(const ReportEnvelope&, const ReportEnvelope&) = default;
};

Json to_json(const ReportEnvelope& e);
ReportEnvelope envelope_from_json(const Json& j);

/// Parses text, turning syntax errors into Error(schema) that carries the
/// byte offset.
Json parse_json(const std::string& text);

}  // namespace paulikern
