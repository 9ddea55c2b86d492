#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "rpqp/bounds.hpp"
#include "rpqp/model.hpp"
#include "rpqp/types.hpp"

namespace rpqp {

using Json = nlohmann::json;

/// Instance file contents: {n, m, Q, c, A, b, E?, f?, ball?: {center, radius}}.
/// Q is either a row-major matrix (nested rows or one flat list) or {"diag": [...]}.
struct InstanceData {
  QpProblem problem;
  std::optional<BallInfo> ball;
};

/// Throws ParseError on malformed input and DimensionError on size mismatches.
InstanceData instance_from_json(const Json& j);
Json instance_to_json(const QpProblem& p, const std::optional<BallInfo>& ball = std::nullopt);

InstanceData load_instance(const std::string& path);
void save_instance(const std::string& path, const QpProblem& p,
                   const std::optional<BallInfo>& ball = std::nullopt);

/// Dense matrix from JSON (nested rows) or plain text (one row per line,
/// comma or whitespace separated; '#' starts a comment).
Matrix load_dense_matrix(const std::string& path);
Matrix parse_dense_matrix(std::istream& in);

Json matrix_to_json(const Matrix& M);
Json vector_to_json(const Vector& v);
Matrix matrix_from_json(const Json& j, const char* what);
Vector vector_from_json(const Json& j, const char* what);

Json to_json(const BoundParams& p);
Json to_json(const DConditions& c);
Json to_json(const BoundReport& r);

/// Shortest text that reads back to the same double ("nan"/"inf" spelled out).
std::string format_double(double v);

}  // namespace rpqp
