#include "rpqp/serialization.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "rpqp/errors.hpp"

namespace rpqp {

namespace {

double number(const Json& j, const char* what) {
  if (!j.is_number()) throw ParseError(std::string(what) + ": expected a number");
  return j.get<double>();
}

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json matrix_to_json(const Matrix& M) {
  Json out = Json::array();
  for (Index i = 0; i < M.rows(); ++i) out.push_back(vector_to_json(M.row(i).transpose()));
  return out;
}

Vector vector_from_json(const Json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + ": expected a list");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = number(j[i], what);
  return v;
}

Matrix matrix_from_json(const Json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + ": expected a list of rows");
  if (j.empty()) return Matrix(0, 0);
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Matrix M(static_cast<Index>(j.size()), static_cast<Index>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      throw ParseError(std::string(what) + ": rows must be lists of equal length");
    for (std::size_t k = 0; k < cols; ++k)
      M(static_cast<Index>(i), static_cast<Index>(k)) = number(j[i][k], what);
  }
  return M;
}

namespace {

// Nested rows, or a flat row-major list of rows * cols entries.
Matrix shaped_matrix(const Json& j, Index rows, Index cols, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + ": expected a list");
  if (rows == 0) {
    if (!j.empty()) throw DimensionError(std::string(what) + ": expected no rows");
    return Matrix(0, cols);
  }
  if (!j.empty() && j[0].is_array()) {
    Matrix M = matrix_from_json(j, what);
    if (M.rows() != rows || M.cols() != cols)
      throw DimensionError(std::string(what) + ": expected " + std::to_string(rows) + "x" +
                           std::to_string(cols));
    return M;
  }
  if (static_cast<Index>(j.size()) != rows * cols)
    throw DimensionError(std::string(what) + ": flat list must hold " + std::to_string(rows * cols) +
                         " entries");
  Matrix M(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index k = 0; k < cols; ++k) M(i, k) = number(j[static_cast<std::size_t>(i * cols + k)], what);
  return M;
}

Index count(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer() || j[key].get<long long>() < 0)
    throw ParseError(std::string("instance: '") + key + "' must be a non-negative integer");
  return static_cast<Index>(j[key].get<long long>());
}

}  // namespace

InstanceData instance_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("instance: top level must be an object");
  for (const char* key : {"Q", "c"})
    if (!j.contains(key)) throw ParseError(std::string("instance: missing '") + key + "'");
  const Index n = count(j, "n");
  const Index m = j.contains("m") ? count(j, "m") : (j.contains("b") ? static_cast<Index>(j["b"].size()) : 0);

  InstanceData out;
  QpProblem& p = out.problem;
  const Json& q = j["Q"];
  if (q.is_object()) {
    if (!q.contains("diag")) throw ParseError("instance: Q object needs 'diag'");
    const Vector diag = vector_from_json(q["diag"], "Q.diag");
    if (diag.size() != n) throw DimensionError("instance: |Q.diag| != n");
    p.Q = diag.asDiagonal();
  } else {
    p.Q = shaped_matrix(q, n, n, "Q");
  }
  p.c = vector_from_json(j["c"], "c");
  p.A = j.contains("A") ? shaped_matrix(j["A"], m, n, "A") : Matrix(0, n);
  p.b = j.contains("b") ? vector_from_json(j["b"], "b") : Vector(0);
  if (p.A.rows() != m || p.b.size() != m) throw DimensionError("instance: A and b must have m rows");
  if (j.contains("E") && !j["E"].is_null()) {
    const Index rows = j.contains("f") ? static_cast<Index>(j["f"].size()) : 0;
    p.E = shaped_matrix(j["E"], rows, n, "E");
    p.f = vector_from_json(j["f"], "f");
  } else {
    p.E = Matrix(0, n);
    p.f = Vector(0);
  }
  p.validate();
  if (j.contains("ball") && !j["ball"].is_null()) {
    const Json& b = j["ball"];
    if (!b.is_object() || !b.contains("center") || !b.contains("radius"))
      throw ParseError("instance: ball needs 'center' and 'radius'");
    BallInfo ball;
    ball.center = vector_from_json(b["center"], "ball.center");
    ball.radius = number(b["radius"], "ball.radius");
    if (ball.center.size() != n) throw DimensionError("instance: |ball.center| != n");
    out.ball = ball;
  }
  return out;
}

Json instance_to_json(const QpProblem& p, const std::optional<BallInfo>& ball) {
  Json j;
  j["n"] = p.n();
  j["m"] = p.m();
  const bool diagonal = p.Q.isDiagonal(0.0);
  j["Q"] = diagonal ? Json{{"diag", vector_to_json(p.Q.diagonal())}} : matrix_to_json(p.Q);
  j["c"] = vector_to_json(p.c);
  j["A"] = matrix_to_json(p.A);
  j["b"] = vector_to_json(p.b);
  if (p.has_equalities()) {
    j["E"] = matrix_to_json(p.E);
    j["f"] = vector_to_json(p.f);
  }
  if (ball) j["ball"] = {{"center", vector_to_json(ball->center)}, {"radius", ball->radius}};
  return j;
}

InstanceData load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open instance file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError("instance '" + path + "': " + e.what());
  }
  return instance_from_json(j);
}

void save_instance(const std::string& path, const QpProblem& p, const std::optional<BallInfo>& ball) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << instance_to_json(p, ball).dump(1) << '\n';
}

Matrix parse_dense_matrix(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    for (char& ch : line)
      if (ch == ',' || ch == ';') ch = ' ';
    std::istringstream ls(line);
    std::vector<double> row;
    std::string tok;
    while (ls >> tok) {
      double v = 0.0;
      const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        throw ParseError("matrix: bad number '" + tok + "'");
      row.push_back(v);
    }
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size()) throw ParseError("matrix: ragged rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return Matrix(0, 0);
  Matrix M(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t k = 0; k < rows[i].size(); ++k) M(static_cast<Index>(i), static_cast<Index>(k)) = rows[i][k];
  return M;
}

Matrix load_dense_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open matrix file '" + path + "'");
  const int first = (in >> std::ws).peek();
  if (first == '[') {
    try {
      return matrix_from_json(Json::parse(in), path.c_str());
    } catch (const Json::parse_error& e) {
      throw ParseError("matrix '" + path + "': " + e.what());
    }
  }
  return parse_dense_matrix(in);
}

Json to_json(const BoundParams& p) {
  Json j = {{"eps", p.eps},       {"eps1", p.eps1},     {"eps2", p.eps2}, {"eps3", p.eps3},
            {"eps4", p.eps4},     {"delta1", p.delta1}, {"delta2", p.delta2},
            {"C0", p.C0},         {"C1", p.C1},         {"C_sub", p.C_sub}, {"D", p.D}};
  j["R"] = p.R ? Json(*p.R) : Json(nullptr);
  return j;
}

Json to_json(const DConditions& c) {
  Json j = {{"d_lower_i", c.d_lower_i},
            {"d_lower_ii", c.d_lower_ii},
            {"lower_i", finite_or_null(c.lower_i)},
            {"lower_ii", finite_or_null(c.lower_ii)},
            {"d_upper_iii", finite_or_null(c.upper_iii)},
            {"admissible", c.admissible}};
  j["interval"] = c.admissible ? Json::array({c.d_min, c.d_max}) : Json(nullptr);
  if (c.lower_ii_k_free) j["lower_ii_k_free"] = finite_or_null(*c.lower_ii_k_free);
  return j;
}

Json to_json(const BoundReport& r) {
  Json j = to_json(r.conditions);
  j["additive_bound"] = finite_or_null(r.additive_bound);
  j["additive_gap"] = finite_or_null(r.additive_gap);
  if (r.cond_U) {
    j["multiplicative_factor"] = "disabled for scaled runs";
  } else if (r.multiplicative_factor) {
    j["multiplicative_factor"] = finite_or_null(*r.multiplicative_factor);
  } else if (r.cos_theta) {
    j["multiplicative_factor"] = "multiplicative form inapplicable";
  } else {
    j["multiplicative_factor"] = nullptr;
  }
  if (r.cos_theta) j["cos_theta"] = *r.cos_theta;
  j["probability_floor"] = r.probability_floor;
  j["inputs"] = {{"stable_rank", r.stable_rank}, {"effective_rank", r.effective_rank},
                 {"m", r.m},                     {"rank_Q", r.rank_Q},
                 {"r", r.r},                     {"frob_Q", r.frob_Q},
                 {"linear_norm", r.linear_norm}, {"y_norm", r.y_norm},
                 {"y_norm_source", r.y_norm_source}, {"opt_crp", r.opt_crp}};
  j["inputs"]["cond_U"] = r.cond_U ? Json(*r.cond_U) : Json(nullptr);
  j["params"] = to_json(r.params);
  return j;
}

}  // namespace rpqp
