#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rpqp/errors.hpp"
#include "rpqp/instances.hpp"
#include "rpqp/serialization.hpp"

namespace rpqp {
namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("rpqp_test_" + name)).string();
}

TEST(Serialization, InstanceRoundTrip) {
  const RandomQpInstance inst = gen_random_qp({6, 4, -0.5, 8});
  const std::string path = temp_path("roundtrip.json");
  save_instance(path, inst.problem, inst.ball);
  const InstanceData back = load_instance(path);
  std::remove(path.c_str());
  EXPECT_EQ(back.problem.Q, inst.problem.Q);
  EXPECT_EQ(back.problem.c, inst.problem.c);
  EXPECT_EQ(back.problem.A, inst.problem.A);
  EXPECT_EQ(back.problem.b, inst.problem.b);
  EXPECT_EQ(back.problem.p(), 0);
  ASSERT_TRUE(back.ball.has_value());
  EXPECT_EQ(back.ball->center, inst.ball.center);
  EXPECT_EQ(back.ball->radius, inst.ball.radius);
}

TEST(Serialization, FlatAndDiagonalForms) {
  const Json j = Json::parse(R"({
    "n": 2, "m": 1,
    "Q": [1, 2, 2, -3],
    "c": [0.5, 0],
    "A": [1, 1], "b": [2],
    "E": [[1, -1]], "f": [0]
  })");
  const InstanceData d = instance_from_json(j);
  Matrix Q(2, 2);
  Q << 1, 2, 2, -3;
  EXPECT_EQ(d.problem.Q, Q);
  EXPECT_EQ(d.problem.A.rows(), 1);
  EXPECT_EQ(d.problem.E.rows(), 1);
  EXPECT_FALSE(d.ball.has_value());

  const InstanceData diag = instance_from_json(Json::parse(R"({"n": 3, "Q": {"diag": [1, -2, 3]}, "c": [0, 0, 0]})"));
  EXPECT_EQ(diag.problem.Q.diagonal(), Vector(Eigen::Vector3d(1, -2, 3)));
  EXPECT_EQ(diag.problem.m(), 0);
  // diagonal Q is written back in the compact form
  EXPECT_TRUE(instance_to_json(diag.problem)["Q"].is_object());
}

TEST(Serialization, RejectsMalformedInput) {
  EXPECT_THROW(instance_from_json(Json::parse(R"({"n": 2, "Q": [1, 2, 3], "c": [0, 0]})")), DimensionError);
  EXPECT_THROW(instance_from_json(Json::parse(R"({"n": 2, "Q": [[1, 0], [0, 1]]})")), ParseError);
  EXPECT_THROW(instance_from_json(Json::parse(R"({"n": 2, "Q": [[1, 5], [0, 1]], "c": [0, 0]})")), AsymmetryError);
  EXPECT_THROW(instance_from_json(Json::parse(R"({"n": 2, "Q": [[1, "x"], [0, 1]], "c": [0, 0]})")), ParseError);
  EXPECT_THROW(instance_from_json(Json::parse(R"({"n": 1, "m": 2, "Q": [[1]], "c": [0], "A": [[1]], "b": [1]})")),
               DimensionError);
  EXPECT_THROW(load_instance(temp_path("does_not_exist.json")), ParseError);
}

TEST(Serialization, DenseMatrixText) {
  std::istringstream in("# kernel\n1, 2, 3\n4 5 6\n\n7;8;9 # tail\n");
  const Matrix M = parse_dense_matrix(in);
  ASSERT_EQ(M.rows(), 3);
  ASSERT_EQ(M.cols(), 3);
  EXPECT_EQ(M(1, 2), 6.0);
  EXPECT_EQ(M(2, 0), 7.0);
  std::istringstream ragged("1 2\n3\n");
  EXPECT_THROW(parse_dense_matrix(ragged), ParseError);
  std::istringstream junk("1 abc\n");
  EXPECT_THROW(parse_dense_matrix(junk), ParseError);

  const std::string path = temp_path("matrix.json");
  {
    std::ofstream out(path);
    out << "[[1, 2], [3, 4.5]]";
  }
  const Matrix J = load_dense_matrix(path);
  std::remove(path.c_str());
  EXPECT_EQ(J(1, 1), 4.5);
}

TEST(Serialization, DoublesRoundTrip) {
  for (double v : {0.1, -1e-300, 1.0 / 3.0, 123456789.125}) EXPECT_EQ(std::stod(format_double(v)), v);
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
}

TEST(Serialization, BoundReportJson) {
  BoundReport r;
  r.conditions.admissible = true;
  r.conditions.d_min = 3;
  r.conditions.d_max = 9;
  r.cos_theta = -0.2;
  const Json j = to_json(r);
  EXPECT_EQ(j["interval"][0], 3);
  EXPECT_EQ(j["multiplicative_factor"], "multiplicative form inapplicable");
  r.cond_U = 2.0;
  EXPECT_EQ(to_json(r)["multiplicative_factor"], "disabled for scaled runs");
  EXPECT_EQ(to_json(r)["params"]["C_sub"], 1.0);
}

}  // namespace
}  // namespace rpqp
