#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "subspace/invariant_fiber.hpp"
#include "subspace/io.hpp"
#include "subspace/union_solver.hpp"
#include "test_util.hpp"

using namespace subspace;
using testutil::random_vectors;
using testutil::real_vector;

TEST_CASE("scalar parsing") {
  CHECK(io::parse_scalar("1.5") == Complex(1.5, 0.0));
  CHECK(io::parse_scalar("-2e-3") == Complex(-2e-3, 0.0));
  CHECK(io::parse_scalar("1+2i") == Complex(1.0, 2.0));
  CHECK(io::parse_scalar("1-2i") == Complex(1.0, -2.0));
  CHECK(io::parse_scalar("-3.5e-2-0.25i") == Complex(-3.5e-2, -0.25));
  CHECK(io::parse_scalar("2i") == Complex(0.0, 2.0));
  CHECK(io::parse_scalar("i") == Complex(0.0, 1.0));
  CHECK(io::parse_scalar("-i") == Complex(0.0, -1.0));
  CHECK(io::parse_scalar("1+i") == Complex(1.0, 1.0));
  CHECK(io::parse_scalar(" 0.5 ") == Complex(0.5, 0.0));
  CHECK_THROWS_AS(io::parse_scalar("abc"), input_error);
  CHECK_THROWS_AS(io::parse_scalar(""), input_error);
  CHECK_THROWS_AS(io::parse_scalar("1+2j"), input_error);
}

TEST_CASE("dataset parsing") {
  const DataSet f = io::parse_dataset_text("1,0\n0,1\n");
  REQUIRE(f.size() == 2);
  REQUIRE(f.dimension() == 2);
  CHECK(f.vectors()[0][0] == Complex(1.0));
  CHECK(f.vectors()[1][1] == Complex(1.0));

  const DataSet g = io::parse_dataset_text("# dim=2\n1+2i,0\n");
  REQUIRE(g.size() == 1);
  CHECK(g.vectors()[0][0] == Complex(1.0, 2.0));
}

TEST_CASE("dataset parsing errors carry locations") {
  try {
    io::parse_dataset_text("1,2\n3\n");
    FAIL("expected a parse error");
  } catch (const input_error& e) {
    CHECK(std::string(e.what()).find("row 2") != std::string::npos);
  }
  try {
    io::parse_dataset_text("1,2\n3,x\n");
    FAIL("expected a parse error");
  } catch (const input_error& e) {
    const std::string message = e.what();
    CHECK(message.find("row 2") != std::string::npos);
    CHECK(message.find("column 2") != std::string::npos);
  }
  CHECK_THROWS_AS(io::parse_dataset_text(""), input_error);
  CHECK_THROWS_AS(io::parse_dataset_text("# only a comment\n"), input_error);
}

TEST_CASE("union report round trip") {
  std::mt19937_64 rng(401);
  const DataSet f = DataSet(random_vectors(6, 3, rng));
  SolverConfig cfg;
  cfg.restarts = 4;
  cfg.seed = 7;
  const FitReport report = k_subspaces(f, 2, 1, cfg);

  const io::json j = io::report_to_json(report);
  const FitReport back = io::report_from_json(j);

  CHECK(back.cost == report.cost);
  CHECK(back.seed == report.seed);
  CHECK(back.partition.assignment == report.partition.assignment);
  CHECK(back.trace == report.trace);
  const auto& original = std::get<UnionModel>(report.model);
  const auto& restored = std::get<UnionModel>(back.model);
  REQUIRE(restored.count() == original.count());
  for (std::size_t i = 0; i < original.count(); ++i) {
    CHECK(max_abs(restored.subspaces()[i].projector_matrix() -
                  original.subspaces()[i].projector_matrix()) <= 1e-12);
  }
  CHECK(std::abs(cost_union(f, restored) - report.cost) <= 1e-10 * (1.0 + f.energy()));
}

TEST_CASE("invariant report round trip") {
  std::mt19937_64 rng(409);
  const DataSet f = DataSet(random_vectors(3, 6, rng));
  const CyclicAction action{3, 2};
  const auto [model, report] = best_invariant(f, action, 1);

  const FitReport back = io::report_from_json(io::report_to_json(report));
  const auto& restored = std::get<FiberedModel>(back.model);
  CHECK(restored.action().group_order == 3);
  CHECK(restored.action().block_size == 2);

  const FiberData data = fiber_decompose(f, action);
  double rescored = 0.0;
  for (std::size_t chi = 0; chi < 3; ++chi)
    rescored += cost_single(data.fibers[chi], restored.fibers()[chi]);
  CHECK(std::abs(rescored - report.cost) <= 1e-10 * (1.0 + f.energy()));
}

TEST_CASE("report serialization is deterministic and timestamp-aware") {
  std::mt19937_64 rng(419);
  const DataSet f = DataSet(random_vectors(5, 2, rng));
  SolverConfig cfg;
  cfg.restarts = 2;
  const FitReport report = k_subspaces(f, 2, 1, cfg);

  const std::string a = io::report_to_json(report).dump(2);
  const std::string b = io::report_to_json(report).dump(2);
  CHECK(a == b);
  CHECK(a.find("timestamp") == std::string::npos);

  const std::string with_time = io::report_to_json(report, "2026-01-01T00:00:00Z").dump(2);
  CHECK(with_time.find("\"timestamp\"") != std::string::npos);
}

TEST_CASE("scan and trace serialization shapes") {
  const lab::AttainmentScan scan = lab::lines_plane_scan({0.0, 1.0, 3.0});
  const io::json sj = io::scan_to_json(scan);
  CHECK(sj.at("family") == "lines-plane");
  CHECK(sj.at("costs").size() == 3);
  CHECK(sj.at("external_minimizer_cost").get<double>() <= 1e-12);

  const std::string csv = io::scan_to_csv(scan);
  CHECK(csv.rfind("parameter,cost\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);

  const lab::WeakConvergenceTrace trace = lab::weak_limit_trace(32, {3, 4, 5});
  const io::json tj = io::trace_to_json(trace);
  CHECK(tj.at("truncation") == 32);
  CHECK(tj.at("probe_residuals").size() == 3);
  const std::string tcsv = io::trace_to_csv(trace);
  CHECK(tcsv.rfind("index,residual\n", 0) == 0);
}

TEST_CASE("model json rejects malformed input") {
  io::json j;
  j["type"] = "unknown";
  CHECK_THROWS_AS(io::model_from_json(j), input_error);
}
