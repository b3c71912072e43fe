#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "scenarios.hpp"
#include "secantlab/io.hpp"

using namespace secantlab;
using io::Json;

namespace {

std::string error_of(const auto& fn) {
  try {
    fn();
  } catch (const InputError& e) {
    return e.what();
  }
  return {};
}

bool same_points(const std::vector<ComplexPoint>& a, const std::vector<ComplexPoint>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

}  // namespace

TEST_CASE("period matrices round-trip exactly") {
  CounterRng rng(2);
  for (int g = 1; g <= 3; ++g) {
    const PeriodMatrix pm = oracle::random_period_matrix(rng, g);
    const Json j = io::to_json(pm);
    const PeriodMatrix back = io::period_matrix_from_json(Json::parse(j.dump()), "tau");
    CHECK(back == pm);
  }
}

TEST_CASE("secant configurations round-trip with and without coefficients") {
  const FayResult fay = scenario::fay(1, 2);
  const SecantConfiguration& cfg = fay.config;
  REQUIRE(cfg.alpha);
  const SecantConfiguration back = io::secant_from_json(Json::parse(io::to_json(cfg).dump()), cfg.pm, "cfg");
  CHECK(back.m == cfg.m);
  CHECK(same_points(back.points, cfg.points));
  CHECK(back.zeta == cfg.zeta);
  CHECK(back.residual == cfg.residual);
  CHECK(*back.alpha == *cfg.alpha);

  SecantConfiguration bare = cfg;
  bare.residual.reset();
  bare.alpha.reset();
  const Json j = io::to_json(bare);
  CHECK(j["residual"].is_null());
  CHECK(j["alpha"].is_null());
  const SecantConfiguration back2 = io::secant_from_json(j, cfg.pm, "cfg");
  CHECK_FALSE(back2.residual);
  CHECK_FALSE(back2.alpha);
}

TEST_CASE("hierarchy states round-trip field for field") {
  const auto t = scenario::tangent(1, 2);
  HierarchyState st = run_hierarchy(scenario::seed_state(t, 3), 3, hierarchy_samples(t.pm, 24, 1));
  const HierarchyState back = io::hierarchy_from_json(Json::parse(io::to_json(st).dump()), t.pm, "state");
  CHECK(back.m == st.m);
  CHECK(back.u == st.u);
  CHECK(same_points(back.b, st.b));
  CHECK(back.order == st.order);
  CHECK(same_points(back.W, st.W));
  CHECK(back.alpha1 == st.alpha1);
  CHECK(back.alphaj == st.alphaj);
  CHECK(back.per_order_residuals == st.per_order_residuals);
  CHECK(back.per_order_ranks == st.per_order_ranks);
  CHECK(io::to_json(back).dump() == io::to_json(st).dump());
}

TEST_CASE("projective points round-trip") {
  CounterRng rng(5);
  const PeriodMatrix pm = oracle::random_period_matrix(rng, 2);
  const ProjectivePoint p = kummer(SecondOrderBasis(pm), oracle::random_point(rng, 2, 0.5));
  const ProjectivePoint q = io::projective_from_json(Json::parse(io::to_json(p).dump()), "k");
  CHECK(q.coords() == p.coords());
}

TEST_CASE("parse errors name the path and field") {
  const PeriodMatrix pm = scenario::fay(1, 2).config.pm;
  Json cfg = io::to_json(scenario::fay(1, 2).config);

  Json missing = cfg;
  missing.erase("zeta");
  CHECK(error_of([&] { io::secant_from_json(missing, pm, "in.json"); }).find("in.json: missing field 'zeta'") !=
        std::string::npos);

  Json bad = cfg;
  bad["points"][1]["re"][0] = "x";
  CHECK(error_of([&] { io::secant_from_json(bad, pm, "in.json"); }).find("in.json.points[1].re[0]") !=
        std::string::npos);

  Json short_point = cfg;
  short_point["zeta"]["re"] = Json::array({0.1});
  short_point["zeta"]["im"] = Json::array({0.1});
  CHECK(error_of([&] { io::secant_from_json(short_point, pm, "in.json"); }).find("in.json.zeta") !=
        std::string::npos);

  Json tau = io::to_json(pm);
  tau["tau_im"][0][0] = -1.0;
  CHECK_FALSE(error_of([&] { io::period_matrix_from_json(tau, "tau.json"); }).empty());
  tau = io::to_json(pm);
  tau["tau_re"].erase(1);
  CHECK(error_of([&] { io::period_matrix_from_json(tau, "tau.json"); }).find("tau.json.tau_re") !=
        std::string::npos);
}

TEST_CASE("unreadable and malformed files are input errors") {
  const auto dir = std::filesystem::temp_directory_path() / "secantlab_test_io";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "broken.json").string();
  std::ofstream(path) << "{\"g\": 2, ";
  CHECK(error_of([&] { io::read_json_file(path); }).find("broken.json: malformed JSON") != std::string::npos);
  CHECK(error_of([&] { io::read_json_file((dir / "absent.json").string()); }).find("cannot open") !=
        std::string::npos);
}

TEST_CASE("CSV tables use a header row and round-trippable numbers") {
  io::CsvTable t({"order", "residual"});
  t.add_row({"1", io::format_number(0.1)});
  t.add_row({"2", io::format_number(1.0 / 3.0)});
  CHECK(t.str() == "order,residual\n1,0.10000000000000001\n2,0.33333333333333331\n");
  CHECK(std::strtod(io::format_number(1.0 / 3.0).c_str(), nullptr) == 1.0 / 3.0);
  CHECK_THROWS_AS(t.add_row({"3"}), InputError);
}
