#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cfl/fourier_lift.hpp"
#include "cfl/io.hpp"

using namespace cfl;

TEST_CASE("17-digit formatting round-trips doubles") {
  std::mt19937_64 rng(71);
  for (int i = 0; i < 200; ++i) {
    const double v = std::ldexp(static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5,
                                static_cast<int>(rng() % 64) - 32);
    CHECK(std::stod(fmt17(v)) == v);
  }
  CHECK(fmt17(0.0) == "0");
  CHECK(fmt17(1.0) == "1");
}

TEST_CASE("complex and vector JSON round trips") {
  const Complex z(0.30000000000000004, -1.7e-300);
  CHECK(complex_from_json(complex_to_json(z)) == z);
  CHECK(complex_from_json(json(2.5)) == Complex(2.5));
  Vec v(3);
  v << Complex(1.0, 2.0), Complex(-0.5), kI;
  Vec w = vec_from_json(vec_to_json(v), 3);
  CHECK((v - w).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(vec_from_json(vec_to_json(v), 2), error);
}

TEST_CASE("system spec round trip is the identity") {
  const std::vector<json> specs = {
      json{{"name", "s"}, {"builtin", {{"kind", "scalar"}, {"a", {0.0, 1.0}}, {"b", {1.0, 0.0}}}}},
      json{{"name", "k3"},
           {"builtin", {{"kind", "kuramoto3"}, {"omega", {0.0, 1.0, -1.0}}, {"K", -3.0}}}},
      json{{"name", "kp"},
           {"builtin", {{"kind", "kuramoto-pair"}, {"omega", {0.0, 1.0}}, {"Ktilde", -1.0}}}},
      json{{"name", "kt"},
           {"builtin",
            {{"kind", "kuramoto-taylor"}, {"omega", {0.0, 1.0}}, {"Ktilde", -1.0}, {"degree", 7}}}},
  };
  for (const json& j : specs) {
    const SystemSpec parsed = parse_system_spec(j);
    const json canon = serialize_system_spec(parsed);
    const SystemSpec reparsed = parse_system_spec(canon);
    CHECK(serialize_system_spec(reparsed) == canon);  // parse o serialize fixed point
  }
}

TEST_CASE("explicit coefficient lists parse to the builtin constructors") {
  const json j = json{{"name", "s"},
                      {"builtin", {{"kind", "scalar"}, {"a", {0.0, 1.0}}, {"b", {1.0, 0.0}}}}};
  const SystemSpec spec = parse_system_spec(j);
  REQUIRE(spec.is_fourier());
  auto direct = scalar_example(kI, 1.0);
  CHECK(spec.fourier().coeffs().size() == direct.coeffs().size());
  for (const auto& [alpha, g] : direct.coeffs()) {
    const Vec* got = spec.fourier().coeff(alpha);
    REQUIRE(got != nullptr);
    CHECK((*got - g).cwiseAbs().maxCoeff() == 0.0);
  }

  // Round trip through the canonical explicit form preserves evaluation.
  const SystemSpec again = parse_system_spec(serialize_system_spec(spec));
  Vec x = Vec::Constant(1, Complex(0.3, 0.2));
  CHECK(std::abs(again.fourier().eval(x)[0] - direct.eval(x)[0]) == 0.0);
}

TEST_CASE("multifreq spec parsing") {
  json j;
  j["name"] = "mf";
  j["type"] = "multifreq";
  j["d"] = 2;
  j["omegas"] = {json::array({1.0, 0.0}), json::array({2.0, 0.0})};
  j["coeffs"] = json::array();
  j["coeffs"].push_back(
      {{"alphas", {std::vector<int>{1, -1}, std::vector<int>{0, 1}}},
       {"g", {json::array({0.5, 0.0}), json::array({0.0, -0.5})}}});
  const SystemSpec spec = parse_system_spec(j);
  REQUIRE(spec.is_multifreq());
  CHECK(spec.multifreq().num_freqs() == 2);
  const SystemSpec again = parse_system_spec(serialize_system_spec(spec));
  CHECK(serialize_system_spec(again) == serialize_system_spec(spec));
}

TEST_CASE("lift JSON export carries the block structure") {
  const Complex a = kI;
  auto lift = fourier_finite_section(scalar_example(a, 1.0), Vec::Zero(1), 3);
  const json j = lift_to_json(lift);
  CHECK(j.at("scheme") == "fourier");
  CHECK(j.at("dimension") == 3);
  CHECK(j.at("layers").size() == 3);
  // Blocks (k, k) and (k, k+1) for k <= 3 survive; all content nonzero.
  REQUIRE(j.at("blocks").size() == 5);
  for (const json& b : j.at("blocks")) {
    const int k = b.at("k").get<int>(), l = b.at("l").get<int>();
    CHECK((l == k || l == k + 1));
    const Complex entry = complex_from_json(b.at("entries")[0][0]);
    const Complex expect = (l == k ? 1.0 : -1.0) * static_cast<double>(k) * a * kI;
    CHECK(entry == expect);
  }
  // The all-ones initial state (x0 = 0).
  for (const json& v : j.at("initial")) CHECK(complex_from_json(v) == Complex(1.0));
}

TEST_CASE("trajectory CSV format") {
  Trajectory traj;
  traj.times = {0.0, 0.5};
  Vec s0(2), s1(2);
  s0 << Complex(1.0, -2.0), Complex(0.25, 0.125);
  s1 << Complex(0.1, 0.2), Complex(-0.3, 1.0 / 3.0);
  traj.states = {s0, s1};
  const std::string csv = trajectory_to_csv(traj);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,re_1,im_1,re_2,im_2");
  std::getline(in, line);
  CHECK(line == "0,1,-2,0.25,0.125");
  std::getline(in, line);
  CHECK(line.substr(0, 4) == "0.5,");
  CHECK(line.find("0.33333333333333331") != std::string::npos);
}

TEST_CASE("surface CSV carries axis values in the first row and column") {
  ErrorSurface surf;
  surf.axis1 = {"theta1_0", -1.0, 1.0, 2};
  surf.axis2 = {"theta2_0", 0.0, 2.0, 3};
  surf.axis1_values = {-1.0, 1.0};
  surf.axis2_values = {0.0, 1.0, 2.0};
  surf.values.resize(2, 3);
  surf.values << -4.0, -3.5, -3.0, -2.5, -2.0, -1.5;
  surf.failed.assign(6, 0);
  const std::string csv = surface_to_csv(surf);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "theta1_0\\theta2_0,0,1,2");
  std::getline(in, line);
  CHECK(line == "-1,-4,-3.5,-3");
  std::getline(in, line);
  CHECK(line == "1,-2.5,-2,-1.5");
}

TEST_CASE("bounds JSON shape") {
  auto rep = fourier_wholerange_bounds(10.0, 10.0, 1.0, Vec::Constant(1, Complex(0.0, 1.5)));
  const json j = bounds_to_json(rep, {1, 2}, {0.0, 1.0});
  CHECK(j.at("scheme") == "fourier-whole");
  CHECK(j.at("admissible") == true);
  CHECK(j.at("horizon") == "inf");
  CHECK(j.at("constants").contains("base"));
  CHECK(j.at("bound_samples").size() == 4);

  auto bad = carleman_bounds(1.0, std::exp(2.0), 5.0);
  const json jb = bounds_to_json(bad);
  CHECK(jb.at("admissible") == false);
  CHECK_FALSE(jb.at("reason").get<std::string>().empty());
  CHECK(jb.at("bound_samples").empty());
}

TEST_CASE("serialization is deterministic") {
  const json j = json{{"name", "k3"},
                      {"builtin", {{"kind", "kuramoto3"}, {"omega", {0.0, 1.0, -1.0}}, {"K", -3.0}}}};
  const SystemSpec spec = parse_system_spec(j);
  CHECK(serialize_system_spec(spec).dump() == serialize_system_spec(spec).dump());
  auto lift = fourier_finite_section(spec.fourier(), Vec::Zero(3), 4);
  CHECK(lift_to_json(lift).dump() == lift_to_json(lift).dump());
}

TEST_CASE("invalid specs are rejected") {
  CHECK_THROWS_AS(parse_system_spec(json::array()), error);
  CHECK_THROWS_AS(parse_system_spec(json{{"type", "nope"}, {"d", 1}}), error);
  CHECK_THROWS_AS(parse_system_spec(json{{"builtin", {{"kind", "nope"}}}}), error);
  json short_alpha{{"type", "fourier"},
                   {"d", 2},
                   {"coeffs", json::array({json{{"alpha", {1}}, {"g", json::array()}}})}};
  CHECK_THROWS_AS(parse_system_spec(short_alpha), error);
}
