#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>

#include <json.hpp>

#include "cfl/bounds.hpp"
#include "cfl/carleman.hpp"
#include "cfl/core.hpp"
#include "cfl/fourier_system.hpp"
#include "cfl/lifted_system.hpp"
#include "cfl/ode.hpp"
#include "cfl/sweep.hpp"

namespace cfl {

using json = nlohmann::json;

/// 17 significant digits: the shortest fixed width that round-trips doubles.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  require(j.is_array() && (j.size() == 1 || j.size() == 2), "invalid-argument",
          "complex values must be [re, im]");
  return Complex(j[0].get<double>(), j.size() == 2 ? j[1].get<double>() : 0.0);
}

inline json vec_to_json(const Vec& v) {
  json out = json::array();
  for (Eigen::Index j = 0; j < v.size(); ++j) out.push_back(complex_to_json(v[j]));
  return out;
}

inline Vec vec_from_json(const json& j, int expected_size = -1) {
  require(j.is_array(), "invalid-argument", "expected an array of complex values");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = complex_from_json(j[i]);
  if (expected_size >= 0)
    require(v.size() == expected_size, "invalid-argument", "vector length mismatch");
  return v;
}

/// Parsed system specification: an explicit Fourier / multi-frequency
/// coefficient list or one of the builtin families expanded to it.
/// kuramoto-taylor expands to a Maclaurin table (monomial lifting only).
struct SystemSpec {
  std::string name;
  std::variant<MaclaurinTable, FourierSystem, MultiFreqSystem> system;

  bool is_fourier() const { return std::holds_alternative<FourierSystem>(system); }
  bool is_multifreq() const { return std::holds_alternative<MultiFreqSystem>(system); }
  bool is_taylor() const { return std::holds_alternative<MaclaurinTable>(system); }
  const FourierSystem& fourier() const { return std::get<FourierSystem>(system); }
  const MultiFreqSystem& multifreq() const { return std::get<MultiFreqSystem>(system); }
  const MaclaurinTable& taylor() const { return std::get<MaclaurinTable>(system); }

  int dim() const {
    if (is_fourier()) return fourier().dim();
    if (is_multifreq()) return multifreq().dim();
    return taylor().d;
  }
};

inline SystemSpec parse_system_spec(const json& j) {
  require(j.is_object(), "invalid-argument", "system spec must be a JSON object");
  SystemSpec spec;
  spec.name = j.value("name", "");
  if (j.contains("builtin")) {
    const json& b = j.at("builtin");
    const std::string kind = b.at("kind").get<std::string>();
    if (kind == "scalar") {
      spec.system = scalar_example(complex_from_json(b.value("a", json::array({1.0, 0.0}))),
                                   complex_from_json(b.value("b", json::array({1.0, 0.0}))));
    } else if (kind == "kuramoto3") {
      const auto w = b.value("omega", std::vector<double>{0.0, 0.0, 0.0});
      require(w.size() == 3, "invalid-argument", "kuramoto3 needs 3 frequencies");
      spec.system = kuramoto_analytic(Eigen::Vector3d(w[0], w[1], w[2]), b.value("K", -3.0));
    } else if (kind == "kuramoto-pair") {
      const auto w = b.value("omega", std::vector<double>{0.0, 0.0});
      require(w.size() == 2, "invalid-argument", "kuramoto-pair needs 2 frequencies");
      spec.system = kuramoto_pairfield(w[0], w[1], b.value("Ktilde", -1.0));
    } else if (kind == "kuramoto-taylor") {
      const auto w = b.value("omega", std::vector<double>{0.0, 0.0});
      require(w.size() == 2, "invalid-argument", "kuramoto-taylor needs 2 frequencies");
      spec.system = kuramoto_taylor(w[0], w[1], b.value("Ktilde", -1.0), b.value("degree", 11));
    } else {
      fail("invalid-argument", "unknown builtin '" + kind + "'");
    }
    return spec;
  }
  const std::string type = j.at("type").get<std::string>();
  const int d = j.at("d").get<int>();
  if (type == "fourier") {
    FourierSystem sys(d);
    for (const json& c : j.at("coeffs")) {
      const auto alpha = c.at("alpha").get<std::vector<int>>();
      require(static_cast<int>(alpha.size()) == d, "invalid-argument", "alpha length mismatch");
      sys.add(MultiIndex(alpha), vec_from_json(c.at("g"), d));
    }
    spec.system = std::move(sys);
  } else if (type == "multifreq") {
    std::vector<Complex> omegas;
    for (const json& w : j.at("omegas")) omegas.push_back(complex_from_json(w));
    MultiFreqSystem sys(d, omegas);
    const int L = sys.num_freqs();
    for (const json& c : j.at("coeffs")) {
      const json& alphas = c.at("alphas");
      require(static_cast<int>(alphas.size()) == L, "invalid-argument",
              "coefficient needs one multi-index per frequency");
      std::vector<int> key;
      key.reserve(static_cast<std::size_t>(L) * d);
      for (const json& a : alphas) {
        const auto al = a.get<std::vector<int>>();
        require(static_cast<int>(al.size()) == d, "invalid-argument", "alpha length mismatch");
        key.insert(key.end(), al.begin(), al.end());
      }
      sys.add(MultiIndex(std::move(key)), vec_from_json(c.at("g"), d));
    }
    spec.system = std::move(sys);
  } else if (type == "taylor") {
    MaclaurinTable table;
    table.d = d;
    table.max_order = j.at("max_order").get<int>();
    for (const json& c : j.at("coeffs")) {
      const auto beta = c.at("beta").get<std::vector<int>>();
      require(static_cast<int>(beta.size()) == d, "invalid-argument", "beta length mismatch");
      table.f.emplace(MultiIndex(beta), vec_from_json(c.at("f"), d));
    }
    spec.system = std::move(table);
  } else {
    fail("invalid-argument", "unknown system type '" + type + "'");
  }
  return spec;
}

/// Canonical serialized form: builtins are expanded to their explicit
/// coefficient lists, so parse -> serialize -> parse is the identity.
inline json serialize_system_spec(const SystemSpec& spec) {
  json out;
  out["name"] = spec.name;
  if (spec.is_fourier()) {
    const FourierSystem& sys = spec.fourier();
    out["type"] = "fourier";
    out["d"] = sys.dim();
    json coeffs = json::array();
    for (const auto& [alpha, g] : sys.coeffs())
      coeffs.push_back({{"alpha", alpha.entries()}, {"g", vec_to_json(g)}});
    out["coeffs"] = std::move(coeffs);
  } else if (spec.is_multifreq()) {
    const MultiFreqSystem& sys = spec.multifreq();
    out["type"] = "multifreq";
    out["d"] = sys.dim();
    json omegas = json::array();
    for (Complex w : sys.omegas()) omegas.push_back(complex_to_json(w));
    out["omegas"] = std::move(omegas);
    json coeffs = json::array();
    for (const auto& [key, g] : sys.coeffs()) {
      json alphas = json::array();
      for (int l = 0; l < sys.num_freqs(); ++l)
        alphas.push_back(std::vector<int>(key.entries().begin() + l * sys.dim(),
                                          key.entries().begin() + (l + 1) * sys.dim()));
      coeffs.push_back({{"alphas", std::move(alphas)}, {"g", vec_to_json(g)}});
    }
    out["coeffs"] = std::move(coeffs);
  } else {
    const MaclaurinTable& table = spec.taylor();
    out["type"] = "taylor";
    out["d"] = table.d;
    out["max_order"] = table.max_order;
    json coeffs = json::array();
    for (const auto& [beta, fb] : table.f)
      coeffs.push_back({{"beta", beta.entries()}, {"f", vec_to_json(fb)}});
    out["coeffs"] = std::move(coeffs);
  }
  return out;
}

/// Block-indexed dense matrix export of a lifted system. Structurally zero
/// blocks are omitted; entries are [re, im] pairs in row-major block arrays.
inline json lift_to_json(const LiftedSystem& lift) {
  json out;
  out["scheme"] = scheme_name(lift.scheme);
  out["d"] = lift.basis.dim();
  out["order"] = lift.basis.max_order();
  out["dimension"] = lift.dimension();
  json layers = json::array();
  for (int k = 1; k <= lift.basis.max_order(); ++k)
    layers.push_back({{"k", k},
                      {"offset", lift.basis.layer_offset(k)},
                      {"size", lift.basis.layer_size(k)}});
  out["layers"] = std::move(layers);
  json blocks = json::array();
  for (int k = 1; k <= lift.basis.max_order(); ++k)
    for (int l = 1; l <= lift.basis.max_order(); ++l) {
      const auto b = lift.block(k, l);
      if (b.isZero(0.0)) continue;
      json rows = json::array();
      for (Eigen::Index r = 0; r < b.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < b.cols(); ++c) row.push_back(complex_to_json(b(r, c)));
        rows.push_back(std::move(row));
      }
      blocks.push_back({{"k", k}, {"l", l}, {"entries", std::move(rows)}});
    }
  out["blocks"] = std::move(blocks);
  out["inhomogeneous"] = vec_to_json(lift.inhomogeneous);
  out["initial"] = vec_to_json(lift.initial);
  return out;
}

/// Trajectory CSV: header t,re_1,im_1,...,re_n,im_n and one row per sample.
inline std::string trajectory_to_csv(const Trajectory& traj) {
  std::ostringstream out;
  const int n = traj.dim();
  out << "t";
  for (int j = 1; j <= n; ++j) out << ",re_" << j << ",im_" << j;
  out << "\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    out << fmt17(traj.times[i]);
    for (int j = 0; j < n; ++j)
      out << ',' << fmt17(traj.states[i][j].real()) << ',' << fmt17(traj.states[i][j].imag());
    out << "\n";
  }
  return out.str();
}

inline json bounds_to_json(const BoundsReport& rep, const std::vector<int>& sample_orders = {},
                           const std::vector<double>& sample_times = {}) {
  json out;
  out["scheme"] = bound_scheme_name(rep.scheme);
  out["admissible"] = rep.admissible;
  out["reason"] = rep.reason;
  if (rep.admissible)
    out["horizon"] = std::isinf(rep.horizon) ? json("inf") : json(rep.horizon);
  json constants;
  constants["D"] = rep.D;
  constants["R"] = rep.R;
  if (rep.mu != 0.0) constants["mu"] = rep.mu;
  switch (rep.scheme) {
    case BoundScheme::carleman:
      constants["x0_infnorm"] = rep.x0_infnorm;
      break;
    case BoundScheme::fourier_short:
      constants["exp_ix0_infnorm"] = rep.w0_inf;
      constants["C0"] = rep.prefactor;
      break;
    case BoundScheme::fourier_whole:
      constants["exp_ix0_l2norm"] = rep.w0_l2;
      constants["base"] = rep.base;
      break;
    case BoundScheme::multifreq:
      constants["max_im_omega_x0"] = rep.M;
      constants["C1"] = rep.prefactor;
      constants["C1_ceiling"] = rep.ceiling;
      break;
    case BoundScheme::positive:
      constants["tau_hat"] = rep.tau_hat;
      constants["base"] = rep.base;
      break;
  }
  if (rep.admissible) constants["prefactor"] = rep.prefactor;
  out["constants"] = std::move(constants);
  json samples = json::array();
  if (rep.admissible)
    for (int N : sample_orders)
      for (double t : sample_times)
        samples.push_back({{"N", N}, {"t", t}, {"value", rep.bound(N, t)}});
  out["bound_samples"] = std::move(samples);
  return out;
}

/// Surface CSV: the first row carries the second-axis values, the first
/// column the first-axis values; the corner cell names the axes.
inline std::string surface_to_csv(const ErrorSurface& surf) {
  std::ostringstream out;
  out << surf.axis1.param << '\\' << surf.axis2.param;
  for (double v : surf.axis2_values) out << ',' << fmt17(v);
  out << "\n";
  for (std::size_t i = 0; i < surf.axis1_values.size(); ++i) {
    out << fmt17(surf.axis1_values[i]);
    for (std::size_t j = 0; j < surf.axis2_values.size(); ++j)
      out << ',' << fmt17(surf.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    out << "\n";
  }
  return out.str();
}

inline json surface_to_json(const ErrorSurface& surf) {
  json out;
  out["axis1"] = {{"param", surf.axis1.param}, {"values", surf.axis1_values}};
  out["axis2"] = {{"param", surf.axis2.param}, {"values", surf.axis2_values}};
  out["clamp"] = {surf.clamp_lo, surf.clamp_hi};
  json rows = json::array(), flags = json::array();
  for (std::size_t i = 0; i < surf.axis1_values.size(); ++i) {
    json row = json::array(), flag_row = json::array();
    for (std::size_t j = 0; j < surf.axis2_values.size(); ++j) {
      row.push_back(surf.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
      flag_row.push_back(surf.failed_at(static_cast<int>(i), static_cast<int>(j)));
    }
    rows.push_back(std::move(row));
    flags.push_back(std::move(flag_row));
  }
  out["values"] = std::move(rows);
  out["failed"] = std::move(flags);
  return out;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), "invalid-argument", "cannot open output file " + path);
  out << content;
  require(out.good(), "invalid-argument", "failed writing " + path);
}

inline json load_json(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "invalid-argument", "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& ex) {
    fail("invalid-argument", std::string("malformed JSON in ") + path + ": " + ex.what());
  }
  return j;
}

}  // namespace cfl
