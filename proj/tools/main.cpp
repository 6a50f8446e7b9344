// Command-line front end: lift / simulate / bounds / sweep / compare over
// JSON system specs, emitting CSV and JSON artifacts plus a run manifest.

#include <CLI11.hpp>

#include "cfl/cfl.hpp"

namespace {

using namespace cfl;

constexpr const char* kVersion = "0.1.0";
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

Complex parse_complex(const std::string& s) {
  const auto comma = s.find(',');
  try {
    if (comma == std::string::npos) return Complex(std::stod(s), 0.0);
    return Complex(std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1)));
  } catch (const std::exception&) {
    fail("invalid-argument", "cannot parse complex value '" + s + "'");
  }
}

/// "re,im;re,im;..." with the imaginary part optional per component.
Vec parse_state(const std::string& s, int expected) {
  std::vector<Complex> vals;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto semi = s.find(';', pos);
    const std::string part = s.substr(pos, semi == std::string::npos ? std::string::npos
                                                                     : semi - pos);
    if (!part.empty()) vals.push_back(parse_complex(part));
    if (semi == std::string::npos) break;
    pos = semi + 1;
  }
  require(static_cast<int>(vals.size()) == expected, "invalid-argument",
          "initial state needs " + std::to_string(expected) + " components");
  Vec x0(expected);
  for (int j = 0; j < expected; ++j) x0[j] = vals[static_cast<std::size_t>(j)];
  return x0;
}

std::vector<double> parse_reals(const std::string& s) {
  std::vector<double> vals;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto comma = s.find(',', pos);
    const std::string part =
        s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (!part.empty()) {
      try {
        vals.push_back(std::stod(part));
      } catch (const std::exception&) {
        fail("invalid-argument", "cannot parse real value '" + part + "'");
      }
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return vals;
}

struct SystemOptions {
  std::string system_path;
  std::string builtin;
  std::string a = "1,0", b = "1,0";
  std::string omega;
  double K = -3.0;
  double Ktilde = -1.0;
  int degree = 11;

  void attach(CLI::App* cmd) {
    cmd->add_option("--system", system_path, "path to a system spec JSON file");
    cmd->add_option("--builtin", builtin,
                    "builtin family: scalar | kuramoto3 | kuramoto-pair | kuramoto-taylor");
    cmd->add_option("--a", a, "scalar builtin: coefficient a as re,im");
    cmd->add_option("--b", b, "scalar builtin: coefficient b as re,im");
    cmd->add_option("--omega", omega, "builtin natural frequencies, comma separated");
    cmd->add_option("--K", K, "kuramoto3 builtin: coupling strength");
    cmd->add_option("--Ktilde", Ktilde, "kuramoto-pair/-taylor builtin: normalized coupling");
    cmd->add_option("--degree", degree, "kuramoto-taylor builtin: truncation degree");
  }

  json to_spec_json() const {
    require(system_path.empty() != builtin.empty(), "invalid-argument",
            "exactly one of --system and --builtin is required");
    if (!system_path.empty()) return load_json(system_path);
    json b_json{{"kind", builtin}};
    if (builtin == "scalar") {
      b_json["a"] = complex_to_json(parse_complex(a));
      b_json["b"] = complex_to_json(parse_complex(b));
    } else if (builtin == "kuramoto3") {
      b_json["omega"] = omega.empty() ? std::vector<double>{0.0, 0.0, 0.0} : parse_reals(omega);
      b_json["K"] = K;
    } else if (builtin == "kuramoto-pair" || builtin == "kuramoto-taylor") {
      b_json["omega"] = omega.empty() ? std::vector<double>{0.0, 0.0} : parse_reals(omega);
      b_json["Ktilde"] = Ktilde;
      if (builtin == "kuramoto-taylor") b_json["degree"] = degree;
    } else {
      fail("invalid-argument", "unknown builtin '" + builtin + "'");
    }
    return json{{"name", builtin}, {"builtin", b_json}};
  }
};

void write_manifest(const std::string& out_path, const std::string& command,
                    const json& params, const std::vector<std::string>& outputs,
                    const std::string& status) {
  json m;
  m["command"] = command;
  m["parameters"] = params;
  m["version"] = kVersion;
  m["outputs"] = outputs;
  m["status"] = status;
  write_file(out_path + ".manifest.json", m.dump(2) + "\n");
}

LiftedSystem build_lift(const SystemSpec& spec, const std::string& method, const Vec& x0, int N) {
  if (method == "carleman") {
    if (spec.is_taylor()) {
      require(spec.taylor().max_order >= N, "order-overflow",
              "taylor table degree below the requested order");
      return carleman_finite_section(spec.taylor(), x0, N);
    }
    require(spec.is_fourier(), "invalid-argument",
            "monomial lifting needs a fourier or taylor system");
    return carleman_finite_section(spec.fourier(), x0, N);
  }
  if (method == "fourier") {
    require(spec.is_fourier(), "invalid-argument", "exponential lifting needs a fourier system");
    return fourier_finite_section(spec.fourier(), x0, N);
  }
  if (method == "multifreq") {
    require(spec.is_multifreq(), "invalid-argument",
            "two-sided lifting needs a multifreq system");
    return multifreq_finite_section(extend_two_sided(spec.multifreq()), x0, N);
  }
  if (method == "positive") {
    require(spec.is_multifreq(), "invalid-argument",
            "positive lifting needs a multifreq system");
    return multifreq_finite_section(extend_positive(spec.multifreq()), x0, N);
  }
  fail("invalid-argument", "unknown method '" + method + "'");
}

Trajectory simulate_oracle(const SystemSpec& spec, const Vec& x0,
                           const std::vector<double>& grid, const SolveConfig& cfg) {
  if (spec.is_fourier()) return integrate_nonlinear(spec.fourier(), x0, grid, cfg);
  if (spec.is_multifreq()) return integrate_nonlinear(spec.multifreq(), x0, grid, cfg);
  return integrate_nonlinear(spec.taylor(), x0, grid, cfg);
}

// ---- bounds helpers -------------------------------------------------------

struct BoundsInputs {
  double R = 0.0;
  bool optimize_r = false;
  double D_override = -1.0;
  double mu_override = -1.0;
};

double certified_D(const SystemSpec& spec, const std::string& scheme, double R) {
  if (scheme == "multifreq")
    return extend_two_sided(spec.multifreq()).sys.decay_certificate(R).D;
  if (scheme == "positive")
    return extend_positive(spec.multifreq()).sys.decay_certificate(R).D;
  return spec.fourier().decay_certificate(R).D;
}

double default_mu(const SystemSpec& spec, const std::string& scheme) {
  if (scheme == "positive") {
    const MultiFreqSystem& sys = spec.multifreq();
    const Vec* g0 = sys.coeff(MultiIndex::zero(sys.dim() * sys.num_freqs()));
    double m = std::numeric_limits<double>::infinity();
    for (const Complex& w : sys.omegas())
      for (int j = 0; j < sys.dim(); ++j)
        m = std::min(m, (w * (g0 == nullptr ? Complex(0.0) : (*g0)[j])).imag());
    return m;
  }
  return spec.fourier().mu0();
}

BoundsReport build_report(const SystemSpec& spec, const std::string& scheme, const Vec& x0,
                          double R, const BoundsInputs& in) {
  const double D = in.D_override > 0.0 ? in.D_override : certified_D(spec, scheme, R);
  if (scheme == "carleman") return carleman_bounds(D, R, inf_norm(x0));
  if (scheme == "fourier-short") return fourier_shortrange_bounds(D, R, x0);
  if (scheme == "fourier-whole") {
    const double mu = in.mu_override > 0.0 ? in.mu_override : default_mu(spec, scheme);
    return fourier_wholerange_bounds(D, R, mu, x0);
  }
  if (scheme == "multifreq") return multifreq_bounds(D, R, spec.multifreq().omegas(), x0);
  if (scheme == "positive") {
    const double mu = in.mu_override > 0.0 ? in.mu_override : default_mu(spec, scheme);
    return positive_wholerange_bounds(D, R, mu, spec.multifreq().omegas(), x0);
  }
  fail("invalid-argument", "unknown bounds scheme '" + scheme + "'");
}

/// Goodness of a report for radius selection: horizon for the short-range
/// schemes, contraction margin 1 - base for the whole-range schemes.
double report_merit(const BoundsReport& rep) {
  if (!rep.admissible) return -std::numeric_limits<double>::infinity();
  if (std::isinf(rep.horizon)) return 1.0 - rep.base;
  return rep.horizon;
}

std::pair<double, BoundsReport> optimize_radius(const SystemSpec& spec, const std::string& scheme,
                                                const Vec& x0, const BoundsInputs& in) {
  std::vector<double> radii;
  radii.push_back(1.0);
  const double lo = std::log(1e-2), hi = std::log(1e4);
  for (int i = 0; i <= 2000; ++i) radii.push_back(std::exp(lo + (hi - lo) * i / 2000.0));
  std::sort(radii.begin(), radii.end());
  double best_R = -1.0, best_merit = -std::numeric_limits<double>::infinity();
  std::size_t best_i = 0;
  auto merit_at = [&](double R) {
    try {
      return report_merit(build_report(spec, scheme, x0, R, in));
    } catch (const error&) {
      return -std::numeric_limits<double>::infinity();  // invalid regime for this R
    }
  };
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double m = merit_at(radii[i]);
    if (m > best_merit) {
      best_merit = m;
      best_R = radii[i];
      best_i = i;
    }
  }
  require(best_R > 0.0 && std::isfinite(best_merit), "invalid-argument",
          "no admissible radius found while optimizing R");
  // Ternary refinement inside the bracketing grid interval.
  double a = radii[best_i == 0 ? 0 : best_i - 1];
  double b = radii[std::min(best_i + 1, radii.size() - 1)];
  for (int it = 0; it < 200; ++it) {
    const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
    if (merit_at(m1) < merit_at(m2))
      a = m1;
    else
      b = m2;
  }
  const double R = 0.5 * (a + b);
  const double refined = merit_at(R);
  if (refined > best_merit) best_R = R;
  return {best_R, build_report(spec, scheme, x0, best_R, in)};
}

// ---- job file parsing -----------------------------------------------------

SweepJob parse_sweep_job(const json& j) {
  SweepJob job;
  job.family = j.at("family").get<std::string>();
  if (j.contains("a")) job.a = complex_from_json(j.at("a"));
  if (j.contains("omega")) {
    const auto w = j.at("omega").get<std::vector<double>>();
    require(w.size() == 3, "invalid-argument", "sweep omega needs 3 entries");
    job.omega = Eigen::Vector3d(w[0], w[1], w[2]);
  }
  if (j.contains("K")) job.K = j.at("K").get<double>();
  if (j.contains("taylor_degree")) job.taylor_degree = j.at("taylor_degree").get<int>();
  const std::string scheme = j.value("scheme", "fourier");
  if (scheme == "fourier")
    job.scheme = Scheme::fourier;
  else if (scheme == "multifreq")
    job.scheme = Scheme::multifreq;
  else if (scheme == "carleman")
    job.scheme = Scheme::carleman;
  else
    fail("invalid-argument", "unknown sweep scheme '" + scheme + "'");
  job.order = j.value("order", 10);
  job.t_end = j.value("t_end", 0.5);
  job.samples = j.value("samples", 512);
  const int d = job.family == "kuramoto3" ? 3 : 1;
  job.x0 = j.contains("x0") ? vec_from_json(j.at("x0"), d) : Vec::Zero(d);
  const json& axes = j.at("axes");
  require(axes.is_array() && axes.size() == 2, "invalid-argument", "sweep needs two axes");
  auto parse_axis = [](const json& a) {
    return SweepAxis{a.at("param").get<std::string>(), a.at("min").get<double>(),
                     a.at("max").get<double>(), a.at("count").get<int>()};
  };
  job.axis1 = parse_axis(axes[0]);
  job.axis2 = parse_axis(axes[1]);
  if (j.contains("clamp")) {
    job.clamp_lo = j.at("clamp")[0].get<double>();
    job.clamp_hi = j.at("clamp")[1].get<double>();
  }
  job.rel_tol = j.value("rel_tol", 1e-8);
  job.abs_tol = j.value("abs_tol", 1e-10);
  job.jobs = j.value("jobs", 1);
  return job;
}

CompareJob parse_compare_job(const json& j) {
  CompareJob job;
  job.a = complex_from_json(j.value("a", json::array({0.0, 1.0})));
  for (const json& v : j.at("x0_list")) job.x0_list.push_back(complex_from_json(v));
  job.order = j.value("order", 10);
  job.t_end = j.value("t_end", 0.5);
  job.samples = j.value("samples", 512);
  if (j.contains("clamp")) {
    job.clamp_lo = j.at("clamp")[0].get<double>();
    job.clamp_hi = j.at("clamp")[1].get<double>();
  }
  job.rel_tol = j.value("rel_tol", 1e-10);
  job.abs_tol = j.value("abs_tol", 1e-12);
  return job;
}

// ---- commands -------------------------------------------------------------

int cmd_lift(const SystemOptions& sysopt, const std::string& method, int order,
             const std::string& x0_str, const std::string& out) {
  const json spec_json = sysopt.to_spec_json();
  const SystemSpec spec = parse_system_spec(spec_json);
  const Vec x0 = x0_str.empty() ? Vec::Zero(spec.dim()) : parse_state(x0_str, spec.dim());
  const LiftedSystem lift = build_lift(spec, method, x0, order);
  write_file(out, lift_to_json(lift).dump(2) + "\n");
  write_manifest(out, "lift",
                 {{"system", spec_json},
                  {"method", method},
                  {"order", order},
                  {"x0", vec_to_json(x0)}},
                 {out}, "completed");
  return 0;
}

int cmd_simulate(const SystemOptions& sysopt, const std::string& method, int order,
                 const std::string& x0_str, double t_end, int grid_samples, double rel_tol,
                 double abs_tol, const std::string& out) {
  const json spec_json = sysopt.to_spec_json();
  const SystemSpec spec = parse_system_spec(spec_json);
  const Vec x0 = x0_str.empty() ? Vec::Zero(spec.dim()) : parse_state(x0_str, spec.dim());
  const auto grid = uniform_grid(t_end, grid_samples);
  SolveConfig cfg;
  cfg.rel_tol = rel_tol;
  cfg.abs_tol = abs_tol;
  Trajectory traj;
  if (method == "none") {
    traj = simulate_oracle(spec, x0, grid, cfg);
  } else {
    traj = integrate_linear(build_lift(spec, method, x0, order), grid, cfg);
  }
  write_file(out, trajectory_to_csv(traj));
  json params{{"system", spec_json},  {"method", method},     {"x0", vec_to_json(x0)},
              {"t_end", t_end},       {"grid", grid_samples}, {"rel_tol", rel_tol},
              {"abs_tol", abs_tol}};
  if (method != "none") params["order"] = order;
  if (traj.status != SolveStatus::completed) params["event_time"] = traj.event_time;
  write_manifest(out, "simulate", params, {out}, status_name(traj.status));
  return 0;
}

int cmd_bounds(const SystemOptions& sysopt, const std::string& scheme, const std::string& x0_str,
               const BoundsInputs& in, const std::string& out) {
  const json spec_json = sysopt.to_spec_json();
  const SystemSpec spec = parse_system_spec(spec_json);
  require(!spec.is_taylor(), "invalid-argument", "bounds need a fourier or multifreq system");
  const Vec x0 = x0_str.empty() ? Vec::Zero(spec.dim()) : parse_state(x0_str, spec.dim());
  double R = in.R;
  BoundsReport rep;
  if (in.optimize_r) {
    auto [best_R, best_rep] = optimize_radius(spec, scheme, x0, in);
    R = best_R;
    rep = std::move(best_rep);
  } else {
    require(R > 0.0, "invalid-argument", "--R or --optimize-r is required");
    rep = build_report(spec, scheme, x0, R, in);
  }
  std::vector<int> orders{1, 2, 4, 8};
  std::vector<double> times;
  if (rep.admissible) {
    const double T = std::isinf(rep.horizon) ? 1.0 : rep.horizon;
    for (int i = 0; i <= 4; ++i) times.push_back(T * i / 4.0);
  }
  json out_json = bounds_to_json(rep, orders, times);
  out_json["R"] = R;
  out_json["optimized"] = in.optimize_r;
  write_file(out, out_json.dump(2) + "\n");
  write_manifest(out, "bounds",
                 {{"system", spec_json},
                  {"scheme", scheme},
                  {"x0", vec_to_json(x0)},
                  {"R", R},
                  {"optimize_r", in.optimize_r}},
                 {out}, "completed");
  return 0;
}

int cmd_sweep(const std::string& job_path, int jobs_override, const std::string& out) {
  const json j = load_json(job_path);
  SweepJob job = parse_sweep_job(j);
  if (jobs_override > 0) job.jobs = jobs_override;
  const ErrorSurface surf = run_sweep(job);
  const std::string csv_path = out;
  const std::string json_path = out + ".json";
  write_file(csv_path, surface_to_csv(surf));
  write_file(json_path, surface_to_json(surf).dump(2) + "\n");
  write_manifest(out, "sweep", {{"job", j}, {"jobs", job.jobs}}, {csv_path, json_path},
                 "completed");
  return 0;
}

int cmd_compare(const std::string& job_path, const std::string& out) {
  const json j = load_json(job_path);
  const CompareJob job = parse_compare_job(j);
  const auto rows = run_compare(job);
  std::ostringstream csv;
  csv << "re_x0,im_x0,e_fourier,e_carleman,fourier_failed,carleman_failed\n";
  for (const auto& r : rows)
    csv << fmt17(r.x0.real()) << ',' << fmt17(r.x0.imag()) << ',' << fmt17(r.e_fourier) << ','
        << fmt17(r.e_carleman) << ',' << (r.fourier_failed ? 1 : 0) << ','
        << (r.carleman_failed ? 1 : 0) << "\n";
  write_file(out, csv.str());
  write_manifest(out, "compare", {{"job", j}}, {out}, "completed");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lifting of periodic complex dynamical systems into truncated linear systems"};
  app.require_subcommand(1);

  SystemOptions lift_sys, sim_sys, bounds_sys;
  std::string method = "fourier", sim_method = "none", scheme = "fourier-short";
  std::string x0_str, sim_x0, bounds_x0, out, job_path;
  int order = 5, sim_order = 5, grid_samples = 512, jobs = 0;
  double t_end = 1.0, rel_tol = 1e-10, abs_tol = 1e-12;
  BoundsInputs binputs;

  auto* lift = app.add_subcommand("lift", "assemble a finite-section lifted system");
  lift_sys.attach(lift);
  lift->add_option("--method", method, "carleman | fourier | multifreq | positive");
  lift->add_option("--order,-N", order, "truncation order N");
  lift->add_option("--x0", x0_str, "initial state re,im;re,im;...");
  lift->add_option("--out", out, "output JSON path")->required();

  auto* sim = app.add_subcommand("simulate", "integrate the oracle or a lifted system");
  sim_sys.attach(sim);
  sim->add_option("--method", sim_method,
                  "none (oracle) | carleman | fourier | multifreq | positive");
  sim->add_option("--order,-N", sim_order, "truncation order for lifted methods");
  sim->add_option("--x0", sim_x0, "initial state re,im;re,im;...");
  sim->add_option("--t-end", t_end, "final time");
  sim->add_option("--grid", grid_samples, "number of output samples");
  sim->add_option("--rel-tol", rel_tol, "relative tolerance");
  sim->add_option("--abs-tol", abs_tol, "absolute tolerance");
  sim->add_option("--out", out, "output CSV path")->required();

  auto* bnd = app.add_subcommand("bounds", "evaluate admissibility and error bounds");
  bounds_sys.attach(bnd);
  bnd->add_option("--scheme", scheme,
                  "carleman | fourier-short | fourier-whole | multifreq | positive");
  bnd->add_option("--x0", bounds_x0, "initial state re,im;re,im;...");
  bnd->add_option("--R", binputs.R, "decay radius");
  bnd->add_flag("--optimize-r", binputs.optimize_r, "optimize the radius R");
  bnd->add_option("--D", binputs.D_override, "override the certified decay constant");
  bnd->add_option("--mu", binputs.mu_override, "override the mean-term constant");
  bnd->add_option("--out", out, "output JSON path")->required();

  auto* swp = app.add_subcommand("sweep", "evaluate an error surface over a parameter grid");
  swp->add_option("--job", job_path, "sweep job JSON file")->required();
  swp->add_option("--jobs", jobs, "worker threads (overrides the job file)");
  swp->add_option("--out", out, "output CSV path (JSON written alongside)")->required();

  auto* cmp = app.add_subcommand("compare", "exponential vs monomial lifting error table");
  cmp->add_option("--job", job_path, "compare job JSON file")->required();
  cmp->add_option("--out", out, "output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    std::fprintf(stderr, "%s\n", e.what());
    return kExitUsage;
  }

  try {
    if (lift->parsed()) return cmd_lift(lift_sys, method, order, x0_str, out);
    if (sim->parsed())
      return cmd_simulate(sim_sys, sim_method, sim_order, sim_x0, t_end, grid_samples, rel_tol,
                          abs_tol, out);
    if (bnd->parsed()) return cmd_bounds(bounds_sys, scheme, bounds_x0, binputs, out);
    if (swp->parsed()) return cmd_sweep(job_path, jobs, out);
    if (cmp->parsed()) return cmd_compare(job_path, out);
  } catch (const cfl::error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "invalid-argument: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal numeric failure: %s\n", e.what());
    return kExitNumeric;
  }
  return kExitUsage;
}
