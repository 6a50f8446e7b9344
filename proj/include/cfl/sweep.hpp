#pragma once

#include <atomic>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "cfl/carleman.hpp"
#include "cfl/core.hpp"
#include "cfl/fourier_lift.hpp"
#include "cfl/fourier_system.hpp"
#include "cfl/metrics.hpp"
#include "cfl/ode.hpp"

namespace cfl {

struct SweepAxis {
  std::string param;  // phi | re_x0 | im_x0 | theta1_0 | theta2_0
  double min = 0.0, max = 0.0;
  int count = 0;

  std::vector<double> values() const {
    require(count >= 2, "invalid-argument", "sweep axes need at least 2 points");
    std::vector<double> v(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
      v[i] = min + (max - min) * i / (count - 1);
    return v;
  }
};

/// One grid job: a system family, a lifting scheme, two swept parameters and
/// the sup-log error metric of the scheme evaluated per grid point.
struct SweepJob {
  std::string family = "scalar";  // scalar | kuramoto3
  Complex a{1.0, 0.0};            // scalar family
  Eigen::Vector3d omega{0.0, 0.0, 0.0};  // kuramoto3 family (omega3 = -omega1-omega2)
  double K = -3.0;
  int taylor_degree = 11;

  Scheme scheme = Scheme::fourier;  // fourier | multifreq | carleman
  int order = 10;
  double t_end = 0.5;
  int samples = 512;
  Vec x0;  // base initial state; swept params overwrite components

  SweepAxis axis1, axis2;
  double clamp_lo = 1e-4, clamp_hi = 10.0;
  double rel_tol = 1e-8, abs_tol = 1e-10;
  int jobs = 1;
};

struct ErrorSurface {
  SweepAxis axis1, axis2;
  std::vector<double> axis1_values, axis2_values;
  Eigen::MatrixXd values;            // axis1.count rows x axis2.count cols
  std::vector<std::uint8_t> failed;  // row-major flags
  double clamp_lo = 1e-4, clamp_hi = 10.0;

  bool failed_at(int i, int j) const {
    return failed[static_cast<std::size_t>(i) * axis2_values.size() + j] != 0;
  }
};

namespace detail {

struct SweepPoint {
  Complex a;
  Vec x0;
};

inline SweepPoint resolve_point(const SweepJob& job, double v1, double v2) {
  SweepPoint pt{job.a, job.x0};
  bool theta_swept = false;
  auto apply = [&](const std::string& name, double v) {
    if (name == "phi") {
      pt.a = std::exp(kI * v);
    } else if (name == "re_x0") {
      pt.x0[0] = Complex(v, pt.x0[0].imag());
    } else if (name == "im_x0") {
      pt.x0[0] = Complex(pt.x0[0].real(), v);
    } else if (name == "theta1_0") {
      pt.x0[0] = v;
      theta_swept = true;
    } else if (name == "theta2_0") {
      pt.x0[1] = v;
      theta_swept = true;
    } else {
      fail("invalid-argument", "unknown sweep parameter '" + name + "'");
    }
  };
  apply(job.axis1.param, v1);
  apply(job.axis2.param, v2);
  if (theta_swept && pt.x0.size() >= 3)
    pt.x0[2] = -pt.x0[0] - pt.x0[1];  // zero-phase-sum chart
  return pt;
}

/// sup log10 clamp of max_j |e^{i(y_j - x_j)} - 1|: the phase-difference
/// metric used for monomial lifts, whose first block approximates x itself.
inline double carleman_phase_metric(const Trajectory& y_traj, const Trajectory& x_traj, int d,
                                    double lo, double hi) {
  std::vector<double> errs(y_traj.times.size(), 0.0);
  for (std::size_t i = 0; i < errs.size(); ++i) {
    double m = 0.0;
    for (int j = 0; j < d; ++j)
      m = std::max(m, std::abs(std::exp(kI * (y_traj.states[i][j] - x_traj.states[i][j])) - 1.0));
    errs[i] = m;
  }
  return sup_log_error(errs, lo, hi);
}

}  // namespace detail

/// Evaluates the job's metric on the full grid. Points run concurrently;
/// a blow-up or step failure at a point records clamp_hi with a flag.
inline ErrorSurface run_sweep(const SweepJob& job) {
  require(job.family == "scalar" || job.family == "kuramoto3", "invalid-argument",
          "unknown sweep family '" + job.family + "'");
  require(job.x0.size() == (job.family == "kuramoto3" ? 3 : 1), "invalid-argument",
          "base initial state does not match the family dimension");
  ErrorSurface surf;
  surf.axis1 = job.axis1;
  surf.axis2 = job.axis2;
  surf.axis1_values = job.axis1.values();
  surf.axis2_values = job.axis2.values();
  surf.clamp_lo = job.clamp_lo;
  surf.clamp_hi = job.clamp_hi;
  const int n1 = job.axis1.count, n2 = job.axis2.count;
  surf.values.resize(n1, n2);
  surf.failed.assign(static_cast<std::size_t>(n1) * n2, 0);

  SolveConfig cfg;
  cfg.rel_tol = job.rel_tol;
  cfg.abs_tol = job.abs_tol;
  const auto grid = uniform_grid(job.t_end, job.samples);

  const bool kuramoto = job.family == "kuramoto3";
  const bool system_varies = job.axis1.param == "phi" || job.axis2.param == "phi";

  // The lifted matrix depends only on the system, not on x0; build it once
  // when only initial conditions are swept.
  std::optional<FourierSystem> k3_sys;
  std::optional<MultiFreqSystem> pair_sys;
  std::optional<ExtendedSystem> ext_sys;
  std::optional<MaclaurinTable> taylor;
  std::optional<LiftedSystem> cached_lift;
  if (kuramoto) {
    k3_sys = kuramoto_analytic(job.omega, job.K);
    pair_sys = kuramoto_pairfield(job.omega[0], job.omega[1], job.K / 3.0);
    if (job.scheme == Scheme::fourier) {
      cached_lift = fourier_finite_section(*k3_sys, Vec::Zero(3), job.order);
    } else if (job.scheme == Scheme::multifreq) {
      ext_sys = extend_two_sided(*pair_sys);
      cached_lift = multifreq_finite_section(*ext_sys, Vec::Zero(2), job.order);
    } else {
      taylor = kuramoto_taylor(job.omega[0], job.omega[1], job.K / 3.0, job.taylor_degree);
      cached_lift = carleman_finite_section(*taylor, Vec::Zero(2), job.order);
    }
  } else if (!system_varies) {
    const FourierSystem sys = scalar_example(job.a, Complex(1.0));
    cached_lift = job.scheme == Scheme::carleman
                      ? carleman_finite_section(sys, Vec::Zero(1), job.order)
                      : fourier_finite_section(sys, Vec::Zero(1), job.order);
  }

  auto eval_point = [&](int i, int j) {
    const auto pt = detail::resolve_point(job, surf.axis1_values[i], surf.axis2_values[j]);
    double value = std::log10(job.clamp_hi);
    bool ok = false;
    try {
      Trajectory x_traj, v_traj;
      LiftLayout layout = LiftLayout::direct(1);
      LiftedSystem lift = cached_lift ? *cached_lift : LiftedSystem{Scheme::fourier, GradedBasis(1, 1), Mat(), Vec(), Vec()};
      if (kuramoto) {
        if (job.scheme == Scheme::fourier) {
          x_traj = integrate_nonlinear(*k3_sys, pt.x0, grid, cfg);
          layout = LiftLayout::direct(3);
          for (int p = 0; p < lift.dimension(); ++p)
            lift.initial[p] = std::exp(kI * lift.basis.at(p).dot(pt.x0));
        } else if (job.scheme == Scheme::multifreq) {
          const Vec base_x0 = pt.x0.head(2);
          x_traj = integrate_nonlinear(*pair_sys, base_x0, grid, cfg);
          layout = LiftLayout::of(*ext_sys);
          const Vec ext_x0 = ext_sys->initial_state(base_x0);
          for (int p = 0; p < lift.dimension(); ++p)
            lift.initial[p] = std::exp(kI * lift.basis.at(p).dot(ext_x0));
        } else {
          const Vec base_x0 = pt.x0.head(2);
          x_traj = integrate_nonlinear(*pair_sys, base_x0, grid, cfg);
          for (int p = 0; p < lift.dimension(); ++p)
            lift.initial[p] = lift.basis.at(p).monomial(base_x0);
        }
      } else {
        const FourierSystem sys = scalar_example(pt.a, Complex(1.0));
        x_traj = integrate_nonlinear(sys, pt.x0, grid, cfg);
        if (!cached_lift) {
          lift = job.scheme == Scheme::carleman
                     ? carleman_finite_section(sys, pt.x0, job.order)
                     : fourier_finite_section(sys, pt.x0, job.order);
        } else if (job.scheme == Scheme::carleman) {
          for (int p = 0; p < lift.dimension(); ++p)
            lift.initial[p] = lift.basis.at(p).monomial(pt.x0);
        } else {
          for (int p = 0; p < lift.dimension(); ++p)
            lift.initial[p] = std::exp(kI * lift.basis.at(p).dot(pt.x0));
        }
      }
      if (x_traj.status == SolveStatus::completed) {
        v_traj = integrate_linear(lift, grid, cfg);
        if (v_traj.status == SolveStatus::completed) {
          if (job.scheme == Scheme::carleman) {
            const int d = kuramoto ? 2 : 1;
            value = detail::carleman_phase_metric(v_traj, x_traj, d, job.clamp_lo, job.clamp_hi);
          } else {
            value = sup_log_error(mult_error(v_traj, x_traj, layout), job.clamp_lo, job.clamp_hi);
          }
          ok = true;
        }
      }
    } catch (...) {
      ok = false;  // recorded as a clamped failure below
    }
    surf.values(i, j) = value;
    surf.failed[static_cast<std::size_t>(i) * n2 + j] = ok ? 0 : 1;
  };

  const int workers = std::max(1, job.jobs);
  if (workers == 1) {
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n2; ++j) eval_point(i, j);
  } else {
    std::atomic<int> next{0};
    const int total = n1 * n2;
    auto work = [&] {
      for (int p = next.fetch_add(1); p < total; p = next.fetch_add(1))
        eval_point(p / n2, p % n2);
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return surf;
}

/// Side-by-side exponential-vs-monomial lifting errors of the scalar family
/// over a list of initial states.
struct CompareJob {
  Complex a{0.0, 1.0};
  std::vector<Complex> x0_list;
  int order = 10;
  double t_end = 0.5;
  int samples = 512;
  double clamp_lo = 1e-4, clamp_hi = 10.0;
  double rel_tol = 1e-10, abs_tol = 1e-12;
};

struct CompareRow {
  Complex x0;
  double e_fourier = 0.0;   // sup log10 of |v1 e^{-ix} - 1|
  double e_carleman = 0.0;  // sup log10 of |e^{i(y1 - x)} - 1|
  bool fourier_failed = false;
  bool carleman_failed = false;
};

inline std::vector<CompareRow> run_compare(const CompareJob& job) {
  require(!job.x0_list.empty(), "invalid-argument", "compare needs at least one initial state");
  const FourierSystem sys = scalar_example(job.a, Complex(1.0));
  const auto grid = uniform_grid(job.t_end, job.samples);
  SolveConfig cfg;
  cfg.rel_tol = job.rel_tol;
  cfg.abs_tol = job.abs_tol;
  std::vector<CompareRow> rows;
  rows.reserve(job.x0_list.size());
  for (Complex x0c : job.x0_list) {
    CompareRow row;
    row.x0 = x0c;
    row.e_fourier = row.e_carleman = std::log10(job.clamp_hi);
    Vec x0(1);
    x0[0] = x0c;
    Trajectory x_traj = integrate_nonlinear(sys, x0, grid, cfg);
    if (x_traj.status != SolveStatus::completed) {
      row.fourier_failed = row.carleman_failed = true;
      rows.push_back(row);
      continue;
    }
    try {
      Trajectory v = integrate_linear(fourier_finite_section(sys, x0, job.order), grid, cfg);
      if (v.status != SolveStatus::completed) throw error("step-failure", "lift integration");
      row.e_fourier =
          sup_log_error(mult_error(v, x_traj, LiftLayout::direct(1)), job.clamp_lo, job.clamp_hi);
    } catch (const std::exception&) {
      row.fourier_failed = true;
    }
    try {
      Trajectory y = integrate_linear(carleman_finite_section(sys, x0, job.order), grid, cfg);
      if (y.status != SolveStatus::completed) throw error("step-failure", "lift integration");
      row.e_carleman = detail::carleman_phase_metric(y, x_traj, 1, job.clamp_lo, job.clamp_hi);
    } catch (const std::exception&) {
      row.carleman_failed = true;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace cfl
