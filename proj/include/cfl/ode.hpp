#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "cfl/carleman.hpp"
#include "cfl/core.hpp"
#include "cfl/fourier_system.hpp"
#include "cfl/lifted_system.hpp"

namespace cfl {

enum class SolveStatus { completed, blowup_detected, step_failure };

inline const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::completed: return "completed";
    case SolveStatus::blowup_detected: return "blowup-detected";
    case SolveStatus::step_failure: return "step-failure";
  }
  return "?";
}

/// Sampled solution curve. On blow-up the offending state is appended as the
/// final sample, so the last recorded state exceeds the guard threshold.
struct Trajectory {
  std::vector<double> times;
  std::vector<Vec> states;
  SolveStatus status = SolveStatus::completed;
  double event_time = 0.0;  // meaningful for blowup-detected / step-failure

  int dim() const { return states.empty() ? 0 : static_cast<int>(states.front().size()); }
};

struct SolveConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  double blowup_threshold = 1e8;
  long max_steps = 100000000L;
};

inline std::vector<double> uniform_grid(double t_end, int samples) {
  require(t_end > 0.0 && samples >= 1, "invalid-argument", "bad output grid");
  std::vector<double> g(static_cast<std::size_t>(samples) + 1);
  for (int i = 0; i <= samples; ++i) g[i] = t_end * i / samples;
  return g;
}

/// Adaptive embedded Dormand-Prince 5(4) pair with PI step control, run
/// directly in complex arithmetic. Samples are produced exactly at the grid
/// times by clamping steps; grid must be increasing and start at 0.
template <class RHS>
Trajectory integrate(RHS&& f, const Vec& y0, const std::vector<double>& grid,
                     const SolveConfig& cfg = {}) {
  require(!grid.empty() && grid.front() == 0.0, "invalid-argument",
          "output grid must start at t = 0");
  require(cfg.rel_tol > 0.0 && cfg.abs_tol > 0.0, "invalid-argument",
          "tolerances must be positive");
  for (std::size_t i = 1; i < grid.size(); ++i)
    require(grid[i] > grid[i - 1], "invalid-argument", "output grid must be increasing");

  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(y0);

  const double t_end = grid.back();
  const Eigen::Index n = y0.size();
  Vec y = y0, k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), ynew(n), k7(n), yerr(n);
  double t = 0.0;
  std::size_t next_sample = 1;
  if (grid.size() == 1) return traj;

  k1 = f(t, y);
  double h = std::min({cfg.max_step, t_end / 100.0, 1e-2});
  double facold = 1e-4;
  const double safe = 0.9, beta = 0.04, expo1 = 0.2 - beta * 0.75;

  for (long step = 0; step < cfg.max_steps; ++step) {
    if (t >= t_end) break;
    const double gap = grid[next_sample] - t;
    if (gap <= 1e-12 * std::max(1.0, std::abs(grid[next_sample]))) {
      // Landed within rounding of the sample time: emit without stepping.
      t = grid[next_sample];
      traj.times.push_back(t);
      traj.states.push_back(y);
      ++next_sample;
      if (next_sample >= grid.size()) return traj;
      continue;
    }
    bool clamped = false;
    double h_used = std::min(h, cfg.max_step);
    if (h_used >= gap * (1.0 - 1e-9)) {  // stretch one-ulp undershoots onto the grid
      h_used = gap;
      clamped = true;
    }
    if (h_used < 1e-14 * std::max(1.0, std::abs(t))) {
      traj.status = SolveStatus::step_failure;
      traj.event_time = t;
      return traj;
    }

    k2 = f(t + c2 * h_used, y + h_used * (a21 * k1));
    k3 = f(t + c3 * h_used, y + h_used * (a31 * k1 + a32 * k2));
    k4 = f(t + c4 * h_used, y + h_used * (a41 * k1 + a42 * k2 + a43 * k3));
    k5 = f(t + c5 * h_used, y + h_used * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    k6 = f(t + h_used, y + h_used * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    ynew = y + h_used * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    k7 = f(t + h_used, ynew);
    yerr = h_used * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double err = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[j]), std::abs(ynew[j]));
      const double q = std::abs(yerr[j]) / sc;
      err += q * q;
    }
    err = std::sqrt(err / static_cast<double>(n));

    const double fac11 = std::pow(std::max(err, 1e-30), expo1);
    if (err <= 1.0) {
      t += h_used;
      y.swap(ynew);
      k1.swap(k7);
      facold = std::max(err, 1e-4);
      // Escape guard on the state and on the field: states that blow up in
      // finite time may diverge only logarithmically while their derivative
      // explodes (the FSAL stage k1 is the field at the accepted state).
      if (inf_norm(y) > cfg.blowup_threshold || inf_norm(k1) > cfg.blowup_threshold) {
        traj.times.push_back(t);
        traj.states.push_back(y);
        traj.status = SolveStatus::blowup_detected;
        traj.event_time = t;
        return traj;
      }
      if (clamped) {
        traj.times.push_back(grid[next_sample]);
        traj.states.push_back(y);
        ++next_sample;
        if (next_sample >= grid.size()) return traj;
      }
      if (!clamped) {
        double fac = fac11 / std::pow(facold, beta);
        fac = std::max(0.1, std::min(5.0, fac / safe));
        h = std::min(h_used / fac, cfg.max_step);
      }
    } else {
      h = h_used / std::min(5.0, fac11 / safe);
    }
  }
  traj.status = SolveStatus::step_failure;
  traj.event_time = t;
  return traj;
}

inline Trajectory integrate_nonlinear(const FourierSystem& sys, const Vec& x0,
                                      const std::vector<double>& grid,
                                      const SolveConfig& cfg = {}) {
  return integrate([&sys](double, const Vec& x) { return sys.eval(x); }, x0, grid, cfg);
}

inline Trajectory integrate_nonlinear(const MultiFreqSystem& sys, const Vec& x0,
                                      const std::vector<double>& grid,
                                      const SolveConfig& cfg = {}) {
  return integrate([&sys](double, const Vec& x) { return sys.eval(x); }, x0, grid, cfg);
}

inline Trajectory integrate_nonlinear(const MaclaurinTable& table, const Vec& x0,
                                      const std::vector<double>& grid,
                                      const SolveConfig& cfg = {}) {
  return integrate([&table](double, const Vec& x) { return table.eval(x); }, x0, grid, cfg);
}

inline Trajectory integrate_linear(const LiftedSystem& lift, const std::vector<double>& grid,
                                   const SolveConfig& cfg = {}) {
  const bool homogeneous = lift.inhomogeneous.isZero(0.0);
  Vec out(lift.dimension());
  auto rhs = [&lift, &out, homogeneous](double, const Vec& y) -> const Vec& {
    out.noalias() = lift.matrix * y;
    if (!homogeneous) out += lift.inhomogeneous;
    return out;
  };
  return integrate(rhs, lift.initial, grid, cfg);
}

namespace detail {

/// Walks z(s) = 1 + (e^{ias} - 1) e^{ix0} along [s0, s1], accumulating the
/// continued argument. Refines recursively when the angle increment exceeds
/// pi/2 (which only happens near the origin of z).
struct LogContinuation {
  Complex a, eix0;
  double min_mod = std::numeric_limits<double>::infinity();

  Complex z(double s) const { return 1.0 + (std::exp(kI * a * s) - 1.0) * eix0; }

  double advance(double s0, double s1, Complex z0, double theta, int depth = 0) {
    const Complex z1 = z(s1);
    min_mod = std::min(min_mod, std::abs(z1));
    if (std::abs(z1) < 1e-8)
      fail("near-singularity", "logarithm branch passes too close to the origin");
    const double dtheta = std::arg(z1 / z0);
    if (std::abs(dtheta) <= M_PI / 2) return theta + dtheta;
    if (depth >= 40)
      fail("near-singularity", "branch continuation failed to resolve the winding");
    const double sm = 0.5 * (s0 + s1);
    const double theta_mid = advance(s0, sm, z0, theta, depth + 1);
    return advance(sm, s1, z(sm), theta_mid, depth + 1);
  }
};

}  // namespace detail

/// x(t) = a t + x0 + i ln(1 + (e^{iat} - 1) e^{ix0}) for the normalized scalar
/// field a(1 - e^{ix}), with the logarithm branch continued from x(0) = x0
/// along a grid of 2048 points per unit time.
inline std::vector<Complex> closed_form_x_samples(Complex a, Complex x0,
                                                  const std::vector<double>& grid) {
  detail::LogContinuation cont{a, std::exp(kI * x0)};
  std::vector<Complex> out;
  out.reserve(grid.size());
  double s = 0.0, theta = 0.0;
  Complex zs = cont.z(0.0);
  for (double t : grid) {
    require(t >= s, "invalid-argument", "closed-form sample times must be increasing");
    const int steps = std::max(1, static_cast<int>(std::ceil(2048.0 * (t - s))));
    for (int i = 1; i <= steps; ++i) {
      const double s_next = s + (t - s) * i / steps;
      theta = cont.advance(s, s_next, zs, theta);
      s = s_next;
      zs = cont.z(s);
    }
    s = t;
    out.push_back(a * t + x0 + kI * (std::log(std::abs(zs)) + kI * theta));
  }
  return out;
}

inline Complex closed_form_x(Complex a, Complex x0, double t) {
  if (t == 0.0) return x0;
  return closed_form_x_samples(a, x0, {0.0, t}).back();
}

/// v_{k,N}(t) = e^{ik(at+x0)} sum_{l=0}^{N-k} binom(k+l-1, l) (-q)^l with
/// q = e^{ix0}(e^{iat} - 1); the exact solution of the scalar order-N section.
inline Vec closed_form_v(Complex a, Complex x0, int N, double t) {
  require(N >= 1, "invalid-argument", "N must be >= 1");
  const Complex q = std::exp(kI * x0) * (std::exp(kI * a * t) - 1.0);
  const Complex phase = std::exp(kI * (a * t + x0));
  Vec v(N);
  for (int k = 1; k <= N; ++k) {
    Complex sum = 0.0, pw = 1.0;
    for (int l = 0; l <= N - k; ++l) {
      sum += static_cast<double>(binomial(k + l - 1, l)) * pw;
      pw *= -q;
    }
    Complex ph = 1.0;
    for (int c = 0; c < k; ++c) ph *= phase;
    v[k - 1] = ph * sum;
  }
  return v;
}

}  // namespace cfl
