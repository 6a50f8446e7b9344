#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "cfl/core.hpp"
#include "cfl/fourier_lift.hpp"
#include "cfl/ode.hpp"

namespace cfl {

/// How lifted first-block coordinates map onto base-state phases.
/// direct:    v_j           vs e^{i x_j},             j = 0..d-1
/// two_sided: v_{mLd+ld+j'} vs e^{i (-1)^m omega_l x_j'}
/// positive:  v_{ld+j'}     vs e^{i omega_l x_j'}
struct LiftLayout {
  enum class Map { direct, two_sided, positive } map = Map::direct;
  int d = 0;
  int L = 1;
  std::vector<Complex> omegas{Complex(1.0)};

  static LiftLayout direct(int d) { return {Map::direct, d, 1, {Complex(1.0)}}; }
  static LiftLayout of(const ExtendedSystem& ext) {
    return {ext.kind == ExtensionKind::two_sided ? Map::two_sided : Map::positive,
            ext.base_dim, ext.num_freqs, ext.omegas};
  }

  int first_block_size() const {
    switch (map) {
      case Map::direct: return d;
      case Map::two_sided: return 2 * L * d;
      case Map::positive: return L * d;
    }
    return d;
  }

  /// Phase carried by lifted coordinate j, evaluated on the base state x.
  Complex phase(int j, const Vec& x) const {
    if (map == Map::direct) return x[j];
    const int m = map == Map::two_sided ? j / (L * d) : 0;
    const int rem = j - m * L * d;
    const int l = rem / d, jp = rem % d;
    const Complex s = (m == 0 ? 1.0 : -1.0) * omegas[l];
    return s * x[jp];
  }
};

namespace detail {
inline void check_grids(const Trajectory& a, const Trajectory& b) {
  require(a.times.size() == b.times.size(), "invalid-argument", "trajectory grids differ");
  for (std::size_t i = 0; i < a.times.size(); ++i)
    require(a.times[i] == b.times[i], "invalid-argument", "trajectory grids differ");
}
}  // namespace detail

/// Per-sample max_j |v_j e^{-i phase_j(x)} - 1| over the mapped first-block
/// coordinates of the lifted trajectory.
inline std::vector<double> mult_error(const Trajectory& v_traj, const Trajectory& x_traj,
                                      const LiftLayout& layout) {
  detail::check_grids(v_traj, x_traj);
  const int D = layout.first_block_size();
  require(v_traj.dim() >= D, "invalid-argument", "lifted trajectory narrower than the layout");
  std::vector<double> out(v_traj.times.size(), 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    double m = 0.0;
    for (int j = 0; j < D; ++j) {
      const Complex w = std::exp(-kI * layout.phase(j, x_traj.states[i]));
      m = std::max(m, std::abs(v_traj.states[i][j] * w - 1.0));
    }
    out[i] = m;
  }
  return out;
}

/// Per-sample max_j |v_j - e^{i phase_j(x)}| (the whole-range theorems bound
/// this absolute form).
inline std::vector<double> abs_error(const Trajectory& v_traj, const Trajectory& x_traj,
                                     const LiftLayout& layout) {
  detail::check_grids(v_traj, x_traj);
  const int D = layout.first_block_size();
  require(v_traj.dim() >= D, "invalid-argument", "lifted trajectory narrower than the layout");
  std::vector<double> out(v_traj.times.size(), 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    double m = 0.0;
    for (int j = 0; j < D; ++j) {
      const Complex w = std::exp(kI * layout.phase(j, x_traj.states[i]));
      m = std::max(m, std::abs(v_traj.states[i][j] - w));
    }
    out[i] = m;
  }
  return out;
}

/// Phases reconstructed from lifted coordinates by continuous logarithm,
/// anchored at xi(0) = anchor.
struct PhaseTrack {
  std::vector<double> times;
  std::vector<Vec> xi;
  Vec anchor;
};

/// xi_j(t) = -i log v_j(t) continued from xi_j(0) = anchor_j. Fails on a
/// zero-modulus sample or when a per-step angle increment reaches pi.
inline PhaseTrack phase_unwrap(const Trajectory& v_traj, const Vec& anchor) {
  const int D = static_cast<int>(anchor.size());
  require(v_traj.dim() >= D, "invalid-argument", "anchor wider than the lifted trajectory");
  PhaseTrack track;
  track.times = v_traj.times;
  track.anchor = anchor;
  track.xi.reserve(v_traj.times.size());
  Vec xi = anchor;
  track.xi.push_back(xi);
  for (std::size_t i = 1; i < v_traj.times.size(); ++i) {
    for (int j = 0; j < D; ++j) {
      const Complex prev = v_traj.states[i - 1][j], cur = v_traj.states[i][j];
      if (prev == Complex(0.0) || cur == Complex(0.0))
        fail("degenerate-sample", "lifted coordinate has zero modulus");
      const Complex ratio = cur / prev;
      const double darg = std::arg(ratio);
      if (std::abs(darg) >= M_PI * (1.0 - 1e-12))
        fail("undersampled", "phase increment reached pi between samples");
      // -i log continued: modulus part goes to Im, angle to Re.
      xi[j] += Complex(darg, -std::log(std::abs(ratio)));
    }
    track.xi.push_back(xi);
  }
  return track;
}

/// Frequency-averaged phase reconstruction for a two-sided extension:
/// xi*_{j'} = (1/2L) sum_m sum_l (-1)^m omega_l^{-1} xi_{j'+d l+m d L}.
inline PhaseTrack phase_average(const PhaseTrack& track, const LiftLayout& layout) {
  require(layout.map == LiftLayout::Map::two_sided, "invalid-argument",
          "phase averaging applies to two-sided extensions");
  const int d = layout.d, L = layout.L;
  require(track.anchor.size() == 2 * L * d, "invalid-argument",
          "track does not match the two-sided layout");
  PhaseTrack avg;
  avg.times = track.times;
  avg.anchor = Vec(d);
  avg.xi.reserve(track.xi.size());
  for (std::size_t i = 0; i < track.xi.size(); ++i) {
    Vec x(d);
    for (int jp = 0; jp < d; ++jp) {
      Complex s = 0.0;
      for (int m = 0; m < 2; ++m)
        for (int l = 0; l < L; ++l) {
          const double sign = m == 0 ? 1.0 : -1.0;
          s += sign / layout.omegas[l] * track.xi[i][m * L * d + l * d + jp];
        }
      x[jp] = s / (2.0 * L);
    }
    if (i == 0) avg.anchor = x;
    avg.xi.push_back(std::move(x));
  }
  return avg;
}

/// sup over samples of log10(min(clamp_hi, max(clamp_lo, err))).
inline double sup_log_error(const std::vector<double>& errors, double clamp_lo = 1e-4,
                            double clamp_hi = 10.0) {
  require(clamp_lo < clamp_hi && clamp_lo > 0.0, "invalid-argument", "bad clamp bounds");
  double sup = -std::numeric_limits<double>::infinity();
  for (double e : errors)
    sup = std::max(sup, std::log10(std::min(clamp_hi, std::max(clamp_lo, e))));
  return sup;
}

/// Error bound on the frequency-averaged phases over [0, T_target]:
/// 2 / (pi e (e-1) min_l |omega_l|) N^{-3/2} e^{D1 (T_target - horizon) N}.
inline double phase_average_bound(const std::vector<Complex>& omegas, double D1, double horizon,
                                  double T_target, int N) {
  require(!omegas.empty() && N >= 1, "invalid-argument", "bad phase-average bound inputs");
  double min_w = std::numeric_limits<double>::infinity();
  for (const Complex& w : omegas) min_w = std::min(min_w, std::abs(w));
  const double e = std::exp(1.0);
  return 2.0 / (M_PI * e * (e - 1.0) * min_w) * std::pow(static_cast<double>(N), -1.5) *
         std::exp(D1 * (T_target - horizon) * N);
}

/// Retries the lift integration with doubled sampling (up to max_samples)
/// when the continuation is undersampled; other failures propagate.
inline PhaseTrack phase_unwrap_adaptive(const std::function<Trajectory(int)>& integrate_with,
                                        const Vec& anchor, int samples = 512,
                                        int max_samples = 8192) {
  for (int n = samples; n <= max_samples; n *= 2) {
    try {
      return phase_unwrap(integrate_with(n), anchor);
    } catch (const error& e) {
      if (e.kind() != "undersampled" || 2 * n > max_samples) throw;
    }
  }
  fail("undersampled", "phase continuation still undersampled at the refinement cap");
}

}  // namespace cfl
