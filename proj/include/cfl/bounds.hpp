#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "cfl/core.hpp"

namespace cfl {

enum class BoundScheme { carleman, fourier_short, fourier_whole, multifreq, positive };

inline const char* bound_scheme_name(BoundScheme s) {
  switch (s) {
    case BoundScheme::carleman: return "carleman";
    case BoundScheme::fourier_short: return "fourier-short";
    case BoundScheme::fourier_whole: return "fourier-whole";
    case BoundScheme::multifreq: return "multifreq";
    case BoundScheme::positive: return "positive";
  }
  return "?";
}

namespace bc {
// Transcendental constants evaluated in double at use; no decimal literals.
inline const double e = std::exp(1.0);
inline const double ratio = (e - 1.0) / (2.0 * e - 1.0);       // (e-1)/(2e-1)
inline const double sqrt2pi = std::sqrt(2.0 * std::acos(-1.0));
inline const double inf = std::numeric_limits<double>::infinity();
}  // namespace bc

/// Admissibility verdict, time horizon, rate and evaluable error bound for one
/// lifting scheme, as pure functions of the certified constants.
struct BoundsReport {
  BoundScheme scheme;
  bool admissible = false;
  std::string reason;
  double horizon = 0.0;  // +inf for whole-range schemes

  double D = 0.0, R = 0.0, mu = 0.0;
  double x0_infnorm = 0.0;            // carleman
  double w0_inf = 0.0, w0_neg_inf = 0.0, w0_l2 = 0.0;  // exp(+-i x0) norms
  double M = 0.0;                     // max_l max_j |Im(omega_l x0_j)|
  double tau_hat = 0.0;               // positive scheme
  double prefactor = 0.0;             // C0, C1, or the scheme's fixed prefactor
  double ceiling = 0.0;               // multifreq only: R^2/(2 pi e (e-1))
  double base = 0.0;                  // geometric base of the whole-range bounds

  /// Error bound at section order N and time t (t ignored by the whole-range
  /// schemes). Only evaluable on admissible reports.
  double bound(int N, double t) const {
    require(admissible, "hypothesis-violation", "bound requested on inadmissible report");
    require(N >= 1, "invalid-argument", "N must be >= 1");
    const double n = static_cast<double>(N);
    switch (scheme) {
      case BoundScheme::carleman: {
        if (x0_infnorm == 0.0) return 0.0;
        const double lr = std::log(R);
        return prefactor * std::pow(n, -1.5) * std::exp(D * R * n * t / (lr * lr)) *
               std::pow(x0_infnorm * bc::e / lr, bc::ratio * n);
      }
      case BoundScheme::fourier_short:
        return prefactor * std::pow(n, -1.5) * std::exp(D * t * n) *
               std::pow(bc::e * w0_inf / R, bc::ratio * n);
      case BoundScheme::fourier_whole:
      case BoundScheme::positive:
        return prefactor * std::pow(base, n);
      case BoundScheme::multifreq:
        return prefactor * std::pow(n, -1.5) * std::exp(D * (t - horizon) * n);
    }
    return 0.0;
  }

  /// Exponential convergence rate r(t): the N-th root scaling of the bound.
  double rate(double t) const {
    require(admissible, "hypothesis-violation", "rate requested on inadmissible report");
    const double lr = std::log(R);
    switch (scheme) {
      case BoundScheme::carleman:
        return std::exp(D * R * t / (lr * lr)) * std::pow(x0_infnorm * bc::e / lr, bc::ratio);
      case BoundScheme::fourier_short:
        return std::exp(D * t) * std::pow(bc::e * w0_inf / R, bc::ratio);
      case BoundScheme::fourier_whole:
      case BoundScheme::positive:
        return base;
      case BoundScheme::multifreq:
        return std::exp(D * t) * std::pow(bc::e * std::exp(M) / R, bc::ratio);
    }
    return 0.0;
  }
};

/// Monomial-lifting bound: admissible iff ||x0||_inf < ln(R)/e; horizon
/// T_C* = (e-1)(ln R)^2 / ((2e-1) D0 R) ln(ln R / (e ||x0||_inf)).
inline BoundsReport carleman_bounds(double D0, double R, double x0_infnorm) {
  require(D0 > 0.0, "invalid-argument", "D0 must be positive");
  require(R > 1.0, "invalid-regime", "monomial-lifting bounds need R > 1");
  require(x0_infnorm >= 0.0, "invalid-argument", "norm must be nonnegative");
  BoundsReport rep;
  rep.scheme = BoundScheme::carleman;
  rep.D = D0;
  rep.R = R;
  rep.x0_infnorm = x0_infnorm;
  const double lr = std::log(R);
  if (x0_infnorm >= lr / bc::e) {
    rep.reason = "initial state too far from equilibrium: ||x0||_inf >= ln(R)/e";
    return rep;
  }
  rep.admissible = true;
  rep.prefactor = R / (bc::sqrt2pi * (bc::e - 1.0));
  rep.horizon = x0_infnorm == 0.0
                    ? bc::inf
                    : bc::ratio * lr * lr / (D0 * R) * std::log(lr / (bc::e * x0_infnorm));
  return rep;
}

/// Short-range exponential-lifting bound: admissible iff
/// ||exp(i x0)||_inf < R/e; horizon T_CF* = (e-1)/(D0 (2e-1))
/// (ln R - ln ||exp(i x0)||_inf - 1); prefactor C0 depends on max_j Im x0_j.
inline BoundsReport fourier_shortrange_bounds(double D0, double R, const Vec& x0) {
  require(D0 > 0.0 && R > 0.0, "invalid-argument", "D0 and R must be positive");
  BoundsReport rep;
  rep.scheme = BoundScheme::fourier_short;
  rep.D = D0;
  rep.R = R;
  double min_im = bc::inf, max_im = -bc::inf;
  for (Eigen::Index j = 0; j < x0.size(); ++j) {
    min_im = std::min(min_im, x0[j].imag());
    max_im = std::max(max_im, x0[j].imag());
  }
  rep.w0_inf = std::exp(-min_im);
  rep.w0_neg_inf = std::exp(max_im);
  if (!(rep.w0_inf < R / bc::e)) {
    rep.reason = "exponential of the initial state too large: ||exp(i x0)||_inf >= R/e";
    return rep;
  }
  rep.admissible = true;
  rep.horizon = bc::ratio / D0 * (std::log(R) - std::log(rep.w0_inf) - 1.0);
  const double c = (3.0 * bc::e - 1.0) / (2.0 * bc::e - 1.0);
  rep.prefactor = std::exp(c * max_im + c * std::log(R) - bc::e / (2.0 * bc::e - 1.0)) /
                  (bc::sqrt2pi * (bc::e - 1.0));
  return rep;
}

/// Best short-range horizon for the normalized scalar field, optimized over
/// the free radius with D0 = max(1, R):
///   T = (e-1)/(2e-1) * exp(Im x0 - 2)   if Im x0 <= 2,
///   T = (e-1)/(2e-1) * (Im x0 - 1)      otherwise,
/// attained at R* = exp(2 - Im x0) resp. R* = 1.
inline std::pair<double, double> optimize_scalar_TCF(double im_x0) {
  if (im_x0 <= 2.0) {
    const double Rstar = std::exp(2.0 - im_x0);
    return {Rstar, bc::ratio * std::exp(im_x0 - 2.0)};
  }
  return {1.0, bc::ratio * (im_x0 - 1.0)};
}

/// Whole-range exponential-lifting bound (mean term with positive imaginary
/// part): admissible iff ||exp(i x0)||_2 < mu0 R / (D0 + mu0); bound(N) =
/// (D0 R / mu0) ((D0 + mu0) ||exp(i x0)||_2 / (mu0 R))^N, t-independent.
inline BoundsReport fourier_wholerange_bounds(double D0, double R, double mu0, const Vec& x0) {
  require(D0 > 0.0 && R > 0.0, "invalid-argument", "D0 and R must be positive");
  require(mu0 > 0.0, "hypothesis-violation", "whole-range bounds need mu0 > 0");
  BoundsReport rep;
  rep.scheme = BoundScheme::fourier_whole;
  rep.D = D0;
  rep.R = R;
  rep.mu = mu0;
  double s = 0.0, max_im = -bc::inf;
  for (Eigen::Index j = 0; j < x0.size(); ++j) {
    s += std::exp(-2.0 * x0[j].imag());
    max_im = std::max(max_im, x0[j].imag());
  }
  rep.w0_l2 = std::sqrt(s);
  rep.w0_neg_inf = std::exp(max_im);
  if (!(rep.w0_l2 < mu0 * R / (D0 + mu0))) {
    rep.reason = "initial state outside the contraction region: ||exp(i x0)||_2 >= mu0 R/(D0+mu0)";
    return rep;
  }
  rep.admissible = true;
  rep.horizon = bc::inf;
  rep.prefactor = D0 * R / mu0;
  rep.base = (D0 + mu0) * rep.w0_l2 / (mu0 * R);
  return rep;
}

/// Two-sided multi-frequency bound: admissible iff
/// M = max_l max_j |Im(omega_l x0_j)| < ln R - 1 (R > e); horizon
/// T~_CF = (e-1)/(D1(2e-1)) (ln R - 1 - M); prefactor C1 with its ceiling
/// R^2/(2 pi e (e-1)).
inline BoundsReport multifreq_bounds(double D1, double R, const std::vector<Complex>& omegas,
                                     const Vec& x0) {
  require(D1 > 0.0, "invalid-argument", "D1 must be positive");
  require(R > bc::e, "invalid-regime", "multi-frequency bounds need R > e");
  BoundsReport rep;
  rep.scheme = BoundScheme::multifreq;
  rep.D = D1;
  rep.R = R;
  double M = 0.0;
  for (const Complex& w : omegas)
    for (Eigen::Index j = 0; j < x0.size(); ++j)
      M = std::max(M, std::abs((w * x0[j]).imag()));
  rep.M = M;
  rep.w0_inf = std::exp(M);
  rep.w0_neg_inf = std::exp(M);
  if (!(M < std::log(R) - 1.0)) {
    rep.reason = "initial state outside the regime: max |Im(omega_l x0_j)| >= ln R - 1";
    return rep;
  }
  rep.admissible = true;
  rep.horizon = bc::ratio / D1 * (std::log(R) - 1.0 - M);
  const double twoe1 = 2.0 * bc::e - 1.0;
  rep.prefactor = std::exp((3.0 * bc::e - 1.0) / twoe1 * std::log(R) +
                           (bc::e - 1.0) / twoe1 * M - bc::e / twoe1) /
                  (bc::sqrt2pi * (bc::e - 1.0));
  rep.ceiling = R * R / (2.0 * std::acos(-1.0) * bc::e * (bc::e - 1.0));
  return rep;
}

/// Positive-frequency whole-range bound: tau^ = (sum_l sum_j
/// e^{-2 Im(omega_l x0_j)})^{1/2}; admissible iff tau^ < mu^0 R/(D2 + mu^0);
/// bound(N) = (mu^0 R / D2) ((D2 + mu^0) tau^ / (mu^0 R))^N.
inline BoundsReport positive_wholerange_bounds(double D2, double R, double muhat0,
                                               const std::vector<Complex>& omegas,
                                               const Vec& x0) {
  require(D2 > 0.0 && R > 0.0, "invalid-argument", "D2 and R must be positive");
  require(muhat0 > 0.0, "hypothesis-violation", "whole-range bounds need muhat0 > 0");
  BoundsReport rep;
  rep.scheme = BoundScheme::positive;
  rep.D = D2;
  rep.R = R;
  rep.mu = muhat0;
  double s = 0.0, max_im = -bc::inf;
  for (const Complex& w : omegas)
    for (Eigen::Index j = 0; j < x0.size(); ++j) {
      const double im = (w * x0[j]).imag();
      s += std::exp(-2.0 * im);
      max_im = std::max(max_im, im);
    }
  rep.tau_hat = std::sqrt(s);
  rep.w0_neg_inf = std::exp(max_im);
  if (!(rep.tau_hat < muhat0 * R / (D2 + muhat0))) {
    rep.reason = "initial state outside the contraction region: tau^ >= mu^0 R/(D2+mu^0)";
    return rep;
  }
  rep.admissible = true;
  rep.horizon = bc::inf;
  rep.prefactor = muhat0 * R / D2;
  rep.base = (D2 + muhat0) * rep.tau_hat / (muhat0 * R);
  return rep;
}

/// Smallest N whose phase-reconstruction condition holds with right side
/// `slack` (default 1/2); also certifies the 4x phase bound at that N.
/// Linear scan from N = 1: the condition is not monotone near small N.
inline int order_for_tolerance(const BoundsReport& rep, double T_target, double slack = 0.5) {
  require(rep.admissible, "hypothesis-violation", "order selection needs an admissible report");
  require(slack > 0.0, "invalid-argument", "slack must be positive");
  if (rep.horizon < bc::inf)
    require(T_target < rep.horizon, "invalid-argument",
            "target time must lie strictly inside the horizon");
  constexpr int kCap = 10000;
  for (int N = 1; N <= kCap; ++N) {
    const double n = static_cast<double>(N);
    double lhs = 0.0;
    switch (rep.scheme) {
      case BoundScheme::fourier_short:
      case BoundScheme::multifreq:
        lhs = rep.prefactor * std::pow(n, -1.5) * std::exp(-rep.D * (rep.horizon - T_target) * n);
        break;
      case BoundScheme::fourier_whole:
      case BoundScheme::positive:
        lhs = rep.mu * rep.R * rep.w0_neg_inf / rep.D * std::pow(rep.base, n) *
              std::exp((rep.D + rep.mu) * T_target);
        break;
      case BoundScheme::carleman:
        lhs = rep.bound(N, T_target);
        break;
    }
    if (lhs <= slack) return N;
  }
  fail("no-order", "no section order satisfies the condition (base ratio >= 1?)");
}

/// Side-by-side horizons and rate dominance of the monomial lifting versus
/// the two-sided exponential lifting in the comparison regime
/// R >= e^{e/(e-1)}, 1 <= ||x0||_inf < ln(R)/e.
struct SchemeComparison {
  double T_C = 0.0;
  double T_CF_tilde = 0.0;
  bool rate_dominance = false;  // r~_CF(t) <= r_C(t) on [0, T_C]
};

inline SchemeComparison compare_schemes(double D0, double R, const Vec& x0, int grid_points = 32) {
  require(D0 > 0.0, "invalid-argument", "D0 must be positive");
  require(R >= std::exp(bc::e / (bc::e - 1.0)), "regime-violation",
          "comparison regime needs R >= e^{e/(e-1)}");
  const double xinf = inf_norm(x0);
  require(xinf >= 1.0 && xinf < std::log(R) / bc::e, "regime-violation",
          "comparison regime needs 1 <= ||x0||_inf < ln(R)/e");
  SchemeComparison cmp;
  const BoundsReport carleman = carleman_bounds(D0, R, xinf);
  cmp.T_C = carleman.horizon;
  double M = 0.0;
  for (Eigen::Index j = 0; j < x0.size(); ++j) M = std::max(M, std::abs(x0[j].imag()));
  // Single fundamental frequency: D1 = 2 D0, max(||exp(+-i x0)||_inf) = e^M.
  cmp.T_CF_tilde = bc::ratio / (2.0 * D0) * (std::log(R) - 1.0 - M);
  cmp.rate_dominance = true;
  for (int i = 0; i <= grid_points; ++i) {
    const double t = cmp.T_C * i / grid_points;
    const double r_cf = std::exp(2.0 * D0 * t) * std::pow(bc::e * std::exp(M) / R, bc::ratio);
    if (r_cf > carleman.rate(t)) {
      cmp.rate_dominance = false;
      break;
    }
  }
  return cmp;
}

}  // namespace cfl
