#pragma once

#include <map>

#include "cfl/core.hpp"
#include "cfl/fourier_system.hpp"
#include "cfl/lifted_system.hpp"
#include "cfl/multiindex.hpp"

namespace cfl {

/// Maclaurin coefficients of a vector field: g(x) = sum_beta f_beta x^beta,
/// stored for every beta with |beta| <= max_order. Built from finite Fourier
/// data the sums are exact and tail_bound is 0.
struct MaclaurinTable {
  int d = 0;
  int max_order = 0;
  std::map<MultiIndex, Vec> f;
  double tail_bound = 0.0;

  /// f_beta with the convention f_gamma = 0 for gamma outside Z^d_+.
  /// Requesting an order beyond the table is an assembly bug, not a zero.
  Vec f_at(const MultiIndex& beta) const {
    if (!beta.nonnegative()) return Vec::Zero(d);
    if (beta.order() > max_order)
      fail("order-overflow", "Maclaurin table truncated below requested order");
    auto it = f.find(beta);
    return it == f.end() ? Vec::Zero(d) : it->second;
  }

  Vec eval(const Vec& x) const {
    Vec out = Vec::Zero(d);
    for (const auto& [beta, fb] : f) out += fb * beta.monomial(x);
    return out;
  }

  /// S_k = sum_{|beta|=k} ||f_beta||_1 for k = 0..max_order.
  std::vector<double> per_order_sums() const {
    std::vector<double> s(static_cast<std::size_t>(max_order) + 1, 0.0);
    for (const auto& [beta, fb] : f) s[beta.order()] += l1_norm(fb);
    return s;
  }
};

/// i^n, exact (pow on complex would leave rounding dirt in the zero part).
inline Complex unit_imag_power(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

/// f_beta = (i^{|beta|} / beta!) sum_alpha g_alpha alpha^beta. The Fourier
/// support is finite, so the alpha-sum is exact.
inline MaclaurinTable maclaurin_from_fourier(const FourierSystem& sys, int max_order) {
  require(max_order >= 0, "invalid-argument", "max_order must be >= 0");
  MaclaurinTable table;
  table.d = sys.dim();
  table.max_order = max_order;
  std::vector<MultiIndex> betas;
  betas.push_back(MultiIndex::zero(sys.dim()));
  for (int k = 1; k <= max_order; ++k)
    for (const auto& b : enumerate_layer(sys.dim(), k)) betas.push_back(b);
  for (const auto& beta : betas) {
    Vec fb = Vec::Zero(sys.dim());
    for (const auto& [alpha, g] : sys.coeffs()) fb += g * alpha.int_power(beta);
    fb *= unit_imag_power(beta.order()) / beta.factorial();
    table.f.emplace(beta, std::move(fb));
  }
  return table;
}

/// Maclaurin table of a multi-frequency field: each coefficient contributes
/// through its effective frequency nu = sum_l omega_l alpha_l (complex in
/// general), f_beta = (i^{|beta|} / beta!) sum g nu^beta.
inline MaclaurinTable maclaurin_from_fourier(const MultiFreqSystem& sys, int max_order) {
  require(max_order >= 0, "invalid-argument", "max_order must be >= 0");
  const int d = sys.dim(), L = sys.num_freqs();
  std::vector<std::pair<Vec, Vec>> terms;  // (effective frequency, coefficient)
  for (const auto& [key, g] : sys.coeffs()) {
    Vec nu = Vec::Zero(d);
    for (int l = 0; l < L; ++l)
      for (int j = 0; j < d; ++j)
        nu[j] += sys.omegas()[l] * static_cast<double>(key[l * d + j]);
    terms.emplace_back(std::move(nu), g);
  }
  MaclaurinTable table;
  table.d = d;
  table.max_order = max_order;
  std::vector<MultiIndex> betas;
  betas.push_back(MultiIndex::zero(d));
  for (int k = 1; k <= max_order; ++k)
    for (const auto& b : enumerate_layer(d, k)) betas.push_back(b);
  for (const auto& beta : betas) {
    Vec fb = Vec::Zero(d);
    for (const auto& [nu, g] : terms) {
      Complex p = 1.0;
      for (int j = 0; j < d; ++j)
        for (int c = 0; c < beta[j]; ++c) p *= nu[j];
      fb += g * p;
    }
    fb *= unit_imag_power(beta.order()) / beta.factorial();
    table.f.emplace(beta, std::move(fb));
  }
  return table;
}

/// Block A_{k,l} of the monomial lifting: entry (alpha, beta) is
/// sum_j alpha_j f_{j, beta - alpha + e_j}.
inline Mat build_A_block(const MaclaurinTable& table, int k, int l) {
  require(k >= 1 && l >= 1, "invalid-argument", "block orders must be >= 1");
  const int d = table.d;
  const auto rows = enumerate_layer(d, k);
  const auto cols = enumerate_layer(d, l);
  Mat block = Mat::Zero(static_cast<Eigen::Index>(rows.size()),
                        static_cast<Eigen::Index>(cols.size()));
  // All needed f-orders equal l - k + 1; anything lower vanishes entrywise.
  if (l - k + 1 < 0) return block;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const MultiIndex& alpha = rows[r];
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const MultiIndex diff = cols[c] - alpha;
      Complex entry = 0.0;
      for (int j = 0; j < d; ++j) {
        if (alpha[j] == 0) continue;
        MultiIndex idx = diff;
        idx[j] += 1;
        entry += static_cast<double>(alpha[j]) * table.f_at(idx)[j];
      }
      block(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = entry;
    }
  }
  return block;
}

/// Order-N finite section of the Carleman (monomial) lifting of a Maclaurin
/// field: matrix of all A_{k,l} with 1 <= k,l <= N, nonhomogeneous term
/// (f_0, 0, ..., 0), initial state z_k(0) = x0^alpha.
inline LiftedSystem carleman_finite_section(const MaclaurinTable& table, const Vec& x0, int N) {
  require(N >= 1, "invalid-argument", "truncation order must be >= 1");
  require(x0.size() == table.d, "invalid-argument", "initial state dimension mismatch");
  require(table.max_order >= N, "order-overflow",
          "Maclaurin table must reach order N for an order-N section");
  GradedBasis basis(table.d, N);
  LiftedSystem lift{Scheme::carleman, basis, Mat::Zero(basis.total(), basis.total()),
                    Vec::Zero(basis.total()), Vec::Zero(basis.total())};
  for (int k = 1; k <= N; ++k)
    for (int l = std::max(1, k - 1); l <= N; ++l)
      lift.block(k, l) = build_A_block(table, k, l);
  lift.inhomogeneous.head(table.d) = table.f_at(MultiIndex::zero(table.d));
  for (int p = 0; p < basis.total(); ++p) lift.initial[p] = basis.at(p).monomial(x0);
  return lift;
}

inline LiftedSystem carleman_finite_section(const FourierSystem& sys, const Vec& x0, int N) {
  const int max_order = N + sys.max_support_order();
  return carleman_finite_section(maclaurin_from_fourier(sys, max_order), x0, N);
}

/// Maclaurin table of the reduced (theta1, theta2) Kuramoto field truncated at
/// the given total degree: constant term (omega1, omega2) and, for each odd
/// total degree 2k+1 <= degree and split l + (2k+1-l),
///   f_(l, 2k+1-l) = Kt (-1)^k / ((2k+1-l)! l!) * ((-1)^l - 2^l,
///                                                 (-1)^{2k+1-l} - 2^{2k+1-l}).
inline MaclaurinTable kuramoto_taylor(double omega1, double omega2, double Ktilde, int degree) {
  require(degree >= 1, "invalid-argument", "degree must be >= 1");
  MaclaurinTable table;
  table.d = 2;
  table.max_order = degree;
  Vec c(2);
  c[0] = omega1;
  c[1] = omega2;
  table.f.emplace(MultiIndex{0, 0}, c);
  auto fct = [](int n) {
    double p = 1.0;
    for (int i = 2; i <= n; ++i) p *= i;
    return p;
  };
  for (int k = 0; 2 * k + 1 <= degree; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    for (int l = 0; l <= 2 * k + 1; ++l) {
      const int m = 2 * k + 1 - l;
      const double scale = Ktilde * sign / (fct(m) * fct(l));
      Vec fb(2);
      fb[0] = scale * (std::pow(-1.0, l) - std::pow(2.0, l));
      fb[1] = scale * (std::pow(-1.0, m) - std::pow(2.0, m));
      table.f.emplace(MultiIndex{l, m}, fb);
    }
  }
  // Even orders vanish identically; store explicit zeros so every
  // |beta| <= degree is present.
  for (int k = 2; k <= degree; k += 2)
    for (const auto& beta : enumerate_layer(2, k)) table.f.emplace(beta, Vec::Zero(2));
  return table;
}

}  // namespace cfl
