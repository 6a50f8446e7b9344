#pragma once

#include <vector>

#include "cfl/core.hpp"
#include "cfl/fourier_system.hpp"
#include "cfl/lifted_system.hpp"
#include "cfl/multiindex.hpp"

namespace cfl {

/// Schur norm: max of supremal row l1 sum and supremal column l1 sum.
inline double schur_norm(const Mat& m) {
  double row = 0.0, col = 0.0;
  for (Eigen::Index r = 0; r < m.rows(); ++r) row = std::max(row, m.row(r).cwiseAbs().sum());
  for (Eigen::Index c = 0; c < m.cols(); ++c) col = std::max(col, m.col(c).cwiseAbs().sum());
  return std::max(row, col);
}

/// Block B_{k,l} of the exponential lifting of an analytic field:
/// entry (alpha, beta) = i alpha . g_{beta - alpha}. Zero for l < k.
inline Mat build_B_block(const FourierSystem& sys, int k, int l) {
  require(k >= 1 && l >= 1, "invalid-argument", "block orders must be >= 1");
  if (!sys.is_analytic())
    fail("analyticity-violation", "exponential lifting needs nonnegative frequency support");
  const int d = sys.dim();
  const auto rows = enumerate_layer(d, k);
  const auto cols = enumerate_layer(d, l);
  Mat block = Mat::Zero(static_cast<Eigen::Index>(rows.size()),
                        static_cast<Eigen::Index>(cols.size()));
  if (l < k) return block;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const MultiIndex& alpha = rows[r];
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const Vec* g = sys.coeff(cols[c] - rows[r]);
      if (g == nullptr) continue;
      block(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = kI * alpha.dot(*g);
    }
  }
  return block;
}

/// Order-N finite section of the Carleman-Fourier lifting: block upper
/// triangular with diagonal blocks diag(i alpha . g_0); initial state
/// w_k(0) = exp(i alpha . x0) over the graded basis.
inline LiftedSystem fourier_finite_section(const FourierSystem& sys, const Vec& x0, int N,
                                           Scheme tag = Scheme::fourier) {
  require(N >= 1, "invalid-argument", "truncation order must be >= 1");
  require(x0.size() == sys.dim(), "invalid-argument", "initial state dimension mismatch");
  if (!sys.is_analytic())
    fail("analyticity-violation", "exponential lifting needs nonnegative frequency support");
  GradedBasis basis(sys.dim(), N);
  LiftedSystem lift{tag, basis, Mat::Zero(basis.total(), basis.total()),
                    Vec::Zero(basis.total()), Vec::Zero(basis.total())};
  const int band = sys.max_support_order();
  for (int k = 1; k <= N; ++k)
    for (int l = k; l <= std::min(N, k + band); ++l)
      lift.block(k, l) = build_B_block(sys, k, l);
  for (int p = 0; p < basis.total(); ++p)
    lift.initial[p] = std::exp(kI * basis.at(p).dot(x0));
  return lift;
}

enum class ExtensionKind { two_sided, positive };

/// Analytic system over an extended state, together with the coordinate
/// layout that maps it back to the base system. Two-sided extensions carry
/// (omega_1 x, ..., omega_L x, -omega_1 x, ..., -omega_L x) in C^{2dL};
/// positive extensions carry (omega_1 x, ..., omega_L x) in C^{dL}.
struct ExtendedSystem {
  ExtensionKind kind;
  int base_dim;
  int num_freqs;
  std::vector<Complex> omegas;
  FourierSystem sys;  // dimension 2dL or dL, analytic by construction

  int dim() const { return sys.dim(); }

  /// Extended coordinate of (sign copy m, frequency l, base coordinate jp),
  /// all 0-based: j = m L d + l d + jp.
  int coord(int m, int l, int jp) const {
    return m * num_freqs * base_dim + l * base_dim + jp;
  }

  /// Extended initial state for a base initial state x0.
  Vec initial_state(const Vec& x0) const {
    require(x0.size() == base_dim, "invalid-argument", "initial state dimension mismatch");
    const int copies = kind == ExtensionKind::two_sided ? 2 : 1;
    Vec ext(copies * num_freqs * base_dim);
    for (int m = 0; m < copies; ++m)
      for (int l = 0; l < num_freqs; ++l) {
        const Complex s = (m == 0 ? 1.0 : -1.0) * omegas[l];
        for (int jp = 0; jp < base_dim; ++jp) ext[coord(m, l, jp)] = s * x0[jp];
      }
    return ext;
  }
};

namespace detail {

inline void split_positive_negative(const MultiIndex& a, MultiIndex& plus, MultiIndex& minus) {
  for (int j = 0; j < a.dim(); ++j) {
    plus[j] = std::max(a[j], 0);
    minus[j] = plus[j] - a[j];
  }
}

}  // namespace detail

/// Extension over the doubled state (x, -x scaled by each frequency). Each
/// base coefficient g at (alpha_1..alpha_L) lands at the extended frequency
/// gamma = ((alpha_1)_+, .., (alpha_L)_+, (alpha_1)_-, .., (alpha_L)_-) with
/// extended vector ((-1)^m omega_l g_j') at coordinate m L d + l d + j'.
/// The result is analytic no matter the sign pattern of the base support.
inline ExtendedSystem extend_two_sided(const MultiFreqSystem& base) {
  const int d = base.dim(), L = base.num_freqs();
  ExtendedSystem ext{ExtensionKind::two_sided, d, L, base.omegas(), FourierSystem(2 * d * L)};
  for (const auto& [key, g] : base.coeffs()) {
    std::vector<int> gamma(2 * d * L, 0);
    for (int l = 0; l < L; ++l) {
      MultiIndex al(std::vector<int>(key.entries().begin() + l * d,
                                     key.entries().begin() + (l + 1) * d));
      MultiIndex plus = MultiIndex::zero(d), minus = MultiIndex::zero(d);
      detail::split_positive_negative(al, plus, minus);
      for (int j = 0; j < d; ++j) {
        gamma[l * d + j] = plus[j];
        gamma[(L + l) * d + j] = minus[j];
      }
    }
    Vec gt(2 * d * L);
    for (int m = 0; m < 2; ++m)
      for (int l = 0; l < L; ++l) {
        const Complex s = (m == 0 ? 1.0 : -1.0) * base.omegas()[l];
        for (int jp = 0; jp < d; ++jp) gt[ext.coord(m, l, jp)] = s * g[jp];
      }
    ext.sys.add(MultiIndex(std::move(gamma)), gt);
  }
  return ext;
}

/// Extension for fields whose support is already nonnegative: the extended
/// frequency is the plain concatenation beta = (alpha_1 .. alpha_L) and the
/// coefficient at coordinate l d + j' is omega_l g_j'.
inline ExtendedSystem extend_positive(const MultiFreqSystem& base) {
  if (!base.nonnegative_support())
    fail("invalid-argument", "positive extension needs nonnegative frequency support");
  const int d = base.dim(), L = base.num_freqs();
  ExtendedSystem ext{ExtensionKind::positive, d, L, base.omegas(), FourierSystem(d * L)};
  for (const auto& [key, g] : base.coeffs()) {
    Vec gh(d * L);
    for (int l = 0; l < L; ++l)
      for (int jp = 0; jp < d; ++jp) gh[l * d + jp] = base.omegas()[l] * g[jp];
    ext.sys.add(key, gh);
  }
  return ext;
}

/// Finite section of the Carleman-Fourier lifting of an extended system,
/// with the lifted initial state taken from the extended initial vector.
inline LiftedSystem multifreq_finite_section(const ExtendedSystem& ext, const Vec& x0, int N) {
  return fourier_finite_section(
      ext.sys, ext.initial_state(x0), N,
      ext.kind == ExtensionKind::two_sided ? Scheme::multifreq : Scheme::positive);
}

}  // namespace cfl
