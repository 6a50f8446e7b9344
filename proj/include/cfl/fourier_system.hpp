#pragma once

#include <cmath>
#include <map>
#include <vector>

#include "cfl/core.hpp"
#include "cfl/multiindex.hpp"

namespace cfl {

/// Certificate for the per-order coefficient decay sum_{|alpha|=k} ||g_alpha||_1
/// <= D R^{-k}. D is minimal for the given R, so equality holds at the
/// maximizing order.
struct DecayCertificate {
  double R = 0.0;
  double D = 0.0;
  std::vector<double> per_order_sums;  // S_k for k = 0..max supported order
};

/// Periodic vector field given by finitely many Fourier coefficients:
/// g(x) = sum_alpha g_alpha exp(i alpha . x), alpha in Z^d.
class FourierSystem {
 public:
  explicit FourierSystem(int d) : d_(d) {
    require(d >= 1, "invalid-argument", "FourierSystem dimension must be >= 1");
  }

  int dim() const { return d_; }
  const std::map<MultiIndex, Vec>& coeffs() const { return coeffs_; }

  /// Accumulate a coefficient vector at frequency alpha. Exact-zero vectors
  /// are dropped so the support stays minimal.
  void add(const MultiIndex& alpha, const Vec& g) {
    require(alpha.dim() == d_ && g.size() == d_, "invalid-argument",
            "coefficient dimension mismatch");
    auto [it, inserted] = coeffs_.emplace(alpha, g);
    if (!inserted) it->second += g;
    if (it->second.isZero(0.0)) coeffs_.erase(it);
  }

  const Vec* coeff(const MultiIndex& alpha) const {
    auto it = coeffs_.find(alpha);
    return it == coeffs_.end() ? nullptr : &it->second;
  }

  Vec eval(const Vec& x) const {
    require(x.size() == d_, "invalid-argument", "state dimension mismatch");
    Vec out = Vec::Zero(d_);
    for (const auto& [alpha, g] : coeffs_) out += g * std::exp(kI * alpha.dot(x));
    return out;
  }

  /// True iff every supported frequency lies in Z^d_+ (field analytic on the
  /// shifted upper half-plane).
  bool is_analytic() const {
    for (const auto& [alpha, g] : coeffs_)
      if (!alpha.nonnegative()) return false;
    return true;
  }

  int max_support_order() const {
    int m = 0;
    for (const auto& [alpha, g] : coeffs_) m = std::max(m, alpha.order());
    return m;
  }

  /// S_k = sum_{|alpha|=k} ||g_alpha||_1 for k = 0..max supported order.
  std::vector<double> per_order_sums() const {
    std::vector<double> s(static_cast<std::size_t>(max_support_order()) + 1, 0.0);
    for (const auto& [alpha, g] : coeffs_) s[alpha.order()] += l1_norm(g);
    return s;
  }

  /// Tight decay constant for the given radius: D = max_k S_k R^k.
  DecayCertificate decay_certificate(double R) const {
    require(R > 0.0, "invalid-argument", "decay radius must be positive");
    if (coeffs_.empty()) fail("degenerate-system", "empty coefficient map");
    DecayCertificate cert;
    cert.R = R;
    cert.per_order_sums = per_order_sums();
    double rk = 1.0;
    for (double sk : cert.per_order_sums) {
      cert.D = std::max(cert.D, sk * rk);
      rk *= R;
    }
    return cert;
  }

  /// min_j Im(g_{j,0}); a positive value certifies the mean-term condition
  /// with mu0 equal to this value.
  double mu0() const {
    const Vec* g0 = coeff(MultiIndex::zero(d_));
    if (g0 == nullptr) return 0.0;
    double m = std::numeric_limits<double>::infinity();
    for (int j = 0; j < d_; ++j) m = std::min(m, g0->coeff(j).imag());
    return m;
  }

 private:
  int d_;
  std::map<MultiIndex, Vec> coeffs_;
};

/// Scalar field a(1 - b e^{ix}) as a degree-one trigonometric polynomial:
/// coefficients {0 -> a, 1 -> -a b}.
inline FourierSystem scalar_example(Complex a, Complex b) {
  require(a != Complex(0.0), "invalid-argument", "scalar example needs a != 0");
  FourierSystem sys(1);
  Vec c0(1), c1(1);
  c0[0] = a;
  c1[0] = -a * b;
  sys.add(MultiIndex{0}, c0);
  sys.add(MultiIndex{1}, c1);
  return sys;
}

/// Three-oscillator Kuramoto field in the zero-phase-sum chart, written with
/// nonnegative frequencies only: six order-3 exponentials with coefficient
/// pattern K* (+-1, 0, -+1), K* = K/(2 d i), plus the constant term omega.
inline FourierSystem kuramoto_analytic(const Eigen::Vector3d& omega, double K) {
  require(std::abs(omega.sum()) <= 1e-12, "invalid-argument",
          "kuramoto_analytic needs frequencies summing to zero");
  const int d = 3;
  const Complex Kstar = Complex(K) / (2.0 * d * kI);
  FourierSystem sys(d);
  Vec w(d);
  for (int j = 0; j < d; ++j) w[j] = omega[j];
  sys.add(MultiIndex::zero(d), w);
  struct Term {
    MultiIndex freq;
    std::array<int, 3> pat;
  };
  const Term terms[] = {
      {MultiIndex{2, 1, 0}, {-1, 0, 1}}, {MultiIndex{2, 0, 1}, {-1, 1, 0}},
      {MultiIndex{1, 2, 0}, {0, -1, 1}}, {MultiIndex{1, 0, 2}, {0, 1, -1}},
      {MultiIndex{0, 2, 1}, {1, -1, 0}}, {MultiIndex{0, 1, 2}, {1, 0, -1}},
  };
  for (const auto& t : terms) {
    Vec g(d);
    for (int j = 0; j < d; ++j) g[j] = Kstar * static_cast<double>(t.pat[j]);
    sys.add(t.freq, g);
  }
  return sys;
}

/// |e^{iat} - 1|^2 for a = e^{i phi}:
/// e^{-2 t sin phi} - 2 e^{-t sin phi} cos(t cos phi) + 1.
inline double h_profile(double phi, double t) {
  const double s = std::sin(phi), c = std::cos(phi);
  return std::exp(-2.0 * t * s) - 2.0 * std::exp(-t * s) * std::cos(t * c) + 1.0;
}

/// Periodic vector field with multiple fundamental frequencies omega_1..omega_L:
/// g(x) = sum g_{alpha_1..alpha_L} exp(i sum_l omega_l alpha_l . x).
/// Coefficient keys are the L multi-indices concatenated into one length-dL index.
class MultiFreqSystem {
 public:
  MultiFreqSystem(int d, std::vector<Complex> omegas)
      : d_(d), omegas_(std::move(omegas)) {
    require(d >= 1 && !omegas_.empty(), "invalid-argument",
            "MultiFreqSystem needs d >= 1 and at least one frequency");
    for (const Complex& w : omegas_)
      require(w != Complex(0.0), "invalid-argument", "fundamental frequencies must be nonzero");
  }

  int dim() const { return d_; }
  int num_freqs() const { return static_cast<int>(omegas_.size()); }
  const std::vector<Complex>& omegas() const { return omegas_; }
  const std::map<MultiIndex, Vec>& coeffs() const { return coeffs_; }

  void add(const MultiIndex& alphas, const Vec& g) {
    require(alphas.dim() == d_ * num_freqs() && g.size() == d_, "invalid-argument",
            "coefficient dimension mismatch");
    auto [it, inserted] = coeffs_.emplace(alphas, g);
    if (!inserted) it->second += g;
    if (it->second.isZero(0.0)) coeffs_.erase(it);
  }

  const Vec* coeff(const MultiIndex& alphas) const {
    auto it = coeffs_.find(alphas);
    return it == coeffs_.end() ? nullptr : &it->second;
  }

  Vec eval(const Vec& x) const {
    require(x.size() == d_, "invalid-argument", "state dimension mismatch");
    const int L = num_freqs();
    Vec out = Vec::Zero(d_);
    for (const auto& [key, g] : coeffs_) {
      Complex phase = 0.0;
      for (int l = 0; l < L; ++l) {
        Complex al_dot_x = 0.0;
        for (int j = 0; j < d_; ++j)
          al_dot_x += static_cast<double>(key[l * d_ + j]) * x[j];
        phase += omegas_[l] * al_dot_x;
      }
      out += g * std::exp(kI * phase);
    }
    return out;
  }

  /// True iff every supported key has nonnegative entries.
  bool nonnegative_support() const {
    for (const auto& [key, g] : coeffs_)
      if (!key.nonnegative()) return false;
    return true;
  }

 private:
  int d_;
  std::vector<Complex> omegas_;
  std::map<MultiIndex, Vec> coeffs_;
};

/// Reduced (theta1, theta2) Kuramoto field for d=3 with theta3 = -theta1-theta2:
///   dtheta1 = omega1 - Kt sin(theta1-theta2) - Kt sin(2 theta1+theta2)
///   dtheta2 = omega2 - Kt sin(theta2-theta1) - Kt sin(2 theta2+theta1)
/// with sines expanded into exponential pairs of both signs; L=1, omega_1=1.
inline MultiFreqSystem kuramoto_pairfield(double omega1, double omega2, double Ktilde) {
  MultiFreqSystem sys(2, {Complex(1.0)});
  const Complex c = Complex(Ktilde) / (2.0 * kI);
  auto vec2 = [](Complex v0, Complex v1) {
    Vec v(2);
    v[0] = v0;
    v[1] = v1;
    return v;
  };
  sys.add(MultiIndex{0, 0}, vec2(omega1, omega2));
  sys.add(MultiIndex{1, -1}, vec2(-c, c));
  sys.add(MultiIndex{-1, 1}, vec2(c, -c));
  sys.add(MultiIndex{2, 1}, vec2(-c, 0.0));
  sys.add(MultiIndex{-2, -1}, vec2(c, 0.0));
  sys.add(MultiIndex{1, 2}, vec2(0.0, -c));
  sys.add(MultiIndex{-1, -2}, vec2(0.0, c));
  return sys;
}

}  // namespace cfl
