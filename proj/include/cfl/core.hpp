#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cfl {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

constexpr Complex kI{0.0, 1.0};

/// Error with a stable machine-readable kind ("invalid-argument",
/// "analyticity-violation", ...) in front of the human message.
class error : public std::runtime_error {
 public:
  error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

[[noreturn]] inline void fail(const char* kind, const std::string& msg) {
  throw error(kind, msg);
}

inline void require(bool cond, const char* kind, const std::string& msg) {
  if (!cond) fail(kind, msg);
}

/// binom(n, k) in exact integer arithmetic; 0 when k < 0 or k > n.
inline std::int64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t num = 1, den = 1;
  for (std::int64_t i = 0; i < k; ++i) {
    num *= n - i;
    den *= i + 1;
  }
  return num / den;
}

inline double inf_norm(const Vec& v) {
  double m = 0.0;
  for (Eigen::Index j = 0; j < v.size(); ++j) m = std::max(m, std::abs(v[j]));
  return m;
}

inline double l1_norm(const Vec& v) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < v.size(); ++j) s += std::abs(v[j]);
  return s;
}

}  // namespace cfl
