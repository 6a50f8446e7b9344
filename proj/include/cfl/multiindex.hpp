#pragma once

#include <map>
#include <numeric>
#include <span>
#include <vector>

#include "cfl/core.hpp"

namespace cfl {

/// Integer multi-index. Graded bases hold nonnegative entries only;
/// frequency indices of periodic fields may carry negative entries.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {}
  MultiIndex(std::initializer_list<int> entries) : entries_(entries) {}

  static MultiIndex zero(int d) { return MultiIndex(std::vector<int>(d, 0)); }
  static MultiIndex unit(int d, int j) {
    std::vector<int> e(d, 0);
    e[j] = 1;
    return MultiIndex(std::move(e));
  }

  int dim() const { return static_cast<int>(entries_.size()); }
  int operator[](int j) const { return entries_[j]; }
  int& operator[](int j) { return entries_[j]; }
  const std::vector<int>& entries() const { return entries_; }

  /// |alpha| = sum of absolute entries.
  int order() const {
    int s = 0;
    for (int e : entries_) s += std::abs(e);
    return s;
  }

  bool nonnegative() const {
    for (int e : entries_)
      if (e < 0) return false;
    return true;
  }

  MultiIndex operator+(const MultiIndex& o) const {
    MultiIndex r(*this);
    for (int j = 0; j < dim(); ++j) r.entries_[j] += o.entries_[j];
    return r;
  }
  MultiIndex operator-(const MultiIndex& o) const {
    MultiIndex r(*this);
    for (int j = 0; j < dim(); ++j) r.entries_[j] -= o.entries_[j];
    return r;
  }

  /// alpha . x = sum_j alpha_j x_j
  Complex dot(const Vec& x) const {
    Complex s = 0.0;
    for (int j = 0; j < dim(); ++j) s += static_cast<double>(entries_[j]) * x[j];
    return s;
  }

  /// x^alpha (requires nonnegative entries; 0^0 = 1)
  Complex monomial(const Vec& x) const {
    Complex p = 1.0;
    for (int j = 0; j < dim(); ++j)
      for (int c = 0; c < entries_[j]; ++c) p *= x[j];
    return p;
  }

  /// alpha^beta = prod alpha_j^{beta_j} for this = alpha (integer base), beta >= 0.
  double int_power(const MultiIndex& beta) const {
    double p = 1.0;
    for (int j = 0; j < dim(); ++j)
      for (int c = 0; c < beta.entries_[j]; ++c) p *= static_cast<double>(entries_[j]);
    return p;
  }

  /// beta! = prod beta_j!
  double factorial() const {
    double p = 1.0;
    for (int e : entries_)
      for (int c = 2; c <= e; ++c) p *= static_cast<double>(c);
    return p;
  }

  bool operator==(const MultiIndex& o) const { return entries_ == o.entries_; }
  bool operator!=(const MultiIndex& o) const { return entries_ != o.entries_; }
  /// Lexicographic order on entries; used for deterministic map keys.
  bool operator<(const MultiIndex& o) const { return entries_ < o.entries_; }

 private:
  std::vector<int> entries_;
};

/// Number of multi-indices of order k in d variables: binom(k+d-1, d-1).
inline std::int64_t layer_size(int d, int k) {
  require(d >= 1 && k >= 0, "invalid-argument", "layer_size needs d >= 1, k >= 0");
  return binomial(k + d - 1, d - 1);
}

/// binom(N+d, d) - 1 = sum of layer sizes for orders 1..N.
inline std::int64_t total_dimension(int d, int N) {
  require(d >= 1 && N >= 1, "invalid-argument", "total_dimension needs d >= 1, N >= 1");
  return binomial(N + d, d) - 1;
}

/// All multi-indices of order k in d variables, graded-lexicographic
/// descending on entries. Example: (d=2, k=2) -> (2,0), (1,1), (0,2).
inline std::vector<MultiIndex> enumerate_layer(int d, int k) {
  require(d >= 1 && k >= 1, "invalid-argument", "enumerate_layer needs d >= 1, k >= 1");
  std::vector<MultiIndex> out;
  out.reserve(static_cast<std::size_t>(layer_size(d, k)));
  std::vector<int> cur(d, 0);
  auto rec = [&](auto&& self, int pos, int rem) -> void {
    if (pos == d - 1) {
      cur[pos] = rem;
      out.emplace_back(cur);
      return;
    }
    for (int v = rem; v >= 0; --v) {
      cur[pos] = v;
      self(self, pos + 1, rem - v);
    }
  };
  rec(rec, 0, k);
  return out;
}

/// Deterministic enumeration of all multi-indices of orders 1..N in d
/// variables, layer by layer. Flat positions are 0-based; order 0 is absent.
class GradedBasis {
 public:
  GradedBasis(int d, int N) : d_(d), max_order_(N) {
    require(d >= 1 && N >= 1, "invalid-argument", "GradedBasis needs d >= 1, N >= 1");
    offsets_.resize(N + 2, 0);
    for (int k = 1; k <= N; ++k) {
      auto layer = enumerate_layer(d, k);
      offsets_[k] = static_cast<int>(flat_.size());
      for (auto& m : layer) {
        positions_.emplace(m, static_cast<int>(flat_.size()));
        flat_.push_back(std::move(m));
      }
    }
    offsets_[N + 1] = static_cast<int>(flat_.size());
  }

  int dim() const { return d_; }
  int max_order() const { return max_order_; }
  int total() const { return static_cast<int>(flat_.size()); }

  int layer_offset(int k) const { return offsets_[k]; }
  int layer_size(int k) const { return offsets_[k + 1] - offsets_[k]; }
  std::span<const MultiIndex> layer(int k) const {
    return {flat_.data() + offsets_[k], static_cast<std::size_t>(layer_size(k))};
  }

  const MultiIndex& at(int flat_pos) const { return flat_[flat_pos]; }

  /// Flat position of m; inverse of the flat enumeration.
  int position_of(const MultiIndex& m) const {
    auto it = positions_.find(m);
    if (it == positions_.end())
      fail("not-found", "multi-index not in basis (order out of range or bad dimension)");
    return it->second;
  }

  bool contains(const MultiIndex& m) const { return positions_.count(m) > 0; }

 private:
  int d_;
  int max_order_;
  std::vector<MultiIndex> flat_;
  std::vector<int> offsets_;  // offsets_[k] = flat start of layer k; [N+1] = total
  std::map<MultiIndex, int> positions_;
};

}  // namespace cfl
