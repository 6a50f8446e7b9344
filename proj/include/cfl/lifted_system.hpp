#pragma once

#include "cfl/core.hpp"
#include "cfl/multiindex.hpp"

namespace cfl {

enum class Scheme { carleman, fourier, multifreq, positive };

inline const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::carleman: return "carleman";
    case Scheme::fourier: return "fourier";
    case Scheme::multifreq: return "multifreq";
    case Scheme::positive: return "positive";
  }
  return "?";
}

/// Finite-section truncation of an infinite lifted linear system:
/// y' = M y + b over the graded basis of orders 1..N, together with the
/// lifted initial state. Dense column-major storage; block (k,l) slices are
/// addressed through the basis layer offsets.
struct LiftedSystem {
  Scheme scheme;
  GradedBasis basis;
  Mat matrix;
  Vec inhomogeneous;
  Vec initial;

  int dimension() const { return basis.total(); }

  Eigen::Block<const Mat> block(int k, int l) const {
    return matrix.block(basis.layer_offset(k), basis.layer_offset(l),
                        basis.layer_size(k), basis.layer_size(l));
  }
  Eigen::Block<Mat> block(int k, int l) {
    return matrix.block(basis.layer_offset(k), basis.layer_offset(l),
                        basis.layer_size(k), basis.layer_size(l));
  }
};

}  // namespace cfl
