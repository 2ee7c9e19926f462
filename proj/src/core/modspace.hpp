#pragma once

// Dispersive modulation norms on coefficient fields: l^p over the spatial
// translates of each frequency layer, l^q over layers against the radial
// weight (1+|xi_k|)^beta. Infinite exponents are exact suprema.

#include "frame.hpp"
#include "jaffard.hpp"

namespace sg {

struct ModNormSpec {
  double p = 2;
  double q = 2;
  double beta = 0;

  void validate() const {
    require(p >= 1 && q >= 1, ErrorCode::invalid_argument,
            "modulation norm needs p,q >= 1");
  }
};

inline double radial_weight(double beta, double nxi) {
  return std::pow(1.0 + nxi, beta);
}

double mod_norm(const CoefficientField& c, const ModNormSpec& spec);

// measured moderation constant: sup over node pairs with d_alpha <= 1 of
// max(w(xi)/w(eta), w(eta)/w(xi))
double weight_moderation_check(const SubdyadicLattice& lat, double beta);

struct WindowIndependenceReport {
  double ratio_min = 0;
  double ratio_max = 0;
  DecayProfile cross_gram_decay;
};

WindowIndependenceReport window_independence_ratio(
    const std::vector<SampledField>& f_set, const DispersiveFrame& frame1,
    const DispersiveFrame& frame2, const ModNormSpec& spec);

}  // namespace sg
