#include "modspace.hpp"

#include <cmath>
#include <limits>

namespace sg {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double mod_norm(const CoefficientField& c, const ModNormSpec& spec) {
  spec.validate();
  require(c.lattice != nullptr && c.values.size() == c.lattice->size(),
          ErrorCode::grid_mismatch, "coefficients not aligned with a lattice");
  const SubdyadicLattice& lat = *c.lattice;
  double outer = 0;  // accumulator for the l^q layer sum (or sup)
  for (const FreqLayer& layer : lat.layers) {
    double inner = 0;
    for (std::size_t i = 0; i < layer.node_count; ++i) {
      double v = std::abs(c.values[layer.node_offset + i]);
      if (spec.p == kInf)
        inner = std::max(inner, v);
      else
        inner += std::pow(v, spec.p);
    }
    if (spec.p != kInf) inner = std::pow(inner, 1.0 / spec.p);
    double term = inner * radial_weight(spec.beta, norm_of(layer.xi, lat.grid.d));
    if (spec.q == kInf)
      outer = std::max(outer, term);
    else
      outer += std::pow(term, spec.q);
  }
  if (spec.q != kInf) outer = std::pow(outer, 1.0 / spec.q);
  return outer;
}

double weight_moderation_check(const SubdyadicLattice& lat, double beta) {
  // the weight depends only on the layer frequency; scan layer pairs and
  // check whether any two translates realize d_alpha <= 1
  double best = 1.0;
  std::size_t nl = lat.layers.size();
  for (std::size_t a = 0; a < nl; ++a) {
    for (std::size_t b = a; b < nl; ++b) {
      const FreqLayer& la = lat.layers[a];
      const FreqLayer& lb = lat.layers[b];
      double na = norm_of(la.xi, lat.grid.d);
      double nb = norm_of(lb.xi, lat.grid.d);
      double r = 1.0 + std::min(na, nb);
      double dxi = 0;
      for (int ax = 0; ax < lat.grid.d; ++ax) {
        double t = la.xi[ax] - lb.xi[ax];
        dxi += t * t;
      }
      // every layer contains the translate x=0, so the pair minimum of
      // d_alpha over translates is exactly the frequency term
      double dmin = std::pow(r, lat.params.alpha - 1.0) * std::sqrt(dxi);
      if (dmin > 1.0) continue;
      double wa = radial_weight(beta, na);
      double wb = radial_weight(beta, nb);
      best = std::max(best, std::max(wa / wb, wb / wa));
    }
  }
  return best;
}

WindowIndependenceReport window_independence_ratio(
    const std::vector<SampledField>& f_set, const DispersiveFrame& frame1,
    const DispersiveFrame& frame2, const ModNormSpec& spec) {
  require(!f_set.empty(), ErrorCode::empty_test_set, "empty test set");
  WindowIndependenceReport rep;
  rep.ratio_min = std::numeric_limits<double>::infinity();
  rep.ratio_max = 0;
  for (const SampledField& f : f_set) {
    double n1 = mod_norm(frame1.analyze(f), spec);
    double n2 = mod_norm(frame2.analyze(f), spec);
    require(n1 > 0, ErrorCode::invalid_argument,
            "test signal has vanishing norm in the reference frame");
    double r = n2 / n1;
    rep.ratio_min = std::min(rep.ratio_min, r);
    rep.ratio_max = std::max(rep.ratio_max, r);
  }
  // cross almost-diagonalization side report
  Eigen::MatrixXcd X = frame1.cross_gramian(frame2);
  // square only when both frames share the usable node set
  if (X.rows() == X.cols()) {
    LocalizedMatrix M = make_localized(frame1.lattice(), frame1.usable_nodes(),
                                       std::move(X));
    rep.cross_gram_decay = fit_decay(M);
  }
  return rep;
}

}  // namespace sg
