#pragma once

// Localized-matrix algebra over the lattice: polynomial-decay seminorms,
// Schur-type class norms, envelope fits of |A(w,z)| against the
// quasi-distance, and inversion with decay verification.

#include <Eigen/Dense>
#include <optional>

#include "frame.hpp"
#include "geometry.hpp"

namespace sg {

struct LocalizedMatrix {
  const SubdyadicLattice* lattice = nullptr;
  std::vector<int> node_ids;
  Eigen::MatrixXcd entries;
  Eigen::MatrixXd dist;  // cached quasi-distances for the node subset

  std::size_t size() const { return node_ids.size(); }
};

LocalizedMatrix make_localized(const SubdyadicLattice& lat,
                               std::vector<int> node_ids, Eigen::MatrixXcd entries);
LocalizedMatrix make_localized(const GramMatrix& g);

// principal subblock on a subset of positions (indices into node_ids)
LocalizedMatrix subblock(const LocalizedMatrix& A, const std::vector<int>& keep);

struct DecayProfile {
  double exponent_N = 0;       // +inf encoded via superpolynomial flag
  double constant_C = 0;
  double fit_residual = 0;     // rms residual of the log-log fit, decades
  double violation_fraction = 0;
  bool superpolynomial = false;
  std::size_t pair_count = 0;
};

double decay_seminorm(const LocalizedMatrix& A, double N);
double jaffard_class_norm(const LocalizedMatrix& A, double s);

// least-squares slope of log10|A| vs log10(1+d) over off-diagonal entries
// with |A| > 1e-14; the constant is the 99.9th-percentile envelope constant
// at the fitted exponent, violations counted against 10 C (1+d)^-N
DecayProfile fit_decay(const LocalizedMatrix& A);

// extreme singular values by power iteration (largest) and inverse power
// iteration on a LU factorization (smallest)
std::pair<double, double> singular_extremes(const Eigen::MatrixXcd& A,
                                            int max_iter = 5000, double tol = 1e-10);

std::pair<LocalizedMatrix, DecayProfile> invert_localized(const LocalizedMatrix& A,
                                                          double tol);

// y = A c (restricted to A's node subset) and the ratio of weighted
// sequence norms ||y|| / ||c|| in l^q(l^p; w_beta)
std::pair<CoefficientField, double> weighted_sequence_apply(
    const LocalizedMatrix& A, const CoefficientField& c, double p, double q,
    double beta);

std::string decay_profile_to_json(const DecayProfile& p);

}  // namespace sg
