#include "jaffard.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "modspace.hpp"
#include "signals.hpp"

namespace sg {

namespace {

Eigen::MatrixXd distance_matrix(const SubdyadicLattice& lat,
                                const std::vector<int>& ids) {
  Eigen::MatrixXd D(ids.size(), ids.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(ids.size()); ++i)
    for (std::size_t j = 0; j < ids.size(); ++j)
      D(i, j) = lat.dist(ids[i], ids[j]);
  return D;
}

}  // namespace

LocalizedMatrix make_localized(const SubdyadicLattice& lat, std::vector<int> node_ids,
                               Eigen::MatrixXcd entries) {
  require(entries.rows() == entries.cols() &&
              entries.rows() == static_cast<Eigen::Index>(node_ids.size()),
          ErrorCode::invalid_argument, "entries must be square over the node subset");
  LocalizedMatrix A;
  A.lattice = &lat;
  A.node_ids = std::move(node_ids);
  A.entries = std::move(entries);
  A.dist = distance_matrix(lat, A.node_ids);
  return A;
}

LocalizedMatrix make_localized(const GramMatrix& g) {
  return make_localized(*g.lattice, g.node_ids, g.entries);
}

LocalizedMatrix subblock(const LocalizedMatrix& A, const std::vector<int>& keep) {
  LocalizedMatrix B;
  B.lattice = A.lattice;
  B.node_ids.reserve(keep.size());
  for (int i : keep) B.node_ids.push_back(A.node_ids[i]);
  B.entries.resize(keep.size(), keep.size());
  B.dist.resize(keep.size(), keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (std::size_t j = 0; j < keep.size(); ++j) {
      B.entries(i, j) = A.entries(keep[i], keep[j]);
      B.dist(i, j) = A.dist(keep[i], keep[j]);
    }
  return B;
}

double decay_seminorm(const LocalizedMatrix& A, double N) {
  require(N >= 0, ErrorCode::invalid_argument, "seminorm order must be nonnegative");
  double best = 0;
  for (Eigen::Index i = 0; i < A.entries.rows(); ++i)
    for (Eigen::Index j = 0; j < A.entries.cols(); ++j) {
      double v = std::pow(1.0 + A.dist(i, j), N) * std::abs(A.entries(i, j));
      best = std::max(best, v);
    }
  return best;
}

double jaffard_class_norm(const LocalizedMatrix& A, double s) {
  require(s >= 0, ErrorCode::invalid_argument, "class order must be nonnegative");
  double row_best = 0, col_best = 0;
  for (Eigen::Index i = 0; i < A.entries.rows(); ++i) {
    double r = 0;
    for (Eigen::Index j = 0; j < A.entries.cols(); ++j)
      r += std::abs(A.entries(i, j)) * std::pow(1.0 + A.dist(i, j), s);
    row_best = std::max(row_best, r);
  }
  for (Eigen::Index j = 0; j < A.entries.cols(); ++j) {
    double c = 0;
    for (Eigen::Index i = 0; i < A.entries.rows(); ++i)
      c += std::abs(A.entries(i, j)) * std::pow(1.0 + A.dist(i, j), s);
    col_best = std::max(col_best, c);
  }
  return std::max(row_best, col_best);
}

DecayProfile fit_decay(const LocalizedMatrix& A) {
  constexpr double kFloor = 1e-14;
  DecayProfile out;
  // least squares of y = log10|A| against x = log10(1+d)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  const Eigen::Index N = A.entries.rows();
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index j = 0; j < N; ++j) {
      if (i == j) continue;
      double v = std::abs(A.entries(i, j));
      if (v <= kFloor) continue;
      double x = std::log10(1.0 + A.dist(i, j));
      double y = std::log10(v);
      sx += x; sy += y; sxx += x * x; sxy += x * y;
      ++n;
    }
  out.pair_count = n;
  if (n < 2) {
    out.superpolynomial = true;
    out.exponent_N = std::numeric_limits<double>::infinity();
    return out;
  }
  double nn = static_cast<double>(n);
  double denom = nn * sxx - sx * sx;
  if (std::abs(denom) < 1e-30) {
    // all surviving entries at one distance; no slope information
    out.superpolynomial = true;
    out.exponent_N = std::numeric_limits<double>::infinity();
    return out;
  }
  double slope = (nn * sxy - sx * sy) / denom;
  double icept = (sy - slope * sx) / nn;
  out.exponent_N = -slope;

  // envelope constant: 99.9th percentile of |A| (1+d)^N, robust to outliers
  std::vector<double> cs;
  cs.reserve(n);
  double rss = 0;
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index j = 0; j < N; ++j) {
      if (i == j) continue;
      double v = std::abs(A.entries(i, j));
      if (v <= kFloor) continue;
      double x = std::log10(1.0 + A.dist(i, j));
      double y = std::log10(v);
      double r = y - (icept + slope * x);
      rss += r * r;
      cs.push_back(y + out.exponent_N * x);  // log10 of |A| (1+d)^N
    }
  out.fit_residual = std::sqrt(rss / nn);
  std::sort(cs.begin(), cs.end());
  double logC = cs[static_cast<std::size_t>(0.999 * (cs.size() - 1))];
  out.constant_C = std::pow(10.0, logC);
  std::size_t viol = 0;
  for (double c : cs)
    if (c > logC + 1.0) ++viol;  // entries above 10 C (1+d)^-N
  out.violation_fraction = static_cast<double>(viol) / nn;
  return out;
}

std::pair<double, double> singular_extremes(const Eigen::MatrixXcd& A, int max_iter,
                                            double tol) {
  const Eigen::Index n = A.rows();
  Rng rng(987654321);
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = cplx(rng.gauss(), rng.gauss());
  v.normalize();
  double smax = 0, prev = -1;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXcd w = A.adjoint() * (A * v);
    double lam = std::real(v.dot(w));
    double nw = w.norm();
    if (nw == 0) { smax = 0; break; }
    v = w / nw;
    smax = std::sqrt(std::max(lam, 0.0));
    if (it > 0 && std::abs(lam - prev) <= tol * std::max(1.0, std::abs(lam))) break;
    prev = lam;
  }
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
  // guard against exactly singular factorizations
  double dmin = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i)
    dmin = std::min(dmin, std::abs(lu.matrixLU()(i, i)));
  if (dmin == 0) return {0.0, smax};
  for (Eigen::Index i = 0; i < n; ++i) v(i) = cplx(rng.gauss(), rng.gauss());
  v.normalize();
  double inv_lam = 0;
  prev = -1;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXcd w = lu.solve(v);
    w = lu.adjoint().solve(w);
    double lam = std::real(v.dot(w));  // eigenvalue of (A^H A)^-1
    double nw = w.norm();
    if (nw == 0) return {0.0, smax};
    v = w / nw;
    inv_lam = lam;
    if (it > 0 && std::abs(lam - prev) <= tol * std::max(1.0, std::abs(lam))) break;
    prev = lam;
  }
  double smin = inv_lam > 0 ? 1.0 / std::sqrt(inv_lam) : 0.0;
  return {smin, smax};
}

std::pair<LocalizedMatrix, DecayProfile> invert_localized(const LocalizedMatrix& A,
                                                          double tol) {
  require(tol > 0, ErrorCode::invalid_argument, "tolerance must be positive");
  auto [smin, smax] = singular_extremes(A.entries);
  require(smin > tol, ErrorCode::singular,
          "matrix is singular at the requested tolerance");
  LocalizedMatrix inv;
  inv.lattice = A.lattice;
  inv.node_ids = A.node_ids;
  inv.dist = A.dist;
  inv.entries = A.entries.partialPivLu().inverse();
  DecayProfile prof = fit_decay(inv);
  return {std::move(inv), prof};
}

std::pair<CoefficientField, double> weighted_sequence_apply(
    const LocalizedMatrix& A, const CoefficientField& c, double p, double q,
    double beta) {
  require(p >= 1 && q >= 1, ErrorCode::invalid_argument, "need p,q >= 1");
  require(c.lattice == A.lattice && c.values.size() == A.lattice->size(),
          ErrorCode::grid_mismatch, "coefficients not aligned with the lattice");
  Eigen::VectorXcd x(A.size());
  for (std::size_t i = 0; i < A.size(); ++i) x(i) = c.values[A.node_ids[i]];
  Eigen::VectorXcd y = A.entries * x;
  CoefficientField out;
  out.lattice = c.lattice;
  out.values.assign(c.values.size(), cplx{});
  for (std::size_t i = 0; i < A.size(); ++i) out.values[A.node_ids[i]] = y(i);
  ModNormSpec spec{p, q, beta};
  double denom = mod_norm(c, spec);
  double ratio = denom > 0 ? mod_norm(out, spec) / denom
                           : std::numeric_limits<double>::infinity();
  return {std::move(out), ratio};
}

std::string decay_profile_to_json(const DecayProfile& p) {
  nlohmann::json j;
  j["superpolynomial"] = p.superpolynomial;
  if (p.superpolynomial)
    j["N"] = nullptr;
  else
    j["N"] = p.exponent_N;
  j["C"] = p.constant_C;
  j["residual"] = p.fit_residual;
  j["violations"] = p.violation_fraction;
  j["pairs"] = p.pair_count;
  return j.dump();
}

}  // namespace sg
