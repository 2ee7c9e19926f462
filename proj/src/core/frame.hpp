#pragma once

// Dispersive wave packets and the frame machinery built on them: the
// adapted STFT (analysis), synthesis, Gramian assembly, frame-bound
// estimation on the reachable band-limited subspace, and the canonical
// dual frame via conjugate gradients.

#include <Eigen/Dense>
#include <memory>
#include <optional>

#include "geometry.hpp"
#include "window.hpp"

namespace sg {

struct CoefficientField {
  const SubdyadicLattice* lattice = nullptr;
  std::vector<cplx> values;  // aligned with lattice node order
};

struct PacketSpectrum {
  std::vector<int> idx;  // flat frequency indices, sorted
  std::vector<cplx> a;   // spectrum values at idx
  double screen_radius = 0;  // spectral bounding-ball radius around xi0
  double prenorm_deviation = 0;
};

// packet spectrum at an arbitrary phase-space point; throws ScaleOverflow
// when the dilated support does not fit the grid
PacketSpectrum packet_spectrum(const GridSpec& grid, const Window& win,
                               double alpha, const Vec2& x0, const Vec2& xi0);

struct FrameBounds {
  double lower = 0;
  double upper = 0;
  enum class Method { power_iteration, full_spectrum } method = Method::full_spectrum;
  double tol = 0;
  int iterations = 0;
};

struct GramMatrix {
  const SubdyadicLattice* lattice = nullptr;
  std::vector<int> node_ids;  // usable-node subset, ascending
  Eigen::MatrixXcd entries;
};

struct FrameOptions {
  double mask_tau = 5e-3;   // relative coverage threshold for the reachable set
  int dense_cap = 20000;    // max usable nodes for dense matrices
  int max_iterations = 5000;
};

class DispersiveFrame {
 public:
  DispersiveFrame(const SubdyadicLattice& lat, const Window& win,
                  FrameOptions opts = {});

  const SubdyadicLattice& lattice() const { return *lat_; }
  const Window& window() const { return win_; }
  double alpha() const { return lat_->params.alpha; }
  const FrameOptions& options() const { return opts_; }

  const std::vector<int>& usable_nodes() const { return usable_; }
  const std::vector<uint8_t>& usable_flags() const { return usable_flag_; }
  const std::vector<double>& coverage() const { return coverage_; }
  const std::vector<int>& reachable_mask() const { return mask_; }
  double max_packet_norm_deviation() const { return max_prenorm_dev_; }
  const PacketSpectrum& packet(int usable_pos) const { return packets_[usable_pos]; }

  SampledField make_packet(std::size_t node) const;
  SampledField make_packet_at(const Vec2& x0, const Vec2& xi0) const;

  CoefficientField analyze(const SampledField& f) const;
  CoefficientField analyze_spectrum(const std::vector<cplx>& F) const;
  cplx stft_at(const SampledField& f, const PhasePoint& p) const;
  cplx stft_spectrum_at(const std::vector<cplx>& F, const PhasePoint& p) const;
  SampledField synthesize(const CoefficientField& c) const;
  std::vector<cplx> synthesize_spectrum(const CoefficientField& c) const;
  SampledField apply_frame_operator(const SampledField& f) const;

  GramMatrix gramian() const;
  // cross Gramian <packet_this_w, packet_other_z>; lattices may differ
  Eigen::MatrixXcd cross_gramian(const DispersiveFrame& other) const;
  // matrix of the multiplier operator, <T_m packet_w, packet_w'>, with the
  // symbol sampled on the grid
  Eigen::MatrixXcd operator_matrix(const std::vector<cplx>& symbol) const;

  FrameBounds frame_bounds(double tol, std::optional<FrameBounds::Method> method = {}) const;

  // canonical dual windows S^-1 packet_w for the given usable-subset
  // positions, by conjugate gradients on the reachable subspace
  std::vector<SampledField> dual_frame(const std::vector<int>& usable_pos,
                                       double tol) const;
  // Sum of <f, packet_w> dual_w, computed as S^-1 S f on the reachable
  // subspace; f is projected onto the mask first
  SampledField reconstruct(const SampledField& f, double tol, int* iters = nullptr) const;

  // random field band-limited to [lo,hi] intersected with the reachable set
  SampledField random_bandlimited(std::uint64_t seed, double lo, double hi) const;

  // frame operator restricted to the reachable set, dense (mask x mask)
  Eigen::MatrixXcd reachable_operator() const;

  // max row sum of |G - I| over usable nodes (Schur off-diagonal constant)
  double schur_offdiagonal_constant(const GramMatrix& g) const;

 private:
  const SubdyadicLattice* lat_;
  Window win_;
  FrameOptions opts_;
  std::vector<int> usable_;            // lattice node ids with packets
  std::vector<uint8_t> usable_flag_;   // per lattice node
  std::vector<PacketSpectrum> packets_;  // aligned with usable_
  std::vector<double> coverage_;
  std::vector<int> mask_;
  std::vector<int> mask_pos_;  // flat freq index -> position in mask_, or -1
  double max_prenorm_dev_ = 0;

  // y = S_V x in mask coordinates
  void apply_sv(const std::vector<cplx>& x, std::vector<cplx>& y) const;
  std::vector<cplx> cg_solve(const std::vector<cplx>& rhs, double tol,
                             int max_iter, int* iters_out) const;
};

Eigen::MatrixXcd assemble_cross(const DispersiveFrame& A, const DispersiveFrame& B,
                                const std::vector<cplx>* weight);

}  // namespace sg
