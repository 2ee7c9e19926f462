#pragma once

// Subdyadic phase-space geometry: the quasi-distance
//   d_alpha(w,z) = r^{1-alpha} |x-y| + r^{alpha-1} |xi-eta|,
//   r = 1 + min(|xi|,|eta|),
// rectangular blocks with reciprocal radii, and the corona lattice with
// covering / separation / finite-overlap diagnostics.

#include <cstdint>
#include <string>
#include <vector>

#include "grid.hpp"

namespace sg {

struct PhasePoint {
  Vec2 x{0, 0};
  Vec2 xi{0, 0};
};

struct AlphaParams {
  double alpha = 0.5;
  double rho = 1.0;
  double block_constant = 1.0;

  void validate() const {
    require(alpha > 0 && rho > 0 && block_constant > 0, ErrorCode::invalid_argument,
            "alpha, rho and block constant must be positive");
  }
};

double quasi_distance(const PhasePoint& w, const PhasePoint& z, double alpha,
                      int d, double L);

struct Block {
  PhasePoint center;
  double spatial_radius = 0;
  double freq_radius = 0;

  // closed per-coordinate bounds, spatial wrap on the torus
  bool contains(const PhasePoint& p, int d, double L) const;
  double volume(int d) const;
};

Block block_of(const PhasePoint& center, const AlphaParams& params, int d);

// One frequency layer: a single snapped center xi shared by a uniform
// spatial grid of per_axis^d translates.
struct FreqLayer {
  int corona = 0;  // -1 for the low-frequency patch
  Vec2 xi{0, 0};
  int per_axis = 1;
  double spatial_step = 1;
  double spatial_radius = 0;
  double freq_radius = 0;
  std::size_t node_offset = 0;
  std::size_t node_count = 0;
};

struct LatticeNode {
  int corona = 0;
  std::array<int, 2> j{0, 0};
  PhasePoint point;
  Block block;
  int layer = 0;
};

struct SubdyadicLattice {
  GridSpec grid;
  AlphaParams params;
  std::vector<FreqLayer> layers;
  std::vector<LatticeNode> nodes;

  int overlap_bound = 0;        // measured max multiplicity over grid scan
  bool covering_ok = false;     // every grid frequency |xi| <= nyquist covered
  std::vector<int> band_max_multiplicity;  // per corona band, patch first

  std::size_t size() const { return nodes.size(); }
  double dist(std::size_t a, std::size_t b) const {
    return quasi_distance(nodes[a].point, nodes[b].point, params.alpha, grid.d,
                          grid.L);
  }
};

SubdyadicLattice build_lattice(const GridSpec& grid, const AlphaParams& params);

int overlap_multiplicity(const SubdyadicLattice& lat, const PhasePoint& p);

std::vector<std::int64_t> annulus_counts(const SubdyadicLattice& lat,
                                         std::size_t node, double shell_width);

// log-log least-squares slope of cumulative annulus counts vs radius,
// fitted up to half the maximal distance
double growth_exponent(const std::vector<std::int64_t>& counts,
                       double shell_width);

// max number of nodes in any quasi-distance ball of radius r0, centers
// taken at the nodes themselves
int relative_separation_bound(const SubdyadicLattice& lat, double r0);

std::string lattice_to_json(const SubdyadicLattice& lat);

}  // namespace sg
