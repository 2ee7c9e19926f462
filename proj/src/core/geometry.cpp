#include "geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace sg {

double quasi_distance(const PhasePoint& w, const PhasePoint& z, double alpha,
                      int d, double L) {
  double nxi = norm_of(w.xi, d);
  double neta = norm_of(z.xi, d);
  double r = 1.0 + std::min(nxi, neta);
  double dx2 = 0, dxi2 = 0;
  for (int a = 0; a < d; ++a) {
    double t = wrap_dist(w.x[a], z.x[a], L);
    dx2 += t * t;
    double u = w.xi[a] - z.xi[a];
    dxi2 += u * u;
  }
  return std::pow(r, 1.0 - alpha) * std::sqrt(dx2) +
         std::pow(r, alpha - 1.0) * std::sqrt(dxi2);
}

bool Block::contains(const PhasePoint& p, int d, double L) const {
  for (int a = 0; a < d; ++a) {
    if (wrap_dist(p.x[a], center.x[a], L) > spatial_radius) return false;
    if (std::abs(p.xi[a] - center.xi[a]) > freq_radius) return false;
  }
  return true;
}

double Block::volume(int d) const {
  double v = 1;
  for (int a = 0; a < d; ++a) v *= (2 * spatial_radius) * (2 * freq_radius);
  return v;
}

Block block_of(const PhasePoint& center, const AlphaParams& params, int d) {
  params.validate();
  double nxi = norm_of(center.xi, d);
  require(nxi > 0, ErrorCode::zero_frequency, "block center has zero frequency");
  Block b;
  b.center = center;
  double c = params.block_constant * params.rho;
  b.spatial_radius = c * std::pow(nxi, params.alpha - 1.0);
  b.freq_radius = c * std::pow(nxi, 1.0 - params.alpha);
  return b;
}

namespace {

double snap(double xi, double fs) { return std::round(xi / fs) * fs; }

// spatial translate count for step rounded down so an integer number of
// steps tiles [0,L)
int spatial_count(double L, double nominal_step) {
  int c = static_cast<int>(std::ceil(L / nominal_step - 1e-12));
  return std::max(c, 1);
}

struct LayerSeed {
  int corona;
  Vec2 xi;
  int per_axis;
};

// number of x-grid translates j*step within wrap-distance <= rad of x
inline int axis_hits(double x, double step, int count, double rad, double L) {
  // positions j*step, torus period L = count*step
  double lo = (x - rad) / step;
  double hi = (x + rad) / step;
  int h = static_cast<int>(std::floor(hi + 1e-12)) -
          static_cast<int>(std::ceil(lo - 1e-12)) + 1;
  return std::clamp(h, 0, count);
}

}  // namespace

SubdyadicLattice build_lattice(const GridSpec& grid, const AlphaParams& params) {
  grid.validate();
  params.validate();
  double nyq = grid.nyquist();
  require(nyq >= 2.0, ErrorCode::grid_too_coarse,
          "nyquist frequency below 2, no corona fits");

  double fs = grid.freq_step();
  double alpha = params.alpha;
  double rho = params.rho;
  int kmax = static_cast<int>(std::floor(std::log2(nyq)));

  std::vector<LayerSeed> seeds;
  auto push_center = [&](int corona, Vec2 xi, double nominal_step) {
    for (int a = 0; a < grid.d; ++a) {
      xi[a] = snap(xi[a], fs);
      // keep axis components on the representable grid [-nyq, nyq)
      if (std::abs(xi[a]) > nyq - 0.5 * fs) return;
    }
    double nxi = norm_of(xi, grid.d);
    if (nxi < 0.5 * fs || nxi > nyq) return;
    seeds.push_back({corona, xi, spatial_count(grid.L, nominal_step)});
  };

  for (int k = 0; k <= kmax; ++k) {
    double lo = std::pow(2.0, k);
    double hi = std::min(std::pow(2.0, k + 1), nyq + 0.5 * fs);
    double fstep_k = rho * std::pow(2.0, k * (1.0 - alpha));
    double xstep_k = rho * std::pow(2.0, k * (alpha - 1.0));
    if (grid.d == 1) {
      for (double c = lo; c < hi - 1e-12; c += fstep_k) {
        push_center(k, Vec2{c, 0}, xstep_k);
        push_center(k, Vec2{-c, 0}, xstep_k);
      }
    } else {
      int mmax = static_cast<int>(std::ceil(hi / fstep_k));
      for (int a = -mmax; a <= mmax; ++a)
        for (int b = -mmax; b <= mmax; ++b) {
          Vec2 xi{a * fstep_k, b * fstep_k};
          double nxi = norm_of(xi, 2);
          if (nxi >= lo && nxi < hi) push_center(k, xi, xstep_k);
        }
    }
  }

  // low-frequency patch: centers on the rho-spaced integer mesh, 0<|xi|<=2,
  // unit-order spatial mesh
  {
    int mmax = static_cast<int>(std::floor(2.0 / rho));
    if (grid.d == 1) {
      for (int m = 1; m <= mmax; ++m) {
        push_center(-1, Vec2{m * rho, 0}, rho);
        push_center(-1, Vec2{-m * rho, 0}, rho);
      }
    } else {
      for (int a = -mmax; a <= mmax; ++a)
        for (int b = -mmax; b <= mmax; ++b) {
          if (a == 0 && b == 0) continue;
          Vec2 xi{a * rho, b * rho};
          if (norm_of(xi, 2) <= 2.0) push_center(-1, xi, rho);
        }
    }
  }

  // deduplicate on (snapped center, spatial count); first wins
  std::set<std::tuple<long long, long long, int>> seen;
  std::vector<LayerSeed> uniq;
  for (const LayerSeed& s : seeds) {
    auto key = std::make_tuple(std::llround(s.xi[0] / fs),
                               std::llround(s.xi[1] / fs), s.per_axis);
    if (seen.insert(key).second) uniq.push_back(s);
  }
  // deterministic layer order: corona ascending (patch last), then center lex
  std::stable_sort(uniq.begin(), uniq.end(), [](const LayerSeed& a, const LayerSeed& b) {
    int ka = a.corona < 0 ? 1000 : a.corona;
    int kb = b.corona < 0 ? 1000 : b.corona;
    if (ka != kb) return ka < kb;
    if (a.xi[0] != b.xi[0]) return a.xi[0] < b.xi[0];
    return a.xi[1] < b.xi[1];
  });

  SubdyadicLattice lat;
  lat.grid = grid;
  lat.params = params;
  double cb = params.block_constant * params.rho;
  for (const LayerSeed& s : uniq) {
    FreqLayer layer;
    layer.corona = s.corona;
    layer.xi = s.xi;
    layer.per_axis = s.per_axis;
    layer.spatial_step = grid.L / s.per_axis;
    double nxi = norm_of(s.xi, grid.d);
    layer.spatial_radius = cb * std::pow(nxi, alpha - 1.0);
    layer.freq_radius = cb * std::pow(nxi, 1.0 - alpha);
    layer.node_offset = lat.nodes.size();
    int count = grid.d == 1 ? s.per_axis : s.per_axis * s.per_axis;
    layer.node_count = count;
    int li = static_cast<int>(lat.layers.size());
    for (int idx = 0; idx < count; ++idx) {
      LatticeNode node;
      node.corona = s.corona;
      node.layer = li;
      node.j = grid.d == 1 ? std::array<int, 2>{idx, 0}
                           : std::array<int, 2>{idx / s.per_axis, idx % s.per_axis};
      node.point.xi = s.xi;
      node.point.x = Vec2{node.j[0] * layer.spatial_step,
                          grid.d == 1 ? 0 : node.j[1] * layer.spatial_step};
      node.block.center = node.point;
      node.block.spatial_radius = layer.spatial_radius;
      node.block.freq_radius = layer.freq_radius;
      lat.nodes.push_back(node);
    }
    lat.layers.push_back(layer);
  }

  // covering / overlap scan over all grid frequencies and grid x samples
  int max_corona = kmax;
  lat.band_max_multiplicity.assign(max_corona + 2, 0);  // [0]=patch band |xi|<1
  lat.covering_ok = true;
  lat.overlap_bound = 0;
  std::size_t nf = grid.size();
  for (std::size_t mf = 0; mf < nf; ++mf) {
    Vec2 xi = grid.freq_of(mf);
    double nxi = norm_of(xi, grid.d);
    if (nxi > nyq) continue;
    // layers covering this frequency
    std::vector<const FreqLayer*> cov;
    for (const FreqLayer& l : lat.layers) {
      bool ok = true;
      for (int a = 0; a < grid.d; ++a)
        if (std::abs(xi[a] - l.xi[a]) > l.freq_radius) { ok = false; break; }
      if (ok) cov.push_back(&l);
    }
    int band = nxi < 1.0 ? 0 : static_cast<int>(std::floor(std::log2(nxi))) + 1;
    if (cov.empty()) {
      lat.covering_ok = false;
      continue;
    }
    // spatial max multiplicity: per-layer hit counts are periodic in x with
    // the layer step; scan grid x samples (d=1 exhaustive, d=2 on a coarse
    // submesh of grid points)
    int best = 0;
    if (grid.d == 1) {
      for (int ix = 0; ix < grid.n; ++ix) {
        double x0 = ix * grid.cell();
        int mult = 0;
        for (const FreqLayer* l : cov)
          mult += axis_hits(x0, l->spatial_step, l->per_axis, l->spatial_radius, grid.L);
        best = std::max(best, mult);
      }
    } else {
      int sub = std::max(1, grid.n / 32);
      for (int ix = 0; ix < grid.n; ix += sub)
        for (int iy = 0; iy < grid.n; iy += sub) {
          double x0 = ix * grid.cell(), x1 = iy * grid.cell();
          int mult = 0;
          for (const FreqLayer* l : cov)
            mult += axis_hits(x0, l->spatial_step, l->per_axis, l->spatial_radius, grid.L) *
                    axis_hits(x1, l->spatial_step, l->per_axis, l->spatial_radius, grid.L);
          best = std::max(best, mult);
        }
    }
    lat.overlap_bound = std::max(lat.overlap_bound, best);
    if (band >= 0 && band < static_cast<int>(lat.band_max_multiplicity.size()))
      lat.band_max_multiplicity[band] = std::max(lat.band_max_multiplicity[band], best);
  }

  return lat;
}

int overlap_multiplicity(const SubdyadicLattice& lat, const PhasePoint& p) {
  int count = 0;
  for (const FreqLayer& l : lat.layers) {
    bool ok = true;
    for (int a = 0; a < lat.grid.d; ++a)
      if (std::abs(p.xi[a] - l.xi[a]) > l.freq_radius) { ok = false; break; }
    if (!ok) continue;
    int h = axis_hits(p.x[0], l.spatial_step, l.per_axis, l.spatial_radius, lat.grid.L);
    if (lat.grid.d == 2)
      h *= axis_hits(p.x[1], l.spatial_step, l.per_axis, l.spatial_radius, lat.grid.L);
    count += h;
  }
  return count;
}

std::vector<std::int64_t> annulus_counts(const SubdyadicLattice& lat,
                                         std::size_t node, double shell_width) {
  require(shell_width > 0, ErrorCode::invalid_argument, "shell width must be positive");
  std::vector<std::int64_t> counts;
  for (std::size_t z = 0; z < lat.size(); ++z) {
    double dd = lat.dist(node, z);
    auto shell = static_cast<std::size_t>(std::floor(dd / shell_width));
    if (counts.size() <= shell) counts.resize(shell + 1, 0);
    ++counts[shell];
  }
  return counts;
}

double growth_exponent(const std::vector<std::int64_t>& counts,
                       double shell_width) {
  // cumulative counts at shell upper edges, fit up to half the max radius
  std::vector<double> xs, ys;
  std::int64_t cum = 0;
  double rmax = counts.size() * shell_width;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    cum += counts[i];
    double R = (i + 1) * shell_width;
    if (R > 0.5 * rmax) break;
    if (cum < 2) continue;
    xs.push_back(std::log10(R));
    ys.push_back(std::log10(static_cast<double>(cum)));
  }
  if (xs.size() < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i]; sy += ys[i]; sxx += xs[i] * xs[i]; sxy += xs[i] * ys[i];
  }
  double nn = static_cast<double>(xs.size());
  return (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
}

int relative_separation_bound(const SubdyadicLattice& lat, double r0) {
  int best = 0;
  std::size_t N = lat.size();
#pragma omp parallel for schedule(dynamic, 64) reduction(max : best)
  for (long long w = 0; w < static_cast<long long>(N); ++w) {
    int c = 0;
    for (std::size_t z = 0; z < N; ++z)
      if (lat.dist(w, z) <= r0) ++c;
    best = std::max(best, c);
  }
  return best;
}

std::string lattice_to_json(const SubdyadicLattice& lat) {
  // deterministic export order: corona ascending, then spatial index lex,
  // then frequency center lex
  std::vector<std::size_t> order(lat.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const LatticeNode& na = lat.nodes[a];
    const LatticeNode& nb = lat.nodes[b];
    if (na.corona != nb.corona) return na.corona < nb.corona;
    if (na.j != nb.j) return na.j < nb.j;
    if (na.point.xi[0] != nb.point.xi[0]) return na.point.xi[0] < nb.point.xi[0];
    return na.point.xi[1] < nb.point.xi[1];
  });
  nlohmann::json arr = nlohmann::json::array();
  for (std::size_t id : order) {
    const LatticeNode& nd = lat.nodes[id];
    nlohmann::json e;
    e["k"] = nd.corona;
    e["j"] = std::vector<int>(nd.j.begin(), nd.j.begin() + lat.grid.d);
    e["x"] = std::vector<double>(nd.point.x.begin(), nd.point.x.begin() + lat.grid.d);
    e["xi"] = std::vector<double>(nd.point.xi.begin(), nd.point.xi.begin() + lat.grid.d);
    e["spatial_radius"] = nd.block.spatial_radius;
    e["freq_radius"] = nd.block.freq_radius;
    arr.push_back(e);
  }
  return arr.dump();
}

}  // namespace sg
