#include "frame.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "signals.hpp"

namespace sg {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

PacketSpectrum packet_spectrum(const GridSpec& grid, const Window& win,
                               double alpha, const Vec2& x0, const Vec2& xi0) {
  double nxi = norm_of(xi0, grid.d);
  require(nxi > 0, ErrorCode::zero_frequency, "packet center has zero frequency");
  double s = std::pow(nxi, 1.0 - alpha);
  double rad = win.spec.c2 * s;
  double fs = grid.freq_step();
  double nyq = grid.nyquist();

  int lo[2], hi[2];
  for (int a = 0; a < grid.d; ++a) {
    lo[a] = static_cast<int>(std::ceil((xi0[a] - rad) / fs - 1e-12));
    hi[a] = static_cast<int>(std::floor((xi0[a] + rad) / fs + 1e-12));
    require(lo[a] >= -grid.n / 2 && hi[a] <= grid.n / 2 - 1, ErrorCode::scale_overflow,
            "dilated packet spectrum exceeds the nyquist band");
  }

  PacketSpectrum ps;
  ps.screen_radius = rad;
  double amp = std::pow(s, -0.5 * grid.d);
  double sum2 = 0;
  auto emit = [&](int m0, int m1) {
    Vec2 eta{m0 * fs, m1 * fs};
    double dr2 = 0;
    for (int a = 0; a < grid.d; ++a) {
      double t = eta[a] - xi0[a];
      dr2 += t * t;
    }
    double p = win.spectral_profile(std::sqrt(dr2) / s);
    if (p == 0.0) return;
    double phase = 0;
    for (int a = 0; a < grid.d; ++a) phase -= x0[a] * (eta[a] - xi0[a]);
    cplx val = amp * p * cplx(std::cos(phase), std::sin(phase));
    int f0 = m0 < 0 ? m0 + grid.n : m0;
    int flat = grid.d == 1 ? f0 : f0 * grid.n + (m1 < 0 ? m1 + grid.n : m1);
    ps.idx.push_back(flat);
    ps.a.push_back(val);
    sum2 += std::norm(val);
  };
  if (grid.d == 1) {
    for (int m0 = lo[0]; m0 <= hi[0]; ++m0) emit(m0, 0);
  } else {
    for (int m0 = lo[0]; m0 <= hi[0]; ++m0)
      for (int m1 = lo[1]; m1 <= hi[1]; ++m1) emit(m0, m1);
  }
  require(!ps.idx.empty(), ErrorCode::scale_overflow,
          "packet spectrum contains no grid frequencies");

  double nrm = std::sqrt(sum2 / std::pow(grid.L, grid.d));
  ps.prenorm_deviation = std::abs(nrm - 1.0);
  for (cplx& z : ps.a) z /= nrm;

  // sort by flat index for two-pointer overlaps
  std::vector<std::size_t> order(ps.idx.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return ps.idx[i] < ps.idx[j]; });
  PacketSpectrum out;
  out.screen_radius = ps.screen_radius;
  out.prenorm_deviation = ps.prenorm_deviation;
  out.idx.reserve(order.size());
  out.a.reserve(order.size());
  for (std::size_t i : order) {
    out.idx.push_back(ps.idx[i]);
    out.a.push_back(ps.a[i]);
  }
  return out;
}

DispersiveFrame::DispersiveFrame(const SubdyadicLattice& lat, const Window& win,
                                 FrameOptions opts)
    : lat_(&lat), win_(win), opts_(opts) {
  require(win.grid == lat.grid, ErrorCode::grid_mismatch,
          "window and lattice grids differ");
  const GridSpec& g = lat.grid;
  double nyq = g.nyquist();
  double fs = g.freq_step();
  usable_flag_.assign(lat.size(), 0);

  // usability is a per-layer property (all translates share the spectrum box)
  std::vector<int> layer_usable(lat.layers.size(), 0);
  for (std::size_t li = 0; li < lat.layers.size(); ++li) {
    const FreqLayer& l = lat.layers[li];
    double nxi = norm_of(l.xi, g.d);
    if (nxi <= 0) continue;
    double rad = win_.spec.c2 * std::pow(nxi, 1.0 - lat.params.alpha);
    bool ok = true;
    for (int a = 0; a < g.d; ++a)
      ok = ok && (l.xi[a] - rad >= -nyq - 1e-12) && (l.xi[a] + rad <= nyq - fs + 1e-12);
    layer_usable[li] = ok ? 1 : 0;
  }

  for (std::size_t w = 0; w < lat.size(); ++w) {
    if (!layer_usable[lat.nodes[w].layer]) continue;
    usable_flag_[w] = 1;
    usable_.push_back(static_cast<int>(w));
  }
  packets_.resize(usable_.size());
#pragma omp parallel for schedule(dynamic, 32)
  for (long long i = 0; i < static_cast<long long>(usable_.size()); ++i) {
    const LatticeNode& nd = lat.nodes[usable_[i]];
    packets_[i] = packet_spectrum(g, win_, lat.params.alpha, nd.point.x, nd.point.xi);
  }
  for (const PacketSpectrum& p : packets_)
    max_prenorm_dev_ = std::max(max_prenorm_dev_, p.prenorm_deviation);

  coverage_.assign(g.size(), 0.0);
  for (const PacketSpectrum& p : packets_)
    for (std::size_t j = 0; j < p.idx.size(); ++j)
      coverage_[p.idx[j]] += std::norm(p.a[j]);
  double cmax = 0;
  for (double c : coverage_) cmax = std::max(cmax, c);
  require(cmax > 0, ErrorCode::invalid_argument, "no usable packets on this lattice");
  mask_pos_.assign(g.size(), -1);
  for (std::size_t m = 0; m < coverage_.size(); ++m) {
    if (coverage_[m] >= opts_.mask_tau * cmax) {
      mask_pos_[m] = static_cast<int>(mask_.size());
      mask_.push_back(static_cast<int>(m));
    }
  }
}

SampledField DispersiveFrame::make_packet(std::size_t node) const {
  require(node < lat_->size(), ErrorCode::invalid_argument, "node out of range");
  const LatticeNode& nd = lat_->nodes[node];
  return make_packet_at(nd.point.x, nd.point.xi);
}

SampledField DispersiveFrame::make_packet_at(const Vec2& x0, const Vec2& xi0) const {
  PacketSpectrum ps = packet_spectrum(lat_->grid, win_, alpha(), x0, xi0);
  std::vector<cplx> F(lat_->grid.size(), cplx{});
  for (std::size_t j = 0; j < ps.idx.size(); ++j) F[ps.idx[j]] = ps.a[j];
  return ifft(lat_->grid, F);
}

CoefficientField DispersiveFrame::analyze(const SampledField& f) const {
  require(f.grid == lat_->grid, ErrorCode::grid_mismatch, "field grid mismatch");
  return analyze_spectrum(fft(f));
}

CoefficientField DispersiveFrame::analyze_spectrum(const std::vector<cplx>& F) const {
  CoefficientField c;
  c.lattice = lat_;
  c.values.assign(lat_->size(), cplx{});
  double scale = 1.0 / std::pow(lat_->grid.L, lat_->grid.d);
#pragma omp parallel for schedule(dynamic, 64)
  for (long long i = 0; i < static_cast<long long>(usable_.size()); ++i) {
    const PacketSpectrum& p = packets_[i];
    cplx s{};
    for (std::size_t j = 0; j < p.idx.size(); ++j)
      s += F[p.idx[j]] * std::conj(p.a[j]);
    c.values[usable_[i]] = s * scale;
  }
  return c;
}

cplx DispersiveFrame::stft_at(const SampledField& f, const PhasePoint& p) const {
  return stft_spectrum_at(fft(f), p);
}

cplx DispersiveFrame::stft_spectrum_at(const std::vector<cplx>& F,
                                       const PhasePoint& p) const {
  PacketSpectrum ps = packet_spectrum(lat_->grid, win_, alpha(), p.x, p.xi);
  cplx s{};
  for (std::size_t j = 0; j < ps.idx.size(); ++j)
    s += F[ps.idx[j]] * std::conj(ps.a[j]);
  return s / std::pow(lat_->grid.L, lat_->grid.d);
}

std::vector<cplx> DispersiveFrame::synthesize_spectrum(const CoefficientField& c) const {
  require(c.lattice == lat_ && c.values.size() == lat_->size(),
          ErrorCode::grid_mismatch, "coefficients not aligned with this lattice");
  std::vector<cplx> F(lat_->grid.size(), cplx{});
  for (std::size_t i = 0; i < usable_.size(); ++i) {
    cplx cw = c.values[usable_[i]];
    if (cw == cplx{}) continue;
    const PacketSpectrum& p = packets_[i];
    for (std::size_t j = 0; j < p.idx.size(); ++j) F[p.idx[j]] += cw * p.a[j];
  }
  return F;
}

SampledField DispersiveFrame::synthesize(const CoefficientField& c) const {
  return ifft(lat_->grid, synthesize_spectrum(c));
}

SampledField DispersiveFrame::apply_frame_operator(const SampledField& f) const {
  return synthesize(analyze(f));
}

Eigen::MatrixXcd assemble_cross(const DispersiveFrame& A, const DispersiveFrame& B,
                                const std::vector<cplx>* weight) {
  const GridSpec& g = A.lattice().grid;
  require(g == B.lattice().grid, ErrorCode::grid_mismatch, "frames on different grids");
  const auto& ua = A.usable_nodes();
  const auto& ub = B.usable_nodes();
  Eigen::MatrixXcd M(ua.size(), ub.size());
  M.setZero();
  double scale = 1.0 / std::pow(g.L, g.d);
#pragma omp parallel for schedule(dynamic, 16)
  for (long long i = 0; i < static_cast<long long>(ua.size()); ++i) {
    const PacketSpectrum& pa = A.packet(static_cast<int>(i));
    const LatticeNode& na = A.lattice().nodes[ua[i]];
    for (std::size_t jb = 0; jb < ub.size(); ++jb) {
      const PacketSpectrum& pb = B.packet(static_cast<int>(jb));
      const LatticeNode& nb = B.lattice().nodes[ub[jb]];
      // spectral bounding-ball screen
      double dxi = 0;
      for (int a = 0; a < g.d; ++a) {
        double t = na.point.xi[a] - nb.point.xi[a];
        dxi += t * t;
      }
      if (std::sqrt(dxi) > pa.screen_radius + pb.screen_radius) continue;
      cplx s{};
      std::size_t p = 0, q = 0;
      while (p < pa.idx.size() && q < pb.idx.size()) {
        if (pa.idx[p] < pb.idx[q]) ++p;
        else if (pa.idx[p] > pb.idx[q]) ++q;
        else {
          cplx t = pa.a[p] * std::conj(pb.a[q]);
          if (weight) t *= (*weight)[pa.idx[p]];
          s += t;
          ++p; ++q;
        }
      }
      M(i, jb) = s * scale;
    }
  }
  return M;
}

GramMatrix DispersiveFrame::gramian() const {
  require(static_cast<int>(usable_.size()) <= opts_.dense_cap, ErrorCode::too_large,
          "usable node count exceeds the dense-matrix cap");
  GramMatrix g;
  g.lattice = lat_;
  g.node_ids = usable_;
  g.entries = assemble_cross(*this, *this, nullptr);
  return g;
}

Eigen::MatrixXcd DispersiveFrame::cross_gramian(const DispersiveFrame& other) const {
  return assemble_cross(*this, other, nullptr);
}

Eigen::MatrixXcd DispersiveFrame::operator_matrix(const std::vector<cplx>& symbol) const {
  require(symbol.size() == lat_->grid.size(), ErrorCode::grid_mismatch,
          "symbol not sampled on the frame grid");
  require(static_cast<int>(usable_.size()) <= opts_.dense_cap, ErrorCode::too_large,
          "usable node count exceeds the dense-matrix cap");
  // entries <T_m packet_w, packet_w'> = conj-transposed cross assembly with
  // the weight attached to the source packet
  Eigen::MatrixXcd M = assemble_cross(*this, *this, &symbol);
  // assemble_cross gives sum m(eta) Psi_w(eta) conj(Psi_w'(eta)) at (w, w'),
  // which is <T_m packet_w, packet_w'> read as (row=w, col=w'); transpose so
  // rows index the target packet w'
  return M.transpose();
}

void DispersiveFrame::apply_sv(const std::vector<cplx>& x, std::vector<cplx>& y) const {
  // expand mask coords to a full spectrum, S, restrict back
  std::vector<cplx> F(lat_->grid.size(), cplx{});
  for (std::size_t i = 0; i < mask_.size(); ++i) F[mask_[i]] = x[i];
  double scale = 1.0 / std::pow(lat_->grid.L, lat_->grid.d);
  std::vector<cplx> out(lat_->grid.size(), cplx{});
  std::vector<cplx> coeff(usable_.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (long long i = 0; i < static_cast<long long>(usable_.size()); ++i) {
    const PacketSpectrum& p = packets_[i];
    cplx s{};
    for (std::size_t j = 0; j < p.idx.size(); ++j)
      s += F[p.idx[j]] * std::conj(p.a[j]);
    coeff[i] = s * scale;
  }
  for (std::size_t i = 0; i < usable_.size(); ++i) {
    const PacketSpectrum& p = packets_[i];
    for (std::size_t j = 0; j < p.idx.size(); ++j) out[p.idx[j]] += coeff[i] * p.a[j];
  }
  y.resize(mask_.size());
  for (std::size_t i = 0; i < mask_.size(); ++i) y[i] = out[mask_[i]];
}

Eigen::MatrixXcd DispersiveFrame::reachable_operator() const {
  Eigen::MatrixXcd S(mask_.size(), mask_.size());
  S.setZero();
  double scale = 1.0 / std::pow(lat_->grid.L, lat_->grid.d);
  for (const PacketSpectrum& p : packets_) {
    // gather mask positions of the support
    for (std::size_t i = 0; i < p.idx.size(); ++i) {
      int pi = mask_pos_[p.idx[i]];
      if (pi < 0) continue;
      for (std::size_t j = 0; j < p.idx.size(); ++j) {
        int pj = mask_pos_[p.idx[j]];
        if (pj < 0) continue;
        S(pi, pj) += p.a[i] * std::conj(p.a[j]) * scale;
      }
    }
  }
  return S;
}

FrameBounds DispersiveFrame::frame_bounds(double tol,
                                          std::optional<FrameBounds::Method> method) const {
  require(tol > 0, ErrorCode::invalid_argument, "tolerance must be positive");
  FrameBounds fb;
  fb.tol = tol;
  FrameBounds::Method m = method.value_or(
      mask_.size() <= 2048 ? FrameBounds::Method::full_spectrum
                           : FrameBounds::Method::power_iteration);
  fb.method = m;
  if (m == FrameBounds::Method::full_spectrum) {
    Eigen::MatrixXcd S = reachable_operator();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(S, Eigen::EigenvaluesOnly);
    fb.lower = es.eigenvalues().minCoeff();
    fb.upper = es.eigenvalues().maxCoeff();
    fb.iterations = 0;
    return fb;
  }

  // two-sided power iteration on S_V and on (B I - S_V)
  std::size_t nm = mask_.size();
  Rng rng(20240601);
  auto rand_vec = [&]() {
    std::vector<cplx> v(nm);
    for (cplx& z : v) z = cplx(rng.gauss(), rng.gauss());
    return v;
  };
  auto nrm = [](const std::vector<cplx>& v) {
    double s = 0;
    for (const cplx& z : v) s += std::norm(z);
    return std::sqrt(s);
  };
  auto dot = [](const std::vector<cplx>& a, const std::vector<cplx>& b) {
    cplx s{};
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
  };

  int iters = 0;
  auto power = [&](auto&& apply) {
    std::vector<cplx> v = rand_vec();
    double nv = nrm(v);
    for (cplx& z : v) z /= nv;
    std::vector<cplx> w;
    double lam = 0, prev = 0;
    for (int it = 0; it < opts_.max_iterations; ++it) {
      apply(v, w);
      lam = dot(v, w).real();
      double nw = nrm(w);
      require(nw > 0, ErrorCode::no_convergence, "power iteration collapsed");
      for (std::size_t i = 0; i < nm; ++i) v[i] = w[i] / nw;
      ++iters;
      if (it > 0 && std::abs(lam - prev) <= tol * std::max(1.0, std::abs(lam)))
        return lam;
      prev = lam;
    }
    fail(ErrorCode::no_convergence, "power iteration did not converge");
  };

  double B = power([&](const std::vector<cplx>& x, std::vector<cplx>& y) { apply_sv(x, y); });
  double shift = B * (1.0 + 10.0 * tol) + 1e-12;
  double mu = power([&](const std::vector<cplx>& x, std::vector<cplx>& y) {
    apply_sv(x, y);
    for (std::size_t i = 0; i < nm; ++i) y[i] = shift * x[i] - y[i];
  });
  fb.lower = shift - mu;
  fb.upper = B;
  fb.iterations = iters;
  return fb;
}

std::vector<cplx> DispersiveFrame::cg_solve(const std::vector<cplx>& rhs, double tol,
                                            int max_iter, int* iters_out) const {
  std::size_t nm = mask_.size();
  std::vector<cplx> x(nm, cplx{}), r(rhs), p(rhs), Ap(nm);
  auto nrm2v = [](const std::vector<cplx>& v) {
    double s = 0;
    for (const cplx& z : v) s += std::norm(z);
    return s;
  };
  double rr = nrm2v(r);
  double target = tol * tol * std::max(nrm2v(rhs), 1e-300);
  int it = 0;
  while (rr > target && it < max_iter) {
    apply_sv(p, Ap);
    cplx pap{};
    for (std::size_t i = 0; i < nm; ++i) pap += std::conj(p[i]) * Ap[i];
    require(pap.real() > 0, ErrorCode::not_positive_definite,
            "frame operator is not positive definite on the reachable set");
    double a = rr / pap.real();
    for (std::size_t i = 0; i < nm; ++i) {
      x[i] += a * p[i];
      r[i] -= a * Ap[i];
    }
    double rr2 = nrm2v(r);
    double beta = rr2 / rr;
    rr = rr2;
    for (std::size_t i = 0; i < nm; ++i) p[i] = r[i] + beta * p[i];
    ++it;
  }
  require(rr <= target, ErrorCode::no_convergence, "conjugate gradients did not converge");
  if (iters_out) *iters_out = it;
  return x;
}

std::vector<SampledField> DispersiveFrame::dual_frame(const std::vector<int>& usable_pos,
                                                      double tol) const {
  std::vector<SampledField> out;
  out.reserve(usable_pos.size());
  for (int pos : usable_pos) {
    require(pos >= 0 && pos < static_cast<int>(packets_.size()),
            ErrorCode::invalid_argument, "packet position out of range");
    const PacketSpectrum& p = packets_[pos];
    std::vector<cplx> rhs(mask_.size(), cplx{});
    for (std::size_t j = 0; j < p.idx.size(); ++j) {
      int mp = mask_pos_[p.idx[j]];
      if (mp >= 0) rhs[mp] = p.a[j];
    }
    std::vector<cplx> y = cg_solve(rhs, tol, opts_.max_iterations, nullptr);
    std::vector<cplx> F(lat_->grid.size(), cplx{});
    for (std::size_t i = 0; i < mask_.size(); ++i) F[mask_[i]] = y[i];
    out.push_back(ifft(lat_->grid, F));
  }
  return out;
}

SampledField DispersiveFrame::reconstruct(const SampledField& f, double tol,
                                          int* iters) const {
  require(f.grid == lat_->grid, ErrorCode::grid_mismatch, "field grid mismatch");
  std::vector<cplx> F = fft(f);
  std::vector<cplx> x(mask_.size());
  for (std::size_t i = 0; i < mask_.size(); ++i) x[i] = F[mask_[i]];
  std::vector<cplx> Sx;
  apply_sv(x, Sx);
  std::vector<cplx> y = cg_solve(Sx, tol, opts_.max_iterations, iters);
  std::vector<cplx> Fout(lat_->grid.size(), cplx{});
  for (std::size_t i = 0; i < mask_.size(); ++i) Fout[mask_[i]] = y[i];
  return ifft(lat_->grid, Fout);
}

SampledField DispersiveFrame::random_bandlimited(std::uint64_t seed, double lo,
                                                 double hi) const {
  Rng rng(seed);
  const GridSpec& g = lat_->grid;
  std::vector<cplx> F(g.size(), cplx{});
  bool any = false;
  for (int m : mask_) {
    double r = norm_of(g.freq_of(m), g.d);
    // draw per candidate deterministically in mask order
    if (r >= lo && r <= hi) {
      F[m] = cplx(rng.gauss(), rng.gauss());
      any = true;
    }
  }
  require(any, ErrorCode::empty_test_set, "no reachable frequencies in the band");
  SampledField f = ifft(g, F);
  double nv = norm2(f);
  for (cplx& z : f.v) z /= nv;
  return f;
}

double DispersiveFrame::schur_offdiagonal_constant(const GramMatrix& g) const {
  double best = 0;
  for (Eigen::Index i = 0; i < g.entries.rows(); ++i) {
    double s = 0;
    for (Eigen::Index j = 0; j < g.entries.cols(); ++j)
      if (i != j) s += std::abs(g.entries(i, j));
    best = std::max(best, s);
  }
  return best;
}

}  // namespace sg
