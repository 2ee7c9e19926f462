#include "signals.hpp"

#include <cmath>

namespace sg {

SampledField make_delta(const GridSpec& g, const Vec2& x0) {
  g.validate();
  SampledField f(g);
  long long i0 = std::llround(x0[0] / g.cell());
  long long i1 = std::llround(x0[1] / g.cell());
  i0 = ((i0 % g.n) + g.n) % g.n;
  i1 = ((i1 % g.n) + g.n) % g.n;
  std::size_t flat = g.d == 1 ? i0 : i0 * g.n + i1;
  f.v[flat] = 1.0;
  return f;
}

SampledField make_step(const GridSpec& g, double x0) {
  require(g.d == 1, ErrorCode::invalid_argument, "step generator is 1-d only");
  SampledField f(g);
  for (int i = 0; i < g.n; ++i) {
    double t = i * g.cell() - x0;
    t -= g.L * std::floor(t / g.L);
    f.v[i] = t < g.L / 2 ? 1.0 : 0.0;
  }
  return f;
}

SampledField make_gaussian_bump(const GridSpec& g, const Vec2& x0, double width,
                                const Vec2& xi0) {
  require(width > 0, ErrorCode::invalid_argument, "bump width must be positive");
  SampledField f(g);
  for (std::size_t i = 0; i < f.v.size(); ++i) {
    Vec2 t = g.point_of(i);
    double q = 0, phase = 0;
    for (int a = 0; a < g.d; ++a) {
      double dx = wrap_dist(t[a], x0[a], g.L);
      q += dx * dx;
      phase += t[a] * xi0[a];
    }
    f.v[i] = std::exp(-q / (2 * width * width)) * cplx(std::cos(phase), std::sin(phase));
  }
  return f;
}

SampledField make_chirp(const GridSpec& g, const Vec2& x0, double alpha) {
  require(alpha > 0, ErrorCode::invalid_argument, "chirp exponent must be positive");
  SampledField d = make_delta(g, x0);
  std::vector<cplx> F = fft(d);
  for (std::size_t m = 0; m < F.size(); ++m) {
    double r = norm_of(g.freq_of(m), g.d);
    double ph = std::pow(r, alpha);
    F[m] *= cplx(std::cos(ph), std::sin(ph));
  }
  return ifft(g, F);
}

SampledField make_random_bandlimited(const GridSpec& g, std::uint64_t seed,
                                     double lo, double hi) {
  require(lo < hi, ErrorCode::invalid_argument, "band must satisfy lo < hi");
  Rng rng(seed);
  std::vector<cplx> F(g.size(), cplx{});
  bool any = false;
  for (std::size_t m = 0; m < F.size(); ++m) {
    double r = norm_of(g.freq_of(m), g.d);
    if (r >= lo && r <= hi) {
      F[m] = cplx(rng.gauss(), rng.gauss());
      any = true;
    }
  }
  require(any, ErrorCode::empty_test_set, "band contains no grid frequencies");
  SampledField f = ifft(g, F);
  double nv = norm2(f);
  for (cplx& z : f.v) z /= nv;
  return f;
}

}  // namespace sg
