#include "window.hpp"

#include <cmath>

namespace sg {

namespace {

Window make(const GridSpec& grid, const WindowSpec& spec, int power) {
  grid.validate();
  spec.validate();
  require(spec.c2 < grid.nyquist() / 4.0, ErrorCode::annulus_too_wide,
          "annulus outer radius must stay below nyquist/4");

  Window w;
  w.grid = grid;
  w.spec = spec;
  w.profile_power = power;
  w.profile_scale = 1.0;

  std::vector<cplx> F(grid.size());
  double s2 = 0;
  for (std::size_t m = 0; m < F.size(); ++m) {
    double r = norm_of(grid.freq_of(m), grid.d);
    double v = w.spectral_profile(r);
    F[m] = v;
    s2 += v * v;
  }
  // unit discrete L2 norm: ||phi||^2 = L^-d sum |F|^2
  double nrm = std::sqrt(s2 / std::pow(grid.L, grid.d));
  require(nrm > 0, ErrorCode::invalid_argument, "annulus contains no grid frequencies");
  w.profile_scale = 1.0 / nrm;
  for (cplx& z : F) z /= nrm;

  SampledField phi = ifft(grid, F);
  double mi = 0;
  for (const cplx& z : phi.v) mi = std::max(mi, std::abs(z.imag()));
  w.max_imag_before_symmetrization = mi;
  for (cplx& z : phi.v) z = cplx(z.real(), 0.0);
  w.values = std::move(phi.v);
  return w;
}

}  // namespace

Window build_window(const GridSpec& grid, const WindowSpec& spec) {
  return make(grid, spec, 6);
}

Window second_window(const GridSpec& grid, const WindowSpec& spec) {
  return make(grid, spec, 12);
}

}  // namespace sg
