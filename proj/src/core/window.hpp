#pragma once

// Admissible analysis windows: real-valued, unit L2 norm, spectrum supported
// in the annulus {c1 <= |zeta| <= c2}. The radial profile is sin(pi t)^p on
// the normalized annulus coordinate t in (0,1); p=6 for the stock window,
// p=12 for the independent second window.

#include "grid.hpp"

namespace sg {

struct WindowSpec {
  double c1 = 0.5;
  double c2 = 2.0;

  void validate() const {
    require(0 < c1 && c1 < c2, ErrorCode::invalid_argument,
            "annulus must satisfy 0 < c1 < c2");
  }
};

struct Window {
  GridSpec grid;
  WindowSpec spec;
  int profile_power = 6;
  double profile_scale = 1.0;  // makes the sampled window unit-norm
  std::vector<cplx> values;    // real-valued samples (imag zeroed)
  double max_imag_before_symmetrization = 0.0;

  // analytic radial profile of the spectrum, phi_hat(|zeta|)
  double spectral_profile(double r) const {
    double t = (r - spec.c1) / (spec.c2 - spec.c1);
    if (t <= 0.0 || t >= 1.0) return 0.0;
    double s = std::sin(3.14159265358979323846 * t);
    double v = 1.0;
    for (int i = 0; i < profile_power; ++i) v *= s;
    return profile_scale * v;
  }

  SampledField as_field() const {
    SampledField f(grid);
    f.v = values;
    return f;
  }
};

Window build_window(const GridSpec& grid, const WindowSpec& spec);
Window second_window(const GridSpec& grid, const WindowSpec& spec);

}  // namespace sg
