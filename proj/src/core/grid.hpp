#pragma once

// Discretized d-torus [0,L)^d with n samples per axis and the FFT
// conventions used throughout:
//   spectrum   F(m) = (L/n)^d sum_i f(t_i) exp(-i t_i . xi_m)
//   inverse    f(t_i) = L^-d  sum_m F(m)  exp(+i t_i . xi_m)
//   inner      <f,g> = (L/n)^d sum_i f_i conj(g_i) = L^-d sum_m F Ḡ
// Frequencies xi_m = 2 pi m / L with per-axis m in [-n/2, n/2), stored
// in FFT order (m >= 0 first).

#include <array>
#include <complex>
#include <vector>

#include "errors.hpp"

namespace sg {

using cplx = std::complex<double>;
using Vec2 = std::array<double, 2>;

struct GridSpec {
  int d = 1;
  int n = 1024;
  double L = 64.0;

  void validate() const;
  std::size_t size() const {
    std::size_t s = 1;
    for (int a = 0; a < d; ++a) s *= static_cast<std::size_t>(n);
    return s;
  }
  double nyquist() const { return 3.14159265358979323846 * n / L; }
  double freq_step() const { return 2.0 * 3.14159265358979323846 / L; }
  double cell() const { return L / n; }

  // signed per-axis index of flat index
  int signed_index(int m) const { return m < n / 2 ? m : m - n; }
  Vec2 freq_of(std::size_t flat) const;
  Vec2 point_of(std::size_t flat) const;

  bool operator==(const GridSpec& o) const {
    return d == o.d && n == o.n && L == o.L;
  }
};

struct SampledField {
  GridSpec grid;
  std::vector<cplx> v;

  SampledField() = default;
  explicit SampledField(const GridSpec& g) : grid(g), v(g.size(), cplx{}) {}
};

double norm2(const SampledField& f);
cplx inner(const SampledField& f, const SampledField& g);

// FFTs with the scaling above; plans are cached per (d,n).
std::vector<cplx> fft(const SampledField& f);
SampledField ifft(const GridSpec& g, const std::vector<cplx>& spectrum);

// torus-wrapped distance between spatial coordinates (minimal image)
inline double wrap_dist(double a, double b, double L) {
  double t = a - b;
  t -= L * std::floor(t / L + 0.5);
  return t < 0 ? -t : t;
}

inline double norm_of(const Vec2& x, int d) {
  double s = 0;
  for (int a = 0; a < d; ++a) s += x[a] * x[a];
  return std::sqrt(s);
}

}  // namespace sg
