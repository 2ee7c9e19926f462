#include "grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

namespace sg {

void GridSpec::validate() const {
  require(d == 1 || d == 2, ErrorCode::invalid_argument, "grid dimension must be 1 or 2");
  require(n >= 8 && (n & (n - 1)) == 0, ErrorCode::invalid_argument,
          "samples per axis must be a power of two >= 8");
  require(L > 0, ErrorCode::invalid_argument, "side length must be positive");
}

Vec2 GridSpec::freq_of(std::size_t flat) const {
  Vec2 xi{0, 0};
  double fs = freq_step();
  if (d == 1) {
    xi[0] = fs * signed_index(static_cast<int>(flat));
  } else {
    xi[0] = fs * signed_index(static_cast<int>(flat / n));
    xi[1] = fs * signed_index(static_cast<int>(flat % n));
  }
  return xi;
}

Vec2 GridSpec::point_of(std::size_t flat) const {
  Vec2 x{0, 0};
  double h = cell();
  if (d == 1) {
    x[0] = h * static_cast<double>(flat);
  } else {
    x[0] = h * static_cast<double>(flat / n);
    x[1] = h * static_cast<double>(flat % n);
  }
  return x;
}

double norm2(const SampledField& f) {
  double s = 0;
  for (const cplx& z : f.v) s += std::norm(z);
  double w = std::pow(f.grid.cell(), f.grid.d);
  return std::sqrt(s * w);
}

cplx inner(const SampledField& f, const SampledField& g) {
  require(f.grid == g.grid, ErrorCode::grid_mismatch, "fields on different grids");
  cplx s{};
  for (std::size_t i = 0; i < f.v.size(); ++i) s += f.v[i] * std::conj(g.v[i]);
  return s * std::pow(f.grid.cell(), f.grid.d);
}

namespace {

struct PlanCache {
  std::mutex mu;
  std::map<std::tuple<int, int, int>, fftw_plan> plans;

  fftw_plan get(int d, int n, int sign) {
    std::scoped_lock lock(mu);
    auto key = std::make_tuple(d, n, sign);
    auto it = plans.find(key);
    if (it != plans.end()) return it->second;
    int dims[2] = {n, n};
    fftw_plan p = fftw_plan_dft(d, dims, nullptr, nullptr, sign,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans[key] = p;
    return p;
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

std::vector<cplx> fft(const SampledField& f) {
  std::vector<cplx> out(f.v.size());
  std::vector<cplx> in(f.v);  // fftw may not preserve input
  fftw_plan p = cache().get(f.grid.d, f.grid.n, FFTW_FORWARD);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  double scale = std::pow(f.grid.cell(), f.grid.d);
  for (cplx& z : out) z *= scale;
  return out;
}

SampledField ifft(const GridSpec& g, const std::vector<cplx>& spectrum) {
  require(spectrum.size() == g.size(), ErrorCode::grid_mismatch,
          "spectrum size does not match grid");
  SampledField f(g);
  std::vector<cplx> in(spectrum);
  fftw_plan p = cache().get(g.d, g.n, FFTW_BACKWARD);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(f.v.data()));
  double scale = 1.0 / std::pow(g.L, g.d);
  for (cplx& z : f.v) z *= scale;
  return f;
}

}  // namespace sg
