#pragma once

// Deterministic test-signal generators. All randomness flows through Rng
// (mt19937_64 + explicit Box-Muller) so outputs are reproducible bit for
// bit for a given seed.

#include <cstdint>
#include <random>

#include "grid.hpp"

namespace sg {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() {  // [0,1)
    return (gen_() >> 11) * (1.0 / 9007199254740992.0);
  }
  double gauss() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0, u2 = 0;
    do { u1 = uniform(); } while (u1 <= 0);
    u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }
  std::uint64_t integer() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0;
  bool have_spare_ = false;
};

// unit impulse at the grid point nearest to x0
SampledField make_delta(const GridSpec& g, const Vec2& x0);

// indicator of the half torus [x0, x0 + L/2) per axis 0 (d=1 only)
SampledField make_step(const GridSpec& g, double x0);

// gaussian bump centered at x0, width w, optionally modulated to xi0
SampledField make_gaussian_bump(const GridSpec& g, const Vec2& x0, double width,
                                const Vec2& xi0 = {0, 0});

// impulse filtered by the unimodular phase exp(i |xi|^alpha)
SampledField make_chirp(const GridSpec& g, const Vec2& x0, double alpha);

// unit-norm field with gaussian spectrum on {lo <= |xi| <= hi}
SampledField make_random_bandlimited(const GridSpec& g, std::uint64_t seed,
                                     double lo, double hi);

}  // namespace sg
