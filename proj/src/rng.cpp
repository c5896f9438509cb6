#include "dpboot/rng.hpp"

#include <cmath>

#include "dpboot/errors.hpp"

namespace dpboot {

std::uint64_t Rng::mix(std::uint64_t x) {
  // splitmix64 finalizer.
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng Rng::derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  std::uint64_t state = mix(seed);
  for (std::uint64_t p : path) {
    state = mix(state ^ mix(p + 0x632be59bd9b4e019ULL));
  }
  return Rng(state);
}

double Rng::uniform01() {
  return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
}

std::uint64_t Rng::uniform_below(std::uint64_t n) {
  if (n == 0) throw ParameterError("uniform_below: n must be positive");
  // Lemire's multiply-shift with rejection of the biased low range.
  std::uint64_t x = engine_();
  __uint128_t m = static_cast<__uint128_t>(x) * n;
  auto lo = static_cast<std::uint64_t>(m);
  if (lo < n) {
    std::uint64_t threshold = -n % n;
    while (lo < threshold) {
      x = engine_();
      m = static_cast<__uint128_t>(x) * n;
      lo = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double Rng::normal(double mean, double sd) {
  // Box-Muller, cosine branch only, keeps the stream layout trivial.
  double u1 = uniform01();
  double u2 = uniform01();
  double r = std::sqrt(-2.0 * std::log(u1));
  return mean + sd * r * std::cos(2.0 * M_PI * u2);
}

double Rng::laplace(double location, double scale) {
  double u = uniform01() - 0.5;
  double sign = u >= 0.0 ? 1.0 : -1.0;
  return location - scale * sign * std::log1p(-2.0 * std::abs(u));
}

}  // namespace dpboot
