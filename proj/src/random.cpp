#include "jch/random.hpp"

#include <cmath>
#include <numbers>

namespace jch {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t parameter_index,
                          std::uint64_t realization_index) {
  std::uint64_t h = mix64(master);
  h = mix64(h ^ mix64(parameter_index + 0x632be59bd9b4e019ULL));
  h = mix64(h ^ mix64(realization_index + 0x8cb92ba72f3d8dd7ULL));
  return h;
}

double RandomStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

}  // namespace jch
