#include "genhankel/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace genhankel {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

Engine make_engine(std::uint64_t seed, std::uint64_t stream) {
  return Engine(derive_seed(seed, stream));
}

double uniform_open(Engine& eng) {
  // (bits + 0.5) / 2^53 never hits 0 or 1.
  return (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
}

std::string to_string(InputDistribution dist) {
  switch (dist) {
    case InputDistribution::gaussian: return "gaussian";
    case InputDistribution::rademacher: return "rademacher";
    case InputDistribution::uniform: return "uniform";
  }
  return "unknown";
}

InputDistribution parse_distribution(std::string_view name) {
  if (name == "gaussian" || name == "normal") return InputDistribution::gaussian;
  if (name == "rademacher") return InputDistribution::rademacher;
  if (name == "uniform") return InputDistribution::uniform;
  throw std::invalid_argument("unknown input distribution '" + std::string(name) +
                              "' (expected gaussian, rademacher or uniform)");
}

double draw(InputDistribution dist, Engine& eng) {
  switch (dist) {
    case InputDistribution::gaussian: {
      std::normal_distribution<double> normal(0.0, 1.0);
      return normal(eng);
    }
    case InputDistribution::rademacher:
      return (eng() >> 63) ? 1.0 : -1.0;
    case InputDistribution::uniform:
      // U(-sqrt3, sqrt3) has variance 1.
      return std::sqrt(3.0) * (2.0 * uniform_open(eng) - 1.0);
  }
  return 0.0;
}

}  // namespace genhankel
