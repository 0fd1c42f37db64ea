#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace genhankel {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer; used to decorrelate derived stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed for stream `stream` of a run seeded with `seed`. Distinct
/// (seed, stream) pairs give statistically independent engines, so a
/// replicate's draws do not depend on which thread produces it.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

Engine make_engine(std::uint64_t seed, std::uint64_t stream);

/// Uniform on the open interval (0, 1), 53-bit resolution.
double uniform_open(Engine& eng);

/// Law of the input sequence. Every kind has mean 0 and variance 1.
enum class InputDistribution { gaussian, rademacher, uniform };

std::string to_string(InputDistribution dist);
InputDistribution parse_distribution(std::string_view name);

double draw(InputDistribution dist, Engine& eng);

}  // namespace genhankel
