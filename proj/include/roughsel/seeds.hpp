#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace roughsel {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

// Stage seeds are fixed functions of the master seed so each stage can be
// rerun on its own and reproduce the pipeline's numbers.
std::uint64_t derive_seed(std::uint64_t master, std::string_view stage);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace roughsel
