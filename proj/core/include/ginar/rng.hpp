#ifndef GINAR_RNG_HPP
#define GINAR_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace ginar {

using RandomStream = std::mt19937_64;

/// SplitMix64 finalizer. Bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t z);

/// Derives a child seed from a base seed and a path of integers by
/// chained mixing: s <- mix64(s ^ mix64(component + tag)).  The result
/// depends on every component and on the order of the path, and nothing
/// else, so streams stay stable when unrelated parts of a computation
/// are added or reordered.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path);

RandomStream make_stream(std::uint64_t base, std::initializer_list<std::uint64_t> path);

}  // namespace ginar

#endif
