#include "ginar/rng.hpp"

namespace ginar {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = mix64(base);
  std::uint64_t tag = 1;
  for (std::uint64_t c : path) {
    s = mix64(s ^ mix64(c + 0x9e3779b97f4a7c15ULL * tag));
    ++tag;
  }
  return s;
}

RandomStream make_stream(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
  return RandomStream(derive_seed(base, path));
}

}  // namespace ginar
