#include "fiid/seeding.hpp"

namespace fiid {

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t derive_substream(std::uint64_t master_seed, std::uint64_t index) {
  return mix64(mix64(master_seed) + index * 0x9E3779B97F4A7C15ULL);
}

std::uint64_t entropy_seed() {
  std::random_device device;
  return (static_cast<std::uint64_t>(device()) << 32) ^ device();
}

} // namespace fiid
