#include "ailsr/rng.hpp"

namespace ailsr {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t s = splitmix64(base);
  s = splitmix64(s ^ (a + 0x1000000001ULL));
  s = splitmix64(s ^ (b + 0x2000000003ULL));
  s = splitmix64(s ^ (c + 0x3000000005ULL));
  return s;
}

}  // namespace ailsr
