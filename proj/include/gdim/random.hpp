#ifndef GDIM_RANDOM_HPP
#define GDIM_RANDOM_HPP

#include <cstdint>
#include <string_view>

namespace gdim {

// FNV-1a, used for feature hashing, substream derivation and file digests.
// Stable across platforms so that seeded runs are bit-reproducible.
inline std::uint64_t fnv1a64(std::string_view data,
                             std::uint64_t seed = 0xcbf29ce484222325ull) {
  std::uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Small deterministic generator. std::mt19937 plus the standard distributions
// are implementation-defined, so all randomness in the toolkit flows through
// this instead.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n), n > 0.
  std::uint64_t uniform(std::uint64_t n) { return next_u64() % n; }

  // Uniform in [0, 1).
  double uniform_real() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [-r, r].
  double uniform_sym(double r) { return (2.0 * uniform_real() - 1.0) * r; }

 private:
  std::uint64_t state_;
};

// Named substream so that e.g. splitting and init draw independent streams
// from the single run seed.
inline Rng substream(std::uint64_t seed, std::string_view name) {
  return Rng(splitmix64(seed ^ fnv1a64(name)));
}

// Fisher-Yates with our own generator.
template <typename Vec>
void deterministic_shuffle(Vec& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = rng.uniform(i);
    using std::swap;
    swap(v[i - 1], v[j]);
  }
}

}  // namespace gdim

#endif  // GDIM_RANDOM_HPP
