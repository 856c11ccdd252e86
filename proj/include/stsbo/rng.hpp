#pragma once

// Splittable counter-based random streams.
//
// A stream is addressed by a root seed plus a label path; derivation is pure
// 64-bit hashing (splitmix64 finalizer), so any substream can be recreated
// from scratch without touching the draw state of any other stream. The
// simulator keys substreams by (run seed, purpose, selection ordinal), which
// is what makes traces independent of worker count and execution order.
//
// The generator algorithm below is fixed and versioned: changing either the
// mixing constants or the uniform/normal conversions is a format break for
// recorded traces and must bump kGeneratorVersion.

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace stsbo::rng {

inline constexpr int kGeneratorVersion = 1;

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Identifier of a derived stream. Each path label is avalanched before being
// folded in, so adjacent labels (ordinals 0,1,2,...) land far apart.
struct StreamKey {
  std::uint64_t value = 0;

  constexpr StreamKey child(std::uint64_t label) const {
    return StreamKey{mix64(value + kGolden + mix64(label + kGolden))};
  }
};

constexpr StreamKey derive(std::uint64_t root, std::initializer_list<std::uint64_t> path) {
  StreamKey key{mix64(root + kGolden)};
  for (std::uint64_t label : path) key = key.child(label);
  return key;
}

// splitmix64 sequence started at a derived key. next_u64 defines the stream;
// every other draw is a fixed function of it.
class Stream {
 public:
  explicit Stream(StreamKey key) : state_(key.value) {}
  Stream(std::uint64_t root, std::initializer_list<std::uint64_t> path)
      : Stream(derive(root, path)) {}

  std::uint64_t next_u64() {
    state_ += kGolden;
    return mix64(state_);
  }

  // Uniform on [0,1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller, cosine branch only: exactly two uniforms
  // per draw keeps stream consumption independent of the values drawn.
  double next_normal() {
    double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;  // (0,1]
    double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  // Uniform index in [0, n).
  int next_index(int n) {
    int i = static_cast<int>(next_double() * n);
    return i < n ? i : n - 1;
  }

 private:
  std::uint64_t state_;
};

}  // namespace stsbo::rng
