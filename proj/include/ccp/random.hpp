#pragma once

#include <cstdint>
#include <string_view>

namespace ccp {

// Deterministic randomness with pinned algorithms: identical seeds give
// bit-identical draws on every platform and across runs.

// 64-bit finalizer used by the splitmix64 generator; bijective.
std::uint64_t mix64(std::uint64_t z);

// Order-insensitive would be wrong here: combine(a, b) != combine(b, a).
std::uint64_t combine64(std::uint64_t a, std::uint64_t b);

// FNV-1a over the bytes of a string, for keying draws by example id.
std::uint64_t fnv1a64(std::string_view s);

// Sequential splitmix64 stream.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  // Uniform on [0, 1), 53 random bits.
  double next_unit();
  // Standard normal via Box-Muller (no cached second value).
  double next_normal();
  // Uniform on {0, ..., bound - 1}; bound must be positive.
  std::uint64_t next_below(std::uint64_t bound);

 private:
  std::uint64_t state_;
};

// Keyed source of independent streams and stateless per-entity draws.
// derive() and stream() give sub-sources/streams that do not overlap for
// distinct tags; the stateless draws depend only on (key, arguments), never
// on call order, so replaying a computation reproduces its draws exactly.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed);

  RandomSource derive(std::uint64_t tag) const;
  RandomSource derive(std::string_view tag) const;
  RandomStream stream(std::uint64_t tag) const;

  // Tie-break variate in [0, 1) for one (example, label, layer) triple.
  double tie_draw(std::string_view example_id, std::int64_t label, int layer) const;

  // Index in {0, ..., bound - 1} keyed by example id; bound must be positive.
  std::uint64_t draw_index(std::string_view example_id, std::uint64_t bound) const;

  std::uint64_t key() const { return key_; }

 private:
  explicit RandomSource(std::uint64_t key, bool) : key_(key) {}
  std::uint64_t key_;
};

}  // namespace ccp
