#include "ccp/random.hpp"

#include <cmath>
#include <stdexcept>

namespace ccp {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kSourceSalt = 0x5ca1ab1e0ddba11ULL;
constexpr std::uint64_t kTieSalt = 0x7ea5a17ed15c0b01ULL;
constexpr std::uint64_t kIndexSalt = 0x1dead2beef3c0deULL;
constexpr double kPi = 3.14159265358979323846;

}  // namespace

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t combine64(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ (mix64(b + kGolden) + (a << 6) + (a >> 2)));
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t RandomStream::next_u64() {
  state_ += kGolden;
  return mix64(state_);
}

double RandomStream::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::next_normal() {
  double u1 = 1.0 - next_unit();  // (0, 1], keeps the log finite
  double u2 = next_unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

std::uint64_t RandomStream::next_below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("next_below: bound must be positive");
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
}

RandomSource::RandomSource(std::uint64_t seed)
    : key_(mix64(seed ^ kSourceSalt)) {}

RandomSource RandomSource::derive(std::uint64_t tag) const {
  return RandomSource(combine64(key_, tag), true);
}

RandomSource RandomSource::derive(std::string_view tag) const {
  return RandomSource(combine64(key_, fnv1a64(tag)), true);
}

RandomStream RandomSource::stream(std::uint64_t tag) const {
  return RandomStream(combine64(key_, tag));
}

double RandomSource::tie_draw(std::string_view example_id, std::int64_t label,
                              int layer) const {
  std::uint64_t h = combine64(key_, kTieSalt);
  h = combine64(h, fnv1a64(example_id));
  h = combine64(h, static_cast<std::uint64_t>(label));
  h = combine64(h, static_cast<std::uint64_t>(layer));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

std::uint64_t RandomSource::draw_index(std::string_view example_id,
                                       std::uint64_t bound) const {
  if (bound == 0) throw std::invalid_argument("draw_index: bound must be positive");
  std::uint64_t h = combine64(key_, kIndexSalt);
  h = combine64(h, fnv1a64(example_id));
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(h) * bound) >> 64);
}

}  // namespace ccp
