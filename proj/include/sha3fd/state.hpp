#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

namespace sha3fd {

/// Raised when a caller breaks an operation's precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline constexpr unsigned kLaneBits = 64;
inline constexpr unsigned kStateBits = 1600;
inline constexpr unsigned kStateBytes = kStateBits / 8;
inline constexpr unsigned kPlaneBits = 320;
inline constexpr unsigned kSliceBits = 25;

constexpr unsigned lane_index(unsigned x, unsigned y) { return 5 * y + x; }

/// Linear index of bit (x, y, z): 64 * (5y + x) + z, the FIPS 202 lane-major order.
constexpr unsigned bit_index(unsigned x, unsigned y, unsigned z) { return kLaneBits * lane_index(x, y) + z; }

struct BitCoord {
  unsigned x = 0, y = 0, z = 0;
  friend constexpr bool operator==(const BitCoord&, const BitCoord&) = default;
};

constexpr BitCoord bit_coord(unsigned index) {
  const unsigned lane = index / kLaneBits;
  return {lane % 5, lane / 5, index % kLaneBits};
}

/// The 5x5x64 Keccak state held as 25 lanes; bit z of lane 5y+x is S[x,y,z].
/// Byte i of the linear stream is bits 8i..8i+7 (little-endian within a lane).
struct StateArray {
  std::array<uint64_t, 25> lanes{};

  uint64_t& lane(unsigned x, unsigned y) { return lanes[lane_index(x, y)]; }
  uint64_t lane(unsigned x, unsigned y) const { return lanes[lane_index(x, y)]; }

  bool get(unsigned x, unsigned y, unsigned z) const { return (lane(x, y) >> z) & 1U; }
  void set(unsigned x, unsigned y, unsigned z, bool v) {
    const uint64_t m = uint64_t{1} << z;
    lane(x, y) = v ? (lane(x, y) | m) : (lane(x, y) & ~m);
  }
  bool bit(unsigned index) const { return (lanes[index / kLaneBits] >> (index % kLaneBits)) & 1U; }
  void flip(unsigned index) { lanes[index / kLaneBits] ^= uint64_t{1} << (index % kLaneBits); }

  uint8_t byte(unsigned i) const { return static_cast<uint8_t>(lanes[i / 8] >> (8 * (i % 8))); }
  void set_byte(unsigned i, uint8_t v) {
    const unsigned sh = 8 * (i % 8);
    lanes[i / 8] = (lanes[i / 8] & ~(uint64_t{0xFF} << sh)) | (uint64_t{v} << sh);
  }

  std::array<uint8_t, kStateBytes> to_bytes() const;
  static StateArray from_bytes(std::span<const uint8_t, kStateBytes> bytes);

  unsigned popcount() const {
    unsigned n = 0;
    for (uint64_t l : lanes) n += static_cast<unsigned>(std::popcount(l));
    return n;
  }

  friend bool operator==(const StateArray&, const StateArray&) = default;
};

/// Column parities C[x,z]; entry x holds the 64 z-bits of plane row x.
struct CPlane {
  std::array<uint64_t, 5> cols{};

  bool get(unsigned x, unsigned z) const { return (cols[x] >> z) & 1U; }
  void flip(unsigned x, unsigned z) { cols[x] ^= uint64_t{1} << z; }
  /// Linear index x * 64 + z.
  void flip(unsigned index) { flip(index / kLaneBits, index % kLaneBits); }
  bool any() const { return (cols[0] | cols[1] | cols[2] | cols[3] | cols[4]) != 0; }
  unsigned popcount() const {
    unsigned n = 0;
    for (uint64_t c : cols) n += static_cast<unsigned>(std::popcount(c));
    return n;
  }
  friend CPlane operator^(CPlane a, const CPlane& b) {
    for (unsigned x = 0; x < 5; ++x) a.cols[x] ^= b.cols[x];
    return a;
  }
  friend bool operator==(const CPlane&, const CPlane&) = default;
};

/// Lane parities F[x,y]; bit 5y+x.
struct FSlice {
  uint32_t bits = 0;

  bool get(unsigned x, unsigned y) const { return (bits >> lane_index(x, y)) & 1U; }
  void flip(unsigned x, unsigned y) { bits ^= uint32_t{1} << lane_index(x, y); }
  void flip(unsigned index) { bits ^= uint32_t{1} << index; }
  /// XOR over y of F[x,y], one bit per sheet x.
  uint8_t column_sums() const {
    uint32_t acc = 0;
    for (unsigned y = 0; y < 5; ++y) acc ^= bits >> (5 * y);
    return static_cast<uint8_t>(acc & 0x1F);
  }
  friend bool operator==(const FSlice&, const FSlice&) = default;
};

}  // namespace sha3fd
