#include "sha3fd/keccak.hpp"

#include <bit>

namespace sha3fd {

std::array<uint8_t, kStateBytes> StateArray::to_bytes() const {
  std::array<uint8_t, kStateBytes> out{};
  for (unsigned i = 0; i < kStateBytes; ++i) out[i] = byte(i);
  return out;
}

StateArray StateArray::from_bytes(std::span<const uint8_t, kStateBytes> bytes) {
  StateArray s;
  for (unsigned i = 0; i < kStateBytes; ++i) s.lanes[i / 8] |= uint64_t{bytes[i]} << (8 * (i % 8));
  return s;
}

namespace keccak {
namespace {

// rc(t) from FIPS 202 Algorithm 5: LFSR with feedback polynomial x^8 + x^6 + x^5 + x^4 + 1.
constexpr bool rc_bit(unsigned t) {
  if (t % 255 == 0) return true;
  unsigned r = 0x01;
  for (unsigned i = 1; i <= t % 255; ++i) {
    r <<= 1;
    if (r & 0x100) r ^= 0x171;
  }
  return r & 1U;
}

constexpr std::array<uint64_t, kRounds> make_round_constants() {
  std::array<uint64_t, kRounds> rc{};
  for (unsigned i = 0; i < kRounds; ++i) {
    for (unsigned j = 0; j <= 6; ++j) {
      if (rc_bit(j + 7 * i)) rc[i] |= uint64_t{1} << ((1U << j) - 1);
    }
  }
  return rc;
}

constexpr auto kRoundConstants = make_round_constants();

// Offsets by lane index 5y+x.
constexpr std::array<unsigned, 25> kRho = {
    0,  1,  62, 28, 27,  //
    36, 44, 6,  55, 20,  //
    3,  10, 43, 25, 39,  //
    41, 45, 15, 21, 8,   //
    18, 2,  61, 56, 14,
};

constexpr unsigned kPrev[5] = {4, 0, 1, 2, 3};
constexpr unsigned kNext[5] = {1, 2, 3, 4, 0};

// Destination lane of pi for each source lane 5y+x.
constexpr std::array<unsigned, 25> make_pi_dest() {
  std::array<unsigned, 25> d{};
  for (unsigned y = 0; y < 5; ++y)
    for (unsigned x = 0; x < 5; ++x) d[lane_index(x, y)] = lane_index(y, (2 * x + 3 * y) % 5);
  return d;
}

constexpr auto kPiDest = make_pi_dest();

}  // namespace

const std::array<uint64_t, kRounds>& round_constants() { return kRoundConstants; }
const std::array<unsigned, 25>& rho_offsets() { return kRho; }

CPlane column_sums(const StateArray& s) {
  CPlane c;
  for (unsigned x = 0; x < 5; ++x)
    c.cols[x] = s.lane(x, 0) ^ s.lane(x, 1) ^ s.lane(x, 2) ^ s.lane(x, 3) ^ s.lane(x, 4);
  return c;
}

#if defined(__GNUC__) && defined(__x86_64__)
#define SHA3FD_POPCNT_CLONES __attribute__((target_clones("popcnt", "default")))
#else
#define SHA3FD_POPCNT_CLONES
#endif

SHA3FD_POPCNT_CLONES FSlice lane_sums(const StateArray& s) {
  FSlice f;
  for (unsigned i = 0; i < 25; ++i) f.bits |= static_cast<uint32_t>(std::popcount(s.lanes[i]) & 1) << i;
  return f;
}

ThetaResult theta_layer(const StateArray& s) {
  ThetaResult r{s, column_sums(s), lane_sums(s)};
  for (unsigned x = 0; x < 5; ++x) {
    // D[x,z] = C[x-1,z] ^ C[x+1,z-1]
    const uint64_t d = r.c.cols[(x + 4) % 5] ^ std::rotl(r.c.cols[(x + 1) % 5], 1);
    for (unsigned y = 0; y < 5; ++y) r.out.lane(x, y) ^= d;
  }
  return r;
}

StateArray rho_pi(const StateArray& s) {
  StateArray out;
  for (unsigned y = 0; y < 5; ++y) {
    for (unsigned x = 0; x < 5; ++x) {
      // pi moves lane (x,y) to (y, 2x+3y).
      out.lane(y, (2 * x + 3 * y) % 5) = std::rotl(s.lane(x, y), static_cast<int>(kRho[lane_index(x, y)]));
    }
  }
  return out;
}

StateArray chi(const StateArray& s) {
  StateArray out;
  for (unsigned y = 0; y < 5; ++y) {
    for (unsigned x = 0; x < 5; ++x) {
      out.lane(x, y) = s.lane(x, y) ^ (~s.lane((x + 1) % 5, y) & s.lane((x + 2) % 5, y));
    }
  }
  return out;
}

StateArray iota(const StateArray& s, unsigned round) {
  if (round >= kRounds) throw ContractViolation("iota: round index out of range");
  StateArray out = s;
  out.lanes[0] ^= kRoundConstants[round];
  return out;
}

SHA3FD_POPCNT_CLONES RoundResult round(const StateArray& s, unsigned round) {
  if (round >= kRounds) throw ContractViolation("round: round index out of range");
  // Same composition as iota(chi(rho_pi(theta_layer(s).out))), fused.
  RoundResult r{{}, column_sums(s), lane_sums(s)};
  uint64_t d[5];
  for (unsigned x = 0; x < 5; ++x) d[x] = r.c.cols[kPrev[x]] ^ std::rotl(r.c.cols[kNext[x]], 1);
  uint64_t b[25];
#pragma GCC unroll 25
  for (unsigned i = 0; i < 25; ++i) b[kPiDest[i]] = std::rotl(s.lanes[i] ^ d[i % 5], static_cast<int>(kRho[i]));
#pragma GCC unroll 5
  for (unsigned y = 0; y < 25; y += 5) {
#pragma GCC unroll 5
    for (unsigned x = 0; x < 5; ++x) r.next.lanes[y + x] = b[y + x] ^ (~b[y + kNext[x]] & b[y + kNext[kNext[x]]]);
  }
  r.next.lanes[0] ^= kRoundConstants[round];
  return r;
}

StateArray permute(StateArray s) {
  for (unsigned i = 0; i < kRounds; ++i) s = round(s, i).next;
  return s;
}

}  // namespace keccak
}  // namespace sha3fd
