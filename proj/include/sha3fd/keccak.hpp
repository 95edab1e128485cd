#pragma once

#include <array>
#include <cstdint>

#include "sha3fd/state.hpp"

namespace sha3fd::keccak {

inline constexpr unsigned kRounds = 24;

/// Round constants derived from the FIPS 202 rc(t) LFSR.
const std::array<uint64_t, kRounds>& round_constants();

/// Per-lane rotation offsets for rho, indexed by lane 5y+x.
const std::array<unsigned, 25>& rho_offsets();

CPlane column_sums(const StateArray& s);
FSlice lane_sums(const StateArray& s);

struct ThetaResult {
  StateArray out;
  CPlane c;  // column sums of the input
  FSlice f;  // lane sums of the input
};

/// theta with the c-plane tap exposed and the f-slice extension. Both taps
/// are parities of the input state, i.e. of the stored register contents.
ThetaResult theta_layer(const StateArray& s);

StateArray rho_pi(const StateArray& s);
StateArray chi(const StateArray& s);
StateArray iota(const StateArray& s, unsigned round);

struct RoundResult {
  StateArray next;
  CPlane c;
  FSlice f;
};

RoundResult round(const StateArray& s, unsigned round);

StateArray permute(StateArray s);

}  // namespace sha3fd::keccak
