#include "sha3fd/fault_detect.hpp"

#include "sha3fd/fault_inject.hpp"
#include "sha3fd/keccak.hpp"

namespace sha3fd {

std::string_view to_string(FdScheme s) {
  switch (s) {
    case FdScheme::none: return "none";
    case FdScheme::c_plane: return "c-plane";
    case FdScheme::z_sheet: return "z-sheet";
  }
  return "?";
}

std::optional<FdScheme> parse_fd_scheme(std::string_view name) {
  if (name == "none") return FdScheme::none;
  if (name == "c-plane") return FdScheme::c_plane;
  if (name == "z-sheet") return FdScheme::z_sheet;
  return std::nullopt;
}

namespace fd {

FdRegisters::FdRegisters(FdScheme scheme) : scheme_(scheme) {
  if (scheme == FdScheme::none) throw ContractViolation("FdRegisters: scheme none has no registers");
}

void FdRegisters::prime(const StateArray& committed) {
  c_prime_ = keccak::column_sums(committed);
  if (scheme_ == FdScheme::z_sheet) {
    f_prime_ = keccak::lane_sums(committed);
    cf_prime_ = f_prime_.column_sums();
  }
  primed_ = true;
}

bool FdRegisters::check(const CPlane& c, const FSlice& f) {
  if (!primed_) throw ContractViolation("FdRegisters::check before prime");
  bool mismatch = (c ^ c_prime_).any();
  if (scheme_ == FdScheme::z_sheet) {
    mismatch = mismatch || f.bits != f_prime_.bits || check_fprime();
  }
  error_ = error_ || mismatch;
  return mismatch;
}

bool FdRegisters::check_fprime() const {
  if (scheme_ != FdScheme::z_sheet) throw ContractViolation("check_fprime requires the z-sheet scheme");
  return f_prime_.column_sums() != cf_prime_;
}

void FdRegisters::reset() {
  error_ = false;
  primed_ = false;
}

void FdRegisters::flip_c_prime(unsigned bit) {
  if (bit >= kPlaneBits) throw ContractViolation("C' bit out of range");
  c_prime_.flip(bit);
}

void FdRegisters::flip_f_prime(unsigned bit) {
  if (scheme_ != FdScheme::z_sheet) throw ContractViolation("F' exists only under z-sheet");
  if (bit >= kSliceBits) throw ContractViolation("F' bit out of range");
  f_prime_.flip(bit);
}

void FdRegisters::flip_cf_prime(unsigned bit) {
  if (scheme_ != FdScheme::z_sheet) throw ContractViolation("C'_F' exists only under z-sheet");
  if (bit >= 5) throw ContractViolation("C'_F' bit out of range");
  cf_prime_ ^= static_cast<uint8_t>(1U << bit);
}

bool detectability_predicate(const FaultPattern& pattern, FdScheme scheme) {
  if (scheme == FdScheme::none) return false;
  // Syndromes: parity deltas seen by each comparator.
  CPlane col;
  FSlice lane;
  uint8_t sheet = 0;
  for (const FaultTarget& t : pattern.flips()) {
    switch (t.reg) {
      case Register::state: {
        const BitCoord b = bit_coord(t.bit);
        col.flip(b.x, b.z);
        lane.flip(b.x, b.y);
        break;
      }
      case Register::c_prime: col.flip(t.bit); break;
      case Register::f_prime:
        lane.flip(t.bit);
        sheet ^= static_cast<uint8_t>(1U << (t.bit % 5));
        break;
      case Register::cf_prime: sheet ^= static_cast<uint8_t>(1U << t.bit); break;
    }
  }
  if (col.any()) return true;
  if (scheme == FdScheme::z_sheet) return lane.bits != 0 || sheet != 0;
  return false;
}

}  // namespace fd
}  // namespace sha3fd
