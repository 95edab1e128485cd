#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "sha3fd/state.hpp"

namespace sha3fd {

enum class FdScheme { none, c_plane, z_sheet };

std::string_view to_string(FdScheme s);
std::optional<FdScheme> parse_fd_scheme(std::string_view name);

class FaultPattern;

namespace fd {

/// Shadow parity state of the detection unit.
///
/// prime() stores the parities of the value being committed to the state
/// register; check() compares them against the theta taps computed from the
/// register on the following cycle. Under c-plane only C' exists; z-sheet adds
/// the lane sums F' and the per-sheet sums of F' (C'_F').
class FdRegisters {
 public:
  explicit FdRegisters(FdScheme scheme);

  FdScheme scheme() const { return scheme_; }
  bool primed() const { return primed_; }
  bool error() const { return error_; }

  void prime(const StateArray& committed);

  /// Returns the comparison result of this check alone; error() accumulates.
  bool check(const CPlane& c, const FSlice& f);

  /// Parity check of F' against C'_F'. z-sheet only.
  bool check_fprime() const;

  /// Clears the sticky error and the primed flag.
  void reset();
  /// Stops checking until the next prime (shadows are stale).
  void suspend() { primed_ = false; }

  const CPlane& c_prime() const { return c_prime_; }
  const FSlice& f_prime() const { return f_prime_; }
  uint8_t cf_prime() const { return cf_prime_; }

  // Fault-injection access to the shadow registers.
  void flip_c_prime(unsigned bit);
  void flip_f_prime(unsigned bit);
  void flip_cf_prime(unsigned bit);

 private:
  FdScheme scheme_;
  CPlane c_prime_;
  FSlice f_prime_;
  uint8_t cf_prime_ = 0;
  bool primed_ = false;
  bool error_ = false;
};

/// Closed-form detectability of a flip pattern injected between a prime and
/// the following check. A pattern escapes iff every comparison still matches:
/// each column parity of the state flips equals the C' flip at that column,
/// and under z-sheet each lane parity equals the F' flip at that lane and
/// each sheet's F' flip parity equals the C'_F' flip. For state-only
/// patterns this reduces to "all column (and lane) counts even".
bool detectability_predicate(const FaultPattern& pattern, FdScheme scheme);

}  // namespace fd
}  // namespace sha3fd
