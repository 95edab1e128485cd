#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sha3fd/fault_detect.hpp"
#include "sha3fd/state.hpp"

namespace sha3fd {

enum class Mode { sha3_224, sha3_256, sha3_384, sha3_512, shake128, shake256 };
enum class PadDomain { sha3, shake };

inline constexpr std::array<Mode, 6> kAllModes = {Mode::sha3_224, Mode::sha3_256, Mode::sha3_384,
                                                  Mode::sha3_512, Mode::shake128, Mode::shake256};

std::string_view to_string(Mode m);
std::optional<Mode> parse_mode(std::string_view name);

/// Shift-register rate r_sr: the SHAKE128 rate, the largest of all modes.
inline constexpr unsigned kShiftRateBits = 1344;
inline constexpr unsigned kShiftRateBytes = kShiftRateBits / 8;
inline constexpr unsigned kShiftRateLanes = kShiftRateBits / kLaneBits;

struct ModeConfig {
  Mode mode;
  unsigned rate_bits;
  unsigned capacity_bits;
  /// Default output length; 0 for the XOFs.
  unsigned digest_bits;
  PadDomain domain;

  unsigned rate_bytes() const { return rate_bits / 8; }
  bool is_xof() const { return domain == PadDomain::shake; }
};

ModeConfig mode_params(Mode m);

/// Padding string P of Algorithm pad10*1 with the domain prefix, as bits in
/// transmission order.
std::vector<bool> pad(unsigned rate_bits, uint64_t message_bits, PadDomain domain);

enum class PadPosition { first, middle, last, first_and_last };

/// Output of the padding multiplexer for one byte of the padding string.
uint8_t select_pad_byte(PadPosition position, PadDomain domain);

inline constexpr std::array<unsigned, 7> kUnrollFactors = {1, 2, 4, 6, 8, 12, 24};
bool valid_unroll(unsigned unroll);

enum class Phase { absorbing, padding, permuting, squeezing };

struct EngineState {
  StateArray state;
  unsigned ratecount = 0;
  Phase phase = Phase::absorbing;
  unsigned round_idx = 0;
  uint64_t cycles = 0;
  bool masked = false;
};

struct EngineOptions {
  unsigned unroll = 1;
  FdScheme fd = FdScheme::none;
};

struct OutputByte {
  uint8_t value = 0;  // after masking
  uint8_t raw = 0;    // S[7:0] before masking
  bool error = false;
};

/// Register-level model of the unified SHA-3/SHAKE engine.
///
/// Only S[1343:0] is wired as a byte shift register: each absorbed byte is
/// XORed into the least significant state byte and re-enters at the top of
/// the rate, so after 168 shifts every byte is back in place. Modes with a
/// smaller rate complete the rotation with zero bytes before permuting.
///
/// The permutation commits the state register every `unroll` rounds. With
/// an FD unit attached, each commit primes the shadow registers and the next
/// commit group's first-round theta taps are checked against them; the last
/// commit of a permutation is checked from the stored register before the
/// engine returns to shifting. Shifting itself suspends the unit.
class SpongeEngine {
 public:
  /// Called after each register commit (after priming), with the commit's
  /// running index since construction.
  using CommitHook = std::function<void(SpongeEngine&, uint64_t)>;

  explicit SpongeEngine(Mode mode, EngineOptions opts = {});

  const ModeConfig& config() const { return config_; }
  unsigned unroll() const { return unroll_; }
  const EngineState& state() const { return st_; }
  uint64_t commits() const { return commits_; }

  // Datapath operations.
  void absorb_byte(uint8_t m);
  void absorb_zero_fill();
  void run_permutation();
  OutputByte squeeze_byte();

  // Permutation broken into its register commits.
  void begin_permutation();
  /// Runs one commit group; returns false once all 24 rounds are done.
  bool commit_step();
  void end_permutation();

  // Message-level driver.
  void update(std::span<const uint8_t> message);
  void finalize();
  /// Returns false if the output was masked.
  bool squeeze(std::span<uint8_t> out);

  /// S[7:0] as seen by the output port before masking.
  uint8_t peek_output() const { return st_.state.byte(0); }

  void set_commit_hook(CommitHook hook) { hook_ = std::move(hook); }

  // Fault-injection and FD access.
  StateArray& state_register() { return st_.state; }
  fd::FdRegisters* fd() { return fd_ ? &*fd_ : nullptr; }
  const fd::FdRegisters* fd() const { return fd_ ? &*fd_ : nullptr; }

  /// Latches the FD error into the output mask.
  void mask_output();

 private:
  void shift_in(uint8_t m);
  void block_boundary();

  ModeConfig config_;
  unsigned unroll_;
  EngineState st_;
  std::optional<fd::FdRegisters> fd_;
  Phase resume_phase_ = Phase::absorbing;
  uint64_t commits_ = 0;
  CommitHook hook_;
};

/// One-shot hash. For SHA-3 modes out_len_bytes must equal the digest
/// length (0 selects it); SHAKE accepts any positive length.
std::vector<uint8_t> hash(Mode mode, std::span<const uint8_t> message, size_t out_len_bytes = 0,
                          EngineOptions opts = {});

/// Long-message throughput of the round-based engine in Mbps: every block
/// costs r_sr/8 shift cycles plus 24 round cycles.
double throughput_model(Mode mode, double freq_mhz);

}  // namespace sha3fd
