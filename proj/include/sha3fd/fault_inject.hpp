#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sha3fd/fault_detect.hpp"
#include "sha3fd/sponge.hpp"

namespace sha3fd {

enum class Register : uint8_t { state, c_prime, f_prime, cf_prime };

std::string_view to_string(Register r);
unsigned register_width(Register r);

struct FaultTarget {
  Register reg = Register::state;
  uint16_t bit = 0;

  friend auto operator<=>(const FaultTarget&, const FaultTarget&) = default;
};

/// A set of distinct register bits flipped together. Kept sorted.
class FaultPattern {
 public:
  FaultPattern() = default;
  explicit FaultPattern(std::vector<FaultTarget> flips);
  static FaultPattern state_bits(std::span<const unsigned> bits);

  const std::vector<FaultTarget>& flips() const { return flips_; }
  size_t k() const { return flips_.size(); }
  bool empty() const { return flips_.empty(); }
  bool state_only() const;

  friend bool operator==(const FaultPattern&, const FaultPattern&) = default;

 private:
  std::vector<FaultTarget> flips_;
};

std::string describe(const FaultPattern& p);

/// Flips the pattern's bits in the engine's state and shadow registers.
void apply(const FaultPattern& p, SpongeEngine& engine);

struct InjectionSchedule {
  /// Register commit after which the flips land (post-prime, pre-check),
  /// counted from the first commit of the run.
  uint64_t commit_index = 0;
};

/// What the faulty run is hashing.
struct RunSetup {
  Mode mode = Mode::sha3_256;
  EngineOptions engine;
  std::vector<uint8_t> message;
  size_t out_len = 0;  // 0: mode default (SHA-3) / rate bytes (SHAKE)
};

enum class Outcome { detected, silent_corruption, benign, spurious_error };
std::string_view to_string(Outcome o);

struct RunResult {
  Outcome outcome = Outcome::benign;
  bool error = false;
  std::vector<uint8_t> emitted;  // what left the output port (zeros if masked)
  std::vector<uint8_t> raw;      // S[7:0] stream before masking
};

/// Hashes setup.message with the FD unit attached and injects at the
/// scheduled commit. Holds the golden digest so repeated runs stay cheap.
class FaultRunner {
 public:
  explicit FaultRunner(RunSetup setup);

  const RunSetup& setup() const { return setup_; }
  const std::vector<uint8_t>& golden() const { return golden_; }
  uint64_t total_commits() const { return total_commits_; }
  /// Commits belonging to permutations other than the last one.
  uint64_t commits_before_final_permutation() const { return total_commits_ - 24 / setup_.engine.unroll; }

  RunResult run(const FaultPattern& pattern, const InjectionSchedule& schedule) const;
  Outcome classify(const FaultPattern& pattern, const InjectionSchedule& schedule) const {
    return run(pattern, schedule).outcome;
  }

 private:
  RunSetup setup_;
  std::vector<uint8_t> golden_;
  uint64_t total_commits_ = 0;
};

RunResult inject_and_run(const RunSetup& setup, const FaultPattern& pattern, const InjectionSchedule& schedule);

enum class Strategy { exhaustive_sheet, exhaustive_global, random };
std::string_view to_string(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view name);

enum class FaultScope { state_register, all_registers };
std::string_view to_string(FaultScope s);

/// Raised when an enumeration would exceed the configured pattern budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CampaignSpec {
  FdScheme scheme = FdScheme::z_sheet;
  unsigned unroll = 1;
  unsigned k = 1;
  Strategy strategy = Strategy::random;
  uint64_t trials = 0;
  uint64_t seed = 0;
  FaultScope scope = FaultScope::state_register;
  /// Sheet x enumerated by exhaustive-sheet.
  unsigned sheet = 0;
  Mode mode = Mode::sha3_256;
  /// Message bytes (random from seed); default is one full mode block, so
  /// the run has two permutations.
  std::optional<size_t> message_len;
  /// Fixed injection commit; default is commit 0 for exhaustive strategies
  /// and uniform over the non-final permutation for random.
  std::optional<uint64_t> commit;
  uint64_t pattern_budget = 20'000'000;
  /// Permits exhaustive-global enumeration at k = 3 (audit runs).
  bool allow_global_k3 = false;
  /// 0 = SHA3FD_WORKERS or hardware concurrency.
  unsigned workers = 0;
};

/// Throws std::invalid_argument for malformed specs.
void validate(const CampaignSpec& spec);

struct CampaignReport {
  FdScheme scheme = FdScheme::z_sheet;
  unsigned unroll = 1;
  unsigned k = 0;
  Strategy strategy = Strategy::random;
  FaultScope scope = FaultScope::state_register;
  uint64_t seed = 0;
  uint64_t total = 0;
  uint64_t detected = 0;
  uint64_t undetected = 0;
  uint64_t silent = 0;  // undetected with a wrong digest
  uint64_t benign = 0;  // undetected with the golden digest
  uint64_t spurious = 0;
  double rate = 0;
  double ci_low = 0;
  double ci_high = 0;
  std::vector<FaultPattern> witnesses;  // up to 16 undetected patterns
  // Exact analytic reference for state-register scopes (census).
  std::optional<uint64_t> census_undetected;
  std::optional<double> census_fraction;
  std::chrono::duration<double> wall_time{0};
};

inline constexpr size_t kMaxWitnesses = 16;

CampaignReport run_campaign(const CampaignSpec& spec);

/// Flat JSON record; wall time is left out so reruns are byte-identical.
std::string to_json(const CampaignReport& r);

struct Interval {
  double low = 0, high = 0;
};
/// Wilson score interval at 95 % confidence.
Interval wilson_interval(uint64_t successes, uint64_t n, double z = 1.959963984540054);

struct CensusResult {
  unsigned k = 0;
  FdScheme scheme = FdScheme::z_sheet;
  uint64_t undetected = 0;
  long double total = 0;  // C(1600, k)
  long double fraction = 0;
  std::vector<FaultPattern> witnesses;
};

inline constexpr unsigned kCensusMaxK = 8;

/// Exact count of undetected k-bit state-register patterns.
CensusResult undetected_census(unsigned k, FdScheme scheme);

/// Undetected counts by weight w = 0..max_k within one sheet (z-sheet) or
/// one column (c-plane).
std::vector<uint64_t> per_unit_undetected(FdScheme scheme, unsigned max_k);

struct MonteCarloResult {
  uint64_t trials = 0;
  uint64_t detected = 0;
  double rate = 0;
  Interval ci;
  std::optional<long double> census_fraction;
};

/// Random-strategy campaign over state-register patterns, reduced to the rate.
MonteCarloResult monte_carlo_rate(unsigned k, uint64_t trials, uint64_t seed, FdScheme scheme = FdScheme::z_sheet,
                                  unsigned unroll = 1);

long double binomial(unsigned n, unsigned k);

unsigned default_workers();

}  // namespace sha3fd
