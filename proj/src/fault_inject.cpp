#include "sha3fd/fault_inject.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace sha3fd {

std::string_view to_string(Register r) {
  switch (r) {
    case Register::state: return "S";
    case Register::c_prime: return "C'";
    case Register::f_prime: return "F'";
    case Register::cf_prime: return "C'_F'";
  }
  return "?";
}

unsigned register_width(Register r) {
  switch (r) {
    case Register::state: return kStateBits;
    case Register::c_prime: return kPlaneBits;
    case Register::f_prime: return kSliceBits;
    case Register::cf_prime: return 5;
  }
  return 0;
}

FaultPattern::FaultPattern(std::vector<FaultTarget> flips) : flips_(std::move(flips)) {
  std::sort(flips_.begin(), flips_.end());
  if (std::adjacent_find(flips_.begin(), flips_.end()) != flips_.end())
    throw std::invalid_argument("fault pattern flips must be distinct");
  for (const FaultTarget& t : flips_) {
    if (t.bit >= register_width(t.reg)) throw std::invalid_argument("fault target bit out of range");
  }
}

FaultPattern FaultPattern::state_bits(std::span<const unsigned> bits) {
  std::vector<FaultTarget> flips;
  flips.reserve(bits.size());
  for (unsigned b : bits) flips.push_back({Register::state, static_cast<uint16_t>(b)});
  return FaultPattern(std::move(flips));
}

bool FaultPattern::state_only() const {
  return std::all_of(flips_.begin(), flips_.end(), [](const FaultTarget& t) { return t.reg == Register::state; });
}

std::string describe(const FaultPattern& p) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const FaultTarget& t : p.flips()) {
    if (!first) os << ',';
    first = false;
    if (t.reg == Register::state) {
      const BitCoord c = bit_coord(t.bit);
      os << "S(" << c.x << ',' << c.y << ',' << c.z << ')';
    } else {
      os << to_string(t.reg) << '[' << t.bit << ']';
    }
  }
  os << '}';
  return os.str();
}

void apply(const FaultPattern& p, SpongeEngine& engine) {
  for (const FaultTarget& t : p.flips()) {
    if (t.reg == Register::state) {
      engine.state_register().flip(t.bit);
      continue;
    }
    fd::FdRegisters* fd = engine.fd();
    if (!fd) throw ContractViolation("shadow-register fault on an engine without FD");
    switch (t.reg) {
      case Register::c_prime: fd->flip_c_prime(t.bit); break;
      case Register::f_prime: fd->flip_f_prime(t.bit); break;
      case Register::cf_prime: fd->flip_cf_prime(t.bit); break;
      case Register::state: break;
    }
  }
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::detected: return "detected";
    case Outcome::silent_corruption: return "silent-corruption";
    case Outcome::benign: return "benign";
    case Outcome::spurious_error: return "spurious-error";
  }
  return "?";
}

namespace {

size_t resolved_out_len(const RunSetup& s) {
  if (s.out_len != 0) return s.out_len;
  const ModeConfig cfg = mode_params(s.mode);
  return cfg.is_xof() ? cfg.rate_bytes() : cfg.digest_bits / 8;
}

}  // namespace

FaultRunner::FaultRunner(RunSetup setup) : setup_(std::move(setup)) {
  SpongeEngine engine(setup_.mode, setup_.engine);
  engine.update(setup_.message);
  engine.finalize();
  golden_.resize(resolved_out_len(setup_));
  if (!engine.squeeze(golden_)) throw std::logic_error("FD raised an error on a fault-free run");
  total_commits_ = engine.commits();
}

RunResult FaultRunner::run(const FaultPattern& pattern, const InjectionSchedule& schedule) const {
  if (schedule.commit_index >= total_commits_) throw ContractViolation("injection commit outside the run");
  SpongeEngine engine(setup_.mode, setup_.engine);
  if (!pattern.empty()) {
    engine.set_commit_hook([&](SpongeEngine& e, uint64_t idx) {
      if (idx == schedule.commit_index) apply(pattern, e);
    });
  }
  engine.update(setup_.message);
  engine.finalize();

  RunResult r;
  const size_t n = golden_.size();
  r.emitted.resize(n);
  r.raw.resize(n);
  for (size_t i = 0; i < n; ++i) {
    const OutputByte o = engine.squeeze_byte();
    r.emitted[i] = o.value;
    r.raw[i] = o.raw;
    r.error = r.error || o.error;
  }
  const bool golden = r.raw == golden_;
  if (r.error) {
    r.outcome = golden ? Outcome::spurious_error : Outcome::detected;
  } else {
    r.outcome = golden ? Outcome::benign : Outcome::silent_corruption;
  }
  return r;
}

RunResult inject_and_run(const RunSetup& setup, const FaultPattern& pattern, const InjectionSchedule& schedule) {
  return FaultRunner(setup).run(pattern, schedule);
}

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::exhaustive_sheet: return "exhaustive-sheet";
    case Strategy::exhaustive_global: return "exhaustive-global";
    case Strategy::random: return "random";
  }
  return "?";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
  for (Strategy s : {Strategy::exhaustive_sheet, Strategy::exhaustive_global, Strategy::random}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

std::string_view to_string(FaultScope s) {
  return s == FaultScope::state_register ? "state" : "all";
}

long double binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  long double r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

unsigned default_workers() {
  if (const char* env = std::getenv("SHA3FD_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

Interval wilson_interval(uint64_t successes, uint64_t n, double z) {
  if (n == 0) return {0, 1};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1 + z2 / nn;
  const double center = (p + z2 / (2 * nn)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

void validate(const CampaignSpec& spec) {
  if (spec.scheme == FdScheme::none) throw std::invalid_argument("campaign needs an FD scheme");
  if (!valid_unroll(spec.unroll)) throw std::invalid_argument("unroll must be one of 1,2,4,6,8,12,24");
  if (spec.k == 0) throw std::invalid_argument("k must be at least 1");
  if (spec.sheet >= 5) throw std::invalid_argument("sheet must be in 0..4");
  switch (spec.strategy) {
    case Strategy::exhaustive_sheet:
      if (spec.scope != FaultScope::state_register)
        throw std::invalid_argument("exhaustive-sheet enumerates state-register sheets only");
      if (spec.k > kPlaneBits) throw std::invalid_argument("k exceeds the sheet size");
      break;
    case Strategy::exhaustive_global:
      if (spec.k > 3 || (spec.k == 3 && !spec.allow_global_k3))
        throw std::invalid_argument("exhaustive-global is limited to k <= 2 (k = 3 needs the audit flag)");
      break;
    case Strategy::random:
      if (spec.trials == 0) throw std::invalid_argument("random strategy needs trials > 0");
      break;
  }
}

namespace {

std::vector<uint8_t> campaign_message(const CampaignSpec& spec) {
  const size_t len = spec.message_len.value_or(mode_params(spec.mode).rate_bytes());
  std::seed_seq seq{static_cast<uint32_t>(spec.seed), static_cast<uint32_t>(spec.seed >> 32), 0x6d657373U};
  std::mt19937_64 rng(seq);
  std::vector<uint8_t> msg(len);
  for (uint8_t& b : msg) b = static_cast<uint8_t>(rng());
  return msg;
}

std::vector<FaultTarget> eligible_targets(const CampaignSpec& spec) {
  std::vector<FaultTarget> out;
  if (spec.strategy == Strategy::exhaustive_sheet) {
    for (unsigned y = 0; y < 5; ++y)
      for (unsigned z = 0; z < kLaneBits; ++z)
        out.push_back({Register::state, static_cast<uint16_t>(bit_index(spec.sheet, y, z))});
    return out;
  }
  for (unsigned b = 0; b < kStateBits; ++b) out.push_back({Register::state, static_cast<uint16_t>(b)});
  if (spec.scope == FaultScope::all_registers) {
    for (unsigned b = 0; b < kPlaneBits; ++b) out.push_back({Register::c_prime, static_cast<uint16_t>(b)});
    if (spec.scheme == FdScheme::z_sheet) {
      for (unsigned b = 0; b < kSliceBits; ++b) out.push_back({Register::f_prime, static_cast<uint16_t>(b)});
      for (unsigned b = 0; b < 5; ++b) out.push_back({Register::cf_prime, static_cast<uint16_t>(b)});
    }
  }
  return out;
}

struct Tally {
  uint64_t total = 0, detected = 0, silent = 0, benign = 0, spurious = 0;
  std::vector<FaultPattern> witnesses;

  void add(Outcome o, const FaultPattern& p) {
    ++total;
    switch (o) {
      case Outcome::detected: ++detected; break;
      case Outcome::spurious_error: ++spurious; break;
      case Outcome::silent_corruption: ++silent; break;
      case Outcome::benign: ++benign; break;
    }
    if ((o == Outcome::silent_corruption || o == Outcome::benign) && witnesses.size() < kMaxWitnesses)
      witnesses.push_back(p);
  }

  void merge(const Tally& t) {
    total += t.total;
    detected += t.detected;
    silent += t.silent;
    benign += t.benign;
    spurious += t.spurious;
    for (const FaultPattern& w : t.witnesses) {
      if (witnesses.size() >= kMaxWitnesses) break;
      witnesses.push_back(w);
    }
  }
};

/// Runs `fn(item, tally)` for items 0..count-1 on `workers` threads and
/// merges the per-item tallies in item order.
template <class Fn>
Tally run_partitioned(uint64_t count, unsigned workers, Fn fn) {
  std::vector<Tally> parts(count);
  std::atomic<uint64_t> next{0};
  auto worker = [&] {
    for (uint64_t i = next++; i < count; i = next++) fn(i, parts[i]);
  };
  const unsigned n = static_cast<unsigned>(std::min<uint64_t>(std::max(1U, workers), std::max<uint64_t>(count, 1)));
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  Tally total;
  for (const Tally& t : parts) total.merge(t);
  return total;
}

// Enumerates all k-subsets of targets whose smallest element is `first`.
template <class Visit>
void enumerate_with_first(const std::vector<FaultTarget>& targets, unsigned k, size_t first, Visit visit) {
  const size_t n = targets.size();
  std::vector<size_t> idx(k);
  idx[0] = first;
  for (unsigned i = 1; i < k; ++i) idx[i] = first + i;
  if (k > 0 && idx[k - 1] >= n) return;
  std::vector<FaultTarget> flips(k);
  while (true) {
    for (unsigned i = 0; i < k; ++i) flips[i] = targets[idx[i]];
    visit(FaultPattern(flips));
    // advance positions 1..k-1
    int pos = static_cast<int>(k) - 1;
    while (pos >= 1 && idx[pos] == n - k + pos) --pos;
    if (pos < 1) return;
    ++idx[pos];
    for (unsigned i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
  }
}

constexpr uint64_t kTrialsPerChunk = 4096;

}  // namespace

CampaignReport run_campaign(const CampaignSpec& spec) {
  validate(spec);
  const auto start = std::chrono::steady_clock::now();

  RunSetup setup;
  setup.mode = spec.mode;
  setup.engine = {spec.unroll, spec.scheme};
  setup.message = campaign_message(spec);
  const FaultRunner runner(std::move(setup));
  if (spec.commit && *spec.commit >= runner.total_commits())
    throw std::invalid_argument("injection commit outside the run");
  const uint64_t commit_span = std::max<uint64_t>(1, runner.commits_before_final_permutation());

  const std::vector<FaultTarget> targets = eligible_targets(spec);
  const unsigned workers = spec.workers ? spec.workers : default_workers();

  Tally tally;
  if (spec.strategy == Strategy::random) {
    if (spec.trials > spec.pattern_budget) throw BudgetExceeded("trial count exceeds the pattern budget");
    if (spec.k > targets.size()) throw std::invalid_argument("k exceeds the number of eligible bits");
    const uint64_t chunks = (spec.trials + kTrialsPerChunk - 1) / kTrialsPerChunk;
    tally = run_partitioned(chunks, workers, [&](uint64_t c, Tally& t) {
      std::seed_seq seq{static_cast<uint32_t>(spec.seed), static_cast<uint32_t>(spec.seed >> 32),
                        static_cast<uint32_t>(c), static_cast<uint32_t>(c >> 32)};
      std::mt19937_64 rng(seq);
      std::uniform_int_distribution<size_t> pick(0, targets.size() - 1);
      const uint64_t end = std::min(spec.trials, (c + 1) * kTrialsPerChunk);
      std::vector<size_t> chosen;
      std::vector<FaultTarget> flips;
      for (uint64_t trial = c * kTrialsPerChunk; trial < end; ++trial) {
        chosen.clear();
        while (chosen.size() < spec.k) {
          const size_t i = pick(rng);
          if (std::find(chosen.begin(), chosen.end(), i) == chosen.end()) chosen.push_back(i);
        }
        flips.clear();
        for (size_t i : chosen) flips.push_back(targets[i]);
        const FaultPattern p(flips);
        // Exactly one draw per trial, whatever the span.
        const uint64_t draw = rng();
        const uint64_t commit =
            spec.commit ? *spec.commit : static_cast<uint64_t>((static_cast<unsigned __int128>(draw) * commit_span) >> 64);
        t.add(runner.classify(p, {commit}), p);
      }
    });
  } else {
    const long double total = binomial(static_cast<unsigned>(targets.size()), spec.k);
    if (total > static_cast<long double>(spec.pattern_budget))
      throw BudgetExceeded("enumeration of " + std::to_string(static_cast<unsigned long long>(total)) +
                           " patterns exceeds the budget of " + std::to_string(spec.pattern_budget));
    const uint64_t commit = spec.commit.value_or(0);
    const uint64_t firsts = targets.size() - spec.k + 1;
    tally = run_partitioned(firsts, workers, [&](uint64_t first, Tally& t) {
      enumerate_with_first(targets, spec.k, first,
                           [&](const FaultPattern& p) { t.add(runner.classify(p, {commit}), p); });
    });
  }

  CampaignReport r;
  r.scheme = spec.scheme;
  r.unroll = spec.unroll;
  r.k = spec.k;
  r.strategy = spec.strategy;
  r.scope = spec.scope;
  r.seed = spec.seed;
  r.total = tally.total;
  r.detected = tally.detected;
  r.silent = tally.silent;
  r.benign = tally.benign;
  r.undetected = tally.silent + tally.benign;
  r.spurious = tally.spurious;
  r.rate = r.total ? static_cast<double>(r.detected) / static_cast<double>(r.total) : 0.0;
  const Interval ci = wilson_interval(r.detected, r.total);
  r.ci_low = ci.low;
  r.ci_high = ci.high;
  r.witnesses = std::move(tally.witnesses);
  if (spec.scope == FaultScope::state_register && spec.k <= kCensusMaxK) {
    const CensusResult census = undetected_census(spec.k, spec.scheme);
    r.census_undetected = census.undetected;
    r.census_fraction = static_cast<double>(census.fraction);
  }
  r.wall_time = std::chrono::steady_clock::now() - start;
  return r;
}

std::string to_json(const CampaignReport& r) {
  nlohmann::ordered_json j;
  j["scheme"] = to_string(r.scheme);
  j["unroll"] = r.unroll;
  j["k"] = r.k;
  j["strategy"] = to_string(r.strategy);
  j["scope"] = to_string(r.scope);
  j["total"] = r.total;
  j["detected"] = r.detected;
  j["undetected"] = r.undetected;
  j["silent"] = r.silent;
  j["benign"] = r.benign;
  j["spurious"] = r.spurious;
  j["rate"] = r.rate;
  j["ci_low"] = r.ci_low;
  j["ci_high"] = r.ci_high;
  j["seed"] = r.seed;
  j["census_undetected"] = r.census_undetected ? nlohmann::ordered_json(*r.census_undetected) : nullptr;
  j["census_fraction"] = r.census_fraction ? nlohmann::ordered_json(*r.census_fraction) : nullptr;
  auto& w = j["witnesses"] = nlohmann::ordered_json::array();
  for (const FaultPattern& p : r.witnesses) {
    auto& flips = w.emplace_back(nlohmann::ordered_json::array());
    for (const FaultTarget& t : p.flips()) flips.push_back({{"reg", to_string(t.reg)}, {"bit", t.bit}});
  }
  return j.dump(2);
}

MonteCarloResult monte_carlo_rate(unsigned k, uint64_t trials, uint64_t seed, FdScheme scheme, unsigned unroll) {
  if (trials < 10'000) throw std::invalid_argument("monte_carlo_rate needs at least 10^4 trials");
  CampaignSpec spec;
  spec.scheme = scheme;
  spec.unroll = unroll;
  spec.k = k;
  spec.strategy = Strategy::random;
  spec.trials = trials;
  spec.seed = seed;
  const CampaignReport rep = run_campaign(spec);
  MonteCarloResult out;
  out.trials = rep.total;
  out.detected = rep.detected;
  out.rate = rep.rate;
  out.ci = {rep.ci_low, rep.ci_high};
  if (k <= kCensusMaxK) out.census_fraction = undetected_census(k, scheme).fraction;
  return out;
}

}  // namespace sha3fd
