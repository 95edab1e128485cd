#include "sha3fd/sponge.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <stdexcept>

#include "sha3fd/keccak.hpp"

namespace sha3fd {

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::sha3_224: return "sha3-224";
    case Mode::sha3_256: return "sha3-256";
    case Mode::sha3_384: return "sha3-384";
    case Mode::sha3_512: return "sha3-512";
    case Mode::shake128: return "shake128";
    case Mode::shake256: return "shake256";
  }
  return "?";
}

std::optional<Mode> parse_mode(std::string_view name) {
  for (Mode m : kAllModes) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

ModeConfig mode_params(Mode m) {
  switch (m) {
    case Mode::sha3_224: return {m, 1152, 448, 224, PadDomain::sha3};
    case Mode::sha3_256: return {m, 1088, 512, 256, PadDomain::sha3};
    case Mode::sha3_384: return {m, 832, 768, 384, PadDomain::sha3};
    case Mode::sha3_512: return {m, 576, 1024, 512, PadDomain::sha3};
    case Mode::shake128: return {m, 1344, 256, 0, PadDomain::shake};
    case Mode::shake256: return {m, 1088, 512, 0, PadDomain::shake};
  }
  throw std::invalid_argument("mode_params: unknown mode");
}

std::vector<bool> pad(unsigned rate_bits, uint64_t message_bits, PadDomain domain) {
  if (rate_bits == 0 || rate_bits % 8 != 0) throw ContractViolation("pad: rate must be a positive multiple of 8");
  if (message_bits % 8 != 0) throw ContractViolation("pad: message length must be byte aligned");
  const uint64_t r = rate_bits;
  const uint64_t prefix = domain == PadDomain::sha3 ? 2 : 4;
  // j = (-m - prefix - 2) mod r
  const uint64_t j = (r - (message_bits + prefix + 2) % r) % r;
  std::vector<bool> p;
  p.reserve(prefix + 2 + j);
  if (domain == PadDomain::sha3) {
    p.insert(p.end(), {false, true});
  } else {
    p.insert(p.end(), {true, true, true, true});
  }
  p.push_back(true);
  p.insert(p.end(), j, false);
  p.push_back(true);
  return p;
}

uint8_t select_pad_byte(PadPosition position, PadDomain domain) {
  const uint8_t first = domain == PadDomain::sha3 ? 0x06 : 0x1F;
  switch (position) {
    case PadPosition::first: return first;
    case PadPosition::middle: return 0x00;
    case PadPosition::last: return 0x80;
    case PadPosition::first_and_last: return static_cast<uint8_t>(first | 0x80);
  }
  return 0;
}

bool valid_unroll(unsigned unroll) {
  return std::find(kUnrollFactors.begin(), kUnrollFactors.end(), unroll) != kUnrollFactors.end();
}

SpongeEngine::SpongeEngine(Mode mode, EngineOptions opts) : config_(mode_params(mode)), unroll_(opts.unroll) {
  if (!valid_unroll(unroll_)) throw ContractViolation("unsupported unroll factor");
  if (opts.fd != FdScheme::none) fd_.emplace(opts.fd);
}

void SpongeEngine::shift_in(uint8_t m) {
  // S'[1343:0] = (m ^ S[7:0]) || (S[1343:0] >> 8)
  auto& l = st_.state.lanes;
  const uint8_t top = static_cast<uint8_t>(m ^ static_cast<uint8_t>(l[0]));
  if constexpr (std::endian::native == std::endian::little) {
    auto* bytes = reinterpret_cast<unsigned char*>(l.data());
    std::memmove(bytes, bytes + 1, kShiftRateBytes - 1);
    bytes[kShiftRateBytes - 1] = top;
  } else {
    for (unsigned i = 0; i + 1 < kShiftRateLanes; ++i) l[i] = (l[i] >> 8) | (l[i + 1] << 56);
    l[kShiftRateLanes - 1] = (l[kShiftRateLanes - 1] >> 8) | (uint64_t{top} << 56);
  }
  ++st_.cycles;
}

void SpongeEngine::absorb_byte(uint8_t m) {
  if (st_.phase != Phase::absorbing && st_.phase != Phase::padding)
    throw ContractViolation("absorb_byte outside the absorbing/padding phase");
  if (st_.ratecount >= config_.rate_bytes()) throw ContractViolation("absorb_byte past a full block");
  shift_in(m);
  ++st_.ratecount;
}

void SpongeEngine::absorb_zero_fill() {
  if (st_.phase == Phase::permuting) throw ContractViolation("absorb_zero_fill during permutation");
  if (st_.ratecount != config_.rate_bytes()) throw ContractViolation("absorb_zero_fill before the mode block is complete");
  while (st_.ratecount < kShiftRateBytes) {
    shift_in(0);
    ++st_.ratecount;
  }
}

void SpongeEngine::begin_permutation() {
  if (st_.phase == Phase::permuting) throw ContractViolation("permutation already running");
  if (st_.ratecount != kShiftRateBytes) throw ContractViolation("permutation before the shift register rotated fully");
  resume_phase_ = st_.phase == Phase::absorbing ? Phase::absorbing : Phase::squeezing;
  st_.phase = Phase::permuting;
  st_.round_idx = 0;
}

bool SpongeEngine::commit_step() {
  if (st_.phase != Phase::permuting) throw ContractViolation("commit_step outside a permutation");
  const unsigned first = st_.round_idx;
  StateArray s = st_.state;
  for (unsigned r = first; r < first + unroll_; ++r) {
    auto res = keccak::round(s, r);
    if (r == first && fd_ && fd_->primed()) fd_->check(res.c, res.f);
    s = res.next;
  }
  st_.state = s;
  st_.round_idx = first + unroll_;
  ++st_.cycles;
  if (fd_) fd_->prime(st_.state);
  mask_output();
  const uint64_t idx = commits_++;
  if (hook_) hook_(*this, idx);
  return st_.round_idx < keccak::kRounds;
}

void SpongeEngine::end_permutation() {
  if (st_.phase != Phase::permuting || st_.round_idx != keccak::kRounds)
    throw ContractViolation("end_permutation before the last commit");
  if (fd_ && fd_->primed()) {
    fd_->check(keccak::column_sums(st_.state), keccak::lane_sums(st_.state));
    fd_->suspend();
  }
  mask_output();
  st_.phase = resume_phase_;
  st_.round_idx = 0;
  st_.ratecount = 0;
}

void SpongeEngine::run_permutation() {
  begin_permutation();
  while (commit_step()) {
  }
  end_permutation();
}

void SpongeEngine::block_boundary() {
  absorb_zero_fill();
  run_permutation();
}

void SpongeEngine::mask_output() {
  if (fd_ && fd_->error()) st_.masked = true;
}

OutputByte SpongeEngine::squeeze_byte() {
  if (st_.phase != Phase::squeezing) throw ContractViolation("squeeze_byte outside the squeezing phase");
  if (st_.ratecount == config_.rate_bytes()) block_boundary();
  const uint8_t h = peek_output();
  shift_in(0);
  ++st_.ratecount;
  if (st_.masked) return {0x00, h, true};
  return {h, h, false};
}

void SpongeEngine::update(std::span<const uint8_t> message) {
  if (st_.phase != Phase::absorbing) throw ContractViolation("update after finalize");
  for (uint8_t m : message) {
    if (st_.ratecount == config_.rate_bytes()) block_boundary();
    absorb_byte(m);
  }
}

void SpongeEngine::finalize() {
  if (st_.phase != Phase::absorbing) throw ContractViolation("finalize called twice");
  if (st_.ratecount == config_.rate_bytes()) block_boundary();
  st_.phase = Phase::padding;
  const unsigned remaining = config_.rate_bytes() - st_.ratecount;
  if (remaining == 1) {
    absorb_byte(select_pad_byte(PadPosition::first_and_last, config_.domain));
  } else {
    absorb_byte(select_pad_byte(PadPosition::first, config_.domain));
    for (unsigned i = 1; i + 1 < remaining; ++i) absorb_byte(select_pad_byte(PadPosition::middle, config_.domain));
    absorb_byte(select_pad_byte(PadPosition::last, config_.domain));
  }
  block_boundary();
}

bool SpongeEngine::squeeze(std::span<uint8_t> out) {
  bool ok = true;
  for (uint8_t& b : out) {
    const OutputByte o = squeeze_byte();
    b = o.value;
    ok = ok && !o.error;
  }
  return ok;
}

std::vector<uint8_t> hash(Mode mode, std::span<const uint8_t> message, size_t out_len_bytes, EngineOptions opts) {
  const ModeConfig cfg = mode_params(mode);
  if (cfg.is_xof()) {
    if (out_len_bytes == 0) throw std::invalid_argument("SHAKE output length must be positive");
  } else if (out_len_bytes == 0) {
    out_len_bytes = cfg.digest_bits / 8;
  } else if (out_len_bytes != cfg.digest_bits / 8) {
    throw std::invalid_argument("SHA-3 output length must equal the digest length");
  }
  SpongeEngine engine(mode, opts);
  engine.update(message);
  engine.finalize();
  std::vector<uint8_t> out(out_len_bytes);
  engine.squeeze(out);
  return out;
}

double throughput_model(Mode mode, double freq_mhz) {
  if (!(freq_mhz > 0)) throw std::invalid_argument("frequency must be positive");
  constexpr double kCyclesPerBlock = kShiftRateBytes + 24;
  return mode_params(mode).rate_bits / kCyclesPerBlock * freq_mhz;
}

}  // namespace sha3fd
