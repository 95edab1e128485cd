#include "sha3fd/kat.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "sha3fd/hex.hpp"

namespace sha3fd {

std::string to_hex(std::span<const uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  s.reserve(bytes.size() * 2);
  for (uint8_t b : bytes) {
    s.push_back(kDigits[b >> 4]);
    s.push_back(kDigits[b & 0xF]);
  }
  return s;
}

std::vector<uint8_t> from_hex(std::string_view hex) {
  if (hex.size() % 2) throw std::invalid_argument("hex string has odd length");
  auto nibble = [](char c) -> uint8_t {
    if (c >= '0' && c <= '9') return static_cast<uint8_t>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<uint8_t>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return static_cast<uint8_t>(c - 'A' + 10);
    throw std::invalid_argument("invalid hex digit");
  };
  std::vector<uint8_t> out(hex.size() / 2);
  for (size_t i = 0; i < out.size(); ++i) out[i] = static_cast<uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
  return out;
}

namespace kat {
namespace {

std::string trim(std::string s) {
  auto ws = [](unsigned char c) { return std::isspace(c); };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
  return s;
}

std::string upper_alnum(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c))) out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace

std::optional<Mode> mode_from_name(const std::string& name) {
  const std::string u = upper_alnum(name);
  static const std::pair<const char*, Mode> kTags[] = {
      {"SHA3224", Mode::sha3_224}, {"SHA3256", Mode::sha3_256}, {"SHA3384", Mode::sha3_384},
      {"SHA3512", Mode::sha3_512}, {"SHAKE128", Mode::shake128}, {"SHAKE256", Mode::shake256},
  };
  for (const auto& [tag, mode] : kTags) {
    if (u.find(tag) != std::string::npos) return mode;
  }
  return std::nullopt;
}

ParseResult parse(std::istream& in) {
  ParseResult result;
  uint64_t len_bits = 0, outlen_bits = 0;
  bool have_len = false, have_outlen = false;
  std::string msg;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (!result.header_mode) result.header_mode = mode_from_name(line);
      continue;
    }
    if (line[0] == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "Len") {
      len_bits = std::stoull(value);
      have_len = true;
    } else if (key == "Outputlen") {
      outlen_bits = std::stoull(value);
      have_outlen = true;
    } else if (key == "Msg") {
      msg = value;
    } else if (key == "MD" || key == "Output") {
      KatRecord r;
      r.msg_len_bits = have_len ? len_bits : msg.size() * 4;
      // Zero-length messages are written as "Msg = 00".
      const size_t msg_chars = r.byte_aligned() ? static_cast<size_t>(r.msg_len_bits / 4)
                                                : static_cast<size_t>((r.msg_len_bits + 7) / 8 * 2);
      r.msg_hex = msg.substr(0, std::min(msg.size(), msg_chars));
      r.expected_digest_hex = value;
      r.out_len = have_outlen ? static_cast<size_t>(outlen_bits / 8) : value.size() / 2;
      r.mode = result.header_mode;
      r.line = lineno;
      result.records.push_back(std::move(r));
      have_len = false;
      have_outlen = false;
      msg.clear();
    }
  }
  return result;
}

Summary verify(const std::vector<KatRecord>& records, Mode mode, EngineOptions opts) {
  Summary s;
  const ModeConfig cfg = mode_params(mode);
  for (const KatRecord& r : records) {
    if (!r.byte_aligned()) {
      ++s.skipped;
      continue;
    }
    const std::vector<uint8_t> msg = from_hex(r.msg_hex);
    const std::vector<uint8_t> expected = from_hex(r.expected_digest_hex);
    const size_t out_len = cfg.is_xof() ? expected.size() : 0;
    std::vector<uint8_t> digest;
    if (!cfg.is_xof() && expected.size() != cfg.digest_bits / 8) {
      s.failures.push_back({r, "(digest length does not match mode)"});
      continue;
    }
    digest = hash(mode, msg, out_len, opts);
    if (digest == expected) {
      ++s.passed;
    } else {
      s.failures.push_back({r, to_hex(digest)});
    }
  }
  return s;
}

}  // namespace kat
}  // namespace sha3fd
