#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "sha3fd/sponge.hpp"

namespace sha3fd::kat {

/// One known-answer record from a response file.
struct KatRecord {
  uint64_t msg_len_bits = 0;
  std::string msg_hex;
  std::string expected_digest_hex;
  std::optional<Mode> mode;
  /// Output length in bytes (the expected digest's length).
  size_t out_len = 0;
  /// 1-based line of the digest entry.
  size_t line = 0;

  bool byte_aligned() const { return msg_len_bits % 8 == 0; }
};

struct ParseResult {
  std::vector<KatRecord> records;
  /// Mode named by the file header or section brackets, if any.
  std::optional<Mode> header_mode;
};

/// Reads `Len = n` / `Msg = hex` / `MD = hex` records and the XOF variant
/// with `Outputlen = n` / `Output = hex`. Comments (#) and `[...]` section
/// headers are skipped. A record is emitted at each MD/Output line.
ParseResult parse(std::istream& in);

/// Guesses the mode from a fixture file name (e.g. "SHA3_256ShortMsg.rsp",
/// "ShortMsgKAT_SHAKE128.txt").
std::optional<Mode> mode_from_name(const std::string& name);

struct Mismatch {
  KatRecord record;
  std::string actual_hex;
};

struct Summary {
  size_t passed = 0;
  size_t skipped = 0;  // non-byte-aligned lengths
  std::vector<Mismatch> failures;
};

Summary verify(const std::vector<KatRecord>& records, Mode mode, EngineOptions opts = {});

}  // namespace sha3fd::kat
