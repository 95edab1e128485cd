#include "sha3fd/cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "sha3fd/fault_inject.hpp"
#include "sha3fd/hex.hpp"
#include "sha3fd/kat.hpp"
#include "sha3fd/sponge.hpp"

namespace sha3fd::cli {

const std::vector<ReferenceThroughput>& reference_throughput_table() {
  // Order: sha3-224, sha3-256, sha3-384, sha3-512, shake128, shake256.
  static const std::vector<ReferenceThroughput> kTable = {
      {"basic", 714.29, {4284.32, 4046.20, 3094.00, 2142.07, 4998.90, 4046.20}},
      {"c-plane", 666.67, {3998.67, 3776.43, 2887.72, 1999.26, 4665.61, 3776.43}},
      {"z-sheet", 588.24, {3528.24, 3332.14, 2547.99, 1764.05, 4116.71, 3332.14}},
  };
  return kTable;
}

namespace {

template <class E>
std::map<std::string, E> name_map(std::initializer_list<E> values) {
  std::map<std::string, E> m;
  for (E v : values) m.emplace(std::string(to_string(v)), v);
  return m;
}

const auto kModes = name_map<Mode>({Mode::sha3_224, Mode::sha3_256, Mode::sha3_384, Mode::sha3_512,
                                    Mode::shake128, Mode::shake256});
const auto kSchemes = name_map<FdScheme>({FdScheme::none, FdScheme::c_plane, FdScheme::z_sheet});
const auto kStrategies =
    name_map<Strategy>({Strategy::exhaustive_sheet, Strategy::exhaustive_global, Strategy::random});

// Enum-valued options are parsed as strings and mapped by name.
template <class T, class E>
CLI::Option* enum_option(CLI::App* app, const std::string& name, T& target, const std::map<std::string, E>& names,
                         const std::string& desc) {
  std::vector<std::string> keys;
  for (const auto& kv : names) keys.push_back(kv.first);
  return app
      ->add_option_function<std::string>(
          name, [&target, &names](const std::string& v) { target = names.at(v); }, desc)
      ->check(CLI::IsMember(keys));
}

size_t mode_index(Mode m) {
  for (size_t i = 0; i < kAllModes.size(); ++i) {
    if (kAllModes[i] == m) return i;
  }
  return 0;
}

struct HashArgs {
  Mode mode = Mode::sha3_256;
  std::string in_path = "-";
  std::optional<size_t> out_len;
  FdScheme fd = FdScheme::none;
  unsigned unroll = 1;
  std::optional<uint64_t> inject_commit;
  std::vector<unsigned> inject_bits;
};

int cmd_hash(const HashArgs& a, std::istream& in, std::ostream& out, std::ostream& err) {
  std::vector<uint8_t> msg;
  if (a.in_path == "-") {
    msg.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  } else {
    std::ifstream f(a.in_path, std::ios::binary);
    if (!f) {
      err << "hash: cannot open " << a.in_path << "\n";
      return kBadArguments;
    }
    msg.assign(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
  }
  const ModeConfig cfg = mode_params(a.mode);
  size_t out_len = cfg.is_xof() ? 32 : cfg.digest_bits / 8;
  if (a.out_len) {
    if (*a.out_len == 0 || (!cfg.is_xof() && *a.out_len != cfg.digest_bits / 8)) {
      err << "hash: invalid --out-len for " << to_string(a.mode) << "\n";
      return kBadArguments;
    }
    out_len = *a.out_len;
  }
  SpongeEngine engine(a.mode, {a.unroll, a.fd});
  if (!a.inject_bits.empty()) {
    const FaultPattern p = FaultPattern::state_bits(a.inject_bits);
    const uint64_t at = a.inject_commit.value_or(0);
    engine.set_commit_hook([p, at](SpongeEngine& e, uint64_t idx) {
      if (idx == at) apply(p, e);
    });
  }
  engine.update(msg);
  engine.finalize();
  std::vector<uint8_t> digest(out_len);
  const bool ok = engine.squeeze(digest);
  out << to_hex(digest) << "\n";
  if (!ok) {
    err << "hash: fault detected, output masked\n";
    return kMasked;
  }
  return kOk;
}

struct KatArgs {
  std::vector<std::string> paths;
  std::optional<Mode> mode;
  FdScheme fd = FdScheme::none;
  unsigned unroll = 1;
};

int cmd_kat(const KatArgs& a, std::ostream& out, std::ostream& err) {
  size_t passed = 0, skipped = 0, records = 0;
  std::vector<kat::Mismatch> failures;
  for (const std::string& path : a.paths) {
    std::ifstream f(path);
    if (!f) {
      err << "kat: cannot open " << path << "\n";
      return kBadArguments;
    }
    const kat::ParseResult parsed = kat::parse(f);
    std::optional<Mode> mode = a.mode;
    if (!mode) mode = parsed.header_mode ? parsed.header_mode : kat::mode_from_name(path);
    if (!mode) {
      err << "kat: cannot infer the mode of " << path << "; pass --mode\n";
      return kBadArguments;
    }
    const kat::Summary s = kat::verify(parsed.records, *mode, {a.unroll, a.fd});
    out << path << ": " << to_string(*mode) << " passed " << s.passed << ", failed " << s.failures.size()
        << ", skipped " << s.skipped << " (non-byte-aligned)\n";
    records += parsed.records.size();
    passed += s.passed;
    skipped += s.skipped;
    failures.insert(failures.end(), s.failures.begin(), s.failures.end());
  }
  if (records == 0) {
    err << "kat: no records found\n";
    return kBadArguments;
  }
  out << "total: passed " << passed << ", failed " << failures.size() << ", skipped " << skipped << "\n";
  for (size_t i = 0; i < failures.size() && i < 10; ++i) {
    const auto& fmis = failures[i];
    out << "MISMATCH line " << fmis.record.line << " Len = " << fmis.record.msg_len_bits << "\n"
        << "  expected " << fmis.record.expected_digest_hex << "\n"
        << "  actual   " << fmis.actual_hex << "\n";
  }
  return failures.empty() ? kOk : kMismatch;
}

struct CampaignArgs {
  CampaignSpec spec;
  std::string scope = "state";
  std::string report;
  uint64_t commit = 0;
  size_t message_len = 0;
};

int cmd_campaign(CampaignArgs& a, bool commit_given, bool message_len_given, std::ostream& out,
                 std::ostream& err) {
  a.spec.scope = a.scope == "all" ? FaultScope::all_registers : FaultScope::state_register;
  if (commit_given) a.spec.commit = a.commit;
  if (message_len_given) a.spec.message_len = a.message_len;
  CampaignReport r;
  try {
    r = run_campaign(a.spec);
  } catch (const BudgetExceeded& e) {
    err << "campaign: " << e.what() << "\n";
    return kBudget;
  } catch (const std::invalid_argument& e) {
    err << "campaign: " << e.what() << "\n";
    return kBadArguments;
  }
  const std::string json = to_json(r);
  if (!a.report.empty()) {
    std::ofstream f(a.report);
    if (!f) {
      err << "campaign: cannot write " << a.report << "\n";
      return kBadArguments;
    }
    f << json << "\n";
  }
  out << "scheme " << to_string(r.scheme) << ", unroll " << r.unroll << ", k " << r.k << ", strategy "
      << to_string(r.strategy) << ", scope " << to_string(r.scope) << ", seed " << r.seed << "\n";
  out << "patterns " << r.total << ": detected " << r.detected << ", undetected " << r.undetected << " (silent "
      << r.silent << ", benign " << r.benign << "), spurious " << r.spurious << "\n";
  out << std::setprecision(9) << "rate " << r.rate << "  95% CI [" << r.ci_low << ", " << r.ci_high << "]\n";
  if (r.census_undetected) {
    out << "census: " << *r.census_undetected << " undetected " << r.k << "-bit patterns of C(1600," << r.k
        << "), fraction " << std::setprecision(6) << *r.census_fraction << " (model-derived)\n";
  }
  for (const FaultPattern& w : r.witnesses) out << "  undetected " << describe(w) << "\n";
  out << "wall time " << std::fixed << std::setprecision(2) << r.wall_time.count() << " s\n";
  return kOk;
}

int cmd_census(unsigned k, FdScheme scheme, std::ostream& out, std::ostream& err) {
  if (scheme == FdScheme::none) {
    err << "census: needs --fd c-plane or z-sheet\n";
    return kBadArguments;
  }
  CensusResult c;
  try {
    c = undetected_census(k, scheme);
  } catch (const BudgetExceeded& e) {
    err << "census: " << e.what() << "\n";
    return kBudget;
  }
  out << to_string(scheme) << " k=" << k << ": " << c.undetected << " undetected of "
      << std::setprecision(12) << static_cast<double>(c.total) << " (fraction " << std::setprecision(6)
      << static_cast<double>(c.fraction) << ")\n";
  for (const FaultPattern& w : c.witnesses) out << "  " << describe(w) << "\n";
  return kOk;
}

struct ThroughputArgs {
  std::optional<Mode> mode;
  std::optional<double> freq;
  std::optional<FdScheme> fd;
};

int cmd_throughput(const ThroughputArgs& a, std::ostream& out) {
  const auto& table = reference_throughput_table();
  auto series_for = [&](FdScheme s) -> const ReferenceThroughput& {
    return table[s == FdScheme::none ? 0 : s == FdScheme::c_plane ? 1 : 2];
  };
  std::vector<std::pair<double, const ReferenceThroughput*>> rows;  // (freq, reference series or null)
  if (a.fd) {
    const ReferenceThroughput& s = series_for(*a.fd);
    const double f = a.freq.value_or(s.freq_mhz);
    rows.emplace_back(f, std::abs(f - s.freq_mhz) < 1e-6 ? &s : nullptr);
  } else if (a.freq) {
    const ReferenceThroughput* match = nullptr;
    for (const auto& s : table) {
      if (std::abs(*a.freq - s.freq_mhz) < 1e-6) {
        match = &s;
        break;
      }
    }
    rows.emplace_back(*a.freq, match);
  } else {
    for (const auto& s : table) rows.emplace_back(s.freq_mhz, &s);
  }
  out << std::left << std::setw(10) << "mode" << std::setw(9) << "design" << std::right << std::setw(10) << "MHz"
      << std::setw(12) << "model Mbps" << std::setw(12) << "ref Mbps" << std::setw(10) << "dev %" << "\n";
  out << std::fixed;
  for (const auto& [freq, ref] : rows) {
    for (Mode m : kAllModes) {
      if (a.mode && *a.mode != m) continue;
      const double model = throughput_model(m, freq);
      out << std::left << std::setw(10) << to_string(m) << std::setw(9) << (ref ? ref->series : "-") << std::right
          << std::setw(10) << std::setprecision(2) << freq << std::setw(12) << std::setprecision(1) << model;
      if (ref) {
        const double reported = ref->mbps[mode_index(m)];
        out << std::setw(12) << std::setprecision(2) << reported << std::setw(10) << std::setprecision(3)
            << 100.0 * (model - reported) / reported;
      }
      out << "\n";
    }
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Register-level SHA-3/SHAKE engine with cross-parity fault detection", "sha3fd"};
  app.require_subcommand(1);

  HashArgs hash_args;
  auto* hash_cmd = app.add_subcommand("hash", "Hash a file or standard input");
  enum_option(hash_cmd, "--mode", hash_args.mode, kModes, "Hash mode")->required();
  hash_cmd->add_option("--in", hash_args.in_path, "Input file ('-' for standard input)");
  hash_cmd->add_option("--out-len", hash_args.out_len, "Output length in bytes");
  enum_option(hash_cmd, "--fd", hash_args.fd, kSchemes, "Fault-detection scheme");
  hash_cmd->add_option("--unroll", hash_args.unroll, "Rounds per register commit")
      ->check(CLI::IsMember(std::vector<unsigned>(kUnrollFactors.begin(), kUnrollFactors.end())));
  hash_cmd->add_option("--inject-commit", hash_args.inject_commit, "Commit after which to flip --inject-bits");
  hash_cmd->add_option("--inject-bits", hash_args.inject_bits, "State bits (64*(5y+x)+z) to flip")
      ->delimiter(',')
      ->check(CLI::Range(0U, kStateBits - 1));

  KatArgs kat_args;
  auto* kat_cmd = app.add_subcommand("kat", "Verify known-answer response files");
  kat_cmd->add_option("fixtures", kat_args.paths, "Response files")->required();
  enum_option(kat_cmd, "--mode", kat_args.mode, kModes, "Mode (default: from file header or name)");
  enum_option(kat_cmd, "--fd", kat_args.fd, kSchemes, "Fault-detection scheme");
  kat_cmd->add_option("--unroll", kat_args.unroll, "Rounds per register commit")
      ->check(CLI::IsMember(std::vector<unsigned>(kUnrollFactors.begin(), kUnrollFactors.end())));

  CampaignArgs camp;
  auto* camp_cmd = app.add_subcommand("campaign", "Run a fault-injection campaign");
  enum_option(camp_cmd, "--fd,--scheme", camp.spec.scheme, kSchemes, "Fault-detection scheme");
  camp_cmd->add_option("--unroll", camp.spec.unroll, "Rounds per register commit");
  camp_cmd->add_option("--k", camp.spec.k, "Bits flipped per pattern")->required();
  enum_option(camp_cmd, "--strategy", camp.spec.strategy, kStrategies, "Pattern selection");
  camp_cmd->add_option("--trials", camp.spec.trials, "Random trials");
  camp_cmd->add_option("--seed", camp.spec.seed, "RNG seed");
  camp_cmd->add_option("--sheet", camp.spec.sheet, "Sheet enumerated by exhaustive-sheet");
  camp_cmd->add_option("--scope", camp.scope, "Fault-eligible registers")->check(CLI::IsMember({"state", "all"}));
  enum_option(camp_cmd, "--mode", camp.spec.mode, kModes, "Hash mode of the workload");
  auto* msg_opt = camp_cmd->add_option("--message-len", camp.message_len, "Workload message bytes");
  auto* commit_opt = camp_cmd->add_option("--commit", camp.commit, "Fixed injection commit");
  camp_cmd->add_option("--budget", camp.spec.pattern_budget, "Maximum patterns");
  camp_cmd->add_flag("--allow-global-k3", camp.spec.allow_global_k3, "Permit exhaustive-global at k = 3");
  camp_cmd->add_option("--workers", camp.spec.workers, "Worker threads (default: SHA3FD_WORKERS or all cores)");
  camp_cmd->add_option("--report", camp.report, "Write the JSON report here");

  unsigned census_k = 4;
  FdScheme census_scheme = FdScheme::z_sheet;
  auto* census_cmd = app.add_subcommand("census", "Count undetected k-bit state patterns exactly");
  census_cmd->add_option("--k", census_k, "Bits flipped per pattern")->required();
  enum_option(census_cmd, "--fd,--scheme", census_scheme, kSchemes, "Fault-detection scheme");

  ThroughputArgs tp;
  auto* tp_cmd = app.add_subcommand("throughput", "Modeled throughput against reference figures");
  enum_option(tp_cmd, "--mode", tp.mode, kModes, "Hash mode (default: all)");
  tp_cmd->add_option("--freq", tp.freq, "Clock frequency in MHz")->check(CLI::PositiveNumber);
  enum_option(tp_cmd, "--fd", tp.fd, kSchemes, "Design variant");

  std::vector<const char*> argv;
  for (const std::string& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kBadArguments;
  }

  try {
    if (*hash_cmd) return cmd_hash(hash_args, in, out, err);
    if (*kat_cmd) return cmd_kat(kat_args, out, err);
    if (*camp_cmd) return cmd_campaign(camp, commit_opt->count() > 0, msg_opt->count() > 0, out, err);
    if (*census_cmd) return cmd_census(census_k, census_scheme, out, err);
    if (*tp_cmd) return cmd_throughput(tp, out);
  } catch (const std::invalid_argument& e) {
    err << e.what() << "\n";
    return kBadArguments;
  } catch (const ContractViolation& e) {
    err << e.what() << "\n";
    return kBadArguments;
  }
  return kBadArguments;
}

}  // namespace sha3fd::cli
