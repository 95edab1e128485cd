#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "sha3fd/cli.hpp"
#include "sha3fd/sponge.hpp"

using namespace sha3fd;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args, const std::string& input = "") {
  args.insert(args.begin(), "sha3fd");
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = cli::run(args, in, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto p = std::filesystem::temp_directory_path() / ("sha3fd_test_" + name);
  std::ofstream(p) << content;
  return p;
}

const std::string kFixtures = SHA3FD_FIXTURE_DIR;

}  // namespace

TEST_CASE("hash command") {
  CHECK(run({"hash", "--mode", "sha3-256"}).out ==
        "a7ffc6f8bf1ed76651c14756a061d662f580ff4de43b49fa82d80a4b80f8434a\n");
  const auto empty = temp_file("empty.bin", "");
  CHECK(run({"hash", "--mode", "sha3-256", "--in", empty.string()}).out ==
        "a7ffc6f8bf1ed76651c14756a061d662f580ff4de43b49fa82d80a4b80f8434a\n");
  CHECK(run({"hash", "--mode", "shake128", "--out-len", "16"}).out == "7f9c2ba4e88f827d616045507605853e\n");
  CHECK(run({"hash", "--mode", "shake128", "--out-len", "0"}).code == cli::kBadArguments);
  CHECK(run({"hash", "--mode", "sha3-256", "--out-len", "20"}).code == cli::kBadArguments);
  CHECK(run({"hash", "--mode", "md5"}).code == cli::kBadArguments);
  CHECK(run({"hash", "--mode", "sha3-256", "--unroll", "5"}).code == cli::kBadArguments);
  CHECK(run({"hash"}).code == cli::kBadArguments);
  CHECK(run({"hash", "--mode", "sha3-256", "--in", "/nonexistent/x"}).code == cli::kBadArguments);
  CHECK(run({}).code == cli::kBadArguments);
  CHECK(run({"--help"}).code == cli::kOk);
}

TEST_CASE("hash with FD agrees with the plain engine") {
  const std::string msg(500, 'q');
  const auto plain = run({"hash", "--mode", "sha3-512"}, msg);
  for (const char* fd : {"c-plane", "z-sheet"}) {
    for (const char* u : {"1", "4", "24"}) {
      const auto r = run({"hash", "--mode", "sha3-512", "--fd", fd, "--unroll", u}, msg);
      CHECK(r.code == cli::kOk);
      CHECK(r.out == plain.out);
    }
  }
}

TEST_CASE("hash with an injected fault masks the output") {
  const auto r = run({"hash", "--mode", "sha3-256", "--fd", "z-sheet", "--inject-commit", "2", "--inject-bits", "100"},
                     "abc");
  CHECK(r.code == cli::kMasked);
  CHECK(r.out == std::string(64, '0') + "\n");
  CHECK(!r.err.empty());
  const auto c = run({"hash", "--mode", "sha3-256", "--fd", "c-plane", "--inject-commit", "2", "--inject-bits",
                      "0,320"},
                     "abc");
  CHECK(c.code == cli::kOk);
  CHECK(c.out != run({"hash", "--mode", "sha3-256"}, "abc").out);
}

TEST_CASE("kat command") {
  const auto ok = run({"kat", kFixtures + "/ShortMsgKAT_SHA3-256.txt"});
  CHECK(ok.code == cli::kOk);
  CHECK(ok.out.find("passed 256") != std::string::npos);

  std::ifstream src(kFixtures + "/ShortMsgKAT_SHA3-256.txt");
  std::stringstream buf;
  buf << src.rdbuf();
  std::string text = buf.str();
  const auto md = text.find("MD = ") + 5;
  text[md] = text[md] == '0' ? '1' : '0';
  const auto corrupted = temp_file("SHA3_256_corrupt.rsp", text);
  const auto bad = run({"kat", corrupted.string()});
  CHECK(bad.code == cli::kMismatch);
  CHECK(bad.out.find("MISMATCH") != std::string::npos);

  CHECK(run({"kat", temp_file("SHA3_256_empty.rsp", "").string()}).code == cli::kBadArguments);
  CHECK(run({"kat", "/nonexistent.rsp"}).code == cli::kBadArguments);
  CHECK(run({"kat", temp_file("noname.txt", "Len = 0\nMsg = 00\nMD = 00\n").string()}).code == cli::kBadArguments);
}

TEST_CASE("campaign command") {
  const auto report = std::filesystem::temp_directory_path() / "sha3fd_test_report.json";
  const auto r = run({"campaign", "--scheme", "c-plane", "--k", "1", "--strategy", "exhaustive-global", "--report",
                      report.string()});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("rate 1 ") != std::string::npos);
  std::ifstream in(report);
  std::stringstream json;
  json << in.rdbuf();
  CHECK(json.str().find("\"detected\": 1600") != std::string::npos);

  CHECK(run({"campaign", "--scheme", "none", "--k", "1"}).code == cli::kBadArguments);
  CHECK(run({"campaign", "--k", "3", "--strategy", "exhaustive-global"}).code == cli::kBadArguments);
  CHECK(run({"campaign", "--k", "4", "--strategy", "exhaustive-sheet"}).code == cli::kBudget);
  CHECK(run({"campaign", "--k", "2", "--strategy", "random", "--trials", "100", "--budget", "10"}).code ==
        cli::kBudget);
}

TEST_CASE("census command") {
  const auto r = run({"census", "--k", "4", "--fd", "z-sheet"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find(": 100800 undetected") != std::string::npos);
  CHECK(run({"census", "--k", "9"}).code == cli::kBudget);
  CHECK(run({"census", "--k", "2", "--fd", "none"}).code == cli::kBadArguments);
}

TEST_CASE("throughput command") {
  const auto all = run({"throughput"});
  CHECK(all.code == cli::kOk);
  CHECK(all.out.find("4998.90") != std::string::npos);
  const auto one = run({"throughput", "--mode", "shake128", "--freq", "666.67"});
  CHECK(one.out.find("4666.7") != std::string::npos);
  CHECK(one.out.find("4665.61") != std::string::npos);
  CHECK(run({"throughput", "--mode", "sha3-384", "--fd", "none"}).out.find("3095.3") != std::string::npos);
  CHECK(run({"throughput", "--mode", "whirlpool"}).code == cli::kBadArguments);
}

TEST_CASE("reference throughput table") {
  const auto& t = cli::reference_throughput_table();
  REQUIRE(t.size() == 3);
  for (const auto& s : t)
    for (size_t i = 0; i < kAllModes.size(); ++i) {
      const double model = throughput_model(kAllModes[i], s.freq_mhz);
      CHECK(std::abs(model - s.mbps[i]) / s.mbps[i] < 0.001);
    }
}
