#include <random>

#include "doctest.h"
#include "sha3fd/fault_inject.hpp"

using namespace sha3fd;

namespace {

RunSetup setup_for(FdScheme scheme, unsigned unroll = 1, Mode mode = Mode::sha3_256) {
  RunSetup s;
  s.mode = mode;
  s.engine = {unroll, scheme};
  s.message.assign(mode_params(mode).rate_bytes(), 0x3C);
  return s;
}

FaultPattern rectangle(unsigned x, unsigned y0, unsigned y1, unsigned z0, unsigned z1) {
  const unsigned b[] = {bit_index(x, y0, z0), bit_index(x, y1, z0), bit_index(x, y0, z1), bit_index(x, y1, z1)};
  return FaultPattern::state_bits(b);
}

}  // namespace

TEST_CASE("fault pattern invariants") {
  CHECK_THROWS_AS(FaultPattern({{Register::state, 3}, {Register::state, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(FaultPattern({{Register::state, 1600}}), std::invalid_argument);
  CHECK_THROWS_AS(FaultPattern({{Register::c_prime, 320}}), std::invalid_argument);
  CHECK_THROWS_AS(FaultPattern({{Register::f_prime, 25}}), std::invalid_argument);
  CHECK_THROWS_AS(FaultPattern({{Register::cf_prime, 5}}), std::invalid_argument);
  const FaultPattern p({{Register::c_prime, 9}, {Register::state, 700}, {Register::state, 2}});
  CHECK(p.k() == 3);
  CHECK(p.flips().front() == FaultTarget{Register::state, 2});
  CHECK(!p.state_only());
  CHECK(register_width(Register::cf_prime) == 5);
}

TEST_CASE("outcomes of single runs") {
  const FaultRunner runner(setup_for(FdScheme::z_sheet));
  CHECK(runner.total_commits() == 48);
  CHECK(runner.commits_before_final_permutation() == 24);

  const RunResult clean = runner.run(FaultPattern{}, {5});
  CHECK(clean.outcome == Outcome::benign);
  CHECK(clean.emitted == runner.golden());

  const unsigned one[] = {777};
  const RunResult hit = runner.run(FaultPattern::state_bits(one), {3});
  CHECK(hit.outcome == Outcome::detected);
  CHECK(hit.error);
  CHECK(std::all_of(hit.emitted.begin(), hit.emitted.end(), [](uint8_t b) { return b == 0; }));

  CHECK(runner.classify(rectangle(0, 0, 1, 0, 1), {0}) == Outcome::silent_corruption);
  CHECK_THROWS_AS(runner.run(FaultPattern{}, {48}), ContractViolation);
}

TEST_CASE("every single state flip is detected under both schemes") {
  for (FdScheme scheme : {FdScheme::c_plane, FdScheme::z_sheet}) {
    const FaultRunner runner(setup_for(scheme));
    for (unsigned b = 0; b < kStateBits; b += 7) {
      const unsigned one[] = {b};
      REQUIRE(runner.classify(FaultPattern::state_bits(one), {b % 24}) == Outcome::detected);
    }
  }
}

TEST_CASE("shadow-register faults raise spurious errors") {
  const FaultRunner runner(setup_for(FdScheme::z_sheet));
  CHECK(runner.classify(FaultPattern({{Register::c_prime, 100}}), {4}) == Outcome::spurious_error);
  CHECK(runner.classify(FaultPattern({{Register::f_prime, 7}}), {4}) == Outcome::spurious_error);
  CHECK(runner.classify(FaultPattern({{Register::cf_prime, 2}}), {4}) == Outcome::spurious_error);
  const FaultRunner c(setup_for(FdScheme::c_plane));
  CHECK(c.classify(FaultPattern({{Register::c_prime, 0}}), {0}) == Outcome::spurious_error);
}

TEST_CASE("simulation agrees with the predicate across commits and unroll factors") {
  std::mt19937_64 rng(21);
  for (unsigned u : kUnrollFactors) {
    for (FdScheme scheme : {FdScheme::c_plane, FdScheme::z_sheet}) {
      const FaultRunner runner(setup_for(scheme, u));
      for (int t = 0; t < 40; ++t) {
        // Patterns confined to one sheet and three slices hit undetected cases often.
        const unsigned x = static_cast<unsigned>(rng() % 5);
        const unsigned k = 2 + static_cast<unsigned>(rng() % 4);
        std::vector<unsigned> bits;
        while (bits.size() < k) {
          const unsigned b = bit_index(x, static_cast<unsigned>(rng() % 3), static_cast<unsigned>(rng() % 2));
          if (std::find(bits.begin(), bits.end(), b) == bits.end()) bits.push_back(b);
        }
        const FaultPattern p = FaultPattern::state_bits(bits);
        const uint64_t commit = rng() % runner.commits_before_final_permutation();
        const Outcome o = runner.classify(p, {commit});
        const bool detected = fd::detectability_predicate(p, scheme);
        REQUIRE((o == Outcome::detected) == detected);
        if (!detected) REQUIRE(o == Outcome::silent_corruption);
      }
    }
  }
}

TEST_CASE("sheet decomposition") {
  const FaultPattern r0 = rectangle(0, 0, 1, 3, 9);
  const FaultPattern r3 = rectangle(3, 2, 4, 60, 61);
  std::vector<FaultTarget> both(r0.flips());
  both.insert(both.end(), r3.flips().begin(), r3.flips().end());
  const FaultPattern combined(both);
  CHECK(!fd::detectability_predicate(combined, FdScheme::z_sheet));
  const FaultRunner runner(setup_for(FdScheme::z_sheet));
  CHECK(runner.classify(combined, {7}) == Outcome::silent_corruption);

  // Adding one detected sub-pattern in another sheet makes the whole pattern detected.
  both.push_back({Register::state, static_cast<uint16_t>(bit_index(4, 0, 0))});
  CHECK(fd::detectability_predicate(FaultPattern(both), FdScheme::z_sheet));
  CHECK(runner.classify(FaultPattern(both), {7}) == Outcome::detected);
}

TEST_CASE("monotonicity: c-plane detections are z-sheet detections") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 50000; ++t) {
    std::vector<unsigned> bits;
    const unsigned k = 1 + static_cast<unsigned>(rng() % 6);
    while (bits.size() < k) {
      const unsigned b = bit_index(static_cast<unsigned>(rng() % 2), static_cast<unsigned>(rng() % 5),
                                   static_cast<unsigned>(rng() % 2));
      if (std::find(bits.begin(), bits.end(), b) == bits.end()) bits.push_back(b);
    }
    const FaultPattern p = FaultPattern::state_bits(bits);
    if (fd::detectability_predicate(p, FdScheme::c_plane)) REQUIRE(fd::detectability_predicate(p, FdScheme::z_sheet));
  }
}

TEST_CASE("schedule independence") {
  const FaultRunner runner(setup_for(FdScheme::z_sheet, 2));
  const FaultPattern rect = rectangle(1, 0, 4, 5, 6);
  const unsigned tri[] = {bit_index(1, 0, 5), bit_index(1, 4, 5), bit_index(1, 0, 6)};
  const FaultPattern three = FaultPattern::state_bits(tri);
  for (uint64_t c = 0; c < runner.commits_before_final_permutation(); ++c) {
    CHECK(runner.classify(rect, {c}) == Outcome::silent_corruption);
    CHECK(runner.classify(three, {c}) == Outcome::detected);
  }
}

TEST_CASE("campaign spec validation") {
  CampaignSpec s;
  s.trials = 10;
  CHECK_NOTHROW(validate(s));
  auto bad = [&](auto mutate) {
    CampaignSpec t = s;
    mutate(t);
    CHECK_THROWS_AS(validate(t), std::invalid_argument);
  };
  bad([](CampaignSpec& t) { t.scheme = FdScheme::none; });
  bad([](CampaignSpec& t) { t.unroll = 3; });
  bad([](CampaignSpec& t) { t.k = 0; });
  bad([](CampaignSpec& t) { t.trials = 0; });
  bad([](CampaignSpec& t) {
    t.strategy = Strategy::exhaustive_sheet;
    t.sheet = 5;
  });
  bad([](CampaignSpec& t) {
    t.strategy = Strategy::exhaustive_global;
    t.k = 3;
  });
  CampaignSpec audit = s;
  audit.strategy = Strategy::exhaustive_global;
  audit.k = 3;
  audit.allow_global_k3 = true;
  CHECK_NOTHROW(validate(audit));
}

TEST_CASE("budget guard") {
  CampaignSpec s;
  s.strategy = Strategy::exhaustive_sheet;
  s.k = 4;
  CHECK_THROWS_AS(run_campaign(s), BudgetExceeded);
  s.strategy = Strategy::random;
  s.trials = 100;
  s.pattern_budget = 50;
  CHECK_THROWS_AS(run_campaign(s), BudgetExceeded);
}

TEST_CASE("exhaustive campaigns") {
  CampaignSpec s;
  s.strategy = Strategy::exhaustive_global;
  s.k = 1;
  const CampaignReport r = run_campaign(s);
  CHECK(r.total == 1600);
  CHECK(r.detected == 1600);
  CHECK(r.rate == 1.0);
  CHECK(r.census_undetected == 0);

  s.strategy = Strategy::exhaustive_sheet;
  s.k = 2;
  s.sheet = 2;
  const CampaignReport r2 = run_campaign(s);
  CHECK(r2.total == 51040);
  CHECK(r2.undetected == 0);
  CHECK(r2.detected + r2.undetected + r2.spurious == r2.total);
}

TEST_CASE("all-register scope reports spurious errors") {
  CampaignSpec s;
  s.scheme = FdScheme::c_plane;
  s.strategy = Strategy::exhaustive_global;
  s.scope = FaultScope::all_registers;
  s.k = 1;
  const CampaignReport r = run_campaign(s);
  CHECK(r.total == 1920);
  CHECK(r.detected == 1600);
  CHECK(r.spurious == 320);
  CHECK(!r.census_undetected);
}

TEST_CASE("campaign determinism and worker independence") {
  CampaignSpec s;
  s.k = 4;
  s.trials = 9000;
  s.seed = 99;
  s.workers = 1;
  const std::string a = to_json(run_campaign(s));
  s.workers = 3;
  const std::string b = to_json(run_campaign(s));
  CHECK(a == b);
  s.seed = 100;
  CHECK(to_json(run_campaign(s)) != a);
}

TEST_CASE("random c-plane witnesses satisfy the predicate") {
  CampaignSpec s;
  s.scheme = FdScheme::c_plane;
  s.k = 2;
  s.trials = 20000;
  s.seed = 3;
  const CampaignReport r = run_campaign(s);
  CHECK(r.detected + r.undetected == r.total);
  CHECK(r.ci_low <= r.rate);
  CHECK(r.rate <= r.ci_high);
  for (const FaultPattern& w : r.witnesses) CHECK(!fd::detectability_predicate(w, FdScheme::c_plane));
}

TEST_CASE("wilson interval") {
  const Interval all = wilson_interval(100, 100);
  CHECK(all.high == doctest::Approx(1.0));
  CHECK(all.low == doctest::Approx(0.963).epsilon(1e-3));
  const Interval half = wilson_interval(50, 100);
  CHECK(half.low == doctest::Approx(0.4038).epsilon(1e-3));
  CHECK(half.high == doctest::Approx(0.5962).epsilon(1e-3));
}

TEST_CASE("monte carlo entry point") {
  CHECK_THROWS_AS(monte_carlo_rate(4, 9999, 1), std::invalid_argument);
  const MonteCarloResult m = monte_carlo_rate(1, 10000, 1);
  CHECK(m.rate == 1.0);
  CHECK(m.census_fraction == 0.0L);
}
