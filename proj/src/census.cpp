// Exact census of undetected state-register fault patterns.
//
// A pattern escapes the c-plane check iff every column holds an even number
// of flips; columns are independent, so the count by weight is the
// coefficient list of (per-column polynomial)^320. Under z-sheet a pattern
// escapes iff, in each sheet, every column and every lane holds an even
// number of flips. Sheets share no parity bit, so the global count is
// (per-sheet polynomial)^5; the per-sheet polynomial is counted by a DP over
// the 64 columns of a sheet tracking the five lane parities.

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "sha3fd/fault_inject.hpp"

namespace sha3fd {
namespace {

using u128 = unsigned __int128;

uint64_t checked(u128 v) {
  if (v > static_cast<u128>(UINT64_MAX)) throw std::overflow_error("census count overflows 64 bits");
  return static_cast<uint64_t>(v);
}

std::vector<uint64_t> poly_mul(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b, unsigned max_k) {
  std::vector<uint64_t> out(max_k + 1, 0);
  for (unsigned i = 0; i <= max_k && i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (unsigned j = 0; i + j <= max_k && j < b.size(); ++j) {
      out[i + j] = checked(static_cast<u128>(out[i + j]) + static_cast<u128>(a[i]) * b[j]);
    }
  }
  return out;
}

std::vector<uint64_t> poly_pow(std::vector<uint64_t> base, unsigned e, unsigned max_k) {
  std::vector<uint64_t> acc(max_k + 1, 0);
  acc[0] = 1;
  while (e) {
    if (e & 1U) acc = poly_mul(acc, base, max_k);
    e >>= 1;
    if (e) base = poly_mul(base, base, max_k);
  }
  return acc;
}

// Depth-first search for the lexicographically first undetected patterns
// (by linear state index), pruned on the parities still to be repaired.
class WitnessSearch {
 public:
  WitnessSearch(unsigned k, FdScheme scheme) : k_(k), zsheet_(scheme == FdScheme::z_sheet) {}

  std::vector<FaultPattern> run(size_t limit) {
    limit_ = limit;
    chosen_.clear();
    dfs(0);
    return std::move(found_);
  }

 private:
  bool feasible(unsigned remaining, unsigned next) const {
    const unsigned oc = col_.popcount();
    if (oc > remaining || (remaining - oc) % 2) return false;
    if (zsheet_) {
      const unsigned ol = static_cast<unsigned>(std::popcount(lane_.bits));
      if (ol > remaining || (remaining - ol) % 2) return false;
    }
    if (oc == 0 && (!zsheet_ || lane_.bits == 0)) return true;
    // Every odd column/lane must still have a bit at index >= next.
    for (unsigned x = 0; x < 5; ++x) {
      for (unsigned z = 0; z < kLaneBits; ++z) {
        if (col_.get(x, z) && bit_index(x, 4, z) < next) return false;
      }
      if (zsheet_) {
        for (unsigned y = 0; y < 5; ++y) {
          if (lane_.get(x, y) && bit_index(x, y, kLaneBits - 1) < next) return false;
        }
      }
    }
    return true;
  }

  void dfs(unsigned next) {
    if (found_.size() >= limit_ || ++nodes_ > kNodeLimit) return;
    const unsigned remaining = k_ - static_cast<unsigned>(chosen_.size());
    if (remaining == 0) {
      if (!col_.any() && (!zsheet_ || lane_.bits == 0)) found_.push_back(FaultPattern::state_bits(chosen_));
      return;
    }
    for (unsigned b = next; b + remaining <= kStateBits; ++b) {
      const BitCoord c = bit_coord(b);
      col_.flip(c.x, c.z);
      lane_.flip(c.x, c.y);
      chosen_.push_back(b);
      if (feasible(remaining - 1, b + 1)) dfs(b + 1);
      chosen_.pop_back();
      col_.flip(c.x, c.z);
      lane_.flip(c.x, c.y);
      if (found_.size() >= limit_ || nodes_ > kNodeLimit) return;
    }
  }

  static constexpr uint64_t kNodeLimit = 50'000'000;
  unsigned k_;
  bool zsheet_;
  size_t limit_ = 0;
  uint64_t nodes_ = 0;
  CPlane col_;
  FSlice lane_;
  std::vector<unsigned> chosen_;
  std::vector<FaultPattern> found_;
};

}  // namespace

std::vector<uint64_t> per_unit_undetected(FdScheme scheme, unsigned max_k) {
  std::vector<uint64_t> out(max_k + 1, 0);
  if (scheme == FdScheme::c_plane) {
    for (unsigned v = 0; v < 32; ++v) {
      const unsigned w = static_cast<unsigned>(std::popcount(v));
      if (w % 2 == 0 && w <= max_k) ++out[w];
    }
    return out;
  }
  if (scheme != FdScheme::z_sheet) throw std::invalid_argument("census needs an FD scheme");
  // dp[parity][w]: ways to fill the columns so far with even-weight columns,
  // leaving lane parity vector `parity` at total weight w.
  std::vector<std::vector<uint64_t>> dp(32, std::vector<uint64_t>(max_k + 1, 0));
  dp[0][0] = 1;
  for (unsigned z = 0; z < kLaneBits; ++z) {
    std::vector<std::vector<uint64_t>> nxt(32, std::vector<uint64_t>(max_k + 1, 0));
    for (unsigned p = 0; p < 32; ++p) {
      for (unsigned w = 0; w <= max_k; ++w) {
        if (dp[p][w] == 0) continue;
        for (unsigned v = 0; v < 32; ++v) {
          const unsigned cw = static_cast<unsigned>(std::popcount(v));
          if (cw % 2 || w + cw > max_k) continue;
          nxt[p ^ v][w + cw] = checked(static_cast<u128>(nxt[p ^ v][w + cw]) + dp[p][w]);
        }
      }
    }
    dp = std::move(nxt);
  }
  return dp[0];
}

CensusResult undetected_census(unsigned k, FdScheme scheme) {
  if (k == 0 || k > kCensusMaxK)
    throw BudgetExceeded("census supports 1 <= k <= " + std::to_string(kCensusMaxK));
  const std::vector<uint64_t> unit = per_unit_undetected(scheme, k);
  const unsigned units = scheme == FdScheme::c_plane ? kPlaneBits : 5;
  const std::vector<uint64_t> global = poly_pow(unit, units, k);

  CensusResult r;
  r.k = k;
  r.scheme = scheme;
  r.undetected = global[k];
  r.total = binomial(kStateBits, k);
  r.fraction = static_cast<long double>(r.undetected) / r.total;
  if (r.undetected > 0) r.witnesses = WitnessSearch(k, scheme).run(kMaxWitnesses);
  return r;
}

}  // namespace sha3fd
