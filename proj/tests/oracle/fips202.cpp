#include "fips202.hpp"

#include <stdexcept>

namespace oracle {
namespace {

unsigned idx(unsigned x, unsigned y, unsigned z) { return 64 * (5 * (y % 5) + x % 5) + z % 64; }

bool rc_bit(unsigned t) {
  if (t % 255 == 0) return true;
  uint8_t r[9] = {1, 0, 0, 0, 0, 0, 0, 0, 0};  // R = 10000000, r[8] is scratch
  for (unsigned i = 1; i <= t % 255; ++i) {
    for (int j = 8; j > 0; --j) r[j] = r[j - 1];
    r[0] = 0;
    r[0] ^= r[8];
    r[4] ^= r[8];
    r[5] ^= r[8];
    r[6] ^= r[8];
  }
  return r[0];
}

std::vector<uint8_t> sponge(unsigned rate, std::vector<uint8_t> bits, size_t out_bits) {
  // pad10*1
  bits.push_back(1);
  while ((bits.size() + 1) % rate != 0) bits.push_back(0);
  bits.push_back(1);
  Bits s{};
  for (size_t off = 0; off < bits.size(); off += rate) {
    for (unsigned i = 0; i < rate; ++i) s[i] ^= bits[off + i];
    s = keccak_f(s);
  }
  std::vector<uint8_t> z;
  while (true) {
    for (unsigned i = 0; i < rate && z.size() < out_bits; ++i) z.push_back(s[i]);
    if (z.size() >= out_bits) break;
    s = keccak_f(s);
  }
  std::vector<uint8_t> out(out_bits / 8);
  for (size_t i = 0; i < out_bits; ++i) out[i / 8] |= static_cast<uint8_t>(z[i] << (i % 8));
  return out;
}

std::vector<uint8_t> to_bit_string(const std::vector<uint8_t>& msg) {
  std::vector<uint8_t> bits;
  for (uint8_t b : msg) {
    for (unsigned i = 0; i < 8; ++i) bits.push_back((b >> i) & 1);
  }
  return bits;
}

}  // namespace

uint64_t rc(unsigned round) {
  uint64_t v = 0;
  for (unsigned j = 0; j <= 6; ++j) {
    if (rc_bit(j + 7 * round)) v |= uint64_t{1} << ((1U << j) - 1);
  }
  return v;
}

unsigned rho_offset(unsigned x, unsigned y) {
  if (x == 0 && y == 0) return 0;
  unsigned cx = 1, cy = 0;
  for (unsigned t = 0; t < 24; ++t) {
    if (cx == x && cy == y) return ((t + 1) * (t + 2) / 2) % 64;
    const unsigned nx = cy, ny = (2 * cx + 3 * cy) % 5;
    cx = nx;
    cy = ny;
  }
  throw std::logic_error("rho walk");
}

Bits theta(const Bits& a) {
  uint8_t c[5][64];
  for (unsigned x = 0; x < 5; ++x)
    for (unsigned z = 0; z < 64; ++z)
      c[x][z] = a[idx(x, 0, z)] ^ a[idx(x, 1, z)] ^ a[idx(x, 2, z)] ^ a[idx(x, 3, z)] ^ a[idx(x, 4, z)];
  Bits out;
  for (unsigned x = 0; x < 5; ++x)
    for (unsigned y = 0; y < 5; ++y)
      for (unsigned z = 0; z < 64; ++z)
        out[idx(x, y, z)] = a[idx(x, y, z)] ^ c[(x + 4) % 5][z] ^ c[(x + 1) % 5][(z + 63) % 64];
  return out;
}

Bits rho(const Bits& a) {
  Bits out;
  for (unsigned x = 0; x < 5; ++x)
    for (unsigned y = 0; y < 5; ++y)
      for (unsigned z = 0; z < 64; ++z) out[idx(x, y, z)] = a[idx(x, y, (z + 64 * 64 - rho_offset(x, y)) % 64)];
  return out;
}

Bits pi(const Bits& a) {
  Bits out;
  for (unsigned x = 0; x < 5; ++x)
    for (unsigned y = 0; y < 5; ++y)
      for (unsigned z = 0; z < 64; ++z) out[idx(x, y, z)] = a[idx(x + 3 * y, x, z)];
  return out;
}

Bits chi(const Bits& a) {
  Bits out;
  for (unsigned x = 0; x < 5; ++x)
    for (unsigned y = 0; y < 5; ++y)
      for (unsigned z = 0; z < 64; ++z)
        out[idx(x, y, z)] = a[idx(x, y, z)] ^ ((a[idx(x + 1, y, z)] ^ 1) & a[idx(x + 2, y, z)]);
  return out;
}

Bits iota(const Bits& a, unsigned round) {
  Bits out = a;
  const uint64_t v = rc(round);
  for (unsigned z = 0; z < 64; ++z) out[idx(0, 0, z)] ^= (v >> z) & 1;
  return out;
}

Bits keccak_f(Bits a) {
  for (unsigned i = 0; i < 24; ++i) a = iota(chi(pi(rho(theta(a)))), i);
  return a;
}

Bits from_bytes(const std::vector<uint8_t>& bytes) {
  Bits a{};
  for (unsigned i = 0; i < 1600; ++i) a[i] = (bytes.at(i / 8) >> (i % 8)) & 1;
  return a;
}

std::vector<uint8_t> to_bytes(const Bits& a) {
  std::vector<uint8_t> out(200);
  for (unsigned i = 0; i < 1600; ++i) out[i / 8] |= static_cast<uint8_t>(a[i] << (i % 8));
  return out;
}

std::vector<uint8_t> sha3(unsigned digest_bits, const std::vector<uint8_t>& msg) {
  auto bits = to_bit_string(msg);
  bits.push_back(0);
  bits.push_back(1);
  return sponge(1600 - 2 * digest_bits, bits, digest_bits);
}

std::vector<uint8_t> shake(unsigned security_bits, const std::vector<uint8_t>& msg, size_t out_bytes) {
  auto bits = to_bit_string(msg);
  for (int i = 0; i < 4; ++i) bits.push_back(1);
  return sponge(1600 - 2 * security_bits, bits, out_bytes * 8);
}

uint64_t sheet_even_subsets(unsigned k, bool lanes) {
  if (k > 4) throw std::invalid_argument("k <= 4");
  // Bit b of the sheet is (y = b / 64, z = b % 64).
  constexpr unsigned n = 320;
  auto ok = [&](const unsigned* b, unsigned m) {
    uint64_t cols = 0;
    unsigned lane_par = 0;
    for (unsigned i = 0; i < m; ++i) {
      cols ^= uint64_t{1} << (b[i] % 64);
      lane_par ^= 1U << (b[i] / 64);
    }
    return cols == 0 && (!lanes || lane_par == 0);
  };
  uint64_t count = 0;
  unsigned b[4];
  if (k == 0) return 1;
  for (b[0] = 0; b[0] < n; ++b[0]) {
    if (k == 1) {
      count += ok(b, 1);
      continue;
    }
    for (b[1] = b[0] + 1; b[1] < n; ++b[1]) {
      if (k == 2) {
        count += ok(b, 2);
        continue;
      }
      for (b[2] = b[1] + 1; b[2] < n; ++b[2]) {
        if (k == 3) {
          count += ok(b, 3);
          continue;
        }
        for (b[3] = b[2] + 1; b[3] < n; ++b[3]) count += ok(b, 4);
      }
    }
  }
  return count;
}

}  // namespace oracle
