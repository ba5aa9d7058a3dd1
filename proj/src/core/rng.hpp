#pragma once

// Counter-based RNG (Philox4x32-10) so that every (seed, stream, index...)
// tuple maps to an independent random draw. Lets noise modes and MC paths be
// generated in any order, or in parallel, with bit-identical results.

#include <cstdint>
#include <cmath>

namespace pam {

namespace detail {

inline void philox_round(uint32_t c[4], const uint32_t k[2]) {
    const uint64_t m0 = 0xD2511F53ull * c[0];
    const uint64_t m1 = 0xCD9E8D57ull * c[2];
    const uint32_t hi0 = uint32_t(m0 >> 32), lo0 = uint32_t(m0);
    const uint32_t hi1 = uint32_t(m1 >> 32), lo1 = uint32_t(m1);
    c[0] = hi1 ^ c[1] ^ k[0];
    c[1] = lo1;
    c[2] = hi0 ^ c[3] ^ k[1];
    c[3] = lo0;
}

} // namespace detail

// 10-round Philox4x32. Returns four 32-bit words for counter (c0,c1,c2,c3)
// under key = 64-bit seed.
struct Philox4 {
    uint32_t v[4];
};

inline Philox4 philox(uint64_t seed, uint32_t c0, uint32_t c1, uint32_t c2, uint32_t c3) {
    uint32_t c[4] = {c0, c1, c2, c3};
    uint32_t k[2] = {uint32_t(seed), uint32_t(seed >> 32)};
    for (int r = 0; r < 10; ++r) {
        detail::philox_round(c, k);
        k[0] += 0x9E3779B9u;
        k[1] += 0xBB67AE85u;
    }
    return Philox4{{c[0], c[1], c[2], c[3]}};
}

// Uniform in (0,1), never exactly 0 or 1: 53-bit mantissa offset by 1/2 ulp.
inline double u01(uint32_t hi, uint32_t lo) {
    const uint64_t x = (uint64_t(hi) << 32) | lo;
    return (double(x >> 11) + 0.5) * (1.0 / 9007199254740992.0); // 2^-53
}

// Pair of independent standard normals from one counter (Box-Muller).
inline void normal_pair(uint64_t seed, uint32_t c0, uint32_t c1, uint32_t c2, uint32_t c3,
                        double& z0, double& z1) {
    const Philox4 p = philox(seed, c0, c1, c2, c3);
    const double u1 = u01(p.v[0], p.v[1]);
    const double u2 = u01(p.v[2], p.v[3]);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    z0 = r * std::cos(a);
    z1 = r * std::sin(a);
}

inline double normal_one(uint64_t seed, uint32_t c0, uint32_t c1, uint32_t c2, uint32_t c3) {
    double z0, z1;
    normal_pair(seed, c0, c1, c2, c3, z0, z1);
    return z0;
}

// SplitMix64; used to derive per-cell seeds from a master seed.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline uint64_t derive_seed(uint64_t master, uint64_t cell) {
    return splitmix64(master ^ splitmix64(cell + 0x632BE59BD9B4E019ull));
}

// FNV-1a over bytes; used for artifact hashes and operator fingerprints.
inline uint64_t fnv1a(const void* data, size_t n, uint64_t h = 0xCBF29CE484222325ull) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001B3ull;
    }
    return h;
}

} // namespace pam
