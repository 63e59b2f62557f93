#pragma once

// Deterministic random number streams for Monte Carlo runs.
//
// Reproducibility contract: a stream is a pure function of (master_seed,
// stream_index).  Per-path streams are derived by a counter hash: the
// 64-bit path index is multiplied into the seed with a fixed odd constant
// and the result is expanded through splitmix64 into the xoshiro256++
// state.  Transforms (uniform doubles, normals) are implemented here
// rather than taken from <random>, whose distributions are
// implementation-defined and thus not stable across library versions.

#include <cmath>
#include <cstdint>

namespace quadwalk {

struct SplitMix64 {
    std::uint64_t state;

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

// xoshiro256++ engine (Blackman & Vigna), seeded via splitmix64.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) {
        SplitMix64 sm{seed};
        for (auto& word : state_) word = sm.next();
        has_spare_ = false;
        spare_ = 0.0;
    }

    // Documented counter hash: stream i of master seed s starts from
    // splitmix64(s XOR (i+1)*0x9E3779B97F4A7C15).
    static RngStream for_path(std::uint64_t master_seed, std::uint64_t path_index) {
        return RngStream(master_seed ^ ((path_index + 1) * 0x9E3779B97F4A7C15ULL));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0,1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on [-1,1).
    double uniform_sym() { return 2.0 * uniform01() - 1.0; }

    // Standard normal via Marsaglia polar; the second value of each pair
    // is cached, so draws stay reproducible per stream.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = uniform_sym();
            v = uniform_sym();
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    // Independent standard normal pair from a single polar iteration.
    void normal_pair(double& z1, double& z2) {
        double u, v, s;
        do {
            u = uniform_sym();
            v = uniform_sym();
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        z1 = u * f;
        z2 = v * f;
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
    double spare_;
    bool has_spare_;
};

}  // namespace quadwalk
