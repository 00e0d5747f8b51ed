#pragma once

#include <cstdint>
#include <cmath>

namespace nnpsi {

// splitmix64, used to derive well-separated seeds for substreams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256** generator with explicit, platform-independent draws.
// Every stochastic routine in the library takes a seed and derives its
// stream through Rng::stream, so replication r of an experiment is a pure
// function of (seed, r) and results do not depend on thread schedule.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
        has_spare_ = false;
        spare_ = 0.0;
    }

    static Rng stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
        std::uint64_t sm = seed;
        std::uint64_t h = splitmix64(sm);
        sm = h ^ (a + 0x9e3779b97f4a7c15ULL);
        h = splitmix64(sm);
        sm = h ^ (b + 0x7f4a7c159e3779b9ULL);
        return Rng(splitmix64(sm));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform on [0,1) with 53 random bits
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform integer in {0, ..., n-1}; n > 0
    int uniform_int(int n) {
        // rejection sampling on the top bits keeps the draw exactly uniform
        const std::uint64_t un = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
        std::uint64_t r;
        do {
            r = next_u64();
        } while (r >= limit);
        return static_cast<int>(r % un);
    }

    // standard normal via Marsaglia polar method (no libm trig)
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
    bool has_spare_;
    double spare_;
};

} // namespace nnpsi
