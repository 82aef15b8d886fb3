#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hint {

/// SplitMix64 finalizer; used to derive independent sub-seeds from one run seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Sub-seed for one collection (side is 1 or 2). All randomness in a run flows
/// from the single run seed through this derivation, so an isolated
/// single-collection pipeline can reproduce the seed the joint pipeline used.
inline std::uint64_t side_seed(std::uint64_t run_seed, int side) {
    return splitmix64(run_seed ^ splitmix64(static_cast<std::uint64_t>(side)));
}

/// Seeded generator with fixed mappings to [0,1) and [0,n). std::mt19937_64 is
/// pinned by the standard and the mappings below avoid libstdc++'s
/// distribution objects, so sequences are identical across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    /// Uniform double in [0,1) with 53 random bits.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0,n). n must be positive.
    int uniform_int(int n) {
        int v = static_cast<int>(uniform() * static_cast<double>(n));
        return v >= n ? n - 1 : v;
    }

    /// Standard normal via Box-Muller (pair cached).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace hint
