#ifndef IRFKIT_RNG_HPP
#define IRFKIT_RNG_HPP

#include <cmath>
#include <cstdint>

namespace irfkit {

/// Deterministic 64-bit generator (splitmix64 stream) with Box-Muller
/// normals. The algorithm name is pinned in run manifests so outputs can
/// be reproduced. Distinct replicate streams come from remixing the seed
/// with the replicate index.
class Rng {
public:
    static constexpr const char* algorithm = "splitmix64+box-muller";

    explicit Rng(std::uint64_t seed) : state_(seed) {}

    static Rng for_replicate(std::uint64_t seed, std::uint64_t replicate) {
        return Rng(mix(seed ^ mix(replicate + 0x9E3779B97F4A7C15ULL)));
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    /// Uniform on (0, 1): 53-bit mantissa, zero excluded.
    double next_double() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; draws come in deterministic pairs.
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_double();
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace irfkit

#endif
