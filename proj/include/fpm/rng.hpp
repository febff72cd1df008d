#pragma once

#include <cmath>
#include <cstdint>

namespace fpm {

/// Deterministic, splittable random stream. Value-typed: copies advance
/// independently, and substream() derives statistically independent child
/// streams from (state, index), so parallel consumers agree bit-for-bit
/// regardless of scheduling.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : state_(seed ^ 0x9e3779b97f4a7c15ull) {
        // warm up so nearby seeds decorrelate
        next_u64();
        next_u64();
    }

    RandomStream substream(std::uint64_t index) const {
        std::uint64_t s = state_;
        s += 0x9e3779b97f4a7c15ull * (index + 1);
        RandomStream child(mix(s));
        return child;
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        return mix(state_);
    }

    /// Uniform in (0, 1), never exactly 0 or 1.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller, pair-cached.
    double next_normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    /// Normal truncated to +-max_sigmas by rejection.
    double next_normal_truncated(double max_sigmas = 6.0) {
        for (;;) {
            const double z = next_normal();
            if (std::abs(z) <= max_sigmas) return z;
        }
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace fpm
