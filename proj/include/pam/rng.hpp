#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace pam {

// Philox4x32-10 counter-based generator. Each (seed, stream) pair is an
// independent substream addressed by a 64-bit block counter, so Monte Carlo
// samples can be generated in any order (and on any number of workers) with
// bitwise-identical results.
struct Philox4x32 {
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static std::array<std::uint32_t, 4> block(std::uint64_t key,
                                              std::uint64_t ctr_hi,
                                              std::uint64_t ctr_lo) {
        std::uint32_t x0 = static_cast<std::uint32_t>(ctr_lo);
        std::uint32_t x1 = static_cast<std::uint32_t>(ctr_lo >> 32);
        std::uint32_t x2 = static_cast<std::uint32_t>(ctr_hi);
        std::uint32_t x3 = static_cast<std::uint32_t>(ctr_hi >> 32);
        std::uint32_t k0 = static_cast<std::uint32_t>(key);
        std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
        for (int round = 0; round < 10; ++round) {
            std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * x0;
            std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * x2;
            std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            std::uint32_t y0 = hi1 ^ x1 ^ k0;
            std::uint32_t y1 = lo1;
            std::uint32_t y2 = hi0 ^ x3 ^ k1;
            std::uint32_t y3 = lo0;
            x0 = y0;
            x1 = y1;
            x2 = y2;
            x3 = y3;
            k0 += kWeyl0;
            k1 += kWeyl1;
        }
        return {x0, x1, x2, x3};
    }
};

// Stateful convenience wrapper over Philox substreams. normal() uses
// Box-Muller on pairs of 53-bit uniforms; every draw is a pure function of
// (seed, stream, position).
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : seed_(seed), stream_(stream) {}

    double uniform() {
        if (uniform_phase_ == 0) refill();
        double u = uniform_phase_ == 2 ? u0_ : u1_;
        --uniform_phase_;
        return u;
    }

    double normal() {
        if (have_cached_normal_) {
            have_cached_normal_ = false;
            return cached_normal_;
        }
        double u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        cached_normal_ = r * std::sin(a);
        have_cached_normal_ = true;
        return r * std::cos(a);
    }

    std::uint64_t stream() const { return stream_; }

private:
    void refill() {
        auto w = Philox4x32::block(seed_, stream_, block_++);
        u0_ = to_unit(w[0], w[1]);
        u1_ = to_unit(w[2], w[3]);
        uniform_phase_ = 2;
    }

    // Map 64 random bits to (0, 1]; never 0 so log() is safe.
    static double to_unit(std::uint32_t a, std::uint32_t b) {
        std::uint64_t x = (static_cast<std::uint64_t>(a) << 32) | b;
        return static_cast<double>((x >> 11) + 1) * 0x1.0p-53;
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    double u0_ = 0.0, u1_ = 0.0;
    int uniform_phase_ = 0;
    double cached_normal_ = 0.0;
    bool have_cached_normal_ = false;
};

} // namespace pam
