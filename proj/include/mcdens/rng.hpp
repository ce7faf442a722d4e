#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace mcdens {

/// Counter-based random stream (Philox4x32-10).
///
/// The generator is a pure function of (seed, stream_id, counter), so a
/// stream replays bit-identically from the same (seed, stream_id) and
/// distinct stream_ids give statistically independent streams that can be
/// handed to parallel workers without coordination.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
        : seed_(seed), stream_(stream_id) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_; }

    /// Next 64 uniform random bits.
    std::uint64_t next_u64() {
        if (have_ == 0) fill_block();
        return buf_[--have_];
    }

    /// Uniform double in [0,1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Two independent standard normals (Box-Muller; two uniforms in, two out).
    void next_gaussian_pair(double& z0, double& z1) {
        double u1 = next_double();
        double u2 = next_double();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        z0 = radius * std::cos(angle);
        z1 = radius * std::sin(angle);
    }

private:
    // Philox4x32 round constants (Salmon et al., SC'11).
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static void round(std::uint32_t ctr[4], const std::uint32_t key[2]) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
        const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
        const std::uint32_t hi1 = static_cast<std::uint64_t>(p1) >> 32;
        const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
        const std::uint32_t out[4] = {hi1 ^ ctr[1] ^ key[0], lo1,
                                      hi0 ^ ctr[3] ^ key[1], lo0};
        ctr[0] = out[0];
        ctr[1] = out[1];
        ctr[2] = out[2];
        ctr[3] = out[3];
    }

public:
    /// Raw Philox4x32-10 block function; exposed for known-answer tests.
    static void philox4x32_10(const std::uint32_t counter[4],
                              const std::uint32_t key_in[2],
                              std::uint32_t out[4]) {
        std::uint32_t ctr[4] = {counter[0], counter[1], counter[2], counter[3]};
        std::uint32_t key[2] = {key_in[0], key_in[1]};
        round(ctr, key);
        for (int i = 1; i < 10; ++i) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
            round(ctr, key);
        }
        out[0] = ctr[0];
        out[1] = ctr[1];
        out[2] = ctr[2];
        out[3] = ctr[3];
    }

private:
    void fill_block() {
        // 128-bit counter in words 0-1, stream id in words 2-3, seed as key.
        const std::uint32_t ctr[4] = {
            static_cast<std::uint32_t>(block_lo_),
            static_cast<std::uint32_t>(block_lo_ >> 32),
            static_cast<std::uint32_t>(stream_),
            static_cast<std::uint32_t>(stream_ >> 32)};
        const std::uint32_t key[2] = {static_cast<std::uint32_t>(seed_),
                                      static_cast<std::uint32_t>(seed_ >> 32)};
        std::uint32_t out[4];
        philox4x32_10(ctr, key, out);
        buf_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
        buf_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
        have_ = 2;
        if (++block_lo_ == 0) ++block_hi_;
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t block_lo_ = 0;
    std::uint64_t block_hi_ = 0;
    std::uint64_t buf_[2] = {0, 0};
    int have_ = 0;
};

}  // namespace mcdens
