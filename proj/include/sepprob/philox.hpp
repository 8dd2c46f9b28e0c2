/**
 * @file philox.hpp
 * @brief Philox4x32-10 counter-based generator and per-sample normal streams.
 */
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace sepprob {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Ten-round Philox4x32 bijection of the counter under the key.
inline PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key)
{
    constexpr std::uint32_t m0 = 0xD2511F53u, m1 = 0xCD9E8D57u;
    constexpr std::uint32_t w0 = 0x9E3779B9u, w1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        std::uint64_t p0 = static_cast<std::uint64_t>(m0) * ctr[0];
        std::uint64_t p1 = static_cast<std::uint64_t>(m1) * ctr[2];
        auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
        auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += w0;
        key[1] += w1;
    }
    return ctr;
}

/**
 * Stream of variates for one sample: key = seed, counter = (block, 0, index).
 * Distinct (seed, index) pairs never share counter blocks.
 */
class SampleStream {
public:
    SampleStream(std::uint64_t seed, std::uint64_t index)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, index_(index)
    {
    }

    /// Uniform on the open interval (0, 1) with 53 random bits.
    double uniform()
    {
        if (pos_ == 2)
            refill();
        std::uint64_t u = words_[pos_++] >> 11;
        return (static_cast<double>(u) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal by the Box-Muller transform.
    double normal()
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double r = std::sqrt(-2.0 * std::log(uniform()));
        double t = 2.0 * std::numbers::pi * uniform();
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

    /// Chi-square variate with an integer number of degrees of freedom.
    double chi_square(int dof)
    {
        double s = 0;
        for (int i = 0; i < dof; ++i) {
            double z = normal();
            s += z * z;
        }
        return s;
    }

private:
    void refill()
    {
        PhiloxCounter c = philox4x32_10({block_, 0u, static_cast<std::uint32_t>(index_),
                                         static_cast<std::uint32_t>(index_ >> 32)},
                                        key_);
        ++block_;
        words_[0] = (static_cast<std::uint64_t>(c[1]) << 32) | c[0];
        words_[1] = (static_cast<std::uint64_t>(c[3]) << 32) | c[2];
        pos_ = 0;
    }

    PhiloxKey key_;
    std::uint64_t index_;
    std::uint32_t block_ = 0;
    std::array<std::uint64_t, 2> words_{};
    int pos_ = 2;
    double spare_ = 0;
    bool has_spare_ = false;
};

}  // namespace sepprob
