#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace excision {

/// Finalizer of splitmix64; used to decorrelate seeds and stream tags.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Seed for a named sub-experiment of a master seed (e.g. the two sides of an
/// identity check draw from disjoint families of streams).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag) noexcept
{
    return splitmix64(master ^ splitmix64(tag + 0x632BE59BD9B4E019ull));
}

/**
 * Counter-based random stream (Philox4x32-10).
 *
 * The key is the 64-bit master seed, the upper half of the 128-bit counter is
 * the stream id and the lower half counts blocks. Two streams with equal
 * (master_seed, stream_id) produce identical sequences; distinct stream ids
 * address disjoint counter ranges.
 *
 * Satisfies UniformRandomBitGenerator with 64-bit output. Gaussian variates
 * use the Marsaglia polar method, fixed so that outputs do not depend on the
 * standard library's distribution implementations.
 */
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t master_seed, std::uint64_t stream_id) noexcept
        : seed_{master_seed}, stream_{stream_id}
    {
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept
    {
        return std::numeric_limits<result_type>::max();
    }

    std::uint64_t master_seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_; }

    result_type operator()() noexcept
    {
        std::uint64_t hi = next32();
        std::uint64_t lo = next32();
        return (hi << 32) | lo;
    }

    /// Uniform on the open interval (0, 1).
    double uniform() noexcept
    {
        return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() noexcept
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u;
        double v;
        double s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    /// Standard exponential variate.
    double exponential() noexcept { return -std::log(uniform()); }

private:
    std::uint32_t next32() noexcept
    {
        if (pos_ == 4) {
            refill();
        }
        return buffer_[pos_++];
    }

    static void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept
    {
        std::uint64_t p = static_cast<std::uint64_t>(a) * b;
        hi = static_cast<std::uint32_t>(p >> 32);
        lo = static_cast<std::uint32_t>(p);
    }

    void refill() noexcept
    {
        std::array<std::uint32_t, 4> c{static_cast<std::uint32_t>(block_),
                                       static_cast<std::uint32_t>(block_ >> 32),
                                       static_cast<std::uint32_t>(stream_),
                                       static_cast<std::uint32_t>(stream_ >> 32)};
        std::uint32_t k0 = static_cast<std::uint32_t>(seed_);
        std::uint32_t k1 = static_cast<std::uint32_t>(seed_ >> 32);
        for (int round = 0; round < 10; ++round) {
            std::uint32_t hi0, lo0, hi1, lo1;
            mulhilo(0xD2511F53u, c[0], hi0, lo0);
            mulhilo(0xCD9E8D57u, c[2], hi1, lo1);
            c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
            k0 += 0x9E3779B9u;
            k1 += 0xBB67AE85u;
        }
        buffer_ = c;
        pos_ = 0;
        ++block_;
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int pos_ = 4;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace excision
