#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

namespace funbench {

/// Philox4x32-10 block function: maps (counter, key) to four 32-bit words.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// Counter-based random stream.
///
/// The 64-bit seed is the Philox key; the 64-bit stream id occupies the high
/// half of the counter and a block index the low half. Two streams with the
/// same seed and different ids never overlap, so each (replicate, role) pair
/// can own its own stream and draw in any order or thread.
///
/// All distributions are implemented here rather than through <random>
/// adaptors, whose output is implementation-defined.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64();
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Uniform on (0, 1).
    double uniform_open();
    double normal(double mean = 0.0, double sd = 1.0);
    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound);
    bool bernoulli(double p);

    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    void refill();

    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int used_ = 4;  // 32-bit words consumed from buffer_
    bool has_spare_normal_ = false;
    double spare_normal_ = 0.0;
};

/// Stream ids for the roles that draw randomness inside one replicate.
enum class StreamRole : std::uint64_t {
    Scores = 1,
    Noise = 2,
    Labels = 3,
    TestScores = 4,
    TestNoise = 5,
    TestLabels = 6,
    Init = 7,
    Shuffle = 8,
    Split = 9,
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view text);

/// Seed for one replicate of one benchmark cell:
/// splitmix64(splitmix64(master ^ fnv1a64(label)) + replicate).
std::uint64_t derive_seed(std::uint64_t master, std::string_view label, std::uint64_t replicate);

}  // namespace funbench
