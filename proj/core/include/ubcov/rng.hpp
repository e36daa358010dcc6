#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace ubcov {

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Independent sub-seed for stream `index` under `seed`. Replicate r of a
/// simulation always draws from derive_seed(seed, r), whatever thread runs it.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// Counter-based generator: the i-th output is mix64(key + i * golden). No
/// hidden state beyond the counter, so streams are cheap to fork and the
/// sequence is identical on every platform (unlike std::normal_distribution).
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) noexcept;

    std::uint64_t next_u64() noexcept;
    /// Uniform on the open interval (0, 1).
    double uniform() noexcept;
    double uniform(double lo, double hi) noexcept;
    /// Standard normal via Box-Muller; the second variate of each pair is cached.
    double normal() noexcept;
    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound) noexcept;
    bool bernoulli(double probability) noexcept;

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

/// Fisher-Yates shuffle driven by CounterRng.
void shuffle(std::span<std::size_t> values, CounterRng& rng) noexcept;

}  // namespace ubcov
