#pragma once

// Seeded randomness and exhaustive enumeration behind one interface.
//
// Host-level case studies draw through RandomSource. SeededSource samples;
// enumerate() replays the computation over every choice sequence and
// returns the exact outcome distribution.

#include "errcred/rat.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace errcred {

inline constexpr std::uint64_t kSplitMixGamma = 0x9E3779B97F4A7C15ull;
inline constexpr std::uint64_t kSplitMixMul1 = 0xBF58476D1CE4E5B9ull;
inline constexpr std::uint64_t kSplitMixMul2 = 0x94D049BB133111EBull;

/// The splitmix64 finalizer applied to x + gamma.
std::uint64_t splitmix64(std::uint64_t x);

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    /// Unbiased draw from {0..bound} by rejection.
    std::uint64_t uniform(std::uint64_t bound);

private:
    std::uint64_t state_;
};

class RandomSource {
public:
    virtual ~RandomSource() = default;
    /// Uniform draw from {0..bound}.
    virtual std::uint64_t uniform(std::uint64_t bound) = 0;
};

class SeededSource final : public RandomSource {
public:
    explicit SeededSource(std::uint64_t seed) : rng_(seed) {}
    std::uint64_t uniform(std::uint64_t bound) override { return rng_.uniform(bound); }

private:
    SplitMix64 rng_;
};

class EnumerationLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

class ReplaySource final : public RandomSource {
public:
    std::uint64_t uniform(std::uint64_t bound) override;

    /// Advances to the next unexplored choice sequence; false when done.
    bool next_path();
    void rewind() { pos_ = 0; }
    Rat weight() const;

private:
    std::vector<std::uint64_t> choices_;
    std::vector<std::uint64_t> bounds_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Exact distribution of run(source) over all choice sequences. `run` must
/// be deterministic given its draws and must terminate on every path.
template <class R>
std::map<R, Rat> enumerate(const std::function<R(RandomSource&)>& run, std::uint64_t max_paths = 10'000'000) {
    std::map<R, Rat> out;
    detail::ReplaySource src;
    std::uint64_t paths = 0;
    do {
        if (++paths > max_paths) throw EnumerationLimit("enumeration exceeded " + std::to_string(max_paths) + " paths");
        src.rewind();
        R r = run(src);
        out[r] += src.weight();
    } while (src.next_path());
    return out;
}

/// Calls visit(result, weight) for every choice sequence of run.
template <class Run, class Visit>
void for_each_path(Run&& run, Visit&& visit, std::uint64_t max_paths = 10'000'000) {
    detail::ReplaySource src;
    std::uint64_t paths = 0;
    do {
        if (++paths > max_paths) throw EnumerationLimit("enumeration exceeded " + std::to_string(max_paths) + " paths");
        src.rewind();
        auto r = run(src);
        visit(r, src.weight());
    } while (src.next_path());
}

} // namespace errcred
