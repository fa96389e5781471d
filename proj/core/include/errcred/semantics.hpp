#pragma once

// Small-step probabilistic semantics and stratified execution.
//
// reduce() finds the redex of a configuration under right-to-left
// evaluation contexts and returns either a deterministic successor, a
// sampling step (bound N plus a continuation for each outcome), or Stuck.
// step() expands that into the exact step distribution. Executor runs the
// breadth-first exec_n recursion, merging equal configurations.

#include "errcred/distr.hpp"
#include "errcred/syntax.hpp"

#include <cstdint>
#include <functional>
#include <stdexcept>

namespace errcred {

class Postcondition;

enum class Mode { Partial, Total };

const char* mode_name(Mode m);
Mode parse_mode(const std::string& s);

enum class Class { Value, Reducible, Stuck };

/// Largest block allocN accepts; larger requests are stuck.
inline constexpr std::int64_t kMaxAllocation = std::int64_t{1} << 20;

inline constexpr std::size_t kDefaultFrontierLimit = 1'000'000;

struct Stepped {
    enum class Tag { Stuck, Det, Rand };

    Tag tag = Tag::Stuck;
    /// Det: the successor.
    Config next;
    /// Rand: outcomes are 0..bound.
    std::uint64_t bound = 0;
    /// Rand: syntactic site of the sampling node.
    int site = -1;
    std::function<Config(std::uint64_t)> resolve;
};

/// One reduction step of a non-value. Values reduce to Stuck.
Stepped reduce(const Config& cfg);

Class classify(const Config& cfg);

using ConfigDistr = Distr<Config, ConfigLess>;

struct StateLess {
    bool operator()(const StatePtr& a, const StatePtr& b) const { return compare(*a, *b) < 0; }
};
using StateDistr = Distr<StatePtr, StateLess>;

/// Exact step distribution; the zero distribution for values and stuck
/// configurations. Throws ResourceError for samplers wider than `limit`.
ConfigDistr step(const Config& cfg, std::size_t limit = kDefaultFrontierLimit);

/// Appends a uniform sample to tape `label`. Throws std::invalid_argument if
/// the label is unallocated.
StateDistr state_step(std::int64_t label, const State& s);

class ResourceError : public std::runtime_error {
public:
    ResourceError(const std::string& msg, std::size_t depth)
        : std::runtime_error(msg), depth_(depth) {}
    std::size_t depth() const { return depth_; }

private:
    std::size_t depth_;
};

struct ExecResult {
    Distr<Val> values;
    Rat stuck_mass;
    Rat residual_mass;
    std::size_t depth = 0;
};

/// Incremental exec_n. The frontier holds the non-value configurations
/// reached in exactly `depth()` steps, with duplicates merged.
class Executor {
public:
    explicit Executor(const Config& start, std::size_t frontier_limit = kDefaultFrontierLimit);

    /// Moves one level deeper.
    void advance();
    void run_to(std::size_t depth);

    std::size_t depth() const { return depth_; }
    /// True once no mass is left in flight; deeper snapshots are identical.
    bool settled() const { return frontier_.empty(); }
    std::size_t frontier_size() const { return frontier_.size(); }

    ExecResult snapshot() const;

private:
    std::map<Config, Rat, ConfigLess> frontier_;
    Distr<Val> values_;
    Rat stuck_;
    std::size_t depth_ = 0;
    std::size_t limit_;
};

ExecResult exec_n(const Config& cfg, std::size_t n, std::size_t frontier_limit = kDefaultFrontierLimit);

struct BoundResult {
    Rat lower;
    Rat upper;
    std::size_t depth = 0;
    Mode mode = Mode::Partial;
};

/// Bracket on the error against `post` read off an exec_n result. The
/// partial error converges to `lower`, the total error to `upper`.
BoundResult bracket(const ExecResult& r, const Postcondition& post, Mode mode);

BoundResult exec_bracket(const Config& cfg, const Postcondition& post, Mode mode, std::size_t n,
                         std::size_t frontier_limit = kDefaultFrontierLimit);

} // namespace errcred
