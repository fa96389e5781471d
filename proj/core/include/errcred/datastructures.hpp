#pragma once

// Randomized data structures run at host level with injected randomness:
// a vector over a faulty allocator, lazily sampled hash functions (fixed
// range and resizing), a resizing hash set, Merkle trees and WalkSAT.
//
// Every runner draws only through RandomSource, so the same code serves
// seeded sampling and exhaustive enumeration.

#include "errcred/random.hpp"
#include "errcred/rat.hpp"

#include <nlohmann/json_fwd.hpp>

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace errcred {

// ---------------------------------------------------------------------------
// Vector over a faulty allocator

struct VectorRun {
    bool failed = false;
    std::uint64_t writes = 0;
    std::uint64_t resizes = 0;
};

/// m pushbacks into a vector of initial capacity 1. Each write faults when
/// uniform(b - 1) < a, i.e. with probability a / b.
VectorRun run_faulty_vector(std::uint64_t a, std::uint64_t b, std::uint64_t m, RandomSource& src);

/// Write count W(m): one store per pushback plus r writes per resize of a
/// block of size r.
std::uint64_t vector_writes(std::uint64_t m);

/// 1 - (1 - p)^W(m).
Rat vector_exact_failure(const Rat& p, std::uint64_t m);

struct LedgerReplay {
    bool ok = true;
    std::uint64_t epochs = 0;
    std::uint64_t steps = 0;
    std::string detail;
};

/// Replays the credit reserve of m pushbacks paying 3 eps each, checking
/// p >= 0 and p + 2 eps (r - s) >= r eps after every operation.
LedgerReplay vector_ledger_replay(const Rat& eps, std::uint64_t m);

// ---------------------------------------------------------------------------
// Lazily sampled hash functions

/// Hash over values {0..range-1}, sampled on first query. A child view
/// shares its parent's entries and records only new ones.
class LazyHash {
public:
    explicit LazyHash(std::uint64_t range) : range_(range) {}
    LazyHash(const LazyHash* parent) : range_(parent->range_), parent_(parent) {}

    std::uint64_t operator()(std::uint64_t key, RandomSource& src);
    std::optional<std::uint64_t> find(std::uint64_t key) const;

    std::uint64_t range() const { return range_; }
    std::size_t size() const;
    /// True once two distinct keys have received the same value.
    bool collided() const { return collided_ || (parent_ && parent_->collided()); }

private:
    bool in_image(std::uint64_t value) const;

    std::uint64_t range_;
    const LazyHash* parent_ = nullptr;
    std::map<std::uint64_t, std::uint64_t> map_;
    std::multiset<std::uint64_t> image_;
    bool collided_ = false;
};

struct HashRun {
    bool collision = false;
    std::uint64_t inserts = 0;
    std::uint64_t resizes = 0;
};

/// `inserts` distinct keys through a hash over {0..n}. Requires inserts <= MAX.
HashRun run_amortized_hash(std::uint64_t n, std::uint64_t MAX, std::uint64_t inserts, RandomSource& src);

/// (MAX - 1) / (2 (n + 1)).
Rat amortized_hash_eps(std::uint64_t n, std::uint64_t MAX);

/// 1 - prod_{i<s} (1 - i/(n+1)).
Rat birthday_collision(std::uint64_t n, std::uint64_t s);

/// sum_{i<s} i/(n+1).
Rat birthday_credit(std::uint64_t n, std::uint64_t s);

/// Reserve left after i queries paying eps_MAX each: i (MAX - i) / (2 (n+1)).
Rat amortized_hash_reserve(std::uint64_t n, std::uint64_t MAX, std::uint64_t i);

/// Hash whose value space doubles together with its resize threshold.
class ResizingHash {
public:
    ResizingHash(std::uint64_t V0, std::uint64_t R0);

    /// Returns the hash of w, sampling from {0..v-1} on a fresh key.
    std::uint64_t operator()(std::uint64_t w, RandomSource& src);

    std::uint64_t v() const { return v_; }
    std::uint64_t s() const { return s_; }
    std::uint64_t r() const { return r_; }
    std::uint64_t resizes() const { return resizes_; }
    bool collided() const { return collided_; }

private:
    std::map<std::uint64_t, std::uint64_t> map_;
    std::set<std::uint64_t> image_;
    std::uint64_t v_, s_ = 0, r_;
    std::uint64_t resizes_ = 0;
    bool collided_ = false;
};

HashRun run_resizing_hash(std::uint64_t V0, std::uint64_t R0, std::uint64_t inserts, RandomSource& src);

/// 3 R0 / (4 V0).
Rat resizing_hash_credit(std::uint64_t V0, std::uint64_t R0);

/// Replays the reserve over `inserts` fresh keys, checking
/// p + (r - s) c >= sum_{i=s}^{r-1} i/v, p >= 0 and s < r <= v throughout.
LedgerReplay resizing_ledger_replay(std::uint64_t V0, std::uint64_t R0, std::uint64_t inserts);

// ---------------------------------------------------------------------------
// Resizing hash set

class ResizingHashMap {
public:
    ResizingHashMap(std::uint64_t V0, std::uint64_t R0);

    /// Inserts w. Returns false when w was dropped because its slot held a
    /// different element.
    bool insert(std::uint64_t w, RandomSource& src);

    std::set<std::uint64_t> elements() const;
    std::uint64_t capacity() const { return table_.size(); }

private:
    ResizingHash hash_;
    std::vector<std::optional<std::uint64_t>> table_;
    std::uint64_t s_ = 0, r_;
};

struct HashMapRun {
    std::set<std::uint64_t> set;
    bool ok = true;
};

HashMapRun run_hashmap_insert(std::uint64_t V0, std::uint64_t R0, const std::vector<std::uint64_t>& keys,
                              RandomSource& src);

// ---------------------------------------------------------------------------
// Merkle trees

struct ProofStep {
    /// True when the path continues through the left child.
    bool left = false;
    std::uint64_t sibling = 0;

    friend bool operator==(const ProofStep&, const ProofStep&) = default;
};

/// Steps from the root down to the leaf's parent.
using MerkleProof = std::vector<ProofStep>;

class MerkleTree {
public:
    /// Builds a tree over 2^height leaves, hashing bottom-up.
    MerkleTree(unsigned V, unsigned height, std::vector<std::uint64_t> leaves, LazyHash& hash,
               RandomSource& src);

    unsigned V() const { return V_; }
    unsigned height() const { return height_; }
    std::uint64_t root() const { return levels_.back().front(); }
    std::uint64_t leaf(std::size_t i) const { return leaves_[i]; }
    std::size_t leaf_count() const { return leaves_.size(); }
    /// Hash of node `index` at `level` (0 = leaves).
    std::uint64_t node(unsigned level, std::size_t index) const { return levels_[level][index]; }

    MerkleProof proof(std::size_t leaf_index) const;

    /// True iff the proof describes a real root-to-leaf path, every sibling
    /// hash matches, and the leaf there holds v.
    bool matches(const MerkleProof& proof, std::uint64_t v) const;

private:
    unsigned V_;
    unsigned height_;
    std::vector<std::uint64_t> leaves_;
    std::vector<std::vector<std::uint64_t>> levels_;
};

/// Folds the proof: hash(v) at the bottom, then hash(p * 2^V + sibling) or
/// hash(sibling * 2^V + p) per step, outermost step last.
std::uint64_t merkle_hash_path(const MerkleProof& proof, std::uint64_t v, unsigned V, LazyHash& hash,
                               RandomSource& src);

bool merkle_check(std::uint64_t root, const MerkleProof& proof, std::uint64_t v, unsigned V, LazyHash& hash,
                  RandomSource& src);

struct Forgery {
    std::size_t leaf_index = 0;
    std::string kind;
    MerkleProof proof;
    std::uint64_t value = 0;
};

/// Single-flip forgeries of the honest proof for `leaf_index`: each
/// direction bit, each bit of each sibling hash, each of the low V bits of
/// the leaf value.
std::vector<Forgery> single_flip_forgeries(const MerkleTree& tree, std::size_t leaf_index);

/// Distinct default leaves for a tree of the given height.
std::vector<std::uint64_t> default_leaves(unsigned height);

struct MerkleExhaustive {
    unsigned V = 0;
    unsigned height = 0;
    std::uint64_t max_queries = 0;
    Rat eps_max;
    Rat budget_height;
    Rat tree_collision_free;
    /// Worst case over forgeries of Pr[accepted and invalid].
    Rat worst_forged_accept;
    /// Worst case over forgeries of Pr[accepted and invalid and tree collision-free].
    Rat worst_forged_accept_cf;
    /// Worst case over forgeries of Pr[accepted and invalid and no collision anywhere].
    Rat worst_accept_without_collision;
    bool honest_always_accepted = true;
    std::uint64_t forgeries = 0;
    std::uint64_t tree_paths = 0;
};

/// Exact probabilities over every hash assignment.
MerkleExhaustive merkle_exhaustive(unsigned V, unsigned height, const std::vector<std::uint64_t>& leaves);

/// MAX = (nodes of the tree) + height.
std::uint64_t merkle_max_queries(unsigned height);

// ---------------------------------------------------------------------------
// WalkSAT

struct Literal {
    std::uint64_t var = 0;
    bool positive = true;
};

using Clause = std::array<Literal, 3>;

struct Cnf {
    std::uint64_t num_vars = 0;
    std::vector<Clause> clauses;

    static Cnf from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

Cnf load_cnf(const std::string& path);

bool satisfies(const Cnf& f, const std::vector<bool>& assignment);

struct WalkSatRun {
    bool solved = false;
    std::uint64_t flips = 0;
    std::vector<bool> assignment;
};

/// Random initial assignment, then repeatedly flips a uniformly chosen
/// variable of the first unsatisfied clause.
WalkSatRun run_walksat(const Cnf& f, RandomSource& src, std::uint64_t flip_budget);

inline std::uint64_t walksat_default_budget(const Cnf& f) { return 64 * f.num_vars * f.num_vars; }

} // namespace errcred
