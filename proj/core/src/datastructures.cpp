#include "errcred/datastructures.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <memory>
#include <functional>
#include <stdexcept>

namespace errcred {

// ---------------------------------------------------------------------------
// Vector

VectorRun run_faulty_vector(std::uint64_t a, std::uint64_t b, std::uint64_t m, RandomSource& src) {
    if (b == 0 || a > b) throw std::invalid_argument("run_faulty_vector: need 0 <= a <= b, b > 0");
    VectorRun out;
    auto write = [&] {
        ++out.writes;
        if (src.uniform(b - 1) < a) out.failed = true;
    };
    std::uint64_t s = 0, r = 1;
    for (std::uint64_t i = 0; i < m; ++i) {
        write();
        if (s + 1 == r) {
            for (std::uint64_t k = 0; k < r; ++k) write();
            r *= 2;
            ++out.resizes;
        }
        ++s;
    }
    return out;
}

std::uint64_t vector_writes(std::uint64_t m) {
    std::uint64_t w = 0, s = 0, r = 1;
    for (std::uint64_t i = 0; i < m; ++i, ++s) {
        ++w;
        if (s + 1 == r) {
            w += r;
            r *= 2;
        }
    }
    return w;
}

Rat vector_exact_failure(const Rat& p, std::uint64_t m) {
    return Rat(1) - (Rat(1) - p).pow(static_cast<unsigned>(vector_writes(m)));
}

LedgerReplay vector_ledger_replay(const Rat& eps, std::uint64_t m) {
    LedgerReplay out;
    Rat p;
    std::uint64_t s = 0, r = 1;
    auto check = [&](const char* where) {
        ++out.steps;
        const Rat need = Rat(r) * eps;
        if (p.sign() < 0 || p + Rat(2) * eps * Rat(r - s) < need || !(s < r)) {
            out.ok = false;
            out.detail = std::string(where) + " at s=" + std::to_string(s) + ", r=" + std::to_string(r) +
                         ": reserve " + p.str();
        }
    };
    check("initial");
    for (std::uint64_t i = 0; i < m && out.ok; ++i) {
        p += Rat(2) * eps;
        if (s + 1 == r) {
            p -= Rat(r) * eps;
            r *= 2;
            ++out.epochs;
        }
        ++s;
        check("after pushback");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Lazy hash

std::optional<std::uint64_t> LazyHash::find(std::uint64_t key) const {
    for (const LazyHash* h = this; h; h = h->parent_) {
        auto it = h->map_.find(key);
        if (it != h->map_.end()) return it->second;
    }
    return std::nullopt;
}

bool LazyHash::in_image(std::uint64_t value) const {
    for (const LazyHash* h = this; h; h = h->parent_)
        if (h->image_.count(value)) return true;
    return false;
}

std::size_t LazyHash::size() const {
    std::size_t n = 0;
    for (const LazyHash* h = this; h; h = h->parent_) n += h->map_.size();
    return n;
}

std::uint64_t LazyHash::operator()(std::uint64_t key, RandomSource& src) {
    if (auto v = find(key)) return *v;
    const std::uint64_t v = src.uniform(range_ - 1);
    if (in_image(v)) collided_ = true;
    map_.emplace(key, v);
    image_.insert(v);
    return v;
}

HashRun run_amortized_hash(std::uint64_t n, std::uint64_t MAX, std::uint64_t inserts, RandomSource& src) {
    if (inserts > MAX) throw std::invalid_argument("run_amortized_hash: more inserts than MAX");
    LazyHash h(n + 1);
    HashRun out;
    for (std::uint64_t k = 0; k < inserts; ++k) {
        h(k, src);
        ++out.inserts;
    }
    out.collision = h.collided();
    return out;
}

Rat amortized_hash_eps(std::uint64_t n, std::uint64_t MAX) {
    if (MAX == 0) throw std::invalid_argument("amortized_hash_eps: MAX must be positive");
    return Rat(MAX - 1) / Rat(2 * (n + 1));
}

Rat birthday_collision(std::uint64_t n, std::uint64_t s) {
    Rat survive(1);
    for (std::uint64_t i = 0; i < s; ++i) survive *= Rat(1) - Rat(i) / Rat(n + 1);
    return Rat(1) - survive;
}

Rat birthday_credit(std::uint64_t n, std::uint64_t s) {
    Rat sum;
    for (std::uint64_t i = 0; i < s; ++i) sum += Rat(i) / Rat(n + 1);
    return sum;
}

Rat amortized_hash_reserve(std::uint64_t n, std::uint64_t MAX, std::uint64_t i) {
    if (i > MAX) throw std::invalid_argument("amortized_hash_reserve: i exceeds MAX");
    return Rat(i * (MAX - i)) / Rat(2 * (n + 1));
}

// ---------------------------------------------------------------------------
// Resizing hash

ResizingHash::ResizingHash(std::uint64_t V0, std::uint64_t R0) : v_(V0), r_(R0) {
    if (R0 == 0 || R0 > V0) throw std::invalid_argument("ResizingHash: need 0 < R0 <= V0");
}

std::uint64_t ResizingHash::operator()(std::uint64_t w, RandomSource& src) {
    if (auto it = map_.find(w); it != map_.end()) return it->second;
    const std::uint64_t b = src.uniform(v_ - 1);
    if (!image_.insert(b).second) collided_ = true;
    map_.emplace(w, b);
    if (s_ + 1 == r_) {
        v_ *= 2;
        r_ *= 2;
        ++resizes_;
    }
    ++s_;
    return b;
}

HashRun run_resizing_hash(std::uint64_t V0, std::uint64_t R0, std::uint64_t inserts, RandomSource& src) {
    ResizingHash h(V0, R0);
    HashRun out;
    for (std::uint64_t k = 0; k < inserts; ++k) {
        h(k, src);
        ++out.inserts;
    }
    out.collision = h.collided();
    out.resizes = h.resizes();
    return out;
}

Rat resizing_hash_credit(std::uint64_t V0, std::uint64_t R0) { return Rat(3 * R0) / Rat(4 * V0); }

LedgerReplay resizing_ledger_replay(std::uint64_t V0, std::uint64_t R0, std::uint64_t inserts) {
    if (R0 == 0 || R0 > V0) throw std::invalid_argument("resizing_ledger_replay: need 0 < R0 <= V0");
    LedgerReplay out;
    const Rat c = resizing_hash_credit(V0, R0);
    Rat p;
    std::uint64_t v = V0, s = 0, r = R0;
    auto check = [&](const char* where) {
        ++out.steps;
        Rat owed;
        for (std::uint64_t i = s; i < r; ++i) owed += Rat(i) / Rat(v);
        if (p.sign() < 0 || p + Rat(r - s) * c < owed || !(s < r && r <= v)) {
            out.ok = false;
            out.detail = std::string(where) + " at v=" + std::to_string(v) + ", s=" + std::to_string(s) +
                         ", r=" + std::to_string(r) + ": reserve " + p.str() + ", owed " + owed.str();
        }
    };
    check("initial");
    for (std::uint64_t k = 0; k < inserts && out.ok; ++k) {
        p += c;
        p -= Rat(s) / Rat(v);
        if (s + 1 == r) {
            v *= 2;
            r *= 2;
            ++out.epochs;
        }
        ++s;
        check("after insert");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Hash set

ResizingHashMap::ResizingHashMap(std::uint64_t V0, std::uint64_t R0) : hash_(V0, R0), table_(V0), r_(R0) {}

bool ResizingHashMap::insert(std::uint64_t w, RandomSource& src) {
    const std::uint64_t b = hash_(w, src);
    // Only a dropped insert can leave the table behind the hash.
    if (table_.size() < hash_.v()) table_.resize(hash_.v());
    auto& slot = table_.at(b);
    if (slot) return *slot == w;
    slot = w;
    if (s_ + 1 == r_) {
        table_.resize(2 * table_.size());
        r_ *= 2;
    }
    ++s_;
    return true;
}

std::set<std::uint64_t> ResizingHashMap::elements() const {
    std::set<std::uint64_t> out;
    for (const auto& slot : table_)
        if (slot) out.insert(*slot);
    return out;
}

HashMapRun run_hashmap_insert(std::uint64_t V0, std::uint64_t R0, const std::vector<std::uint64_t>& keys,
                              RandomSource& src) {
    ResizingHashMap hm(V0, R0);
    HashMapRun out;
    for (auto k : keys)
        if (!hm.insert(k, src)) out.ok = false;
    out.set = hm.elements();
    return out;
}

// ---------------------------------------------------------------------------
// Merkle trees

MerkleTree::MerkleTree(unsigned V, unsigned height, std::vector<std::uint64_t> leaves, LazyHash& hash,
                       RandomSource& src)
    : V_(V), height_(height), leaves_(std::move(leaves)) {
    if (V == 0 || V > 30) throw std::invalid_argument("MerkleTree: V must be in 1..30");
    if (hash.range() != (std::uint64_t{1} << V)) throw std::invalid_argument("MerkleTree: hash range is not 2^V");
    if (leaves_.size() != (std::size_t{1} << height))
        throw std::invalid_argument("MerkleTree: need exactly 2^height leaves");
    std::vector<std::uint64_t> level;
    for (auto v : leaves_) level.push_back(hash(v, src));
    levels_.push_back(level);
    for (unsigned l = 0; l < height; ++l) {
        const auto& below = levels_.back();
        std::vector<std::uint64_t> up;
        for (std::size_t i = 0; i < below.size(); i += 2) up.push_back(hash((below[i] << V) + below[i + 1], src));
        levels_.push_back(std::move(up));
    }
}

MerkleProof MerkleTree::proof(std::size_t leaf_index) const {
    MerkleProof p(height_);
    std::size_t idx = leaf_index;
    for (unsigned l = 0; l < height_; ++l, idx /= 2) {
        const bool left = idx % 2 == 0;
        p[height_ - 1 - l] = ProofStep{left, levels_[l][left ? idx + 1 : idx - 1]};
    }
    return p;
}

bool MerkleTree::matches(const MerkleProof& proof, std::uint64_t v) const {
    if (proof.size() != height_) return false;
    std::size_t idx = 0;
    for (unsigned d = 0; d < height_; ++d) {
        const unsigned level = height_ - 1 - d;
        const std::size_t child = 2 * idx + (proof[d].left ? 0 : 1);
        const std::size_t sibling = proof[d].left ? child + 1 : child - 1;
        if (levels_[level][sibling] != proof[d].sibling) return false;
        idx = child;
    }
    return leaves_[idx] == v;
}

std::uint64_t merkle_hash_path(const MerkleProof& proof, std::uint64_t v, unsigned V, LazyHash& hash,
                               RandomSource& src) {
    std::uint64_t acc = hash(v, src);
    for (auto it = proof.rbegin(); it != proof.rend(); ++it)
        acc = it->left ? hash((acc << V) + it->sibling, src) : hash((it->sibling << V) + acc, src);
    return acc;
}

bool merkle_check(std::uint64_t root, const MerkleProof& proof, std::uint64_t v, unsigned V, LazyHash& hash,
                  RandomSource& src) {
    return root == merkle_hash_path(proof, v, V, hash, src);
}

std::vector<Forgery> single_flip_forgeries(const MerkleTree& tree, std::size_t leaf_index) {
    const MerkleProof honest = tree.proof(leaf_index);
    const std::uint64_t v = tree.leaf(leaf_index);
    std::vector<Forgery> out;
    for (std::size_t d = 0; d < honest.size(); ++d) {
        Forgery f{leaf_index, "direction", honest, v};
        f.proof[d].left = !f.proof[d].left;
        out.push_back(std::move(f));
        for (unsigned bit = 0; bit < tree.V(); ++bit) {
            Forgery g{leaf_index, "sibling", honest, v};
            g.proof[d].sibling ^= std::uint64_t{1} << bit;
            out.push_back(std::move(g));
        }
    }
    for (unsigned bit = 0; bit < tree.V(); ++bit)
        out.push_back(Forgery{leaf_index, "leaf", honest, v ^ (std::uint64_t{1} << bit)});
    return out;
}

std::vector<std::uint64_t> default_leaves(unsigned height) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << height); ++i) out.push_back(i);
    return out;
}

std::uint64_t merkle_max_queries(unsigned height) { return (std::uint64_t{2} << height) - 1 + height; }

MerkleExhaustive merkle_exhaustive(unsigned V, unsigned height, const std::vector<std::uint64_t>& leaves) {
    MerkleExhaustive out;
    out.V = V;
    out.height = height;
    out.max_queries = merkle_max_queries(height);
    out.eps_max = amortized_hash_eps((std::uint64_t{1} << V) - 1, out.max_queries);
    out.budget_height = out.eps_max * Rat(height);

    struct Built {
        std::unique_ptr<LazyHash> hash;
        std::unique_ptr<MerkleTree> tree;
    };
    std::vector<Rat> forged, forged_cf, silent;
    for_each_path(
        [&](RandomSource& src) {
            Built b;
            b.hash = std::make_unique<LazyHash>(std::uint64_t{1} << V);
            b.tree = std::make_unique<MerkleTree>(V, height, leaves, *b.hash, src);
            return b;
        },
        [&](const Built& b, const Rat& w) {
            ++out.tree_paths;
            const bool tree_cf = !b.hash->collided();
            if (tree_cf) out.tree_collision_free += w;
            std::size_t f_index = 0;
            for (std::size_t i = 0; i < b.tree->leaf_count(); ++i) {
                {
                    LazyHash view(b.hash.get());
                    detail::ReplaySource none;
                    if (!merkle_check(b.tree->root(), b.tree->proof(i), b.tree->leaf(i), V, view, none))
                        out.honest_always_accepted = false;
                }
                for (const Forgery& f : single_flip_forgeries(*b.tree, i)) {
                    if (f_index == forged_cf.size()) {
                        forged.emplace_back();
                        forged_cf.emplace_back();
                        silent.emplace_back();
                    }
                    const bool valid = b.tree->matches(f.proof, f.value);
                    for_each_path(
                        [&](RandomSource& src) {
                            LazyHash view(b.hash.get());
                            const bool accepted = merkle_check(b.tree->root(), f.proof, f.value, V, view, src);
                            return std::pair{accepted && !valid, view.collided()};
                        },
                        [&](const std::pair<bool, bool>& r, const Rat& w2) {
                            const Rat joint = w * w2;
                            if (r.first) forged[f_index] += joint;
                            if (r.first && tree_cf) forged_cf[f_index] += joint;
                            if (r.first && !r.second) silent[f_index] += joint;
                        });
                    ++f_index;
                }
            }
        });
    out.forgeries = forged_cf.size();
    for (std::size_t i = 0; i < forged_cf.size(); ++i) {
        out.worst_forged_accept = max(out.worst_forged_accept, forged[i]);
        out.worst_forged_accept_cf = max(out.worst_forged_accept_cf, forged_cf[i]);
        out.worst_accept_without_collision = max(out.worst_accept_without_collision, silent[i]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// WalkSAT

Cnf Cnf::from_json(const nlohmann::json& j) {
    Cnf f;
    f.num_vars = j.at("num_vars").get<std::uint64_t>();
    for (const auto& c : j.at("clauses")) {
        if (c.size() != 3) throw std::invalid_argument("Cnf: every clause needs exactly three literals");
        Clause cl;
        for (std::size_t k = 0; k < 3; ++k) {
            cl[k].var = c[k].at(0).get<std::uint64_t>();
            cl[k].positive = c[k].at(1).get<bool>();
            if (cl[k].var >= f.num_vars) throw std::invalid_argument("Cnf: variable index out of range");
        }
        f.clauses.push_back(cl);
    }
    return f;
}

nlohmann::json Cnf::to_json() const {
    nlohmann::json cs = nlohmann::json::array();
    for (const auto& c : clauses) {
        nlohmann::json cl = nlohmann::json::array();
        for (const auto& l : c) cl.push_back({l.var, l.positive});
        cs.push_back(cl);
    }
    return {{"num_vars", num_vars}, {"clauses", cs}};
}

Cnf load_cnf(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return Cnf::from_json(nlohmann::json::parse(in));
}

namespace {

bool clause_holds(const Clause& c, const std::vector<bool>& a) {
    for (const auto& l : c)
        if (a[l.var] == l.positive) return true;
    return false;
}

} // namespace

bool satisfies(const Cnf& f, const std::vector<bool>& assignment) {
    if (assignment.size() != f.num_vars) return false;
    for (const auto& c : f.clauses)
        if (!clause_holds(c, assignment)) return false;
    return true;
}

WalkSatRun run_walksat(const Cnf& f, RandomSource& src, std::uint64_t flip_budget) {
    WalkSatRun out;
    out.assignment.resize(f.num_vars);
    for (std::uint64_t i = 0; i < f.num_vars; ++i) out.assignment[i] = src.uniform(1) == 1;
    for (;;) {
        const Clause* unsat = nullptr;
        for (const auto& c : f.clauses)
            if (!clause_holds(c, out.assignment)) {
                unsat = &c;
                break;
            }
        if (!unsat) {
            out.solved = true;
            return out;
        }
        if (out.flips >= flip_budget) return out;
        const auto var = (*unsat)[src.uniform(2)].var;
        out.assignment[var] = !out.assignment[var];
        ++out.flips;
    }
}

} // namespace errcred
