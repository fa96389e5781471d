#pragma once

// Abstract syntax of the probabilistic object language: an untyped
// call-by-value lambda calculus with recursive functions, pairs, sums,
// heap-allocated arrays, uniform sampling and presampling tapes.
//
// Expressions are immutable and shared. Every node caches its structural
// hash, its free variables and whether it is a value, so equality tests and
// substitution into closed subterms are cheap.

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace errcred {

enum class Kind : std::uint8_t {
    Int,
    Bool,
    Unit,
    Loc,
    Label,
    Var,
    Rec,
    App,
    BinOp,
    If,
    Pair,
    Fst,
    Snd,
    InjL,
    InjR,
    Match,
    AllocN,
    Load,
    Store,
    Rand,
    AllocTape,
    RandLbl,
};

enum class BinOp : std::uint8_t { Add, Sub, Mul, Eq, Lt, Le, And, Or };

const char* binop_symbol(BinOp op);

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Binder name that binds nothing (`lam`, `let _`, `seq`).
inline constexpr const char* kAnonymous = "_";

class Expr {
public:
    Kind kind() const { return kind_; }
    BinOp op() const { return op_; }
    std::int64_t num() const { return num_; }
    bool boolean() const { return num_ != 0; }
    /// Var: the name. Rec: function name. Match: inl binder.
    const std::string& name() const { return name_; }
    /// Rec: parameter name. Match: inr binder.
    const std::string& name2() const { return name2_; }
    const ExprPtr& kid(std::size_t i) const { return kids_[i]; }
    std::size_t arity() const { return arity_; }

    /// Preorder index of a rand node within its program, or -1.
    int site() const { return site_; }

    bool is_value() const { return value_; }
    bool closed() const { return free_.empty(); }
    const std::vector<std::string>& free_vars() const { return free_; }
    std::size_t hash() const { return hash_; }

    // Constructors. Each computes the cached metadata.
    static ExprPtr integer(std::int64_t n);
    static ExprPtr boolean(bool b);
    static ExprPtr unit();
    static ExprPtr loc(std::int64_t l);
    static ExprPtr label(std::int64_t l);
    static ExprPtr var(std::string name);
    static ExprPtr rec(std::string f, std::string x, ExprPtr body);
    static ExprPtr app(ExprPtr fn, ExprPtr arg);
    static ExprPtr binop(BinOp op, ExprPtr lhs, ExprPtr rhs);
    static ExprPtr if_(ExprPtr cond, ExprPtr then_e, ExprPtr else_e);
    static ExprPtr pair(ExprPtr a, ExprPtr b);
    static ExprPtr fst(ExprPtr e);
    static ExprPtr snd(ExprPtr e);
    static ExprPtr inl(ExprPtr e);
    static ExprPtr inr(ExprPtr e);
    static ExprPtr match(ExprPtr scrut, std::string x, ExprPtr left, std::string y, ExprPtr right);
    static ExprPtr alloc_n(ExprPtr count, ExprPtr init);
    static ExprPtr load(ExprPtr e);
    static ExprPtr store(ExprPtr target, ExprPtr value);
    static ExprPtr rand(ExprPtr bound, int site = -1);
    static ExprPtr alloc_tape(ExprPtr bound);
    static ExprPtr rand_lbl(ExprPtr bound, ExprPtr label, int site = -1);

    /// Same node with children replaced (site and names preserved).
    static ExprPtr rebuild(const Expr& like, std::array<ExprPtr, 3> kids);
    static ExprPtr with_site(const Expr& like, int site);

private:
    struct Token {};

public:
    explicit Expr(Token) {}

private:
    static ExprPtr finish(std::shared_ptr<Expr> e);

    Kind kind_ = Kind::Unit;
    BinOp op_ = BinOp::Add;
    std::int64_t num_ = 0;
    std::string name_;
    std::string name2_;
    std::array<ExprPtr, 3> kids_{};
    std::uint8_t arity_ = 0;
    int site_ = -1;
    bool value_ = false;
    std::size_t hash_ = 0;
    std::vector<std::string> free_;
};

/// Structural order: ignores rand-site annotations. Hash-first, so it is a
/// total order suitable for map keys but not a readable order.
std::strong_ordering compare(const Expr& a, const Expr& b);
bool structurally_equal(const ExprPtr& a, const ExprPtr& b);

struct ExprLess {
    bool operator()(const ExprPtr& a, const ExprPtr& b) const { return compare(*a, *b) < 0; }
};

/// Capture-free substitution of the closed value `v` for `x`. Binders named
/// `x` shadow; closed subterms are shared, not copied.
ExprPtr subst(const ExprPtr& e, const std::string& x, const ExprPtr& v);

/// Renumbers rand and labelled-rand nodes by preorder position.
ExprPtr number_rand_sites(const ExprPtr& e);

/// Number of rand sites in a numbered program, and their nodes by id.
std::vector<ExprPtr> rand_sites(const ExprPtr& e);

/// True if some `rec f x body` has `f` free in `body`.
bool has_recursion(const ExprPtr& e);

/// A closed value. Wraps an expression for which is_value() holds.
class Val {
public:
    explicit Val(ExprPtr e);
    const ExprPtr& expr() const { return e_; }
    const Expr& operator*() const { return *e_; }
    const Expr* operator->() const { return e_.get(); }

    friend bool operator==(const Val& a, const Val& b) { return compare(*a.e_, *b.e_) == 0; }
    friend bool operator<(const Val& a, const Val& b) { return compare(*a.e_, *b.e_) < 0; }

private:
    ExprPtr e_;
};

/// A presampling tape: bound N and a queue of values in {0..N}.
struct Tape {
    std::uint64_t bound = 0;
    std::vector<std::uint64_t> queue;

    friend bool operator==(const Tape&, const Tape&) = default;
    friend auto operator<=>(const Tape&, const Tape&) = default;
};

struct State {
    std::map<std::int64_t, ExprPtr> heap;
    std::map<std::int64_t, Tape> tapes;
    std::int64_t next_loc = 0;
    std::int64_t next_label = 0;

    /// Checks the tape-bound and counter invariants.
    bool well_formed() const;
};

using StatePtr = std::shared_ptr<const State>;

std::strong_ordering compare(const State& a, const State& b);

struct Config {
    ExprPtr expr;
    StatePtr state;

    static Config initial(ExprPtr e);
};

std::strong_ordering compare(const Config& a, const Config& b);

struct ConfigLess {
    bool operator()(const Config& a, const Config& b) const { return compare(a, b) < 0; }
};

inline bool operator<(const Config& a, const Config& b) { return compare(a, b) < 0; }
inline bool operator==(const Config& a, const Config& b) { return compare(a, b) == 0; }

} // namespace errcred
