#include "errcred/syntax.hpp"

#include <algorithm>
#include <stdexcept>

namespace errcred {

const char* binop_symbol(BinOp op) {
    switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Eq: return "=";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::And: return "&&";
    case BinOp::Or: return "||";
    }
    return "?";
}

namespace {

constexpr std::size_t kFnvOffset = 1469598103934665603ull;
constexpr std::size_t kFnvPrime = 1099511628211ull;

std::size_t mix(std::size_t h, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        h ^= (v >> (8 * i)) & 0xffu;
        h *= kFnvPrime;
    }
    return h;
}

std::size_t mix(std::size_t h, const std::string& s) {
    for (unsigned char c : s) {
        h ^= c;
        h *= kFnvPrime;
    }
    return mix(h, s.size());
}

void merge_free(std::vector<std::string>& into, const std::vector<std::string>& from,
                const std::string* bound1 = nullptr, const std::string* bound2 = nullptr) {
    for (const auto& v : from) {
        if ((bound1 && v == *bound1) || (bound2 && v == *bound2)) continue;
        auto it = std::lower_bound(into.begin(), into.end(), v);
        if (it == into.end() || *it != v) into.insert(it, v);
    }
}

} // namespace

ExprPtr Expr::finish(std::shared_ptr<Expr> e) {
    std::size_t h = kFnvOffset;
    h = mix(h, static_cast<std::uint64_t>(e->kind_));
    h = mix(h, static_cast<std::uint64_t>(e->op_));
    h = mix(h, static_cast<std::uint64_t>(e->num_));
    h = mix(h, e->name_);
    h = mix(h, e->name2_);
    for (std::size_t i = 0; i < e->arity_; ++i) h = mix(h, e->kids_[i]->hash_);
    e->hash_ = h;

    switch (e->kind_) {
    case Kind::Int:
    case Kind::Bool:
    case Kind::Unit:
    case Kind::Loc:
    case Kind::Label:
    case Kind::Rec:
        e->value_ = true;
        break;
    case Kind::Pair:
        e->value_ = e->kids_[0]->value_ && e->kids_[1]->value_;
        break;
    case Kind::InjL:
    case Kind::InjR:
        e->value_ = e->kids_[0]->value_;
        break;
    default:
        e->value_ = false;
    }

    switch (e->kind_) {
    case Kind::Var:
        e->free_.push_back(e->name_);
        break;
    case Kind::Rec:
        merge_free(e->free_, e->kids_[0]->free_, &e->name_, &e->name2_);
        break;
    case Kind::Match:
        merge_free(e->free_, e->kids_[0]->free_);
        merge_free(e->free_, e->kids_[1]->free_, &e->name_);
        merge_free(e->free_, e->kids_[2]->free_, &e->name2_);
        break;
    default:
        for (std::size_t i = 0; i < e->arity_; ++i) merge_free(e->free_, e->kids_[i]->free_);
    }
    return e;
}

ExprPtr Expr::integer(std::int64_t n) {
    auto e = std::make_shared<Expr>(Token{});
    e->kind_ = Kind::Int;
    e->num_ = n;
    return finish(std::move(e));
}

ExprPtr Expr::boolean(bool b) {
    auto e = std::make_shared<Expr>(Token{});
    e->kind_ = Kind::Bool;
    e->num_ = b ? 1 : 0;
    return finish(std::move(e));
}

ExprPtr Expr::unit() {
    static const ExprPtr u = [] {
        auto e = std::make_shared<Expr>(Token{});
        e->kind_ = Kind::Unit;
        return finish(std::move(e));
    }();
    return u;
}

ExprPtr Expr::loc(std::int64_t l) {
    auto e = std::make_shared<Expr>(Token{});
    e->kind_ = Kind::Loc;
    e->num_ = l;
    return finish(std::move(e));
}

ExprPtr Expr::label(std::int64_t l) {
    auto e = std::make_shared<Expr>(Token{});
    e->kind_ = Kind::Label;
    e->num_ = l;
    return finish(std::move(e));
}

ExprPtr Expr::var(std::string name) {
    auto e = std::make_shared<Expr>(Token{});
    e->kind_ = Kind::Var;
    e->name_ = std::move(name);
    return finish(std::move(e));
}

ExprPtr Expr::rec(std::string f, std::string x, ExprPtr body) {
    auto e = std::make_shared<Expr>(Token{});
    e->kind_ = Kind::Rec;
    e->name_ = std::move(f);
    e->name2_ = std::move(x);
    e->kids_[0] = std::move(body);
    e->arity_ = 1;
    return finish(std::move(e));
}

#define ERRCRED_NODE(KIND, N)                                                                      \
    auto e = std::make_shared<Expr>(Token{});                                                      \
    e->kind_ = KIND;                                                                               \
    e->arity_ = N;

ExprPtr Expr::app(ExprPtr fn, ExprPtr arg) {
    ERRCRED_NODE(Kind::App, 2)
    e->kids_ = {std::move(fn), std::move(arg), nullptr};
    return finish(std::move(e));
}

ExprPtr Expr::binop(BinOp op, ExprPtr lhs, ExprPtr rhs) {
    ERRCRED_NODE(Kind::BinOp, 2)
    e->op_ = op;
    e->kids_ = {std::move(lhs), std::move(rhs), nullptr};
    return finish(std::move(e));
}

ExprPtr Expr::if_(ExprPtr cond, ExprPtr then_e, ExprPtr else_e) {
    ERRCRED_NODE(Kind::If, 3)
    e->kids_ = {std::move(cond), std::move(then_e), std::move(else_e)};
    return finish(std::move(e));
}

ExprPtr Expr::pair(ExprPtr a, ExprPtr b) {
    ERRCRED_NODE(Kind::Pair, 2)
    e->kids_ = {std::move(a), std::move(b), nullptr};
    return finish(std::move(e));
}

ExprPtr Expr::fst(ExprPtr x) {
    ERRCRED_NODE(Kind::Fst, 1)
    e->kids_[0] = std::move(x);
    return finish(std::move(e));
}

ExprPtr Expr::snd(ExprPtr x) {
    ERRCRED_NODE(Kind::Snd, 1)
    e->kids_[0] = std::move(x);
    return finish(std::move(e));
}

ExprPtr Expr::inl(ExprPtr x) {
    ERRCRED_NODE(Kind::InjL, 1)
    e->kids_[0] = std::move(x);
    return finish(std::move(e));
}

ExprPtr Expr::inr(ExprPtr x) {
    ERRCRED_NODE(Kind::InjR, 1)
    e->kids_[0] = std::move(x);
    return finish(std::move(e));
}

ExprPtr Expr::match(ExprPtr scrut, std::string x, ExprPtr left, std::string y, ExprPtr right) {
    ERRCRED_NODE(Kind::Match, 3)
    e->name_ = std::move(x);
    e->name2_ = std::move(y);
    e->kids_ = {std::move(scrut), std::move(left), std::move(right)};
    return finish(std::move(e));
}

ExprPtr Expr::alloc_n(ExprPtr count, ExprPtr init) {
    ERRCRED_NODE(Kind::AllocN, 2)
    e->kids_ = {std::move(count), std::move(init), nullptr};
    return finish(std::move(e));
}

ExprPtr Expr::load(ExprPtr x) {
    ERRCRED_NODE(Kind::Load, 1)
    e->kids_[0] = std::move(x);
    return finish(std::move(e));
}

ExprPtr Expr::store(ExprPtr target, ExprPtr value) {
    ERRCRED_NODE(Kind::Store, 2)
    e->kids_ = {std::move(target), std::move(value), nullptr};
    return finish(std::move(e));
}

ExprPtr Expr::rand(ExprPtr bound, int site) {
    ERRCRED_NODE(Kind::Rand, 1)
    e->kids_[0] = std::move(bound);
    e->site_ = site;
    return finish(std::move(e));
}

ExprPtr Expr::alloc_tape(ExprPtr bound) {
    ERRCRED_NODE(Kind::AllocTape, 1)
    e->kids_[0] = std::move(bound);
    return finish(std::move(e));
}

ExprPtr Expr::rand_lbl(ExprPtr bound, ExprPtr label, int site) {
    ERRCRED_NODE(Kind::RandLbl, 2)
    e->kids_ = {std::move(bound), std::move(label), nullptr};
    e->site_ = site;
    return finish(std::move(e));
}

#undef ERRCRED_NODE

ExprPtr Expr::rebuild(const Expr& like, std::array<ExprPtr, 3> kids) {
    auto e = std::make_shared<Expr>(Token{});
    e->kind_ = like.kind_;
    e->op_ = like.op_;
    e->num_ = like.num_;
    e->name_ = like.name_;
    e->name2_ = like.name2_;
    e->arity_ = like.arity_;
    e->site_ = like.site_;
    e->kids_ = std::move(kids);
    return finish(std::move(e));
}

ExprPtr Expr::with_site(const Expr& like, int site) {
    auto e = std::make_shared<Expr>(like);
    e->site_ = site;
    return e;
}

std::strong_ordering compare(const Expr& a, const Expr& b) {
    if (&a == &b) return std::strong_ordering::equal;
    if (auto c = a.hash() <=> b.hash(); c != 0) return c;
    if (auto c = a.kind() <=> b.kind(); c != 0) return c;
    if (auto c = a.op() <=> b.op(); c != 0) return c;
    if (auto c = a.num() <=> b.num(); c != 0) return c;
    if (auto c = a.name() <=> b.name(); c != 0) return c;
    if (auto c = a.name2() <=> b.name2(); c != 0) return c;
    if (auto c = a.arity() <=> b.arity(); c != 0) return c;
    for (std::size_t i = 0; i < a.arity(); ++i)
        if (auto c = compare(*a.kid(i), *b.kid(i)); c != 0) return c;
    return std::strong_ordering::equal;
}

bool structurally_equal(const ExprPtr& a, const ExprPtr& b) { return compare(*a, *b) == 0; }

ExprPtr subst(const ExprPtr& e, const std::string& x, const ExprPtr& v) {
    const auto& fv = e->free_vars();
    if (!std::binary_search(fv.begin(), fv.end(), x)) return e;
    switch (e->kind()) {
    case Kind::Var:
        return v;
    case Kind::Rec:
        // x is free in the node, so neither binder is x.
        return Expr::rebuild(*e, {subst(e->kid(0), x, v), nullptr, nullptr});
    case Kind::Match:
        return Expr::rebuild(*e, {subst(e->kid(0), x, v),
                                  e->name() == x ? e->kid(1) : subst(e->kid(1), x, v),
                                  e->name2() == x ? e->kid(2) : subst(e->kid(2), x, v)});
    default: {
        std::array<ExprPtr, 3> kids{};
        for (std::size_t i = 0; i < e->arity(); ++i) kids[i] = subst(e->kid(i), x, v);
        return Expr::rebuild(*e, std::move(kids));
    }
    }
}

namespace {

ExprPtr number_from(const ExprPtr& e, int& counter) {
    const bool is_site = e->kind() == Kind::Rand || e->kind() == Kind::RandLbl;
    const int site = is_site ? counter++ : -1;
    std::array<ExprPtr, 3> kids{};
    for (std::size_t i = 0; i < e->arity(); ++i) kids[i] = number_from(e->kid(i), counter);
    auto out = Expr::rebuild(*e, std::move(kids));
    return is_site ? Expr::with_site(*out, site) : out;
}

void collect_sites(const ExprPtr& e, std::vector<ExprPtr>& out) {
    if (e->kind() == Kind::Rand || e->kind() == Kind::RandLbl) out.push_back(e);
    for (std::size_t i = 0; i < e->arity(); ++i) collect_sites(e->kid(i), out);
}

} // namespace

ExprPtr number_rand_sites(const ExprPtr& e) {
    int counter = 0;
    return number_from(e, counter);
}

std::vector<ExprPtr> rand_sites(const ExprPtr& e) {
    std::vector<ExprPtr> out;
    collect_sites(e, out);
    return out;
}

bool has_recursion(const ExprPtr& e) {
    if (e->kind() == Kind::Rec && e->name() != kAnonymous) {
        const auto& fv = e->kid(0)->free_vars();
        if (std::binary_search(fv.begin(), fv.end(), e->name())) return true;
    }
    for (std::size_t i = 0; i < e->arity(); ++i)
        if (has_recursion(e->kid(i))) return true;
    return false;
}

Val::Val(ExprPtr e) : e_(std::move(e)) {
    if (!e_ || !e_->is_value()) throw std::invalid_argument("Val: expression is not a value");
}

bool State::well_formed() const {
    for (const auto& [l, v] : heap)
        if (l < 0 || l >= next_loc || !v || !v->is_value()) return false;
    for (const auto& [l, t] : tapes) {
        if (l < 0 || l >= next_label) return false;
        for (auto n : t.queue)
            if (n > t.bound) return false;
    }
    return true;
}

std::strong_ordering compare(const State& a, const State& b) {
    if (&a == &b) return std::strong_ordering::equal;
    if (auto c = a.next_loc <=> b.next_loc; c != 0) return c;
    if (auto c = a.next_label <=> b.next_label; c != 0) return c;
    if (auto c = a.heap.size() <=> b.heap.size(); c != 0) return c;
    if (auto c = a.tapes.size() <=> b.tapes.size(); c != 0) return c;
    for (auto ia = a.heap.begin(), ib = b.heap.begin(); ia != a.heap.end(); ++ia, ++ib) {
        if (auto c = ia->first <=> ib->first; c != 0) return c;
        if (auto c = compare(*ia->second, *ib->second); c != 0) return c;
    }
    for (auto ia = a.tapes.begin(), ib = b.tapes.begin(); ia != a.tapes.end(); ++ia, ++ib) {
        if (auto c = ia->first <=> ib->first; c != 0) return c;
        if (auto c = ia->second <=> ib->second; c != 0) return c;
    }
    return std::strong_ordering::equal;
}

Config Config::initial(ExprPtr e) { return Config{std::move(e), std::make_shared<const State>()}; }

std::strong_ordering compare(const Config& a, const Config& b) {
    if (auto c = compare(*a.expr, *b.expr); c != 0) return c;
    if (a.state == b.state) return std::strong_ordering::equal;
    return compare(*a.state, *b.state);
}

} // namespace errcred
