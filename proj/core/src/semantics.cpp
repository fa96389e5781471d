#include "errcred/semantics.hpp"

#include "errcred/postcondition.hpp"

#include <optional>
#include <span>

namespace errcred {

const char* mode_name(Mode m) { return m == Mode::Partial ? "partial" : "total"; }

Mode parse_mode(const std::string& s) {
    if (s == "partial") return Mode::Partial;
    if (s == "total") return Mode::Total;
    throw std::invalid_argument("unknown mode '" + s + "' (expected partial or total)");
}

namespace {

using Tag = Stepped::Tag;

Stepped det(ExprPtr e, StatePtr s) {
    Stepped r;
    r.tag = Tag::Det;
    r.next = Config{std::move(e), std::move(s)};
    return r;
}

Stepped sample(std::uint64_t bound, int site, StatePtr s) {
    Stepped r;
    r.tag = Tag::Rand;
    r.bound = bound;
    r.site = site;
    r.resolve = [s = std::move(s)](std::uint64_t n) {
        return Config{Expr::integer(static_cast<std::int64_t>(n)), s};
    };
    return r;
}

// Children in the order they are evaluated. Binary forms go right to left.
std::span<const std::size_t> eval_order(Kind k) {
    static constexpr std::size_t rl[] = {1, 0};
    static constexpr std::size_t first[] = {0};
    switch (k) {
    case Kind::App:
    case Kind::BinOp:
    case Kind::Pair:
    case Kind::AllocN:
    case Kind::Store:
    case Kind::RandLbl:
        return rl;
    case Kind::If:
    case Kind::Fst:
    case Kind::Snd:
    case Kind::InjL:
    case Kind::InjR:
    case Kind::Match:
    case Kind::Load:
    case Kind::Rand:
    case Kind::AllocTape:
        return first;
    default:
        return {};
    }
}

ExprPtr replace_kid(const ExprPtr& parent, std::size_t i, ExprPtr kid) {
    std::array<ExprPtr, 3> kids{};
    for (std::size_t j = 0; j < parent->arity(); ++j) kids[j] = parent->kid(j);
    kids[i] = std::move(kid);
    return Expr::rebuild(*parent, std::move(kids));
}

Stepped plug(const ExprPtr& parent, std::size_t i, Stepped inner) {
    switch (inner.tag) {
    case Tag::Stuck:
        break;
    case Tag::Det:
        inner.next.expr = replace_kid(parent, i, std::move(inner.next.expr));
        break;
    case Tag::Rand:
        inner.resolve = [parent, i, k = std::move(inner.resolve)](std::uint64_t n) {
            Config c = k(n);
            c.expr = replace_kid(parent, i, std::move(c.expr));
            return c;
        };
        break;
    }
    return inner;
}

bool closure_free(const Expr& v) {
    if (v.kind() == Kind::Rec) return false;
    for (std::size_t i = 0; i < v.arity(); ++i)
        if (!closure_free(*v.kid(i))) return false;
    return true;
}

std::optional<ExprPtr> eval_binop(BinOp op, const Expr& a, const Expr& b) {
    const bool ints = a.kind() == Kind::Int && b.kind() == Kind::Int;
    const bool bools = a.kind() == Kind::Bool && b.kind() == Kind::Bool;
    std::int64_t out = 0;
    switch (op) {
    case BinOp::Add:
        if (a.kind() == Kind::Loc && b.kind() == Kind::Int) {
            if (__builtin_add_overflow(a.num(), b.num(), &out) || out < 0) return std::nullopt;
            return Expr::loc(out);
        }
        if (!ints || __builtin_add_overflow(a.num(), b.num(), &out)) return std::nullopt;
        return Expr::integer(out);
    case BinOp::Sub:
        if (!ints || __builtin_sub_overflow(a.num(), b.num(), &out)) return std::nullopt;
        return Expr::integer(out);
    case BinOp::Mul:
        if (!ints || __builtin_mul_overflow(a.num(), b.num(), &out)) return std::nullopt;
        return Expr::integer(out);
    case BinOp::Eq:
        if (!closure_free(a) || !closure_free(b)) return std::nullopt;
        return Expr::boolean(compare(a, b) == 0);
    case BinOp::Lt:
        if (!ints) return std::nullopt;
        return Expr::boolean(a.num() < b.num());
    case BinOp::Le:
        if (!ints) return std::nullopt;
        return Expr::boolean(a.num() <= b.num());
    case BinOp::And:
        if (!bools) return std::nullopt;
        return Expr::boolean(a.boolean() && b.boolean());
    case BinOp::Or:
        if (!bools) return std::nullopt;
        return Expr::boolean(a.boolean() || b.boolean());
    }
    return std::nullopt;
}

ExprPtr bind(ExprPtr body, const std::string& x, const ExprPtr& v) {
    if (x == kAnonymous) return body;
    return subst(body, x, v);
}

Stepped head(const Config& cfg) {
    const ExprPtr& e = cfg.expr;
    const State& s = *cfg.state;
    switch (e->kind()) {
    case Kind::App: {
        const ExprPtr& f = e->kid(0);
        if (f->kind() != Kind::Rec) return {};
        ExprPtr body = bind(f->kid(0), f->name2(), e->kid(1));
        body = bind(std::move(body), f->name(), f);
        return det(std::move(body), cfg.state);
    }
    case Kind::BinOp: {
        auto r = eval_binop(e->op(), *e->kid(0), *e->kid(1));
        if (!r) return {};
        return det(std::move(*r), cfg.state);
    }
    case Kind::If: {
        const Expr& c = *e->kid(0);
        if (c.kind() != Kind::Bool) return {};
        return det(e->kid(c.boolean() ? 1 : 2), cfg.state);
    }
    case Kind::Fst:
    case Kind::Snd: {
        const ExprPtr& p = e->kid(0);
        if (p->kind() != Kind::Pair) return {};
        return det(p->kid(e->kind() == Kind::Fst ? 0 : 1), cfg.state);
    }
    case Kind::Match: {
        const ExprPtr& v = e->kid(0);
        if (v->kind() == Kind::InjL) return det(bind(e->kid(1), e->name(), v->kid(0)), cfg.state);
        if (v->kind() == Kind::InjR) return det(bind(e->kid(2), e->name2(), v->kid(0)), cfg.state);
        return {};
    }
    case Kind::AllocN: {
        const Expr& n = *e->kid(0);
        if (n.kind() != Kind::Int || n.num() < 1 || n.num() > kMaxAllocation) return {};
        auto next = std::make_shared<State>(s);
        const std::int64_t base = next->next_loc;
        for (std::int64_t i = 0; i < n.num(); ++i) next->heap[base + i] = e->kid(1);
        next->next_loc += n.num();
        return det(Expr::loc(base), std::move(next));
    }
    case Kind::Load: {
        const Expr& l = *e->kid(0);
        if (l.kind() != Kind::Loc) return {};
        auto it = s.heap.find(l.num());
        if (it == s.heap.end()) return {};
        return det(it->second, cfg.state);
    }
    case Kind::Store: {
        const Expr& l = *e->kid(0);
        if (l.kind() != Kind::Loc || !s.heap.count(l.num())) return {};
        auto next = std::make_shared<State>(s);
        next->heap[l.num()] = e->kid(1);
        return det(Expr::unit(), std::move(next));
    }
    case Kind::Rand: {
        const Expr& n = *e->kid(0);
        if (n.kind() != Kind::Int || n.num() < 0) return {};
        return sample(static_cast<std::uint64_t>(n.num()), e->site(), cfg.state);
    }
    case Kind::AllocTape: {
        const Expr& n = *e->kid(0);
        if (n.kind() != Kind::Int || n.num() < 0) return {};
        auto next = std::make_shared<State>(s);
        const std::int64_t lbl = next->next_label++;
        next->tapes[lbl] = Tape{static_cast<std::uint64_t>(n.num()), {}};
        return det(Expr::label(lbl), std::move(next));
    }
    case Kind::RandLbl: {
        const Expr& n = *e->kid(0);
        const Expr& l = *e->kid(1);
        if (n.kind() != Kind::Int || n.num() < 0 || l.kind() != Kind::Label) return {};
        auto it = s.tapes.find(l.num());
        if (it == s.tapes.end()) return {};
        const auto bound = static_cast<std::uint64_t>(n.num());
        const Tape& t = it->second;
        if (t.bound != bound || t.queue.empty()) return sample(bound, e->site(), cfg.state);
        auto next = std::make_shared<State>(s);
        auto& q = next->tapes[l.num()].queue;
        const auto head_value = q.front();
        q.erase(q.begin());
        return det(Expr::integer(static_cast<std::int64_t>(head_value)), std::move(next));
    }
    default:
        return {};
    }
}

} // namespace

Stepped reduce(const Config& cfg) {
    const ExprPtr& e = cfg.expr;
    if (e->is_value()) return {};
    for (std::size_t i : eval_order(e->kind()))
        if (!e->kid(i)->is_value()) return plug(e, i, reduce(Config{e->kid(i), cfg.state}));
    return head(cfg);
}

Class classify(const Config& cfg) {
    if (cfg.expr->is_value()) return Class::Value;
    return reduce(cfg).tag == Tag::Stuck ? Class::Stuck : Class::Reducible;
}

ConfigDistr step(const Config& cfg, std::size_t limit) {
    ConfigDistr out;
    Stepped r = reduce(cfg);
    switch (r.tag) {
    case Tag::Stuck:
        break;
    case Tag::Det:
        out.add(r.next, Rat(1));
        break;
    case Tag::Rand: {
        if (r.bound >= limit) throw ResourceError("sampler bound exceeds the enumeration limit", 0);
        const Rat w(1, static_cast<long long>(r.bound) + 1);
        for (std::uint64_t k = 0; k <= r.bound; ++k) out.add(r.resolve(k), w);
        break;
    }
    }
    return out;
}

StateDistr state_step(std::int64_t label, const State& s) {
    auto it = s.tapes.find(label);
    if (it == s.tapes.end())
        throw std::invalid_argument("state_step: label " + std::to_string(label) + " is not allocated");
    const std::uint64_t bound = it->second.bound;
    if (bound >= kDefaultFrontierLimit) throw ResourceError("tape bound exceeds the enumeration limit", 0);
    StateDistr out;
    const Rat w(1, static_cast<long long>(bound) + 1);
    for (std::uint64_t k = 0; k <= bound; ++k) {
        auto next = std::make_shared<State>(s);
        next->tapes[label].queue.push_back(k);
        out.add(std::move(next), w);
    }
    return out;
}

Executor::Executor(const Config& start, std::size_t frontier_limit) : limit_(frontier_limit) {
    if (start.expr->is_value())
        values_.add(Val(start.expr), Rat(1));
    else
        frontier_.emplace(start, Rat(1));
}

void Executor::advance() {
    std::map<Config, Rat, ConfigLess> next;
    const std::size_t depth = depth_ + 1;
    auto push = [&](Config c, const Rat& w) {
        if (c.expr->is_value()) {
            values_.add(Val(c.expr), w);
            return;
        }
        auto [it, inserted] = next.try_emplace(std::move(c), w);
        if (!inserted) it->second += w;
        if (next.size() > limit_)
            throw ResourceError("frontier limit of " + std::to_string(limit_) +
                                    " configurations exceeded at depth " + std::to_string(depth),
                                depth);
    };
    for (const auto& [cfg, w] : frontier_) {
        Stepped r = reduce(cfg);
        switch (r.tag) {
        case Tag::Stuck:
            stuck_ += w;
            break;
        case Tag::Det:
            push(std::move(r.next), w);
            break;
        case Tag::Rand: {
            if (r.bound >= limit_)
                throw ResourceError("sampler bound exceeds the frontier limit at depth " +
                                        std::to_string(depth),
                                    depth);
            const Rat share = w / Rat(static_cast<long long>(r.bound) + 1);
            for (std::uint64_t k = 0; k <= r.bound; ++k) push(r.resolve(k), share);
            break;
        }
        }
    }
    frontier_ = std::move(next);
    depth_ = depth;
}

void Executor::run_to(std::size_t depth) {
    while (depth_ < depth) {
        if (settled()) {
            depth_ = depth;
            break;
        }
        advance();
    }
}

ExecResult Executor::snapshot() const {
    ExecResult r;
    r.values = values_;
    r.stuck_mass = stuck_;
    for (const auto& [cfg, w] : frontier_) r.residual_mass += w;
    r.depth = depth_;
    return r;
}

ExecResult exec_n(const Config& cfg, std::size_t n, std::size_t frontier_limit) {
    Executor ex(cfg, frontier_limit);
    ex.run_to(n);
    return ex.snapshot();
}

BoundResult bracket(const ExecResult& r, const Postcondition& post, Mode mode) {
    BoundResult b;
    b.lower = pr(r.values, [&](const Val& v) { return !post(v); }) + r.stuck_mass;
    b.upper = b.lower + r.residual_mass;
    b.depth = r.depth;
    b.mode = mode;
    return b;
}

BoundResult exec_bracket(const Config& cfg, const Postcondition& post, Mode mode, std::size_t n,
                         std::size_t frontier_limit) {
    return bracket(exec_n(cfg, n, frontier_limit), post, mode);
}

} // namespace errcred
