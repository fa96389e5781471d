#include "errcred/postcondition.hpp"

#include "errcred/parser.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <stdexcept>

namespace errcred {

using json = nlohmann::json;

Postcondition Postcondition::truth() { return {}; }

Postcondition Postcondition::eq(ExprPtr v) {
    Postcondition p;
    p.kind_ = Kind::Eq;
    p.values_.push_back(Val(std::move(v)).expr());
    return p;
}

Postcondition Postcondition::cmp(CmpOp op, std::int64_t rhs) {
    Postcondition p;
    p.kind_ = Kind::Cmp;
    p.op_ = op;
    p.rhs_ = rhs;
    return p;
}

Postcondition Postcondition::in(std::vector<ExprPtr> vs) {
    Postcondition p;
    p.kind_ = Kind::In;
    for (auto& v : vs) p.values_.push_back(Val(std::move(v)).expr());
    return p;
}

Postcondition Postcondition::is_pair(Postcondition fst, Postcondition snd) {
    Postcondition p;
    p.kind_ = Kind::IsPair;
    p.args_ = {std::move(fst), std::move(snd)};
    return p;
}

Postcondition Postcondition::is_inl(Postcondition inner) {
    Postcondition p;
    p.kind_ = Kind::IsInl;
    p.args_ = {std::move(inner)};
    return p;
}

Postcondition Postcondition::is_inr(Postcondition inner) {
    Postcondition p;
    p.kind_ = Kind::IsInr;
    p.args_ = {std::move(inner)};
    return p;
}

Postcondition Postcondition::all(std::vector<Postcondition> ps) {
    Postcondition p;
    p.kind_ = Kind::And;
    p.args_ = std::move(ps);
    return p;
}

Postcondition Postcondition::any(std::vector<Postcondition> ps) {
    Postcondition p;
    p.kind_ = Kind::Or;
    p.args_ = std::move(ps);
    return p;
}

Postcondition Postcondition::negate(Postcondition inner) {
    Postcondition p;
    p.kind_ = Kind::Not;
    p.args_ = {std::move(inner)};
    return p;
}

bool Postcondition::holds(const Expr& v) const {
    switch (kind_) {
    case Kind::True:
        return true;
    case Kind::Eq:
        return compare(v, *values_.front()) == 0;
    case Kind::Cmp: {
        if (v.kind() != errcred::Kind::Int) return false;
        const auto x = v.num();
        switch (op_) {
        case CmpOp::Lt: return x < rhs_;
        case CmpOp::Le: return x <= rhs_;
        case CmpOp::Gt: return x > rhs_;
        case CmpOp::Ge: return x >= rhs_;
        case CmpOp::Eq: return x == rhs_;
        case CmpOp::Ne: return x != rhs_;
        }
        return false;
    }
    case Kind::In:
        for (const auto& w : values_)
            if (compare(v, *w) == 0) return true;
        return false;
    case Kind::IsPair:
        return v.kind() == errcred::Kind::Pair && args_[0].holds(*v.kid(0)) && args_[1].holds(*v.kid(1));
    case Kind::IsInl:
        return v.kind() == errcred::Kind::InjL && args_[0].holds(*v.kid(0));
    case Kind::IsInr:
        return v.kind() == errcred::Kind::InjR && args_[0].holds(*v.kid(0));
    case Kind::And:
        for (const auto& a : args_)
            if (!a.holds(v)) return false;
        return true;
    case Kind::Or:
        for (const auto& a : args_)
            if (a.holds(v)) return true;
        return false;
    case Kind::Not:
        return !args_[0].holds(v);
    }
    return false;
}

namespace {

constexpr std::pair<const char*, Postcondition::CmpOp> kCmpOps[] = {
    {"<", Postcondition::CmpOp::Lt},  {"<=", Postcondition::CmpOp::Le},
    {">", Postcondition::CmpOp::Gt},  {">=", Postcondition::CmpOp::Ge},
    {"=", Postcondition::CmpOp::Eq},  {"!=", Postcondition::CmpOp::Ne}};

ExprPtr value_from_json(const json& j) {
    ExprPtr e;
    if (j.is_boolean())
        e = Expr::boolean(j.get<bool>());
    else if (j.is_number_integer())
        e = Expr::integer(j.get<std::int64_t>());
    else if (j.is_string())
        e = parse_expr(j.get<std::string>());
    else
        throw std::invalid_argument("postcondition value must be an integer, boolean or value syntax");
    if (!e->is_value()) throw std::invalid_argument("postcondition value is not a value: " + print_expr(e));
    return e;
}

json value_to_json(const ExprPtr& e) {
    if (e->kind() == errcred::Kind::Int) return e->num();
    if (e->kind() == errcred::Kind::Bool) return e->boolean();
    return print_expr(e);
}

Postcondition single_arg(const json& j) {
    if (j.contains("arg")) return Postcondition::from_json(j.at("arg"));
    if (j.contains("inner")) return Postcondition::from_json(j.at("inner"));
    return Postcondition::truth();
}

} // namespace

Postcondition Postcondition::from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw std::invalid_argument("postcondition must be an object with a \"kind\" field");
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "true") return truth();
    if (kind == "eq") return eq(value_from_json(j.at("value")));
    if (kind == "cmp") {
        const auto op = j.at("op").get<std::string>();
        for (const auto& [name, o] : kCmpOps)
            if (op == name) return cmp(o, j.at("value").get<std::int64_t>());
        throw std::invalid_argument("unknown comparison '" + op + "'");
    }
    if (kind == "in") {
        std::vector<ExprPtr> vs;
        for (const auto& v : j.at("values")) vs.push_back(value_from_json(v));
        return in(std::move(vs));
    }
    if (kind == "is_pair") {
        auto part = [&](const char* key) {
            return j.contains(key) ? from_json(j.at(key)) : truth();
        };
        return is_pair(part("fst"), part("snd"));
    }
    if (kind == "is_inl") return is_inl(single_arg(j));
    if (kind == "is_inr") return is_inr(single_arg(j));
    if (kind == "and" || kind == "or") {
        std::vector<Postcondition> ps;
        for (const auto& a : j.at("args")) ps.push_back(from_json(a));
        return kind == "and" ? all(std::move(ps)) : any(std::move(ps));
    }
    if (kind == "not") return negate(from_json(j.at("arg")));
    throw std::invalid_argument("unknown postcondition kind '" + kind + "'");
}

json Postcondition::to_json() const {
    switch (kind_) {
    case Kind::True: return {{"kind", "true"}};
    case Kind::Eq: return {{"kind", "eq"}, {"value", value_to_json(values_.front())}};
    case Kind::Cmp:
        for (const auto& [name, o] : kCmpOps)
            if (o == op_) return {{"kind", "cmp"}, {"op", name}, {"value", rhs_}};
        break;
    case Kind::In: {
        json vs = json::array();
        for (const auto& v : values_) vs.push_back(value_to_json(v));
        return {{"kind", "in"}, {"values", vs}};
    }
    case Kind::IsPair:
        return {{"kind", "is_pair"}, {"fst", args_[0].to_json()}, {"snd", args_[1].to_json()}};
    case Kind::IsInl: return {{"kind", "is_inl"}, {"inner", args_[0].to_json()}};
    case Kind::IsInr: return {{"kind", "is_inr"}, {"inner", args_[0].to_json()}};
    case Kind::And:
    case Kind::Or: {
        json as = json::array();
        for (const auto& a : args_) as.push_back(a.to_json());
        return {{"kind", kind_ == Kind::And ? "and" : "or"}, {"args", as}};
    }
    case Kind::Not: return {{"kind", "not"}, {"arg", args_[0].to_json()}};
    }
    return {{"kind", "true"}};
}

Postcondition load_postcondition(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return Postcondition::from_json(json::parse(in));
}

} // namespace errcred
