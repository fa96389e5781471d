#pragma once

// Predicates over closed values, used as postconditions.

#include "errcred/syntax.hpp"

#include <nlohmann/json_fwd.hpp>

#include <memory>
#include <string>
#include <vector>

namespace errcred {

class Postcondition {
public:
    enum class Kind { True, Eq, Cmp, In, IsPair, IsInl, IsInr, And, Or, Not };
    enum class CmpOp { Lt, Le, Gt, Ge, Eq, Ne };

    static Postcondition truth();
    static Postcondition eq(ExprPtr v);
    static Postcondition cmp(CmpOp op, std::int64_t rhs);
    static Postcondition in(std::vector<ExprPtr> vs);
    static Postcondition is_pair(Postcondition fst, Postcondition snd);
    static Postcondition is_inl(Postcondition inner);
    static Postcondition is_inr(Postcondition inner);
    static Postcondition all(std::vector<Postcondition> ps);
    static Postcondition any(std::vector<Postcondition> ps);
    static Postcondition negate(Postcondition p);

    /// Total: values of the wrong shape make the predicate false.
    bool holds(const Expr& v) const;
    bool operator()(const Val& v) const { return holds(*v); }

    Kind kind() const { return kind_; }

    static Postcondition from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

private:
    Kind kind_ = Kind::True;
    CmpOp op_ = CmpOp::Eq;
    std::int64_t rhs_ = 0;
    std::vector<ExprPtr> values_;
    std::vector<Postcondition> args_;
};

Postcondition load_postcondition(const std::string& path);

} // namespace errcred
