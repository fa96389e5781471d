#include "errcred/json_io.hpp"

#include "errcred/parser.hpp"

#include <algorithm>
#include <fstream>

namespace errcred {

using json = nlohmann::json;

json rat_to_json(const Rat& r) {
    json j;
    if (auto n = r.num_i64()) j["num"] = *n;
    else j["num"] = r.num().get_str();
    if (auto d = r.den_i64()) j["den"] = *d;
    else j["den"] = r.den().get_str();
    return j;
}

Rat rat_from_json(const json& j) {
    if (j.is_number_integer()) return Rat(j.get<long long>());
    if (j.is_string()) return Rat::parse(j.get<std::string>());
    if (j.is_object()) {
        auto part = [&](const char* key) {
            const auto& x = j.at(key);
            return x.is_string() ? mpz_class(x.get<std::string>()) : mpz_class(x.get<long>());
        };
        return Rat(part("num"), part("den"));
    }
    throw std::invalid_argument("expected a rational: {num, den}, an integer or \"a/b\"");
}

json values_to_json(const Distr<Val>& d) {
    std::vector<std::pair<std::string, Rat>> rows;
    for (const auto& [v, w] : d) rows.emplace_back(print_expr(v.expr()), w);
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    json out = json::array();
    for (const auto& [k, w] : rows) {
        json row = rat_to_json(w);
        row["key"] = k;
        out.push_back(std::move(row));
    }
    return out;
}

json exec_to_json(const ExecResult& r) {
    return {{"depth", r.depth},
            {"values", values_to_json(r.values)},
            {"value_mass", rat_to_json(mass(r.values))},
            {"stuck_mass", rat_to_json(r.stuck_mass)},
            {"residual_mass", rat_to_json(r.residual_mass)}};
}

json bound_to_json(const BoundResult& b) {
    return {{"mode", mode_name(b.mode)},
            {"depth", b.depth},
            {"lower", rat_to_json(b.lower)},
            {"upper", rat_to_json(b.upper)}};
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return json::parse(in);
}

} // namespace errcred
