#include "errcred/credits.hpp"

#include "errcred/json_io.hpp"

#include <stdexcept>

namespace errcred {

Credit::Credit(Rat amount) : amount_(std::move(amount)) {
    if (amount_.sign() < 0) throw std::invalid_argument("Credit: negative amount");
}

std::pair<Credit, Credit> split(const Credit& c, const Rat& part) {
    if (part.sign() < 0 || c.amount() < part)
        throw std::invalid_argument("split: " + part.str() + " is not within " + c.amount().str());
    return {Credit(part), Credit(c.amount() - part)};
}

Credit join(const Credit& a, const Credit& b) { return Credit(a.amount() + b.amount()); }

Credit weaken(const Credit& c, const Rat& to) {
    if (to.sign() < 0 || c.amount() < to)
        throw std::invalid_argument("weaken: " + to.str() + " exceeds " + c.amount().str());
    return Credit(to);
}

bool check_contradiction(const Credit& c) { return Rat(1) <= c.amount(); }

Err2Table::Err2Table(std::uint64_t bound, std::map<std::uint64_t, Rat> entries) : bound_(bound) {
    for (auto& [k, v] : entries) {
        if (k > bound) throw std::invalid_argument("Err2Table: outcome " + std::to_string(k) + " exceeds bound");
        if (v.sign() < 0) throw std::invalid_argument("Err2Table: negative entry");
        if (!v.is_zero()) entries_.emplace(k, std::move(v));
    }
}

Err2Table::Err2Table(std::uint64_t bound, const std::vector<Rat>& dense) : bound_(bound) {
    if (dense.size() != bound + 1) throw std::invalid_argument("Err2Table: dense table needs bound + 1 entries");
    for (std::uint64_t k = 0; k <= bound; ++k) {
        if (dense[k].sign() < 0) throw std::invalid_argument("Err2Table: negative entry");
        if (!dense[k].is_zero()) entries_.emplace(k, dense[k]);
    }
}

Rat Err2Table::at(std::uint64_t outcome) const {
    auto it = entries_.find(outcome);
    return it == entries_.end() ? Rat(0) : it->second;
}

Err2Table Err2Table::from_json(const nlohmann::json& j) {
    const auto bound = j.at("bound").get<std::uint64_t>();
    const auto& e = j.at("entries");
    if (e.is_array()) {
        std::vector<Rat> dense;
        for (const auto& x : e) dense.push_back(rat_from_json(x));
        return Err2Table(bound, dense);
    }
    std::map<std::uint64_t, Rat> entries;
    for (const auto& [k, v] : e.items()) entries.emplace(std::stoull(k), rat_from_json(v));
    return Err2Table(bound, std::move(entries));
}

nlohmann::json Err2Table::to_json() const {
    nlohmann::json entries = nlohmann::json::object();
    for (const auto& [k, v] : entries_) entries[std::to_string(k)] = rat_to_json(v);
    return {{"bound", bound_}, {"entries", entries}};
}

Rat rand_exp_mean(const Err2Table& t) {
    Rat sum;
    for (const auto& [k, v] : t.entries()) sum += v;
    return sum / Rat(t.bound() + 1);
}

Rat err_list_credit(const std::set<std::uint64_t>& xs, std::uint64_t N) {
    for (auto x : xs)
        if (x > N) throw std::invalid_argument("err_list_credit: outcome " + std::to_string(x) + " exceeds bound");
    return Rat(static_cast<unsigned long long>(xs.size())) / Rat(N + 1);
}

unsigned amp_depth(const Rat& eps, const Rat& k) {
    if (eps.sign() <= 0) throw std::invalid_argument("amp_depth: epsilon must be positive");
    if (k <= Rat(1)) throw std::invalid_argument("amp_depth: amplification factor must exceed 1");
    unsigned d = 0;
    for (Rat x = eps; x < Rat(1); x *= k) ++d;
    return d;
}

PlannerConstants planner_constants(std::uint64_t N, unsigned L) {
    if (L == 0) throw std::invalid_argument("planner_constants: word length must be positive");
    PlannerConstants pc;
    pc.N = N;
    pc.L = L;
    const Rat base(N + 1);
    const Rat span = base.pow(L) - Rat(1);
    if (span.is_zero()) throw std::invalid_argument("planner_constants: alphabet must have two letters");
    pc.ec_amp = Rat(1) + Rat(1) / span;
    for (unsigned i = 0; i <= L; ++i) pc.ec_rem.push_back(Rat(1) - (base.pow(i) - Rat(1)) / span);
    pc.ec_exc = pc.ec_amp - Rat(1);
    return pc;
}

Rat planner_D(const PlannerConstants& pc, const Rat& eps, unsigned i, std::uint64_t c,
              const std::vector<std::uint64_t>& w) {
    if (i >= pc.L) throw std::out_of_range("planner_D: position out of range");
    if (c > pc.N) throw std::out_of_range("planner_D: outcome out of range");
    if (w.size() != pc.L) throw std::out_of_range("planner_D: word has the wrong length");
    if (w[i] > pc.N) throw std::out_of_range("planner_D: word letter out of range");
    return (c == w[i] ? pc.ec_rem[i + 1] : pc.ec_amp) * eps;
}

Err2Table planner_table(const PlannerConstants& pc, const Rat& eps, unsigned i,
                        const std::vector<std::uint64_t>& w) {
    std::vector<Rat> dense;
    for (std::uint64_t c = 0; c <= pc.N; ++c) dense.push_back(planner_D(pc, eps, i, c, w));
    return Err2Table(pc.N, dense);
}

} // namespace errcred
