#include "errcred/checker.hpp"

#include "errcred/json_io.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace errcred {

using json = nlohmann::json;

const Err2Table* CreditSchedule::lookup(int site, const Trace& trace) const {
    for (const auto& g : guarded_tables) {
        if (g.site != site) continue;
        bool ok = true;
        for (const auto& [s, outcome] : g.when) {
            auto it = std::find_if(trace.begin(), trace.end(), [&](const auto& p) { return p.first == s; });
            if (it == trace.end() || it->second != outcome) {
                ok = false;
                break;
            }
        }
        if (ok) return &g.table;
    }
    auto it = site_tables.find(site);
    return it == site_tables.end() ? nullptr : &it->second;
}

CreditSchedule CreditSchedule::from_json(const json& j) {
    CreditSchedule s;
    s.initial = rat_from_json(j.at("initial"));
    if (j.contains("site_tables"))
        for (const auto& [k, t] : j.at("site_tables").items())
            s.site_tables.emplace(std::stoi(k), Err2Table::from_json(t));
    if (j.contains("guarded_tables"))
        for (const auto& g : j.at("guarded_tables")) {
            GuardedTable gt;
            gt.site = g.at("site").get<int>();
            for (const auto& [k, v] : g.at("when").items()) gt.when.emplace(std::stoi(k), v.get<std::uint64_t>());
            gt.table = Err2Table::from_json(g.at("table"));
            s.guarded_tables.push_back(std::move(gt));
        }
    return s;
}

json CreditSchedule::to_json() const {
    json tables = json::object();
    for (const auto& [site, t] : site_tables) tables[std::to_string(site)] = t.to_json();
    json guarded = json::array();
    for (const auto& g : guarded_tables) {
        json when = json::object();
        for (const auto& [s, o] : g.when) when[std::to_string(s)] = o;
        guarded.push_back({{"site", g.site}, {"when", when}, {"table", g.table.to_json()}});
    }
    return {{"initial", rat_to_json(initial)}, {"site_tables", tables}, {"guarded_tables", guarded}};
}

AmpCertificate AmpCertificate::from_json(const json& j) {
    AmpCertificate c;
    c.k = rat_from_json(j.at("k"));
    json body = j.value("body_schedule", json::object());
    if (!body.contains("initial")) body["initial"] = 1;
    c.body_schedule = CreditSchedule::from_json(body);
    c.success_post = j.contains("success_post") ? Postcondition::from_json(j.at("success_post"))
                                                : Postcondition::truth();
    return c;
}

BoundResult exact_bound(const ExprPtr& e, const Postcondition& post, Mode mode, std::size_t depth,
                        std::size_t frontier_limit) {
    return exec_bracket(Config::initial(e), post, mode, depth, frontier_limit);
}

namespace {

void check_sites(const ExprPtr& e, const CreditSchedule& s) {
    const auto sites = rand_sites(e);
    auto check = [&](int site, const Err2Table& t) {
        if (site < 0 || static_cast<std::size_t>(site) >= sites.size())
            throw CheckError("malformed schedule: site " + std::to_string(site) + " does not exist");
        const Expr& bound = *sites[site]->kid(0);
        if (bound.kind() == Kind::Int && (bound.num() < 0 || static_cast<std::uint64_t>(bound.num()) != t.bound()))
            throw CheckError("site " + std::to_string(site) + " samples from " + std::to_string(bound.num()) +
                             " but its table has bound " + std::to_string(t.bound()));
    };
    for (const auto& [site, t] : s.site_tables) check(site, t);
    for (const auto& g : s.guarded_tables) {
        check(g.site, g.table);
        for (const auto& [w, o] : g.when)
            if (w < 0 || static_cast<std::size_t>(w) >= sites.size())
                throw CheckError("malformed schedule: guard site " + std::to_string(w) + " does not exist");
    }
    if (s.initial.sign() < 0) throw CheckError("malformed schedule: negative initial credit");
}

struct Explorer {
    const CreditSchedule& schedule;
    const CheckLimits& limits;
    bool discharge_at_one = true;
    bool divergence_ok = false;
    std::function<std::optional<std::string>(const Expr&, const Rat&)> on_value;

    Verdict verdict;
    Trace trace;
    std::set<int> fired;

    bool reject(std::string why, const Rat& credit) {
        verdict.accepted = false;
        verdict.reason = std::move(why);
        verdict.trace = trace;
        verdict.credit = credit;
        return false;
    }

    void leaf() {
        if (++verdict.traces > limits.total_traces)
            throw CheckError("trace limit of " + std::to_string(limits.total_traces) + " exceeded");
    }

    bool explore(Config cfg, const Rat& credit) {
        std::set<Config, ConfigLess> seen;
        std::uint64_t steps = 0;
        for (;;) {
            if (discharge_at_one && Rat(1) <= credit) {
                leaf();
                return true;
            }
            if (cfg.expr->is_value()) {
                leaf();
                if (auto why = on_value(*cfg.expr, credit)) return reject(*why, credit);
                return true;
            }
            Stepped r = reduce(cfg);
            if (r.tag == Stepped::Tag::Stuck) {
                leaf();
                return reject("stuck configuration without full credit", credit);
            }
            if (r.tag == Stepped::Tag::Det) {
                cfg = std::move(r.next);
                if (!seen.insert(cfg).second) {
                    leaf();
                    if (divergence_ok) return true;
                    return reject("trace diverges without full credit", credit);
                }
                if (++steps > limits.steps_per_trace)
                    throw CheckError("recursion detected: a trace exceeded " +
                                     std::to_string(limits.steps_per_trace) + " steps");
                continue;
            }
            return branch(r, credit);
        }
    }

    bool branch(const Stepped& r, const Rat& credit) {
        const Err2Table* table = schedule.lookup(r.site, trace);
        Rat mean;
        if (table) {
            if (fired.count(r.site))
                return reject("site " + std::to_string(r.site) + " fires twice on one trace", credit);
            if (table->bound() != r.bound)
                throw CheckError("site " + std::to_string(r.site) + " samples from " + std::to_string(r.bound) +
                                 " but its table has bound " + std::to_string(table->bound()));
            mean = rand_exp_mean(*table);
            if (credit < mean)
                return reject("insufficient credit at site " + std::to_string(r.site) + ": have " + credit.str() +
                                  ", need " + mean.str(),
                              credit);
            fired.insert(r.site);
        }
        for (std::uint64_t k = 0; k <= r.bound; ++k) {
            trace.emplace_back(r.site, k);
            const Rat next = table ? credit - mean + table->at(k) : credit;
            const bool ok = explore(r.resolve(k), next);
            trace.pop_back();
            if (!ok) return false;
        }
        if (table) fired.erase(r.site);
        return true;
    }
};

} // namespace

Verdict validate_schedule(const ExprPtr& e, const CreditSchedule& s, const Postcondition& post, Mode mode,
                          const CheckLimits& limits) {
    check_sites(e, s);
    Explorer ex{s, limits, true, false, {}, {}, {}, {}};
    ex.discharge_at_one = true;
    ex.divergence_ok = mode == Mode::Partial;
    ex.on_value = [&](const Expr& v, const Rat&) -> std::optional<std::string> {
        if (post.holds(v)) return std::nullopt;
        return "value violates the postcondition without full credit";
    };
    if (ex.explore(Config::initial(e), s.initial)) {
        ex.verdict.accepted = true;
        ex.verdict.reason = "every trace discharged";
        ex.verdict.credit = s.initial;
    }
    return ex.verdict;
}

Verdict validate_amplification(const ExprPtr& body, const AmpCertificate& cert, const Rat& eps0,
                               const CheckLimits& limits) {
    if (cert.k <= Rat(1)) throw std::invalid_argument("amplification factor k must exceed 1");
    if (eps0.sign() <= 0) throw std::invalid_argument("initial error must be positive");
    const CreditSchedule& s = cert.body_schedule;
    check_sites(body, s);
    const Rat target = cert.k * s.initial;
    Explorer ex{s, limits, true, false, {}, {}, {}, {}};
    ex.discharge_at_one = false;
    ex.divergence_ok = false;
    ex.on_value = [&](const Expr& v, const Rat& credit) -> std::optional<std::string> {
        if (cert.success_post.holds(v) || target <= credit) return std::nullopt;
        return "retry outcome holds " + credit.str() + ", below the amplified credit " + target.str();
    };
    if (ex.explore(Config::initial(body), s.initial)) {
        ex.verdict.accepted = true;
        ex.verdict.reason = "every iteration succeeds or amplifies credit by " + cert.k.str();
        ex.verdict.credit = s.initial;
        ex.verdict.certified_depth = amp_depth(eps0, cert.k);
    }
    return ex.verdict;
}

Rat tail_bound(std::uint64_t M, std::uint64_t N, unsigned n) {
    if (M <= N) throw std::invalid_argument("tail_bound: requires M > N");
    return (Rat(M - N) / Rat(M + 1)).pow(n);
}

Rat spline_bound(std::uint64_t n, std::uint64_t k) {
    if (n == 0) throw std::invalid_argument("spline_bound: requires n >= 1");
    return Rat(n) / Rat(n + k + 1);
}

std::vector<std::pair<std::size_t, Rat>> ast_evidence(const ExprPtr& e, const Postcondition& post,
                                                      std::vector<std::size_t> depths,
                                                      std::size_t frontier_limit) {
    std::sort(depths.begin(), depths.end());
    Executor ex(Config::initial(e), frontier_limit);
    std::vector<std::pair<std::size_t, Rat>> out;
    for (auto d : depths) {
        ex.run_to(d);
        out.emplace_back(d, bracket(ex.snapshot(), post, Mode::Total).upper);
    }
    return out;
}

} // namespace errcred
