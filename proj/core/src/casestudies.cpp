#include "errcred/casestudies.hpp"

#include "errcred/credits.hpp"
#include "errcred/datastructures.hpp"
#include "errcred/json_io.hpp"
#include "errcred/montecarlo.hpp"
#include "errcred/parser.hpp"
#include "errcred/random.hpp"
#include "errcred/semantics.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <functional>
#include <stdexcept>

namespace errcred {

namespace {

std::string num(std::uint64_t n) { return std::to_string(n); }

using P = Postcondition;

} // namespace

// ---------------------------------------------------------------------------
// Programs

ExprPtr build_two_coins() { return parse_expr("(if (&& (flip) (flip)) 42 ((rec f x (f x)) 0))"); }

ExprPtr build_fig1() {
    return parse_expr("(let n (rand 3)"
                      " (if (<= n 1) true"
                      "  (let k (rand 1)"
                      "   (if (<= (+ n k) 2) true"
                      "    (if (= (+ n k) 3) false ((rec f x (f x)) 0))))))");
}

ExprPtr build_rsamp(std::uint64_t M, std::uint64_t N) {
    return parse_expr("(let s (lam _ (rand " + num(M) + "))"
                      " (let c (lam v (<= v " + num(N) + "))"
                      "  ((rec try u (let v (s ()) (if (c v) v (try ())))) ())))");
}

ExprPtr build_rsamp_bd(std::uint64_t M, std::uint64_t N, std::uint64_t n) {
    return parse_expr("(let s (lam _ (rand " + num(M) + "))"
                      " (let c (lam v (<= v " + num(N) + "))"
                      "  ((rec try n (if (<= n 0) (inl ())"
                      "    (let v (s ()) (if (c v) (inr v) (try (- n 1))))))"
                      "   " + num(n) + ")))");
}

ExprPtr build_spline(std::uint64_t n0) {
    return parse_expr("((rec spline n (let x (rand n) (if (= x 0) () (spline (+ n 1))))) " + num(n0) + ")");
}

ExprPtr build_iter_demo(std::uint64_t K, std::uint64_t a, std::uint64_t b) {
    if (b == 0 || a > b) throw std::invalid_argument("build_iter_demo: need 0 <= a <= b, b > 0");
    return parse_expr("(let n (rand " + num(K) + ")"
                      " ((rec iter i (if (<= i 0) false"
                      "   (if (< (rand " + num(b - 1) + ") " + num(a) + ") true (iter (- i 1)))))"
                      "  n))");
}

ExprPtr build_uniform_body(std::uint64_t M, std::uint64_t N) {
    return parse_expr("(let v (rand " + num(M) + ") (if (<= v " + num(N) + ") (inr v) (inl ())))");
}

ExprPtr build_poisson_body() { return parse_expr("(pair (rand 1) (rand 1))"); }

Postcondition two_coins_post() { return P::eq(parse_expr("42")); }
Postcondition fig1_post() { return P::eq(parse_expr("true")); }
Postcondition rsamp_bd_post() { return P::is_inr(P::truth()); }
Postcondition rsamp_post(std::uint64_t N) { return P::cmp(P::CmpOp::Le, static_cast<std::int64_t>(N)); }
Postcondition iter_demo_post() { return P::eq(parse_expr("false")); }

// ---------------------------------------------------------------------------
// Schedules and certificates

CreditSchedule fig1_schedule(const Rat& initial) {
    CreditSchedule s;
    s.initial = initial;
    s.site_tables.emplace(1, Err2Table(3, std::vector<Rat>{0, 0, Rat(1, 2), Rat(1, 2)}));
    s.guarded_tables.push_back({0, {{1, 2}}, Err2Table(1, std::vector<Rat>{0, 1})});
    s.guarded_tables.push_back({0, {{1, 3}}, Err2Table(1, std::vector<Rat>{1, 0})});
    return s;
}

AmpCertificate uniform_certificate(std::uint64_t M, std::uint64_t N, const Rat& k) {
    if (M <= N) throw std::invalid_argument("uniform_certificate: need M > N");
    std::vector<Rat> dense(M + 1);
    for (std::uint64_t v = N + 1; v <= M; ++v) dense[v] = Rat(M + 1) / Rat(M - N);
    AmpCertificate c;
    c.k = k;
    c.body_schedule.initial = 1;
    c.body_schedule.site_tables.emplace(0, Err2Table(M, dense));
    c.success_post = P::is_inr(P::truth());
    return c;
}

AmpCertificate poisson_certificate() {
    const PlannerConstants pc = planner_constants(1, 2);
    const std::vector<std::uint64_t> word{1, 1};
    AmpCertificate c;
    c.k = pc.ec_amp;
    c.body_schedule.initial = 1;
    // The right component is drawn first.
    c.body_schedule.site_tables.emplace(1, planner_table(pc, 1, 0, word));
    c.body_schedule.guarded_tables.push_back({0, {{1, 1}}, planner_table(pc, 1, 1, word)});
    c.success_post = P::is_pair(P::eq(parse_expr("1")), P::eq(parse_expr("1")));
    return c;
}

// ---------------------------------------------------------------------------
// Oracles

Rat iter_demo_exact(std::uint64_t K, const Rat& eps) {
    Rat sum;
    for (std::uint64_t n = 0; n <= K; ++n) sum += Rat(1) - (Rat(1) - eps).pow(static_cast<unsigned>(n));
    return sum / Rat(K + 1);
}

namespace {

struct DrawCapReached {};

class CappedSource final : public RandomSource {
public:
    CappedSource(RandomSource& inner, std::uint64_t cap) : inner_(inner), left_(cap) {}
    std::uint64_t uniform(std::uint64_t bound) override {
        if (left_ == 0) throw DrawCapReached{};
        --left_;
        return inner_.uniform(bound);
    }

private:
    RandomSource& inner_;
    std::uint64_t left_;
};

} // namespace

Rat spline_survival(std::uint64_t n0, std::uint64_t samples) {
    const ExprPtr e = build_spline(n0);
    Rat survived;
    for_each_path(
        [&](RandomSource& src) {
            CappedSource capped(src, samples);
            try {
                run_with(e, capped);
                return false;
            } catch (const DrawCapReached&) {
                return true;
            }
        },
        [&](bool alive, const Rat& w) {
            if (alive) survived += w;
        });
    return survived;
}

Rat exact_total_error(const ExprPtr& e, const Postcondition& post) {
    Executor ex(Config::initial(e));
    ex.run_to(1'000'000);
    if (!ex.settled()) throw ResourceError("program did not terminate within the depth limit", ex.depth());
    return bracket(ex.snapshot(), post, Mode::Total).upper;
}

// ---------------------------------------------------------------------------
// Registry

namespace {

class Params {
public:
    explicit Params(const CaseParams& p) : p_(p) {}

    std::uint64_t u64(const std::string& key, std::uint64_t def) {
        echo_[key] = def;
        auto it = p_.find(key);
        if (it == p_.end()) return def;
        std::size_t used = 0;
        std::uint64_t v = 0;
        try {
            v = std::stoull(it->second, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != it->second.size() || it->second.empty() || it->second[0] == '-')
            throw std::invalid_argument("parameter '" + key + "' expects a natural number, got '" + it->second + "'");
        echo_[key] = v;
        return v;
    }

    Rat rat(const std::string& key, const Rat& def) {
        Rat v = def;
        if (auto it = p_.find(key); it != p_.end()) v = Rat::parse(it->second);
        echo_[key] = v.str();
        return v;
    }

    double real(const std::string& key, double def) {
        double v = def;
        if (auto it = p_.find(key); it != p_.end()) v = std::stod(it->second);
        echo_[key] = v;
        return v;
    }

    std::string str(const std::string& key, const std::string& def) {
        std::string v = def;
        if (auto it = p_.find(key); it != p_.end()) v = it->second;
        echo_[key] = v;
        return v;
    }

    /// Rejects keys the case study did not read.
    nlohmann::json finish() const {
        for (const auto& [k, _] : p_)
            if (!echo_.contains(k)) throw std::invalid_argument("unknown parameter '" + k + "'");
        return echo_;
    }

private:
    const CaseParams& p_;
    nlohmann::json echo_ = nlohmann::json::object();
};

nlohmann::json result(nlohmann::json observed, nlohmann::json claimed, const char* oracle, bool pass) {
    return {{"observed", std::move(observed)},
            {"claimed_bound", std::move(claimed)},
            {"oracle", oracle},
            {"pass", pass}};
}

nlohmann::json sampled(nlohmann::json r) {
    r["sampled"] = true;
    return r;
}

using Runner = std::function<nlohmann::json(Params&, std::uint64_t)>;

nlohmann::json cs_two_coins(Params& p, std::uint64_t) {
    const auto depth = p.u64("depth", 16);
    const ExprPtr e = build_two_coins();
    const ExecResult r = exec_n(Config::initial(e), depth);
    const BoundResult total = bracket(r, two_coins_post(), Mode::Total);
    Distr<Val> want;
    want.add(Val(parse_expr("42")), Rat(1, 4));
    const bool pass = r.values == want && r.residual_mass == Rat(3, 4) && r.stuck_mass.is_zero() &&
                      total.upper == Rat(3, 4);
    return result({{"exec", exec_to_json(r)}, {"total_upper", rat_to_json(total.upper)}},
                  {{"values", {{"42", rat_to_json(Rat(1, 4))}}}, {"total_error", rat_to_json(Rat(3, 4))}},
                  "exact", pass);
}

nlohmann::json cs_fig1(Params& p, std::uint64_t) {
    const auto depth = p.u64("depth", 16);
    const ExprPtr e = build_fig1();
    const ExecResult r = exec_n(Config::initial(e), depth);
    const BoundResult partial = bracket(r, fig1_post(), Mode::Partial);
    const BoundResult total = bracket(r, fig1_post(), Mode::Total);
    const Verdict ok = validate_schedule(e, fig1_schedule(Rat(1, 4)), fig1_post(), Mode::Partial);
    const Verdict short_ = validate_schedule(e, fig1_schedule(Rat(1, 4) - Rat(1, 1000)), fig1_post(), Mode::Partial);
    const bool pass = partial.lower == Rat(1, 4) && total.upper == Rat(3, 8) && r.residual_mass == Rat(1, 8) &&
                      ok.accepted && !short_.accepted;
    return result({{"exec", exec_to_json(r)},
                   {"partial_lower", rat_to_json(partial.lower)},
                   {"total_upper", rat_to_json(total.upper)},
                   {"divergence", rat_to_json(r.residual_mass)},
                   {"schedule_1/4", ok.accepted ? "accept" : "reject"},
                   {"schedule_1/4-1/1000", short_.accepted ? "accept" : "reject"}},
                  {{"partial", rat_to_json(Rat(1, 4))},
                   {"total", rat_to_json(Rat(3, 8))},
                   {"divergence", rat_to_json(Rat(1, 8))}},
                  "exact", pass);
}

nlohmann::json cs_rsamp_bd(Params& p, std::uint64_t) {
    const auto M = p.u64("M", 1), N = p.u64("N", 0), n = p.u64("n", 3);
    const Rat exact = exact_total_error(build_rsamp_bd(M, N, n), rsamp_bd_post());
    const Rat claim = tail_bound(M, N, static_cast<unsigned>(n));
    return result({{"total_error", rat_to_json(exact)}}, rat_to_json(claim), "exact", exact == claim);
}

nlohmann::json cs_spline(Params& p, std::uint64_t) {
    const auto n = p.u64("n", 1), k = p.u64("k", 1);
    const Rat survival = spline_survival(n, k + 1);
    const Rat claim = spline_bound(n, k);
    return result({{"survival", rat_to_json(survival)}, {"samples", k + 1}}, rat_to_json(claim), "exact",
                  survival == claim);
}

nlohmann::json cs_iter_demo(Params& p, std::uint64_t) {
    const auto K = p.u64("K", 2);
    const Rat eps = p.rat("eps", Rat(1, 2));
    if (eps.sign() < 0 || eps > Rat(1)) throw std::invalid_argument("eps must lie in [0, 1]");
    const auto a = eps.num_i64(), b = eps.den_i64();
    if (!a || !b) throw std::invalid_argument("eps is too large");
    const Rat exact = exact_total_error(build_iter_demo(K, static_cast<std::uint64_t>(*a), static_cast<std::uint64_t>(*b)),
                                        iter_demo_post());
    const Rat closed = iter_demo_exact(K, eps);
    const Rat claim = eps * Rat(K) / Rat(2);
    return result({{"exact_error", rat_to_json(exact)},
                   {"closed_form", rat_to_json(closed)},
                   {"gap", rat_to_json(claim - exact)}},
                  rat_to_json(claim), "exact", exact == closed && exact <= claim);
}

nlohmann::json cs_uniform_sampler(Params& p, std::uint64_t) {
    const auto M = p.u64("M", 3), N = p.u64("N", 1);
    const Rat k = p.rat("k", 2), eps0 = p.rat("eps0", Rat(1, 100));
    const Verdict v = validate_amplification(build_uniform_body(M, N), uniform_certificate(M, N, k), eps0);
    nlohmann::json observed = {{"verdict", v.accepted ? "accept" : "reject"}, {"reason", v.reason}};
    bool pass = v.accepted;
    Rat truncated = 1;
    if (v.accepted) {
        const unsigned d = *v.certified_depth;
        truncated = exact_total_error(build_rsamp_bd(M, N, d), rsamp_bd_post());
        observed["certified_depth"] = d;
        observed["truncated_error"] = rat_to_json(truncated);
        pass = truncated <= eps0;
    }
    return result(observed, rat_to_json(eps0), "exact", pass);
}

nlohmann::json cs_poisson(Params&, std::uint64_t) {
    const AmpCertificate c = poisson_certificate();
    const Verdict v = validate_amplification(build_poisson_body(), c, Rat(1, 2));
    return result({{"verdict", v.accepted ? "accept" : "reject"},
                   {"reason", v.reason},
                   {"k", rat_to_json(c.k)},
                   {"certified_depth", v.certified_depth ? nlohmann::json(*v.certified_depth) : nlohmann::json()}},
                  {{"k", rat_to_json(Rat(4, 3))}}, "exact", v.accepted && c.k == Rat(4, 3));
}

nlohmann::json cs_vector(Params& p, std::uint64_t seed) {
    const Rat prob = p.rat("p", Rat(1, 100));
    const auto m = p.u64("m", 32), trials = p.u64("trials", 100'000);
    const double delta = p.real("delta", 1e-3);
    const auto a = prob.num_i64(), b = prob.den_i64();
    if (prob.sign() < 0 || prob > Rat(1) || !a || !b) throw std::invalid_argument("p must be a rational in [0, 1]");
    const Rat exact = vector_exact_failure(prob, m);
    const Rat claim = Rat(3) * prob * Rat(m);
    const Estimate est = estimate_host(
        [&](RandomSource& src) {
            return run_faulty_vector(static_cast<std::uint64_t>(*a), static_cast<std::uint64_t>(*b), m, src).failed;
        },
        trials, seed, delta);
    const bool pass = exact <= claim && est.freq <= claim.to_double() + est.tolerance &&
                      std::abs(est.freq - exact.to_double()) <= est.tolerance;
    return sampled(result({{"event", "fault"}, {"writes", vector_writes(m)},
                           {"exact_failure", rat_to_json(exact)},
                           {"exact_failure_approx", exact.to_double()},
                           {"estimate", estimate_to_json(est)}},
                          rat_to_json(claim), "exact+montecarlo", pass));
}

nlohmann::json cs_amortized_hash(Params& p, std::uint64_t seed) {
    const auto n = p.u64("n", 7), MAX = p.u64("MAX", 4);
    const auto s = p.u64("s", MAX), trials = p.u64("trials", 100'000);
    const double delta = p.real("delta", 1e-3);
    if (s > MAX) throw std::invalid_argument("s must not exceed MAX");
    const Rat exact = birthday_collision(n, s);
    const Rat credit = birthday_credit(n, s);
    const Rat eps = amortized_hash_eps(n, MAX);
    const Estimate est = estimate_host([&](RandomSource& src) { return run_amortized_hash(n, MAX, s, src).collision; },
                                       trials, seed, delta);
    const bool pass = exact <= credit && eps * Rat(MAX) == birthday_credit(n, MAX) &&
                      est.freq <= credit.to_double() + est.tolerance;
    return sampled(result({{"event", "collision"}, {"exact_collision", rat_to_json(exact)},
                           {"eps_max", rat_to_json(eps)},
                           {"eps_max_times_max", rat_to_json(eps * Rat(MAX))},
                           {"estimate", estimate_to_json(est)}},
                          rat_to_json(credit), "exact+montecarlo", pass));
}

nlohmann::json cs_resizing_hash(Params& p, std::uint64_t seed) {
    const auto V0 = p.u64("V0", 8), R0 = p.u64("R0", 2), m = p.u64("m", 64), trials = p.u64("trials", 100'000);
    const double delta = p.real("delta", 1e-3);
    const LedgerReplay ledger = resizing_ledger_replay(V0, R0, m);
    const Rat claim = Rat(m) * resizing_hash_credit(V0, R0);
    const Estimate est = estimate_host([&](RandomSource& src) { return run_resizing_hash(V0, R0, m, src).collision; },
                                       trials, seed, delta);
    const bool pass = ledger.ok && est.freq <= claim.to_double() + est.tolerance;
    return sampled(result({{"event", "collision"}, {"ledger_ok", ledger.ok},
                           {"ledger_epochs", ledger.epochs},
                           {"ledger_detail", ledger.detail},
                           {"estimate", estimate_to_json(est)}},
                          rat_to_json(claim), "exact+montecarlo", pass));
}

nlohmann::json cs_hashmap(Params& p, std::uint64_t seed) {
    const auto V0 = p.u64("V0", 64), R0 = p.u64("R0", 2), m = p.u64("m", 4), trials = p.u64("trials", 100'000);
    const double delta = p.real("delta", 1e-3);
    std::vector<std::uint64_t> keys;
    for (std::uint64_t i = 0; i < m; ++i) keys.push_back(i);
    std::set<std::uint64_t> reference(keys.begin(), keys.end());
    // Each key twice: the second insert must be a no-op.
    std::vector<std::uint64_t> doubled;
    for (auto k : keys) doubled.insert(doubled.end(), {k, k});
    bool represented = true;
    const Estimate est = estimate_host(
        [&](RandomSource& src) {
            const HashMapRun run = run_hashmap_insert(V0, R0, doubled, src);
            if (run.ok && run.set != reference) represented = false;
            if (!run.ok) {
                for (auto k : run.set)
                    if (!reference.count(k)) represented = false;
            }
            return !run.ok;
        },
        trials, seed, delta);
    const Rat claim = Rat(m) * resizing_hash_credit(V0, R0);
    const bool pass = represented && est.freq <= claim.to_double() + est.tolerance;
    return sampled(result({{"event", "dropped insert"}, {"collision_free_runs_exact", represented}, {"estimate", estimate_to_json(est)}},
                          rat_to_json(claim), "montecarlo", pass));
}

nlohmann::json merkle_exhaustive_json(const MerkleExhaustive& m) {
    return {{"V", m.V},
            {"height", m.height},
            {"max_queries", m.max_queries},
            {"eps_max", rat_to_json(m.eps_max)},
            {"tree_collision_free", rat_to_json(m.tree_collision_free)},
            {"worst_forged_accept", rat_to_json(m.worst_forged_accept)},
            {"worst_forged_accept_collision_free_tree", rat_to_json(m.worst_forged_accept_cf)},
            {"worst_forged_accept_without_collision", rat_to_json(m.worst_accept_without_collision)},
            {"honest_always_accepted", m.honest_always_accepted},
            {"forgeries", m.forgeries},
            {"tree_paths", m.tree_paths}};
}

nlohmann::json cs_merkle(Params& p, std::uint64_t seed) {
    const auto V = static_cast<unsigned>(p.u64("V", 2));
    const auto height = static_cast<unsigned>(p.u64("height", 2));
    const std::string mode = p.str("mode", V * ((1u << (height + 1)) - 1) <= 14 ? "exhaustive" : "montecarlo");
    const Rat eps = amortized_hash_eps((std::uint64_t{1} << V) - 1, merkle_max_queries(height));
    const Rat claim = eps * Rat(height);
    if (mode == "exhaustive") {
        const MerkleExhaustive m = merkle_exhaustive(V, height, default_leaves(height));
        const bool pass = m.honest_always_accepted && m.worst_forged_accept_cf <= claim &&
                          m.worst_accept_without_collision.is_zero();
        return result(merkle_exhaustive_json(m), rat_to_json(claim), "exact", pass);
    }
    if (mode != "montecarlo") throw std::invalid_argument("mode must be 'exhaustive' or 'montecarlo'");
    const auto trials = p.u64("trials", 100'000);
    const double delta = p.real("delta", 1e-3);
    bool honest = true;
    const Estimate est = estimate_host(
        [&](RandomSource& src) {
            LazyHash hash(std::uint64_t{1} << V);
            MerkleTree tree(V, height, default_leaves(height), hash, src);
            const std::size_t leaf = src.uniform(tree.leaf_count() - 1);
            if (!merkle_check(tree.root(), tree.proof(leaf), tree.leaf(leaf), V, hash, src)) honest = false;
            const auto forgeries = single_flip_forgeries(tree, leaf);
            const Forgery& f = forgeries[src.uniform(forgeries.size() - 1)];
            return merkle_check(tree.root(), f.proof, f.value, V, hash, src) && !tree.matches(f.proof, f.value);
        },
        trials, seed, delta);
    const bool pass = honest && est.freq <= claim.to_double() + est.tolerance;
    return sampled(result({{"event", "forged proof accepted"}, {"honest_always_accepted", honest}, {"estimate", estimate_to_json(est)}},
                          rat_to_json(claim), "montecarlo", pass));
}

nlohmann::json cs_walksat(Params& p, std::uint64_t seed) {
    const std::string path = p.str("fixture", "fixtures/all_positive.json");
    const nlohmann::json doc = read_json_file(path);
    const Cnf f = Cnf::from_json(doc);
    const bool satisfiable = doc.value("satisfiable", true);
    const auto trials = p.u64("trials", 10'000);
    const auto budget = p.u64("budget", walksat_default_budget(f));
    const double delta = p.real("delta", 1e-3);
    bool sound = true;
    const Estimate est = estimate_host(
        [&](RandomSource& src) {
            const WalkSatRun run = run_walksat(f, src, budget);
            if (run.solved && !satisfies(f, run.assignment)) sound = false;
            return run.solved;
        },
        trials, seed, delta);
    const double claim = satisfiable ? 0.99 : 0.0;
    const bool pass = sound && (satisfiable ? est.freq >= claim : est.successes == 0);
    return sampled(result({{"event", "solved"}, {"satisfiable", satisfiable},
                           {"assignments_satisfy", sound},
                           {"budget", budget},
                           {"estimate", estimate_to_json(est)}},
                          {{"solve_frequency", satisfiable ? ">= 0.99" : "== 0"}}, "montecarlo", pass));
}

const std::map<std::string, Runner>& registry() {
    static const std::map<std::string, Runner> r{
        {"two_coins", cs_two_coins},
        {"fig1", cs_fig1},
        {"rsamp_bd", cs_rsamp_bd},
        {"spline", cs_spline},
        {"iter_demo", cs_iter_demo},
        {"uniform_sampler", cs_uniform_sampler},
        {"poisson", cs_poisson},
        {"vector", cs_vector},
        {"amortized_hash", cs_amortized_hash},
        {"resizing_hash", cs_resizing_hash},
        {"hashmap", cs_hashmap},
        {"merkle", cs_merkle},
        {"walksat", cs_walksat},
    };
    return r;
}

} // namespace

std::vector<std::string> case_study_names() {
    std::vector<std::string> out;
    for (const auto& [name, _] : registry()) out.push_back(name);
    return out;
}

nlohmann::json run_case_study(const std::string& name, const CaseParams& params, std::uint64_t seed) {
    auto it = registry().find(name);
    if (it == registry().end()) throw std::invalid_argument("unknown case study '" + name + "'");
    Params p(params);
    nlohmann::json r = it->second(p, seed);
    r["name"] = name;
    r["params"] = p.finish();
    return r;
}

} // namespace errcred
