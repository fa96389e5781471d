// errcred: command-line front end. Every command prints one JSON report on
// stdout. Exit status: 0 pass, 1 fail, 2 error.

#include "errcred/casestudies.hpp"
#include "errcred/checker.hpp"
#include "errcred/credits.hpp"
#include "errcred/datastructures.hpp"
#include "errcred/json_io.hpp"
#include "errcred/montecarlo.hpp"
#include "errcred/parser.hpp"
#include "errcred/postcondition.hpp"
#include "errcred/semantics.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#ifndef ERRCRED_VERSION
#define ERRCRED_VERSION "0.0.0"
#endif

using namespace errcred;
using nlohmann::json;

namespace {

constexpr int kReportVersion = 1;

struct Outcome {
    json result;
    bool pass = true;
    bool sampled = false;
};

int emit(const std::string& command, const json& inputs, const Outcome& o) {
    json report = {{"report_version", kReportVersion},
                   {"tool_version", ERRCRED_VERSION},
                   {"command", command},
                   {"inputs", inputs},
                   {"result", o.result},
                   {"verdict", o.pass ? "pass" : "fail"}};
    if (o.sampled) report["rng"] = rng_spec_json();
    std::cout << report.dump(2) << '\n';
    return o.pass ? 0 : 1;
}

int emit_error(const std::string& command, const json& inputs, const std::string& kind, const std::string& message,
               json extra = json::object()) {
    json err = {{"kind", kind}, {"message", message}};
    err.update(extra);
    json report = {{"report_version", kReportVersion},
                   {"tool_version", ERRCRED_VERSION},
                   {"command", command},
                   {"inputs", inputs},
                   {"error", err},
                   {"verdict", "error"}};
    std::cout << report.dump(2) << '\n';
    return 2;
}

json verdict_json(const Verdict& v) {
    json trace = json::array();
    for (const auto& [site, outcome] : v.trace) trace.push_back({{"site", site}, {"outcome", outcome}});
    json j = {{"decision", v.accepted ? "accept" : "reject"},
              {"reason", v.reason},
              {"credit", rat_to_json(v.credit)},
              {"traces", v.traces}};
    if (!v.accepted) j["trace"] = trace;
    if (v.certified_depth) j["certified_depth"] = *v.certified_depth;
    return j;
}

json table_json(const std::vector<std::pair<std::string, Rat>>& rows) {
    json t = json::array();
    for (const auto& [name, value] : rows) t.push_back({{"name", name}, {"value", rat_to_json(value)}});
    return t;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"errcred: exact error bounds for probabilistic programs"};
    app.set_version_flag("--version", std::string("errcred ") + ERRCRED_VERSION);
    app.require_subcommand(1);

    std::string file, post_file, mode_text = "partial", schedule_file;
    std::size_t depth = 64;
    std::size_t frontier_limit = kDefaultFrontierLimit;
    std::optional<std::string> claim;

    auto* parse = app.add_subcommand("parse", "Parse a program and check that printing round-trips");
    parse->add_option("file", file, "Program (.eris)")->required();

    auto* exec = app.add_subcommand("exec", "Exact value distribution after n steps");
    exec->add_option("file", file, "Program (.eris)")->required();
    exec->add_option("--depth", depth, "Step depth n")->capture_default_str();
    exec->add_option("--frontier-limit", frontier_limit, "Maximum frontier size")->capture_default_str();

    auto* bound = app.add_subcommand("bound", "Exact error bracket against a postcondition");
    bound->add_option("file", file, "Program (.eris)")->required();
    bound->add_option("--post", post_file, "Postcondition (JSON)")->required();
    bound->add_option("--mode", mode_text, "partial or total")->check(CLI::IsMember({"partial", "total"}))->capture_default_str();
    bound->add_option("--depth", depth, "Step depth n")->capture_default_str();
    bound->add_option("--frontier-limit", frontier_limit, "Maximum frontier size")->capture_default_str();
    bound->add_option("--claim", claim, "Claimed error; pass iff the bracket's upper end is at most this");

    std::uint64_t trials = 100'000, seed = 0, budget = kDefaultStepBudget;
    double delta = 1e-3;
    auto* mc = app.add_subcommand("mc", "Monte Carlo estimate of the success frequency");
    mc->add_option("file", file, "Program (.eris)")->required();
    mc->add_option("--post", post_file, "Postcondition (JSON)")->required();
    mc->add_option("--trials", trials, "Number of trials")->check(CLI::PositiveNumber)->capture_default_str();
    mc->add_option("--seed", seed, "Base seed")->capture_default_str();
    mc->add_option("--delta", delta, "Hoeffding failure probability")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    mc->add_option("--budget", budget, "Step budget per trial")->capture_default_str();

    auto* check = app.add_subcommand("check-schedule", "Validate a credit schedule");
    check->add_option("file", file, "Program (.eris)")->required();
    check->add_option("schedule", schedule_file, "Credit schedule (JSON)")->required();
    check->add_option("--post", post_file, "Postcondition (JSON)")->required();
    check->add_option("--mode", mode_text, "partial or total")->check(CLI::IsMember({"partial", "total"}))->capture_default_str();

    std::string eps0_text;
    auto* amp = app.add_subcommand("check-amplification", "Validate an amplification certificate for a retry body");
    amp->add_option("file", file, "Loop body (.eris)")->required();
    amp->add_option("certificate", schedule_file, "Certificate (JSON)")->required();
    amp->add_option("--eps0", eps0_text, "Initial error, e.g. 1/100")->required();

    std::vector<std::uint64_t> planner, tail, spline, amort, resize;
    auto* constants = app.add_subcommand("constants", "Closed-form constants");
    constants->add_option("--planner", planner, "N L")->expected(2);
    constants->add_option("--tail", tail, "M N n")->expected(3);
    constants->add_option("--spline", spline, "n k")->expected(2);
    constants->add_option("--amort-hash", amort, "n MAX")->expected(2);
    constants->add_option("--resize-hash", resize, "V0 R0")->expected(2);
    constants->require_option(1);

    std::string study;
    std::vector<std::string> params;
    bool list = false;
    auto* cs = app.add_subcommand("case-study", "Run a case study against its claimed bound");
    cs->add_option("name", study, "Case study name");
    cs->add_option("--param", params, "key=value (repeatable)");
    cs->add_option("--seed", seed, "Base seed")->capture_default_str();
    cs->add_flag("--list", list, "List case studies");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::string cmd = app.get_subcommands().empty() ? "" : app.get_subcommands().front()->get_name();
        return emit_error(cmd, {{"argv", std::vector<std::string>(argv + 1, argv + argc)}}, "usage", e.what());
    }

    const std::string command = app.get_subcommands().front()->get_name();
    json inputs = json::object();
    try {
        Outcome o;
        if (*parse) {
            inputs = {{"file", file}};
            const ExprPtr e = parse_file(file);
            const std::string printed = print_expr(e);
            const bool round_trips = compare(*parse_expr(printed), *e) == 0;
            o.result = {{"canonical", printed}, {"rand_sites", rand_sites(e).size()}, {"round_trip", round_trips}};
            o.pass = round_trips;
        } else if (*exec) {
            inputs = {{"file", file}, {"depth", depth}};
            const ExecResult r = exec_n(Config::initial(parse_file(file)), depth, frontier_limit);
            o.result = exec_to_json(r);
        } else if (*bound) {
            inputs = {{"file", file}, {"post", post_file}, {"mode", mode_text}, {"depth", depth}};
            const BoundResult b = exact_bound(parse_file(file), load_postcondition(post_file), parse_mode(mode_text),
                                              depth, frontier_limit);
            o.result = bound_to_json(b);
            if (claim) {
                const Rat c = Rat::parse(*claim);
                inputs["claim"] = rat_to_json(c);
                o.pass = b.upper <= c;
                o.result["claim_holds"] = o.pass;
            }
        } else if (*mc) {
            inputs = {{"file", file}, {"post", post_file}, {"trials", trials}, {"seed", seed},
                      {"delta", delta}, {"budget", budget}};
            const Estimate est = estimate(parse_file(file), load_postcondition(post_file), trials, seed, budget, delta);
            o.result = estimate_to_json(est);
            o.sampled = true;
        } else if (*check) {
            inputs = {{"file", file}, {"schedule", schedule_file}, {"post", post_file}, {"mode", mode_text}};
            const Verdict v = validate_schedule(parse_file(file), CreditSchedule::from_json(read_json_file(schedule_file)),
                                                load_postcondition(post_file), parse_mode(mode_text));
            o.result = verdict_json(v);
            o.pass = v.accepted;
        } else if (*amp) {
            const Rat eps0 = Rat::parse(eps0_text);
            inputs = {{"file", file}, {"certificate", schedule_file}, {"eps0", rat_to_json(eps0)}};
            const Verdict v = validate_amplification(parse_file(file), AmpCertificate::from_json(read_json_file(schedule_file)), eps0);
            o.result = verdict_json(v);
            o.pass = v.accepted;
        } else if (*constants) {
            if (!planner.empty()) {
                inputs = {{"planner", planner}};
                const PlannerConstants pc = planner_constants(planner[0], static_cast<unsigned>(planner[1]));
                json rem = json::array();
                for (const Rat& r : pc.ec_rem) rem.push_back(rat_to_json(r));
                o.result = {{"N", pc.N}, {"L", pc.L}, {"ecAmp", rat_to_json(pc.ec_amp)}, {"ecRem", rem},
                            {"ecExc", rat_to_json(pc.ec_exc)}};
            } else if (!tail.empty()) {
                inputs = {{"tail", tail}};
                o.result = table_json({{"tail_bound", tail_bound(tail[0], tail[1], static_cast<unsigned>(tail[2]))}});
            } else if (!spline.empty()) {
                inputs = {{"spline", spline}};
                o.result = table_json({{"spline_bound", spline_bound(spline[0], spline[1])}});
            } else if (!amort.empty()) {
                inputs = {{"amort_hash", amort}};
                const Rat eps = amortized_hash_eps(amort[0], amort[1]);
                o.result = table_json({{"eps_max", eps}, {"total", eps * Rat(amort[1])}});
            } else {
                inputs = {{"resize_hash", resize}};
                if (resize[1] == 0 || resize[1] > resize[0]) throw std::invalid_argument("need 0 < R0 <= V0");
                o.result = table_json({{"amortized_error", resizing_hash_credit(resize[0], resize[1])}});
            }
        } else if (*cs) {
            if (list) {
                inputs = {{"list", true}};
                o.result = {{"case_studies", case_study_names()}};
            } else {
                if (study.empty()) throw std::invalid_argument("case-study needs a name (or --list)");
                CaseParams p;
                for (const auto& kv : params) {
                    const auto eq = kv.find('=');
                    if (eq == std::string::npos || eq == 0) throw std::invalid_argument("--param expects key=value, got '" + kv + "'");
                    p[kv.substr(0, eq)] = kv.substr(eq + 1);
                }
                inputs = {{"name", study}, {"params", p}, {"seed", seed}};
                o.result = run_case_study(study, p, seed);
                o.pass = o.result.at("pass").get<bool>();
                o.sampled = o.result.value("sampled", false);
            }
        }
        return emit(command, inputs, o);
    } catch (const ParseError& e) {
        return emit_error(command, inputs, "syntax", e.what(), {{"line", e.line()}, {"column", e.column()}});
    } catch (const ResourceError& e) {
        return emit_error(command, inputs, "resource", e.what());
    } catch (const CheckError& e) {
        return emit_error(command, inputs, "check", e.what());
    } catch (const std::exception& e) {
        return emit_error(command, inputs, "invalid_input", e.what());
    }
}
