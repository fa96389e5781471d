#include "errcred/casestudies.hpp"
#include "errcred/checker.hpp"
#include "errcred/montecarlo.hpp"
#include "errcred/semantics.hpp"

#include <benchmark/benchmark.h>

using namespace errcred;

static void BM_exec_fig1(benchmark::State& state) {
    const Config start = Config::initial(build_fig1());
    for (auto _ : state) benchmark::DoNotOptimize(exec_n(start, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_exec_fig1)->Arg(8)->Arg(16)->Arg(64);

static void BM_exec_rsamp_bd(benchmark::State& state) {
    const Config start = Config::initial(build_rsamp_bd(4, 1, static_cast<std::uint64_t>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(exec_n(start, 1024));
}
BENCHMARK(BM_exec_rsamp_bd)->Arg(2)->Arg(4)->Arg(6);

static void BM_validate_fig1(benchmark::State& state) {
    const ExprPtr e = build_fig1();
    const CreditSchedule s = fig1_schedule(Rat(1, 4));
    const Postcondition post = fig1_post();
    for (auto _ : state) benchmark::DoNotOptimize(validate_schedule(e, s, post, Mode::Partial));
}
BENCHMARK(BM_validate_fig1);

static void BM_amplification(benchmark::State& state) {
    const ExprPtr body = build_uniform_body(3, 1);
    const AmpCertificate cert = uniform_certificate(3, 1, 2);
    for (auto _ : state) benchmark::DoNotOptimize(validate_amplification(body, cert, Rat(1, 100)));
}
BENCHMARK(BM_amplification);

static void BM_mc_two_coins(benchmark::State& state) {
    const ExprPtr e = build_two_coins();
    const Postcondition post = two_coins_post();
    for (auto _ : state) benchmark::DoNotOptimize(estimate(e, post, 1000, 7, 64));
}
BENCHMARK(BM_mc_two_coins);

BENCHMARK_MAIN();
