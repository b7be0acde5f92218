#include "srpmc/automata/semantics.hpp"
#include "srpmc/explorer/state_space.hpp"
#include "srpmc/models/protocols.hpp"
#include "srpmc/query/query.hpp"

#include <benchmark/benchmark.h>

using namespace srpmc;

namespace {

models::TopologyConfig line(int bridges)
{
    auto c = models::TopologyConfig::reference();
    c.bridges = bridges;
    return c;
}

void BM_ExploreSrp(benchmark::State& state)
{
    const automata::Network net(models::build_srp_model(line(static_cast<int>(state.range(0)))));
    std::uint64_t states = 0;
    for (auto _ : state) {
        const explorer::StateSpace space(net);
        states = space.state_count();
        benchmark::DoNotOptimize(states);
    }
    state.counters["states"] = static_cast<double>(states);
    state.counters["states/s"] = benchmark::Counter(static_cast<double>(states), benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_ExploreSrp)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_ExploreCsrp(benchmark::State& state)
{
    const automata::Network net(models::build_csrp_model(line(static_cast<int>(state.range(0)))));
    const auto factoring = state.range(1) ? explorer::ClockFactoring::Auto : explorer::ClockFactoring::Off;
    std::uint64_t states = 0, keys = 0;
    for (auto _ : state) {
        const explorer::StateSpace space(net, {.factoring = factoring});
        states = space.state_count();
        keys = space.key_count();
        benchmark::DoNotOptimize(states);
    }
    state.counters["states"] = static_cast<double>(states);
    state.counters["keys"] = static_cast<double>(keys);
}
BENCHMARK(BM_ExploreCsrp)->Args({1, 0})->Args({1, 1})->Args({2, 0})->Args({2, 1})->Unit(benchmark::kMillisecond);

void BM_Successors(benchmark::State& state)
{
    const automata::Network net(models::build_srp_model());
    auto s = automata::initial_state(net);
    for (auto _ : state) {
        auto next = automata::action_successors(s, net);
        benchmark::DoNotOptimize(next);
    }
}
BENCHMARK(BM_Successors);

void BM_Codec(benchmark::State& state)
{
    const automata::Network net(models::build_csrp_model());
    const explorer::StateCodec codec(net);
    const auto s = automata::initial_state(net);
    std::vector<std::uint64_t> words(codec.words());
    auto out = s;
    for (auto _ : state) {
        codec.encode(s, words.data());
        codec.decode(words.data(), out);
        benchmark::DoNotOptimize(out);
    }
}
BENCHMARK(BM_Codec);

void BM_ParseQuery(benchmark::State& state)
{
    const std::string text =
        "E<> deadlock && S.Stream_transmission && (BQ01.Re_reserved == No || BQ11.Re_reserved == No) && "
        "BQ20.Re_reserved == Yes";
    for (auto _ : state)
        benchmark::DoNotOptimize(query::parse_query(text));
}
BENCHMARK(BM_ParseQuery);

void BM_CheckQueries(benchmark::State& state)
{
    const automata::Network net(models::build_srp_model(line(2)));
    const explorer::StateSpace space(net);
    const char* queries[] = {"E[] T.LAs_received == NU_LA", "E<> S.Stream_transmission",
                             "A[] BQ00.LA_received != NU_LA imply L0.LA_transmitted != NU_LA",
                             "L0.End && L0.LA_transmitted != NU_LA --> BQ00.LA_received != NU_LA"};
    const auto* q = queries[state.range(0)];
    for (auto _ : state)
        benchmark::DoNotOptimize(query::run_query(space, q).verdict.satisfied);
    state.SetLabel(q);
}
BENCHMARK(BM_CheckQueries)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
