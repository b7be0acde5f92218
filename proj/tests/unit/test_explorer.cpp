#include "srpmc/explorer/checker.hpp"
#include "srpmc/explorer/state_space.hpp"
#include "srpmc/explorer/trace.hpp"
#include "srpmc/models/protocols.hpp"
#include "srpmc/query/query.hpp"

#include "evidence.hpp"
#include "oracle.hpp"
#include "random_model.hpp"

#include <doctest.h>

#include <random>

using namespace srpmc;
using namespace srpmc::automata;
using explorer::StateSpace;

namespace {

SystemModel toy()
{
    SystemModel m;
    Template t;
    t.name = "Toy";
    t.locations = {{"A", LocationKind::Normal, {}, true}, {"B", LocationKind::Normal, {}, false}};
    t.edges.push_back({"A", "B", {}, Sync::none(), {}});
    m.templates.push_back(t);
    m.processes.push_back({"P", "Toy", {}});
    return m;
}

// P waits in A until its clock reaches `wait`, then moves to B.
SystemModel timed(std::int32_t wait)
{
    SystemModel m;
    m.tick_ms = 10;
    Template t;
    t.name = "Wait";
    t.clocks = {"t"};
    t.locations = {{"A", LocationKind::Normal, {}, true}, {"B", LocationKind::Normal, {}, false}};
    t.edges.push_back({"A", "B", ge(Expr::clock(Scope::Local, 0), lit(wait)), Sync::none(), {}});
    m.templates.push_back(t);
    m.processes.push_back({"P", "Wait", {}});
    return m;
}

models::TopologyConfig small(int bridges, int tick = 10)
{
    auto c = models::TopologyConfig::reference();
    c.bridges = bridges;
    c.tick_ms = tick;
    return c;
}

bool same(const explorer::GraphSummary& a, const explorer::GraphSummary& b)
{
    return a.states == b.states && a.transitions == b.transitions && a.deadlocks == b.deadlocks;
}

}  // namespace

TEST_CASE("toy model graph counts")
{
    const Network net(toy());
    const StateSpace space(net);
    const auto g = space.summary();
    CHECK(g.states == 2);
    CHECK(g.transitions == 1);
    CHECK(g.deadlocks == 1);
}

TEST_CASE("state codec round trip")
{
    const Network net(models::build_csrp_model(small(2)));
    const explorer::StateCodec codec(net);
    std::mt19937 rng(3);
    for (int i = 0; i < 500; ++i) {
        SystemState s = initial_state(net);
        for (std::size_t p = 0; p < s.locations.size(); ++p)
            s.locations[p] = static_cast<std::uint16_t>(rng() % net.process(p).locations.size());
        for (std::uint32_t v = 0; v < s.vars.size(); ++v)
            s.vars[v] = net.var_min(v) +
                        static_cast<std::int32_t>(rng() % static_cast<std::uint32_t>(net.var_max(v) - net.var_min(v) + 1));
        for (auto& c : s.clocks)
            c = static_cast<std::int32_t>(rng() % static_cast<std::uint32_t>(net.clock_ceiling() / net.tick() + 1)) *
                net.tick();
        std::vector<std::uint64_t> key(codec.words());
        codec.encode(s, key.data());
        SystemState back = s;
        codec.decode(key.data(), back);
        CHECK(back == s);
    }
}

TEST_CASE("deadlock atom")
{
    SUBCASE("state with an enabled edge")
    {
        const Network net(toy());
        const StateSpace space(net);
        CHECK_FALSE(space.is_deadlock(space.initial_ref()));
        CHECK_FALSE(explorer::is_deadlock(initial_state(net), net));
    }
    SUBCASE("edge enabled only after three delays")
    {
        const Network net(timed(30));
        const StateSpace space(net);
        CHECK_FALSE(space.has_action(space.initial_ref()));
        CHECK_FALSE(space.is_deadlock(space.initial_ref()));
        CHECK_FALSE(explorer::is_deadlock(initial_state(net), net));
        CHECK(space.summary().deadlocks == 1);
    }
    SUBCASE("SRP quiescent states have every listener at End")
    {
        const Network net(models::build_srp_model(small(2)));
        const StateSpace space(net);
        const auto expr = query::parse_state_expr("deadlock imply L0.End && L1.End");
        CHECK(explorer::check_always(space, query::bind(expr, net)).satisfied);
        CHECK(space.summary().deadlocks > 0);
    }
}

TEST_CASE("state budget overflow is an explicit error")
{
    const Network net(models::build_srp_model(small(2)));
    CHECK_THROWS_AS(StateSpace(net, {.state_budget = 1000}), explorer::BudgetExceeded);
}

TEST_CASE("factored and plain stores agree on the reference models")
{
    for (auto protocol : {models::Protocol::SRP, models::Protocol::CSRP}) {
        for (int bridges : {1, 2}) {
            CAPTURE(bridges);
            const Network net(models::build_model(protocol, small(bridges)));
            const StateSpace plain(net, {.factoring = explorer::ClockFactoring::Off});
            const StateSpace factored(net, {.factoring = explorer::ClockFactoring::Auto});
            CHECK(same(plain.summary(), factored.summary()));
            if (protocol == models::Protocol::CSRP)
                CHECK(factored.factored_clock().has_value());
            else
                CHECK_FALSE(factored.factored_clock().has_value());
            for (explorer::StateId id = 0; id < factored.state_count(); id += 97) {
                const auto s = factored.state(id);
                CHECK(factored.find(s) == id);
                CHECK(plain.find(s) != explorer::kNoState);
            }
        }
    }
}

TEST_CASE("pinned SRP graph counts")
{
    const Network net(models::build_srp_model(small(2)));
    const auto g = StateSpace(net).summary();
    CHECK(g.states == 32483);
    CHECK(g.transitions == 108217);
    CHECK(g.deadlocks == 28);
    const Network csrp(models::build_csrp_model(small(2)));
    const auto h = StateSpace(csrp).summary();
    CHECK(h.states == 690535);
    CHECK(h.transitions == 1967117);
    CHECK(h.deadlocks == 28);
}

TEST_CASE("trivial checker cases")
{
    const Network net(models::build_srp_model(small(1)));
    const StateSpace space(net);
    using P = explorer::StatePredicate;
    auto r = explorer::check_reachable(space, P::constant(false));
    CHECK_FALSE(r.satisfied);
    CHECK_FALSE(r.evidence.has_value());
    r = explorer::check_reachable(space, P::constant(true));
    CHECK(r.satisfied);
    REQUIRE(r.evidence.has_value());
    CHECK(r.evidence->size() == 0);
    CHECK(explorer::check_always(space, P::constant(true)).satisfied);
    CHECK_FALSE(explorer::check_exists_always(space, P::constant(false)).satisfied);
    CHECK(explorer::check_eventually(space, P::constant(true)).satisfied);
    CHECK(explorer::check_leads_to(space, P::constant(false), P::constant(false)).satisfied);
}

TEST_CASE("an expired deadline stops a check")
{
    const Network net(models::build_srp_model(small(2)));
    const StateSpace space(net);
    const auto phi = explorer::StatePredicate::constant(true);
    CHECK_THROWS_AS(explorer::check_exists_always(space, phi, explorer::CheckLimits::within(std::chrono::seconds(-1))),
                    explorer::CheckTimeout);
}

TEST_CASE("traces: text and JSON round trip, tampering is caught")
{
    const Network net(models::build_srp_model(small(2)));
    const StateSpace space(net);
    const auto r = query::run_query(space, "E<> S.Stream_transmission && BQ00.Re_reserved == No");
    REQUIRE(r.verdict.evidence.has_value());
    const auto& trace = *r.verdict.evidence;
    explorer::replay(net, trace);

    const auto text = explorer::to_text(net, trace);
    CHECK(text.rfind("trace witness finite\n", 0) == 0);
    CHECK(text.find("\n#1 action ") != std::string::npos);
    const auto back = explorer::parse_text_trace(net, text);
    CHECK(back.steps.size() == trace.steps.size());
    CHECK(back.final_state() == trace.final_state());
    CHECK(explorer::to_text(net, back) == text);

    const auto json = explorer::to_json(net, trace);
    CHECK(explorer::to_json(net, explorer::parse_json_trace(net, json)) == json);

    // Drop one step: the next line no longer follows.
    const auto second = text.find("\n#2 ");
    const auto third = text.find("\n#3 ");
    REQUIRE(third != std::string::npos);
    const std::string broken = text.substr(0, second) + text.substr(third);
    CHECK_THROWS_AS(explorer::parse_text_trace(net, broken), explorer::TraceError);

    explorer::Trace bad = trace;
    bad.steps.pop_back();
    bad.steps.push_back(trace.steps.front());
    CHECK_THROWS_AS(explorer::replay(net, bad), explorer::TraceError);
}

TEST_CASE("checkers agree with the naive oracle on random models")
{
    std::mt19937 rng(20240601);
    int models_checked = 0;
    int queries_checked = 0;
    int factored_runs = 0;
    while (models_checked < 200) {
        const auto m = testing::random_model(rng);
        if (!validate_model(m).ok())
            continue;
        const Network net(m);
        const auto graph = testing::naive_explore(net, 10000);
        if (!graph)
            continue;
        ++models_checked;

        std::vector<std::unique_ptr<StateSpace>> spaces;
        spaces.push_back(std::make_unique<StateSpace>(net, explorer::ExploreOptions{.factoring = explorer::ClockFactoring::Off}));
        for (std::uint32_t c = 0; c < net.clock_count(); ++c)
            if (explorer::factorable_clock(net, c)) {
                spaces.push_back(std::make_unique<StateSpace>(
                    net, explorer::ExploreOptions{.factoring = explorer::ClockFactoring::Slot, .factored_slot = c}));
                ++factored_runs;
            }
        for (const auto& space : spaces) {
            const auto g = space->summary();
            CHECK(g.states == graph->states.size());
            CHECK(g.transitions == graph->transitions);
            CHECK(g.deadlocks == graph->deadlocks);
        }
        for (std::size_t i = 0; i < graph->states.size(); ++i)
            CHECK(explorer::is_deadlock(graph->states[i], net) == (graph->deadlock[i] != 0));

        for (int k = 0; k < 8; ++k) {
            const auto text = testing::random_query(rng, m);
            CAPTURE(text);
            const auto q = query::parse_query(text);
            const bool expected = testing::naive_check(*graph, q, net);
            for (const auto& space : spaces) {
                const auto r = query::run_query(*space, q);
                CHECK(r.verdict.satisfied == expected);
                CHECK(testing::validate_evidence(net, q, r.verdict) == "");
            }
            ++queries_checked;

            // Dualities and monotone leads-to on the plain store.
            const auto phi = query::bind(q.phi, net);
            CHECK(explorer::check_always(*spaces[0], phi).satisfied ==
                  !explorer::check_reachable(*spaces[0], !phi).satisfied);
            CHECK(explorer::check_eventually(*spaces[0], phi).satisfied ==
                  !explorer::check_exists_always(*spaces[0], !phi).satisfied);
            if (q.kind == query::QueryKind::LeadsTo) {
                const auto psi = query::bind(q.psi, net);
                if (explorer::check_always(*spaces[0], !phi || psi).satisfied)
                    CHECK(explorer::check_leads_to(*spaces[0], phi, psi).satisfied);
            }
        }
    }
    MESSAGE("models: " << models_checked << ", queries: " << queries_checked << ", factored stores: " << factored_runs);
    CHECK(factored_runs > 0);
}
