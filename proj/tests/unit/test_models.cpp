#include "srpmc/automata/semantics.hpp"
#include "srpmc/explorer/checker.hpp"
#include "srpmc/explorer/state_space.hpp"
#include "srpmc/models/attributes.hpp"
#include "srpmc/models/protocols.hpp"
#include "srpmc/models/topology.hpp"
#include "srpmc/query/query.hpp"

#include "consistency.hpp"

#include <doctest.h>

#include <deque>
#include <map>

using namespace srpmc;
using namespace srpmc::models;
using LA = ListenerAttribute;

namespace {

TopologyConfig with_bridges(int n)
{
    auto c = TopologyConfig::reference();
    c.bridges = n;
    return c;
}

bool holds(const explorer::StateSpace& space, std::string_view query)
{
    return query::run_query(space, query).verdict.satisfied;
}

}  // namespace

TEST_CASE("listener attribute merge table")
{
    CHECK(merge_listener_attributes(LA::LR, LA::LAF) == LA::LRF);
    CHECK(merge_listener_attributes(LA::LRF, LA::LR) == LA::LRF);
    CHECK(merge_listener_attributes(LA::LR, LA::LR) == LA::LR);
    CHECK(merge_listener_attributes(LA::LAF, LA::LAF) == LA::LAF);
    for (auto x : kAllListenerAttributes) {
        CHECK(merge_listener_attributes(LA::NU_LA, x) == x);
        CHECK(merge_listener_attributes(x, LA::NU_LA) == x);
    }
}

TEST_CASE("merge laws hold exhaustively")
{
    int pairs = 0, triples = 0;
    for (auto a : kAllListenerAttributes)
        for (auto b : kAllListenerAttributes) {
            ++pairs;
            CHECK(merge_listener_attributes(a, b) == merge_listener_attributes(b, a));
            if (a == LA::LRF || b == LA::LRF)
                CHECK(merge_listener_attributes(a, b) == LA::LRF);
            CHECK(merge_listener_attributes(a, merge_listener_attributes(a, b)) == merge_listener_attributes(a, b));
            for (auto c : kAllListenerAttributes) {
                ++triples;
                CHECK(merge_listener_attributes(a, merge_listener_attributes(b, c)) ==
                      merge_listener_attributes(merge_listener_attributes(a, b), c));
            }
        }
    CHECK(pairs == 16);
    CHECK(triples == 64);

    const LnrStatus all[] = {LnrStatus::Unknown, LnrStatus::Ready, LnrStatus::Failed};
    for (auto a : all) {
        CHECK(merge_lnr(LnrStatus::Unknown, a) == a);
        for (auto b : all)
            CHECK(merge_lnr(a, b) == merge_lnr(b, a));
    }
}

TEST_CASE("downstream listeners on the reference line")
{
    const auto c = TopologyConfig::reference();
    CHECK(downstream_listeners("BQ00", c) == std::set<int>{0});
    CHECK(downstream_listeners("BQ01", c) == std::set<int>{1, 2});
    CHECK(downstream_listeners("BQ10", c) == std::set<int>{1});
    CHECK(downstream_listeners("BQ11", c) == std::set<int>{2});
    CHECK(downstream_listeners("BQ20", c) == std::set<int>{2});
    CHECK_THROWS_AS(downstream_listeners("BQ21", c), TopologyError);
    CHECK(output_ports(c).size() == 5);
}

TEST_CASE("consistent reservation distributions")
{
    const auto ds = enumerate_consistent_distributions(TopologyConfig::reference());
    REQUIRE(ds.size() == 8);
    CHECK(ds.front().subset == 0);
    for (const auto& [port, reserved] : ds.front().port_reserved)
        CHECK_FALSE(reserved);
    CHECK(ds.front().listener_receives == std::vector<bool>{false, false, false});

    CHECK(ds[1].subset == 1);
    CHECK(distribution_formula(ds[1], "LA_transmitted") ==
          "(BQ00.Re_reserved == Yes && BQ01.Re_reserved != Yes && BQ10.Re_reserved != Yes && "
          "BQ11.Re_reserved != Yes && BQ20.Re_reserved != Yes && L0.LA_transmitted == LR && "
          "L1.LA_transmitted != LR && L2.LA_transmitted != LR)");

    CHECK(ds.back().subset == 7);
    for (const auto& [port, reserved] : ds.back().port_reserved)
        CHECK(reserved);
    CHECK(ds.back().listener_receives == std::vector<bool>{true, true, true});
}

TEST_CASE("topology and timer validation")
{
    CHECK_THROWS_AS(build_srp_model(with_bridges(0)), TopologyError);
    CHECK_THROWS_AS(build_srp_model(with_bridges(4)), TopologyError);
    auto c = TopologyConfig::reference();
    CHECK(worst_case_response_ms(c) == 1400);
    c.timer_ms = 1400;
    try {
        build_csrp_model(c);
        FAIL("timer equal to the worst case accepted");
    } catch (const TimerTooShort& e) {
        CHECK(e.required_ms() == 1400);
    }
    c.timer_ms = 1410;
    CHECK_NOTHROW(build_csrp_model(c));
    c.tick_ms = 50;
    c.timer_ms = 1500;
    CHECK(rounded_min_process_ms(c) == 50);
    CHECK(automata::validate_model(build_csrp_model(c)).ok());
    c.tick_ms = 30;
    CHECK_THROWS_AS(build_srp_model(c), TopologyError);
}

TEST_CASE("builders are deterministic")
{
    for (auto p : {Protocol::SRP, Protocol::CSRP}) {
        const automata::Network a(build_model(p, with_bridges(1)));
        const automata::Network b(build_model(p, with_bridges(1)));
        REQUIRE(a.process_count() == b.process_count());
        REQUIRE(a.var_count() == b.var_count());
        for (std::uint32_t v = 0; v < a.var_count(); ++v)
            CHECK(a.var_slot_name(v) == b.var_slot_name(v));
        for (std::size_t i = 0; i < a.process_count(); ++i) {
            CHECK(a.process(i).name == b.process(i).name);
            CHECK(a.process(i).edges.size() == b.process(i).edges.size());
        }
        const auto ga = explorer::StateSpace(a).summary();
        const auto gb = explorer::StateSpace(b).summary();
        CHECK(ga.states == gb.states);
        CHECK(ga.transitions == gb.transitions);
    }
}

TEST_CASE("process layout")
{
    const automata::Network net(build_srp_model());
    std::vector<std::string> names;
    for (const auto& p : net.processes())
        names.push_back(p.name);
    CHECK(names == std::vector<std::string>{"T", "S", "L0", "L1", "L2", "BI0", "BI1", "BI2", "BQ00", "BQ01", "BQ10",
                                            "BQ11", "BQ20"});
}

TEST_CASE("SRP stream starts only after the talker got LR or LRF")
{
    // Breadth-first search over (state, talker-has-seen-LR) pairs.
    const automata::Network net(build_srp_model(with_bridges(2)));
    const auto t = *net.find_process("T");
    const auto s = *net.find_process("S");
    const auto las = net.find_local_var(t, "LAs_received")->base;
    const auto streaming = *net.find_location(s, "Stream_transmission");
    auto seen_ready = [&](const automata::SystemState& st) {
        const auto v = st.vars[las];
        return v == static_cast<int>(LA::LR) || v == static_cast<int>(LA::LRF);
    };
    std::map<std::pair<automata::SystemState, bool>, bool> visited;
    std::deque<std::pair<automata::SystemState, bool>> queue;
    const auto init = automata::initial_state(net);
    queue.push_back({init, seen_ready(init)});
    visited[queue.front()] = true;
    std::uint64_t bad = 0;
    while (!queue.empty()) {
        auto [st, seen] = queue.front();
        queue.pop_front();
        if (st.locations[s] == streaming && !seen)
            ++bad;
        std::vector<automata::SystemState> next;
        for (auto& [tr, n] : automata::action_successors(st, net))
            next.push_back(n);
        if (auto d = automata::delay_successor(st, net))
            next.push_back(*d);
        for (auto& n : next) {
            std::pair<automata::SystemState, bool> key{n, seen || seen_ready(st)};
            if (visited.emplace(key, true).second)
                queue.push_back(std::move(key));
        }
    }
    CHECK(bad == 0);
    CHECK(visited.size() > 1000);
}

TEST_CASE("SRP port attributes come from downstream listeners")
{
    const automata::Network net(build_srp_model(with_bridges(2)));
    const explorer::StateSpace space(net);
    CHECK(holds(space, "A[] BQ00.LA_received != NU_LA imply L0.LA_transmitted != NU_LA"));
    CHECK(holds(space, "A[] BQ10.LA_received != NU_LA imply L1.LA_transmitted != NU_LA"));
    CHECK(holds(space, "A[] BQ01.LA_received != NU_LA imply L1.LA_transmitted != NU_LA"));
    CHECK(holds(space, "E<> BQ00.Re_reserved == Yes && BQ01.Re_reserved == No"));
    CHECK(holds(space, "E<> L0.LA_transmitted == LAF"));
    CHECK(holds(space, "E<> T.LAs_received == LRF"));
}

TEST_CASE("CSRP end states are consistent on smaller lines")
{
    for (int n : {1, 2}) {
        CAPTURE(n);
        const auto config = with_bridges(n);
        const automata::Network net(build_csrp_model(config));
        const explorer::StateSpace space(net);
        const auto r = testing::check_csrp_deadlocks(space, config);
        CHECK(r.deadlocks > 0);
        for (const auto& e : r.examples)
            MESSAGE(e);
        CHECK(r.reservation_violations == 0);
        CHECK(r.lnr_violations == 0);
        CHECK(holds(space, "A<> T.End_SRP"));
        CHECK(holds(space, "A[] deadlock imply T.End_SRP && L0.End_SRP && BQ00.End_SRP"));
    }
}

TEST_CASE("CSRP admission by mask frees the other reservations")
{
    auto config = with_bridges(2);
    config.policy = AdmissionPolicy::Mask;
    config.admission_mask = 0b01;
    const automata::Network net(build_csrp_model(config));
    const explorer::StateSpace space(net);
    CHECK(holds(space, "A[] deadlock imply L1.Can_I_receive != Yes"));
    CHECK(holds(space, "A[] deadlock imply BQ10.Re_reserved != Yes && BQ01.Re_reserved != Yes"));
    CHECK(holds(space, "E<> deadlock && L0.Can_I_receive == Yes"));
}
