#include "consistency.hpp"

#include "srpmc/models/attributes.hpp"

#include <stdexcept>

namespace srpmc::testing {

namespace {

const automata::VarInfo& local(const automata::Network& net, const std::string& process, const std::string& var)
{
    const auto p = net.find_process(process);
    const auto* v = p ? net.find_local_var(*p, var) : nullptr;
    if (!v)
        throw std::runtime_error("missing " + process + "." + var);
    return *v;
}

}  // namespace

ConsistencyResult check_csrp_deadlocks(const explorer::StateSpace& space, const models::TopologyConfig& config)
{
    const auto& net = space.network();
    const int n = config.bridges;
    const auto ready = static_cast<std::int32_t>(models::LnrStatus::Ready);
    const auto yes = static_cast<std::int32_t>(models::ReservationStatus::Yes);

    const auto& talker_lnr = local(net, "T", "LNR");
    const auto* bridge_lnr = net.find_global_var("LNR_bridge");
    if (!bridge_lnr)
        throw std::runtime_error("missing LNR_bridge");
    std::vector<const automata::VarInfo*> received, can_receive;
    for (int l = 0; l < n; ++l) {
        received.push_back(&local(net, "L" + std::to_string(l), "LNR_received"));
        can_receive.push_back(&local(net, "L" + std::to_string(l), "Can_I_receive"));
    }
    const auto ports = models::output_ports(config);
    std::vector<const automata::VarInfo*> reserved;
    std::vector<std::set<int>> downstream;
    for (const auto& p : ports) {
        reserved.push_back(&local(net, p.name(), "Re_reserved"));
        downstream.push_back(models::downstream_listeners(p, config));
    }

    ConsistencyResult r;
    for (explorer::StateId id = 0; id < space.state_count(); ++id) {
        const auto ref = space.ref(id);
        if (!space.is_deadlock(ref))
            continue;
        ++r.deadlocks;
        const auto s = space.state(ref);
        auto admitted = [&](int l) { return s.vars[talker_lnr.base + l] == ready; };
        bool reservation_ok = true;
        for (std::size_t i = 0; i < ports.size(); ++i) {
            bool want = false;
            for (int l : downstream[i])
                want = want || admitted(l);
            const auto got = s.vars[reserved[i]->base];
            if ((got == yes) != want) {
                reservation_ok = false;
                if (r.examples.size() < 5)
                    r.examples.push_back("state " + std::to_string(id) + ": " + ports[i].name() + ".Re_reserved = " +
                                         net.format_value(reserved[i]->base, got));
            }
        }
        for (int l = 0; l < n; ++l)
            if ((s.vars[can_receive[l]->base] == yes) != admitted(l))
                reservation_ok = false;
        bool lnr_ok = true;
        for (int l = 0; l < n; ++l) {
            const auto t = s.vars[talker_lnr.base + l];
            for (int b = 0; b < n; ++b)
                lnr_ok = lnr_ok && s.vars[bridge_lnr->base + b * n + l] == t;
            for (int k = 0; k < n; ++k)
                lnr_ok = lnr_ok && s.vars[received[k]->base + l] == t;
        }
        if (!lnr_ok && r.examples.size() < 5)
            r.examples.push_back("state " + std::to_string(id) + ": LNR views differ");
        r.reservation_violations += !reservation_ok;
        r.lnr_violations += !lnr_ok;
    }
    return r;
}

}  // namespace srpmc::testing
