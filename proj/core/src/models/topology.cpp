#include "srpmc/models/topology.hpp"

#include "srpmc/models/attributes.hpp"

#include <algorithm>
#include <bit>

namespace srpmc::models {

std::string_view to_string(TalkerAttribute v) noexcept
{
    switch (v) {
    case TalkerAttribute::None: return "NU_TA";
    case TalkerAttribute::TA: return "TA";
    case TalkerAttribute::TF: return "TF";
    }
    return "?";
}

std::string_view to_string(ListenerAttribute v) noexcept
{
    switch (v) {
    case ListenerAttribute::NU_LA: return "NU_LA";
    case ListenerAttribute::LR: return "LR";
    case ListenerAttribute::LAF: return "LAF";
    case ListenerAttribute::LRF: return "LRF";
    }
    return "?";
}

std::string_view to_string(ReservationStatus v) noexcept
{
    switch (v) {
    case ReservationStatus::NU_Re: return "NU_Re";
    case ReservationStatus::Yes: return "Yes";
    case ReservationStatus::No: return "No";
    }
    return "?";
}

std::string_view to_string(LnrStatus v) noexcept
{
    switch (v) {
    case LnrStatus::Unknown: return "Unknown";
    case LnrStatus::Ready: return "Ready";
    case LnrStatus::Failed: return "Failed";
    }
    return "?";
}

std::string PortId::name() const
{
    return "BQ" + std::to_string(bridge) + std::to_string(index);
}

void check_topology(const TopologyConfig& c)
{
    if (c.bridges < 1 || c.bridges > kMaxBridges)
        throw TopologyError("unsupported topology: " + std::to_string(c.bridges) + " bridges (supported: 1.." +
                            std::to_string(kMaxBridges) + ")");
    if (c.tick_ms <= 0)
        throw TopologyError("tick must be positive");
    if (c.min_process_ms < 0 || c.max_process_ms <= 0)
        throw TopologyError("processing bounds must be positive");
    if (c.max_process_ms % c.tick_ms != 0)
        throw TopologyError("max processing time " + std::to_string(c.max_process_ms) +
                            " ms is not a multiple of the tick " + std::to_string(c.tick_ms) + " ms");
    if (rounded_min_process_ms(c) > c.max_process_ms)
        throw TopologyError("min processing time exceeds max processing time");
    if (c.policy == AdmissionPolicy::Mask && (c.admission_mask >> c.bridges) != 0)
        throw TopologyError("admission mask names a listener outside the topology");
}

std::vector<PortId> output_ports(const TopologyConfig& c)
{
    std::vector<PortId> out;
    for (int b = 0; b < c.bridges; ++b) {
        out.push_back({b, 0});
        if (b + 1 < c.bridges)
            out.push_back({b, 1});
    }
    return out;
}

PortId parse_port(std::string_view name, const TopologyConfig& c)
{
    for (const auto& p : output_ports(c))
        if (p.name() == name)
            return p;
    throw TopologyError("unknown port " + std::string(name));
}

std::set<int> downstream_listeners(const PortId& port, const TopologyConfig& c)
{
    const auto ports = output_ports(c);
    if (std::find(ports.begin(), ports.end(), port) == ports.end())
        throw TopologyError("unknown port " + port.name());
    if (port.index == 0)
        return {port.bridge};
    std::set<int> out;
    for (int l = port.bridge + 1; l < c.bridges; ++l)
        out.insert(l);
    return out;
}

std::set<int> downstream_listeners(std::string_view port, const TopologyConfig& c)
{
    return downstream_listeners(parse_port(port, c), c);
}

int worst_case_response_ms(const TopologyConfig& c)
{
    return (2 * c.bridges + 1) * c.max_process_ms;
}

int rounded_min_process_ms(const TopologyConfig& c)
{
    const int g = c.tick_ms;
    return (c.min_process_ms + g - 1) / g * g;
}

std::vector<ReservationDistribution> enumerate_consistent_distributions(const TopologyConfig& c)
{
    check_topology(c);
    const std::uint32_t n = static_cast<std::uint32_t>(c.bridges);
    std::vector<std::uint32_t> subsets;
    for (std::uint32_t s = 0; s < (1u << n); ++s)
        subsets.push_back(s);
    // Size first, then lexicographic on the listener lists ({L0,L1} before {L0,L2}).
    auto key = [n](std::uint32_t s) {
        std::vector<std::uint32_t> k{static_cast<std::uint32_t>(std::popcount(s))};
        for (std::uint32_t i = 0; i < n; ++i)
            if (s & (1u << i))
                k.push_back(i);
        return k;
    };
    std::sort(subsets.begin(), subsets.end(), [&](auto a, auto b) { return key(a) < key(b); });

    std::vector<ReservationDistribution> out;
    for (auto s : subsets) {
        ReservationDistribution d;
        d.subset = s;
        for (const auto& p : output_ports(c)) {
            bool reserved = false;
            for (int l : downstream_listeners(p, c))
                reserved = reserved || (s & (1u << l)) != 0;
            d.port_reserved.emplace_back(p, reserved);
        }
        for (std::uint32_t i = 0; i < n; ++i)
            d.listener_receives.push_back((s & (1u << i)) != 0);
        out.push_back(std::move(d));
    }
    return out;
}

std::string distribution_formula(const ReservationDistribution& d, std::string_view receive_variable)
{
    const bool by_attribute = receive_variable == "LA_transmitted";
    const std::string yes = by_attribute ? "LR" : "Yes";
    std::string out = "(";
    bool first = true;
    auto term = [&](const std::string& t) {
        if (!first)
            out += " && ";
        out += t;
        first = false;
    };
    for (const auto& [port, reserved] : d.port_reserved)
        term(port.name() + ".Re_reserved " + (reserved ? "==" : "!=") + " Yes");
    for (std::size_t l = 0; l < d.listener_receives.size(); ++l)
        term("L" + std::to_string(l) + "." + std::string(receive_variable) +
             (d.listener_receives[l] ? " == " : " != ") + yes);
    return out + ")";
}

}  // namespace srpmc::models
