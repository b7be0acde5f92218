#pragma once

// Line topology T - B0 - B1 - ... with one listener per bridge. Each bridge b
// has an input port BIb towards the talker, an output port BQb0 towards its
// listener Lb and, except the last bridge, an output port BQb1 towards the
// next bridge.

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace srpmc::models {

/// How the CSRP talker turns its LNR vector into the final decision.
enum class AdmissionPolicy : std::uint8_t {
    AdmitAllReady,  // every Ready listener is admitted
    AllOrNothing,   // admit the Ready listeners only if nobody failed
    Mask,           // admit Ready listeners whose bit is set in admission_mask
};

struct TopologyConfig {
    int bridges = 3;
    int min_process_ms = 10;
    int max_process_ms = 200;
    int tick_ms = 10;
    int timer_ms = 1500;  // CSRP talker timer
    AdmissionPolicy policy = AdmissionPolicy::AdmitAllReady;
    std::uint32_t admission_mask = 0;  // for AdmissionPolicy::Mask

    static TopologyConfig reference() { return {}; }
};

class TopologyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kMaxBridges = 3;

struct PortId {
    int bridge = 0;
    int index = 0;  // 0: towards the bridge's listener, 1: towards the next bridge

    std::string name() const;
    friend bool operator==(const PortId&, const PortId&) = default;
};

/// Throws TopologyError unless the configuration describes a supported line.
void check_topology(const TopologyConfig& config);

/// Output ports in declaration order: BQ00, BQ01, BQ10, BQ11, BQ20 for the
/// reference topology.
std::vector<PortId> output_ports(const TopologyConfig& config);

PortId parse_port(std::string_view name, const TopologyConfig& config);

/// Listeners connected directly or indirectly to an output port.
std::set<int> downstream_listeners(const PortId& port, const TopologyConfig& config);
std::set<int> downstream_listeners(std::string_view port, const TopologyConfig& config);

/// Longest chain of processing windows between the talker's TA and the last
/// response reaching it: the TA crosses one output port per bridge, the
/// farthest listener answers, and the answer crosses one input port per
/// bridge on the way back.
int worst_case_response_ms(const TopologyConfig& config);

/// Guard lower bound used by the builders: min_process_ms rounded up to a
/// whole number of ticks.
int rounded_min_process_ms(const TopologyConfig& config);

/// One consistent outcome for admitted listener set `subset` (bit i = Li):
/// a port is reserved iff some admitted listener is downstream of it.
struct ReservationDistribution {
    std::uint32_t subset = 0;
    std::vector<std::pair<PortId, bool>> port_reserved;
    std::vector<bool> listener_receives;
};

/// All 2^bridges subsets, ordered by size and then lexicographically
/// (so the empty set first and the full set last).
std::vector<ReservationDistribution> enumerate_consistent_distributions(const TopologyConfig& config);

/// State formula describing one distribution, e.g.
/// "(BQ00.Re_reserved == Yes && ... && L2.Can_I_receive != Yes)".
/// `receive_predicate` is the per-listener variable ("Can_I_receive"), or
/// "LA_transmitted" to express reception as "== LR".
std::string distribution_formula(const ReservationDistribution& d, std::string_view receive_variable);

}  // namespace srpmc::models
