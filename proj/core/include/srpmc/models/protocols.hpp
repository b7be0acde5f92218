#pragma once

// Reference models of the stream reservation protocol (SRP) and of its
// consistent variant with a talker timer and a final-decision message (CSRP).
//
// Processes, in declaration order: T (talker), S (stream), L0..Ln-1
// (listeners), BI0..BIn-1 (bridge input ports), then the output ports
// BQ00, BQ01, BQ10, ... as listed by output_ports().

#include "srpmc/automata/model.hpp"
#include "srpmc/models/topology.hpp"

#include <optional>
#include <string_view>

namespace srpmc::models {

enum class Protocol : std::uint8_t { SRP, CSRP };

std::string_view to_string(Protocol p) noexcept;
std::optional<Protocol> parse_protocol(std::string_view name) noexcept;

/// Enumeration indices inside the built SystemModel.
inline constexpr std::uint32_t kTalkerAttributeEnum = 0;
inline constexpr std::uint32_t kListenerAttributeEnum = 1;
inline constexpr std::uint32_t kReservationStatusEnum = 2;
inline constexpr std::uint32_t kLnrStatusEnum = 3;

/// The CSRP timer does not leave room for the slowest response.
class TimerTooShort : public TopologyError {
public:
    TimerTooShort(int timer_ms, int required_ms);
    int timer_ms() const noexcept { return timer_ms_; }
    /// Smallest admissible timer is required_ms() + one tick.
    int required_ms() const noexcept { return required_ms_; }

private:
    int timer_ms_;
    int required_ms_;
};

/// Throws TopologyError for unsupported topologies or timings.
automata::SystemModel build_srp_model(const TopologyConfig& config = TopologyConfig::reference());

/// As build_srp_model; additionally throws TimerTooShort unless
/// config.timer_ms > worst_case_response_ms(config).
automata::SystemModel build_csrp_model(const TopologyConfig& config = TopologyConfig::reference());

automata::SystemModel build_model(Protocol protocol, const TopologyConfig& config = TopologyConfig::reference());

}  // namespace srpmc::models
