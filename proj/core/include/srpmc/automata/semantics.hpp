#pragma once

// Discrete-time successor semantics: action transitions (internal, binary and
// broadcast synchronisation, committed priority) and tick delays.

#include "srpmc/automata/network.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace srpmc::automata {

struct SystemState {
    std::vector<std::uint16_t> locations;  // per process
    std::vector<std::int32_t> vars;
    std::vector<std::int32_t> clocks;

    friend bool operator==(const SystemState&, const SystemState&) = default;
    friend auto operator<=>(const SystemState&, const SystemState&) = default;

    Valuation valuation() const noexcept { return {vars, clocks}; }
};

struct SystemStateHash {
    std::size_t operator()(const SystemState& s) const noexcept;
};

struct Participant {
    std::uint32_t process = 0;
    std::uint32_t edge = 0;  // index into CompiledProcess::edges

    friend bool operator==(const Participant&, const Participant&) = default;
};

/// An action transition. The first participant is the sender for
/// synchronisations; receivers follow in process order.
struct Transition {
    std::optional<std::uint32_t> channel;
    std::vector<Participant> participants;

    friend bool operator==(const Transition&, const Transition&) = default;
};

/// Every process at its initial location, variables at their initial values,
/// all clocks zero. The network is validated at construction.
SystemState initial_state(const Network& net);

/// All firable action transitions in deterministic order (process declaration
/// order, then edge order; receivers enumerated in process/edge order).
std::vector<Transition> enabled_actions(const SystemState& state, const Network& net);

/// Action successors paired with their transitions, same order as
/// enabled_actions.
std::vector<std::pair<Transition, SystemState>> action_successors(const SystemState& state,
                                                                  const Network& net);

/// Advance every clock by one tick, saturating above the cap. Nothing if a
/// process is in an urgent/committed location or an invariant would break.
std::optional<SystemState> delay_successor(const SystemState& state, const Network& net);

/// Fires `t`. Sender updates apply before receiver updates. Throws
/// ModelError naming the variable on an out-of-domain assignment.
SystemState apply_action(const SystemState& state, const Transition& t, const Network& net);

bool invariants_hold(const SystemState& state, const Network& net);

/// Checks the structural state invariants (domains, clock granularity).
bool is_well_formed(const SystemState& state, const Network& net);

}  // namespace srpmc::automata
