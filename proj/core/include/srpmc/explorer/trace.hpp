#pragma once

// Execution traces: construction from explored paths, replay through the
// successor semantics, and the text and JSON serialisations.
//
// Text form, one step per line:
//
//   trace counterexample lasso
//   #1 action ta_link[0] T:Init -> Waiting BQ00:Init -> Check_TA | BQ00.t=0
//   #2 delay | BQ00.t=10
//   loop 1
//
// The first line names the role and the shape (finite, lasso, deadlock). A
// lasso ends with `loop <k>`: the last state equals state k (0 is the
// initial state, k the state after step k). Deltas list every variable and
// clock that changed.

#include "srpmc/automata/network.hpp"
#include "srpmc/automata/semantics.hpp"
#include "srpmc/explorer/state_space.hpp"

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace srpmc::explorer {

enum class TraceRole : std::uint8_t { Witness, Counterexample };
enum class TraceShape : std::uint8_t { Finite, Lasso, Deadlock };

std::string_view to_string(TraceRole r) noexcept;
std::string_view to_string(TraceShape s) noexcept;

struct TraceStep {
    bool delay = false;
    automata::Transition transition;  // empty for delays
    SystemState state;                // state after the step
};

struct Trace {
    TraceRole role = TraceRole::Witness;
    TraceShape shape = TraceShape::Finite;
    std::size_t loop_state = 0;
    SystemState initial;
    std::vector<TraceStep> steps;

    /// State i: 0 is the initial state, i the state after step i.
    const SystemState& state(std::size_t i) const { return i == 0 ? initial : steps.at(i - 1).state; }
    const SystemState& final_state() const { return steps.empty() ? initial : steps.back().state; }
    std::size_t size() const noexcept { return steps.size(); }
};

class TraceError : public std::runtime_error {
public:
    TraceError(std::size_t line, const std::string& what);
    /// Offending line (text) or step index (replay); 0 when not applicable.
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Builds the trace along `path` (path[0] must be the initial state). Each
/// step is the first successor, in graph order, that leads to the next state.
Trace build_trace(const StateSpace& space, std::span<const StateRef> path, TraceRole role, TraceShape shape,
                  std::size_t loop_state = 0);

/// Deadlock atom computed directly from the semantics.
bool is_deadlock(const SystemState& state, const automata::Network& net);

/// Re-executes the trace from the initial state. Throws TraceError naming
/// the first step that is not a successor of its predecessor, or a violated
/// shape condition (lasso closure, final deadlock).
void replay(const automata::Network& net, const Trace& trace);

std::string format_step(const automata::Network& net, std::size_t index, const SystemState& before,
                        const TraceStep& step);
std::string to_text(const automata::Network& net, const Trace& trace);
std::string to_json(const automata::Network& net, const Trace& trace);

/// Parses and replays a text trace. Throws TraceError with the line number.
Trace parse_text_trace(const automata::Network& net, std::string_view text);
Trace parse_json_trace(const automata::Network& net, std::string_view text);

}  // namespace srpmc::explorer
