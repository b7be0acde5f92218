#pragma once

// The five path-formula checkers over an explored StateSpace.
//
//   E<> φ   check_reachable        A[] φ   check_always (¬E<>¬φ)
//   E[] φ   check_exists_always    A<> φ   check_eventually (¬E[]¬φ)
//   φ --> ψ check_leads_to         (A[] (φ imply A<> ψ))
//
// A maximal path is infinite or ends in a deadlock state. Reachability
// searches are breadth-first, so witnesses and counterexamples ending in a
// single state are shortest. Path searches are depth-first in successor
// order. All results are deterministic.

#include "srpmc/explorer/state_space.hpp"
#include "srpmc/explorer/trace.hpp"

#include <chrono>
#include <functional>
#include <optional>
#include <stdexcept>

namespace srpmc::explorer {

/// A state formula. `eval` receives the state and the value of the deadlock
/// atom there (computed only when `uses_deadlock` is set). Predicates that
/// read clock values must set `reads_clocks`; others are evaluated once per
/// stored key.
struct StatePredicate {
    std::function<bool(const SystemState&, bool deadlock)> eval;
    bool uses_deadlock = false;
    bool reads_clocks = false;

    static StatePredicate constant(bool value);
    static StatePredicate deadlock();
};

StatePredicate operator!(StatePredicate p);
StatePredicate operator&&(StatePredicate a, StatePredicate b);
StatePredicate operator||(StatePredicate a, StatePredicate b);

struct Verdict {
    bool satisfied = false;
    /// Witness for satisfied existential formulas, counterexample for
    /// violated universal ones.
    std::optional<Trace> evidence;
    std::uint64_t states_explored = 0;
};

/// Optional wall-clock deadline; searches poll it and throw CheckTimeout.
struct CheckLimits {
    std::optional<std::chrono::steady_clock::time_point> deadline;

    static CheckLimits within(std::chrono::steady_clock::duration d)
    {
        return {std::chrono::steady_clock::now() + d};
    }
};

class CheckTimeout : public std::runtime_error {
public:
    CheckTimeout() : std::runtime_error("query time limit exceeded") {}
};

Verdict check_reachable(const StateSpace& space, const StatePredicate& phi, const CheckLimits& limits = {});
Verdict check_always(const StateSpace& space, const StatePredicate& phi, const CheckLimits& limits = {});
Verdict check_exists_always(const StateSpace& space, const StatePredicate& phi, const CheckLimits& limits = {});
Verdict check_eventually(const StateSpace& space, const StatePredicate& phi, const CheckLimits& limits = {});
Verdict check_leads_to(const StateSpace& space, const StatePredicate& phi, const StatePredicate& psi,
                       const CheckLimits& limits = {});

}  // namespace srpmc::explorer
