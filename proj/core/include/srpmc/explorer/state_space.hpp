#pragma once

// Fully explored state graph of a Network.
//
// States are explicit: every (locations, variables, clocks) valuation is its
// own state with its own id. The store is factored: one clock with a long
// range (a protocol timer, typically) can be kept out of the hashed key. Each
// stored key then carries the set of values that clock takes in reachable
// states, and successor edges are computed once per clock region (a maximal
// value range on which every guard and invariant over that clock has a fixed
// truth value). Without a factored clock every key is exactly one state.
//
// State ids are dense ranks in [0, state_count()), grouped by key in
// discovery order and by clock value inside a key.

#include "srpmc/automata/network.hpp"
#include "srpmc/automata/semantics.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace srpmc::explorer {

using automata::SystemState;

using StateId = std::uint32_t;
inline constexpr StateId kNoState = 0xffffffffu;

inline constexpr std::uint64_t kDefaultStateBudget = 50'000'000;

enum class ClockFactoring : std::uint8_t {
    Auto,  // factor the clock whose largest constant is strictly above all others
    Off,
    Slot,  // factor ExploreOptions::factored_slot
};

struct ExploreOptions {
    /// Maximum number of stored keys.
    std::uint64_t state_budget = kDefaultStateBudget;
    ClockFactoring factoring = ClockFactoring::Auto;
    std::uint32_t factored_slot = 0;
};

class BudgetExceeded : public std::runtime_error {
public:
    explicit BudgetExceeded(std::uint64_t budget);
    std::uint64_t budget() const noexcept { return budget_; }

private:
    std::uint64_t budget_;
};

/// Packs a SystemState into a fixed number of 64-bit words. Each component
/// gets the bits its domain needs; clocks are stored in ticks. An omitted
/// clock slot is not stored and decodes as 0.
class StateCodec {
public:
    explicit StateCodec(const automata::Network& net, std::optional<std::uint32_t> omit_clock = std::nullopt);

    std::size_t words() const noexcept { return words_; }
    std::size_t bits() const noexcept { return bits_; }
    void encode(const SystemState& s, std::uint64_t* out) const;
    void decode(const std::uint64_t* in, SystemState& s) const;

    std::uint32_t clock_code(std::int32_t value) const noexcept
    {
        return static_cast<std::uint32_t>(value == ceiling_ ? saturated_code_ : value / tick_);
    }
    std::int32_t clock_value(std::uint32_t code) const noexcept
    {
        return static_cast<std::int32_t>(code) == saturated_code_ ? ceiling_ : static_cast<std::int32_t>(code) * tick_;
    }
    std::uint32_t saturated_code() const noexcept { return static_cast<std::uint32_t>(saturated_code_); }

private:
    struct Field {
        std::uint32_t word;
        std::uint8_t shift;
        std::uint8_t width;
        std::int32_t offset;
    };
    Field make_field(std::int32_t lo, std::int32_t hi);

    std::vector<Field> locations_, vars_, clocks_;
    std::optional<std::uint32_t> omit_;
    std::int32_t tick_;
    std::int32_t ceiling_;
    std::int32_t saturated_code_;
    std::size_t words_ = 1;
    std::size_t bits_ = 0;
    std::uint32_t used_in_word_ = 0;
};

/// A state as (stored key, value code of the factored clock).
struct StateRef {
    std::uint32_t node = 0;
    std::uint32_t code = 0;

    friend bool operator==(const StateRef&, const StateRef&) = default;
};

struct Successor {
    StateRef ref;
    bool delay = false;
};

struct GraphSummary {
    std::uint64_t states = 0;
    std::uint64_t transitions = 0;  // actions plus state-changing delays
    std::uint64_t deadlocks = 0;
    std::uint64_t keys = 0;
};

/// True if `slot` is read only in direct comparisons with constants.
bool factorable_clock(const automata::Network& net, std::uint32_t slot);

/// Clock chosen by ClockFactoring::Auto, if any.
std::optional<std::uint32_t> auto_factored_clock(const automata::Network& net);

class StateSpace {
public:
    /// Explores the whole reachable graph. Throws BudgetExceeded when the
    /// number of stored keys would exceed the budget, std::invalid_argument
    /// when a forced factored clock is not factorable.
    explicit StateSpace(const automata::Network& net, ExploreOptions options = {});

    StateSpace(const StateSpace&) = delete;
    StateSpace& operator=(const StateSpace&) = delete;

    const automata::Network& network() const noexcept { return net_; }
    const ExploreOptions& options() const noexcept { return options_; }
    std::optional<std::uint32_t> factored_clock() const noexcept { return factored_; }

    std::uint64_t state_count() const noexcept { return state_count_; }
    std::size_t key_count() const noexcept { return nodes_.size(); }

    StateRef initial_ref() const noexcept { return {0, initial_code_}; }
    StateId initial() const { return id(initial_ref()); }

    StateId id(StateRef r) const noexcept;
    StateRef ref(StateId id) const;

    SystemState state(StateRef r) const;
    SystemState state(StateId id) const { return state(ref(id)); }
    /// State shared by every state of a key, with the factored clock at 0.
    void node_state(std::uint32_t node, SystemState& out) const;
    /// Id of a reachable state, or kNoState.
    StateId find(const SystemState& s) const;

    /// Action successors in automata-core order, then the delay successor
    /// (possibly the state itself).
    void successors(StateRef r, std::vector<Successor>& out) const;
    bool has_action(StateRef r) const;

    /// No action is possible now or after any sequence of delays (a delay
    /// chain ends at a timelock or at a clock fixpoint).
    bool is_deadlock(StateRef r) const;

    GraphSummary summary() const;

    /// Clock codes of the reachable states of a key, ascending.
    std::vector<std::uint32_t> codes(std::uint32_t node) const;

private:
    struct Node {
        std::uint32_t seg_begin = 0;
        std::uint16_t seg_count = 0;
        bool expanded = false;
    };
    struct Segment {
        std::uint64_t edge_begin = 0;
        std::uint16_t edge_count = 0;
        std::uint16_t region = 0;  // first..last region covered
        std::uint16_t region_hi = 0;
        std::uint8_t has_delay = 0;
    };
    enum EdgeKind : std::uint8_t { kConst = 0, kIdentity = 1, kShift = 2 };

    static std::uint64_t pack_edge(std::uint32_t target, EdgeKind kind, bool delay, std::uint32_t code)
    {
        return static_cast<std::uint64_t>(target) | (static_cast<std::uint64_t>(kind) << 32) |
               (static_cast<std::uint64_t>(delay) << 34) | (static_cast<std::uint64_t>(code) << 40);
    }
    static std::uint32_t edge_target(std::uint64_t e) { return static_cast<std::uint32_t>(e); }
    static EdgeKind edge_kind(std::uint64_t e) { return static_cast<EdgeKind>((e >> 32) & 3u); }
    static bool edge_delay(std::uint64_t e) { return ((e >> 34) & 1u) != 0; }
    static std::uint32_t edge_code(std::uint64_t e) { return static_cast<std::uint32_t>(e >> 40); }
    static std::uint32_t apply(std::uint64_t e, std::uint32_t code)
    {
        switch (edge_kind(e)) {
        case kIdentity: return code;
        case kShift: return code + 1;
        default: return edge_code(e);
        }
    }

    void setup_factoring();
    std::uint32_t intern(const SystemState& s);
    void expand(std::uint32_t node);
    void explore();
    void compute_ranks();
    const Segment* segment_for(StateRef r) const;
    void image(std::uint64_t edge, const std::uint64_t* in, std::uint64_t* out) const;

    const std::uint64_t* key(std::uint32_t node) const
    {
        return &keys_[static_cast<std::size_t>(node) * codec_.words()];
    }
    std::uint64_t hash_key(const std::uint64_t* k) const;
    std::uint32_t lookup(const std::uint64_t* k, std::uint64_t h, std::size_t& slot) const;
    void grow_table();

    std::uint64_t* row(std::vector<std::uint64_t>& v, std::uint32_t node) const
    {
        return &v[static_cast<std::size_t>(node) * words_];
    }
    const std::uint64_t* row(const std::vector<std::uint64_t>& v, std::uint32_t node) const
    {
        return &v[static_cast<std::size_t>(node) * words_];
    }

    const automata::Network& net_;
    ExploreOptions options_;
    std::optional<std::uint32_t> factored_;
    StateCodec codec_;
    std::uint32_t codes_ = 1;  // number of clock codes
    std::size_t words_ = 1;    // words per code set
    std::uint32_t initial_code_ = 0;

    // Regions of the factored clock as inclusive code ranges.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> regions_;
    std::vector<std::uint16_t> region_of_;
    // Owner process of the factored clock and the locations where it is dead.
    std::optional<std::size_t> owner_;
    std::vector<char> dead_at_;

    std::vector<std::uint64_t> keys_;
    std::vector<Node> nodes_;
    std::vector<Segment> segments_;
    std::vector<std::uint64_t> edges_;
    std::vector<std::uint32_t> table_;
    std::vector<std::uint64_t> reach_;
    std::vector<std::uint64_t> base_;
    std::uint64_t state_count_ = 0;

    mutable std::vector<std::uint64_t> deadlock_known_, deadlock_value_;
    std::vector<std::uint64_t> scratch_;
};

}  // namespace srpmc::explorer
