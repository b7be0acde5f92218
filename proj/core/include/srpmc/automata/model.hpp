#pragma once

// Declarative description of a network of discrete-time automata with
// UPPAAL-style location kinds and channels.

#include "srpmc/automata/expr.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace srpmc::automata {

enum class LocationKind : std::uint8_t { Normal, Urgent, Committed };

const char* to_string(LocationKind kind) noexcept;

/// `clock <= bound`
struct ClockBound {
    Scope scope = Scope::Local;
    std::uint32_t clock = 0;
    std::int32_t bound = 0;
};

struct Location {
    std::string id;
    LocationKind kind = LocationKind::Normal;
    std::vector<ClockBound> invariant;  // conjunction
    bool is_initial = false;
};

enum class ChannelKind : std::uint8_t { Binary, Broadcast };

/// A channel, or an array of `size` channels of the same kind.
struct ChannelDecl {
    std::string name;
    ChannelKind kind = ChannelKind::Binary;
    std::uint32_t size = 1;
};

enum class SyncKind : std::uint8_t { None, Send, Receive };

struct Sync {
    SyncKind kind = SyncKind::None;
    std::uint32_t channel = 0;  // index into SystemModel::channels
    Expr index;                 // must fold to a constant per process; empty means 0

    static Sync none() { return {}; }
    static Sync send(std::uint32_t ch, Expr idx = {}) { return {SyncKind::Send, ch, std::move(idx)}; }
    static Sync receive(std::uint32_t ch, Expr idx = {}) { return {SyncKind::Receive, ch, std::move(idx)}; }
};

struct Update {
    enum class Kind : std::uint8_t { Assign, ResetClock };
    Kind kind = Kind::Assign;
    Scope scope = Scope::Local;
    std::uint32_t target = 0;  // variable or clock id within scope
    Expr index;                // array element (Assign only); empty for scalars
    Expr value;                // assigned value / clock reset value (empty means 0)

    static Update assign(Scope s, std::uint32_t var, Expr value)
    {
        return {Kind::Assign, s, var, {}, std::move(value)};
    }
    static Update assign_element(Scope s, std::uint32_t var, Expr index, Expr value)
    {
        return {Kind::Assign, s, var, std::move(index), std::move(value)};
    }
    static Update reset(Scope s, std::uint32_t clock) { return {Kind::ResetClock, s, clock, {}, {}}; }
};

struct Edge {
    std::string source;
    std::string target;
    Expr guard;  // empty means true
    Sync sync;
    std::vector<Update> updates;  // applied in order
};

struct EnumType {
    std::string name;
    std::vector<std::string> symbols;  // symbol i has value i
};

/// A bounded integer (or enumeration-typed) variable, optionally an array.
struct VarDecl {
    std::string name;
    std::int32_t min = 0;
    std::int32_t max = 1;
    std::int32_t init = 0;
    std::vector<std::uint32_t> dims;        // empty for scalars
    std::optional<std::uint32_t> enum_type;  // index into SystemModel::enums

    std::uint32_t length() const
    {
        std::uint32_t n = 1;
        for (auto d : dims)
            n *= d;
        return n;
    }
};

struct Template {
    std::string name;
    std::vector<std::string> params;
    std::vector<VarDecl> locals;
    std::vector<std::string> clocks;
    std::vector<Location> locations;
    std::vector<Edge> edges;
};

struct ProcessDecl {
    std::string name;
    std::string template_name;
    std::vector<std::int32_t> args;
};

struct SystemModel {
    std::string name;
    std::vector<EnumType> enums;
    std::vector<VarDecl> globals;
    std::vector<std::string> global_clocks;
    std::vector<ChannelDecl> channels;
    std::vector<Template> templates;
    std::vector<ProcessDecl> processes;
    std::int32_t tick_ms = 10;
    std::optional<std::int32_t> clock_cap;  // defaults to the largest clock constant
    bool reduce_inactive_clocks = true;
};

struct Violation {
    std::string where;  // e.g. "template Listener, edge #2 (Waiting -> End)"
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const noexcept { return violations.empty(); }
    std::string to_string() const;
};

/// Checks all structural invariants. Violations are returned, never thrown.
ValidationReport validate_model(const SystemModel& model);

/// Raised for model bugs: invalid models, out-of-domain assignments.
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace srpmc::automata
