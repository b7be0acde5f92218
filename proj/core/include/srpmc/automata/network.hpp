#pragma once

// A validated, compiled SystemModel. Immutable after construction and safe to
// share between threads.

#include "srpmc/automata/expr.hpp"
#include "srpmc/automata/model.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace srpmc::automata {

struct CompiledUpdate {
    Update::Kind kind = Update::Kind::Assign;
    std::uint32_t base = 0;    // variable slot, or clock slot for resets
    std::uint32_t length = 1;  // array length (1 for scalars)
    Program index;             // empty when the element is fixed
    Program value;
};

struct CompiledEdge {
    std::uint32_t template_edge = 0;
    std::uint16_t source = 0;
    std::uint16_t target = 0;
    Program guard;
    SyncKind sync = SyncKind::None;
    std::uint32_t channel = 0;  // absolute channel slot
    std::vector<CompiledUpdate> updates;
};

struct CompiledLocation {
    LocationKind kind = LocationKind::Normal;
    std::vector<std::pair<std::uint32_t, std::int32_t>> invariant;  // (clock slot, bound)
    std::vector<std::uint32_t> out_edges;                            // indices into process edges
    std::vector<std::uint32_t> dead_clocks;                          // local clocks irrelevant here
};

struct CompiledProcess {
    std::string name;
    std::uint32_t template_index = 0;
    std::uint32_t var_base = 0;
    std::uint32_t clock_base = 0;
    std::uint16_t initial = 0;
    std::vector<CompiledLocation> locations;
    std::vector<CompiledEdge> edges;
};

/// Description of one variable declaration after layout.
struct VarInfo {
    std::string qualified_name;  // "L0.LA_transmitted" or "LNR_bridge"
    std::uint32_t base = 0;
    std::vector<std::uint32_t> dims;
    std::int32_t min = 0;
    std::int32_t max = 0;
    std::optional<std::uint32_t> enum_type;
    std::uint32_t length() const
    {
        std::uint32_t n = 1;
        for (auto d : dims)
            n *= d;
        return n;
    }
};

class Network {
public:
    /// Validates and compiles; throws ModelError carrying the report otherwise.
    explicit Network(SystemModel model);

    const SystemModel& model() const noexcept { return model_; }
    std::int32_t tick() const noexcept { return model_.tick_ms; }
    /// Largest clock constant; clocks saturate at clock_cap() + tick().
    std::int32_t clock_cap() const noexcept { return cap_; }
    std::int32_t clock_ceiling() const noexcept { return cap_ + model_.tick_ms; }

    std::size_t process_count() const noexcept { return processes_.size(); }
    std::size_t var_count() const noexcept { return var_min_.size(); }
    std::size_t clock_count() const noexcept { return clock_names_.size(); }
    std::size_t channel_count() const noexcept { return channel_kinds_.size(); }

    const CompiledProcess& process(std::size_t p) const { return processes_[p]; }
    const std::vector<CompiledProcess>& processes() const noexcept { return processes_; }

    ChannelKind channel_kind(std::uint32_t slot) const { return channel_kinds_[slot]; }
    const std::string& channel_name(std::uint32_t slot) const { return channel_names_[slot]; }

    std::int32_t var_min(std::uint32_t slot) const { return var_min_[slot]; }
    std::int32_t var_max(std::uint32_t slot) const { return var_max_[slot]; }
    const std::vector<std::int32_t>& initial_vars() const noexcept { return var_init_; }
    /// "T.LAs_received", "LNR_bridge[1][2]"
    const std::string& var_slot_name(std::uint32_t slot) const { return var_slot_names_[slot]; }
    const std::string& clock_name(std::uint32_t slot) const { return clock_names_[slot]; }
    /// Symbolic rendering of a value stored in `slot` (enum symbol or integer).
    std::string format_value(std::uint32_t slot, std::int32_t value) const;

    const std::string& location_name(std::size_t p, std::uint16_t loc) const;

    std::optional<std::size_t> find_process(std::string_view name) const;
    std::optional<std::uint16_t> find_location(std::size_t p, std::string_view name) const;
    /// Local variable of process `p`; nullopt if absent.
    const VarInfo* find_local_var(std::size_t p, std::string_view name) const;
    const VarInfo* find_global_var(std::string_view name) const;
    /// Enumeration symbol → (enum type, value).
    std::optional<std::pair<std::uint32_t, std::int32_t>> find_symbol(std::string_view name) const;

    /// True if some process location is committed.
    bool has_committed_locations() const noexcept { return has_committed_; }

private:
    SystemModel model_;
    std::int32_t cap_ = 0;
    bool has_committed_ = false;
    std::vector<CompiledProcess> processes_;
    std::vector<ChannelKind> channel_kinds_;
    std::vector<std::string> channel_names_;
    std::vector<std::int32_t> var_min_, var_max_, var_init_;
    std::vector<std::optional<std::uint32_t>> var_enum_;
    std::vector<std::string> var_slot_names_;
    std::vector<std::string> clock_names_;
    std::vector<VarInfo> global_vars_;
    std::vector<std::vector<VarInfo>> local_vars_;  // per process

    friend class NetworkCompiler;
};

}  // namespace srpmc::automata
