#include "srpmc/automata/model.hpp"

#include "srpmc/automata/network.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace srpmc::automata {

const char* to_string(LocationKind kind) noexcept
{
    switch (kind) {
    case LocationKind::Normal: return "normal";
    case LocationKind::Urgent: return "urgent";
    case LocationKind::Committed: return "committed";
    }
    return "?";
}

std::string ValidationReport::to_string() const
{
    std::ostringstream os;
    for (const auto& v : violations)
        os << v.where << ": " << v.message << '\n';
    return os.str();
}

namespace {

std::string element_suffix(const std::vector<std::uint32_t>& dims, std::uint32_t offset)
{
    if (dims.empty())
        return {};
    std::vector<std::uint32_t> idx(dims.size());
    for (std::size_t k = dims.size(); k-- > 0;) {
        idx[k] = offset % dims[k];
        offset /= dims[k];
    }
    std::string s;
    for (auto i : idx)
        s += "[" + std::to_string(i) + "]";
    return s;
}

}  // namespace

// Performs layout, compilation and all structural checks in one pass. When
// `out` is null only the report is produced.
class NetworkCompiler {
public:
    NetworkCompiler(const SystemModel& model, Network* out) : m_(model), out_(out) {}

    ValidationReport run()
    {
        check_enums();
        layout_globals();
        layout_channels();
        index_templates();
        compile_processes();
        check_timing();
        if (report_.ok() && out_)
            compute_clock_liveness();
        return std::move(report_);
    }

private:
    void violation(std::string where, std::string message)
    {
        report_.violations.push_back({std::move(where), std::move(message)});
    }

    void check_var(const VarDecl& v, const std::string& where)
    {
        if (v.enum_type) {
            if (*v.enum_type >= m_.enums.size()) {
                violation(where, "variable " + v.name + " has unknown enumeration type");
                return;
            }
            const auto n = static_cast<std::int32_t>(m_.enums[*v.enum_type].symbols.size());
            if (v.min < 0 || v.max >= n)
                violation(where, "variable " + v.name + " domain exceeds its enumeration");
        }
        if (v.min > v.max)
            violation(where, "variable " + v.name + " has empty domain [" + std::to_string(v.min) + "," +
                                 std::to_string(v.max) + "]");
        else if (v.init < v.min || v.init > v.max)
            violation(where, "variable " + v.name + " initial value " + std::to_string(v.init) +
                                 " outside its domain");
        for (auto d : v.dims)
            if (d == 0)
                violation(where, "variable " + v.name + " has a zero-length dimension");
    }

    void add_slots(const VarDecl& v, const std::string& qualified, std::vector<VarInfo>& infos)
    {
        VarInfo info;
        info.qualified_name = qualified;
        info.base = next_var_;
        info.dims = v.dims;
        info.min = v.min;
        info.max = v.max;
        info.enum_type = v.enum_type;
        const std::uint32_t len = v.length();
        next_var_ += len;
        if (out_) {
            for (std::uint32_t i = 0; i < len; ++i) {
                out_->var_min_.push_back(v.min);
                out_->var_max_.push_back(v.max);
                out_->var_init_.push_back(v.init);
                out_->var_enum_.push_back(v.enum_type);
                out_->var_slot_names_.push_back(qualified + element_suffix(v.dims, i));
            }
        }
        infos.push_back(std::move(info));
    }

    void check_enums()
    {
        std::set<std::string> seen;
        for (const auto& e : m_.enums)
            for (const auto& s : e.symbols)
                if (!seen.insert(s).second)
                    violation("enum " + e.name, "symbol " + s + " declared more than once");
    }

    void layout_globals()
    {
        std::set<std::string> names;
        for (const auto& g : m_.globals) {
            if (!names.insert(g.name).second)
                violation("globals", "duplicate variable " + g.name);
            check_var(g, "globals");
            add_slots(g, g.name, globals_);
        }
        for (const auto& c : m_.global_clocks) {
            if (out_)
                out_->clock_names_.push_back(c);
            ++next_clock_;
        }
        if (out_)
            out_->global_vars_ = globals_;
    }

    void layout_channels()
    {
        std::uint32_t slot = 0;
        for (const auto& c : m_.channels) {
            channel_base_.push_back(slot);
            if (c.size == 0)
                violation("channel " + c.name, "channel array of size 0");
            for (std::uint32_t i = 0; i < c.size; ++i) {
                if (out_) {
                    out_->channel_kinds_.push_back(c.kind);
                    out_->channel_names_.push_back(c.size == 1 ? c.name
                                                               : c.name + "[" + std::to_string(i) + "]");
                }
            }
            slot += c.size;
        }
    }

    void index_templates()
    {
        for (std::size_t t = 0; t < m_.templates.size(); ++t) {
            const Template& tpl = m_.templates[t];
            const std::string where = "template " + tpl.name;
            if (!template_by_name_.emplace(tpl.name, t).second)
                violation(where, "duplicate template name");
            const auto initials = std::count_if(tpl.locations.begin(), tpl.locations.end(),
                                                [](const Location& l) { return l.is_initial; });
            if (initials != 1)
                violation(where, "expected exactly one initial location, found " + std::to_string(initials));
            std::set<std::string> locs;
            for (const auto& l : tpl.locations) {
                if (!locs.insert(l.id).second)
                    violation(where, "duplicate location " + l.id);
                for (const auto& b : l.invariant) {
                    if (b.bound < 0)
                        violation(where + ", location " + l.id, "negative invariant constant");
                    const std::size_t nclocks =
                        b.scope == Scope::Local ? tpl.clocks.size() : m_.global_clocks.size();
                    if (b.clock >= nclocks)
                        violation(where + ", location " + l.id, "invariant references undeclared clock");
                }
            }
            for (std::size_t e = 0; e < tpl.edges.size(); ++e) {
                const Edge& edge = tpl.edges[e];
                const std::string ew = edge_where(tpl, e);
                if (!locs.count(edge.source))
                    violation(ew, "source location " + edge.source + " not declared");
                if (!locs.count(edge.target))
                    violation(ew, "target location " + edge.target + " not declared");
                if (edge.sync.kind != SyncKind::None && edge.sync.channel >= m_.channels.size())
                    violation(ew, "synchronisation on undeclared channel");
            }
            std::set<std::string> lnames;
            for (const auto& v : tpl.locals) {
                if (!lnames.insert(v.name).second)
                    violation(where, "duplicate local variable " + v.name);
                check_var(v, where);
            }
        }
    }

    static std::string edge_where(const Template& tpl, std::size_t e)
    {
        const Edge& edge = tpl.edges[e];
        return "template " + tpl.name + ", edge #" + std::to_string(e) + " (" + edge.source + " -> " +
               edge.target + ")";
    }

    void compile_processes()
    {
        std::set<std::string> names;
        for (const auto& pd : m_.processes) {
            const std::string where = "process " + pd.name;
            if (!names.insert(pd.name).second)
                violation(where, "duplicate process name");
            auto it = template_by_name_.find(pd.template_name);
            if (it == template_by_name_.end()) {
                violation(where, "unknown template " + pd.template_name);
                continue;
            }
            const Template& tpl = m_.templates[it->second];
            if (pd.args.size() != tpl.params.size()) {
                violation(where, "expects " + std::to_string(tpl.params.size()) + " template arguments, got " +
                                     std::to_string(pd.args.size()));
                continue;
            }
            compile_process(pd, tpl, static_cast<std::uint32_t>(it->second));
        }
    }

    void compile_process(const ProcessDecl& pd, const Template& tpl, std::uint32_t tpl_index)
    {
        CompiledProcess proc;
        proc.name = pd.name;
        proc.template_index = tpl_index;
        proc.var_base = next_var_;
        proc.clock_base = next_clock_;

        std::vector<VarInfo> locals;
        for (const auto& v : tpl.locals)
            add_slots(v, pd.name + "." + v.name, locals);
        for (const auto& c : tpl.clocks) {
            if (out_)
                out_->clock_names_.push_back(pd.name + "." + c);
            ++next_clock_;
        }

        ResolveContext ctx;
        ctx.params = pd.args;
        ctx.var = [this, &locals](Scope s, std::uint32_t id) -> std::optional<ResolveContext::VarSlot> {
            const auto& table = s == Scope::Global ? globals_ : locals;
            if (id >= table.size())
                return std::nullopt;
            return ResolveContext::VarSlot{table[id].base, table[id].length()};
        };
        const std::uint32_t clock_base = proc.clock_base;
        const auto nlocal_clocks = static_cast<std::uint32_t>(tpl.clocks.size());
        const auto nglobal_clocks = static_cast<std::uint32_t>(m_.global_clocks.size());
        ctx.clock = [=](Scope s, std::uint32_t id) -> std::optional<std::uint32_t> {
            if (s == Scope::Global)
                return id < nglobal_clocks ? std::optional<std::uint32_t>(id) : std::nullopt;
            return id < nlocal_clocks ? std::optional<std::uint32_t>(clock_base + id) : std::nullopt;
        };

        std::map<std::string, std::uint16_t> loc_index;
        for (std::size_t l = 0; l < tpl.locations.size(); ++l) {
            const Location& src = tpl.locations[l];
            loc_index.emplace(src.id, static_cast<std::uint16_t>(l));
            CompiledLocation cl;
            cl.kind = src.kind;
            if (src.kind == LocationKind::Committed)
                has_committed_ = true;
            for (const auto& b : src.invariant) {
                auto slot = ctx.clock(b.scope, b.clock);
                if (!slot)
                    continue;  // already reported
                cl.invariant.emplace_back(*slot, b.bound);
                constants_.push_back({pd.name + ", location " + src.id, b.bound, true});
            }
            if (src.is_initial)
                proc.initial = static_cast<std::uint16_t>(l);
            proc.locations.push_back(std::move(cl));
        }

        for (std::size_t e = 0; e < tpl.edges.size(); ++e) {
            const Edge& edge = tpl.edges[e];
            const std::string ew = "process " + pd.name + ", " + edge_where(tpl, e);
            auto s = loc_index.find(edge.source);
            auto t = loc_index.find(edge.target);
            if (s == loc_index.end() || t == loc_index.end())
                continue;  // already reported
            CompiledEdge ce;
            ce.template_edge = static_cast<std::uint32_t>(e);
            ce.source = s->second;
            ce.target = t->second;
            try {
                std::vector<ClockComparison> uses;
                ce.guard = compile(edge.guard, ctx, &uses);
                for (const auto& u : uses)
                    constants_.push_back({ew + " guard", u.constant, false});
                ce.sync = edge.sync.kind;
                if (edge.sync.kind != SyncKind::None && edge.sync.channel < m_.channels.size()) {
                    const auto& ch = m_.channels[edge.sync.channel];
                    std::int32_t idx = 0;
                    if (!edge.sync.index.empty()) {
                        auto folded = compile(edge.sync.index, ctx).constant_value();
                        if (!folded)
                            throw CompileError("channel index must be constant per process");
                        idx = *folded;
                    }
                    if (idx < 0 || static_cast<std::uint32_t>(idx) >= ch.size)
                        throw CompileError("channel index " + std::to_string(idx) + " out of range for " +
                                           ch.name);
                    ce.channel = channel_base_[edge.sync.channel] + static_cast<std::uint32_t>(idx);
                }
                for (const auto& u : edge.updates) {
                    CompiledUpdate cu;
                    cu.kind = u.kind;
                    if (u.kind == Update::Kind::ResetClock) {
                        auto slot = ctx.clock(u.scope, u.target);
                        if (!slot)
                            throw CompileError("reset of undeclared clock");
                        cu.base = *slot;
                        cu.value = compile(u.value, ctx);
                    } else {
                        auto slot = ctx.var(u.scope, u.target);
                        if (!slot)
                            throw CompileError("assignment to undeclared variable");
                        cu.base = slot->base;
                        cu.length = slot->length;
                        if (u.index.empty()) {
                            if (slot->length != 1)
                                throw CompileError("assignment to array variable without index");
                        } else {
                            Program idx = compile(u.index, ctx);
                            if (auto c = idx.constant_value()) {
                                if (*c < 0 || static_cast<std::uint32_t>(*c) >= slot->length)
                                    throw CompileError("constant index out of range in assignment");
                                cu.base += static_cast<std::uint32_t>(*c);
                                cu.length = 1;
                            } else {
                                cu.index = std::move(idx);
                            }
                        }
                        if (u.value.empty())
                            throw CompileError("assignment without value");
                        cu.value = compile(u.value, ctx);
                    }
                    ce.updates.push_back(std::move(cu));
                }
            } catch (const CompileError& err) {
                violation(ew, err.what());
                continue;
            }
            proc.locations[ce.source].out_edges.push_back(static_cast<std::uint32_t>(proc.edges.size()));
            proc.edges.push_back(std::move(ce));
        }

        if (out_) {
            out_->local_vars_.push_back(std::move(locals));
            out_->processes_.push_back(std::move(proc));
        }
    }

    void check_timing()
    {
        if (m_.tick_ms <= 0) {
            violation("model " + m_.name, "tick must be positive");
            return;
        }
        std::int32_t largest = 0;
        for (const auto& c : constants_) {
            largest = std::max(largest, c.value);
            if (c.value % m_.tick_ms != 0)
                violation(c.where, std::string(c.invariant ? "invariant" : "guard") + " constant " +
                                       std::to_string(c.value) + " is not a multiple of tick " +
                                       std::to_string(m_.tick_ms));
        }
        if (m_.clock_cap && *m_.clock_cap < largest)
            violation("model " + m_.name, "clock cap " + std::to_string(*m_.clock_cap) +
                                              " below largest clock constant " + std::to_string(largest));
        if (out_) {
            out_->cap_ = m_.clock_cap.value_or(largest);
            out_->has_committed_ = has_committed_;
        }
    }

    // A local clock is live at a location if some path from there reads it
    // before resetting it.
    void compute_clock_liveness()
    {
        for (auto& proc : out_->processes_) {
            const Template& tpl = m_.templates[proc.template_index];
            const std::size_t nclk = tpl.clocks.size();
            const std::size_t nloc = proc.locations.size();
            if (nclk == 0)
                continue;
            std::vector<std::vector<char>> live(nloc, std::vector<char>(nclk, 0));
            auto local = [&](std::uint32_t slot) -> std::optional<std::size_t> {
                if (slot < proc.clock_base || slot >= proc.clock_base + nclk)
                    return std::nullopt;
                return slot - proc.clock_base;
            };
            for (std::size_t l = 0; l < nloc; ++l) {
                for (const auto& [slot, bound] : proc.locations[l].invariant)
                    if (auto c = local(slot))
                        live[l][*c] = 1;
                for (auto ei : proc.locations[l].out_edges) {
                    const CompiledEdge& e = proc.edges[ei];
                    std::vector<std::uint32_t> vars, clocks;
                    collect_reads(e.guard, vars, clocks);
                    for (const auto& u : e.updates) {
                        collect_reads(u.value, vars, clocks);
                        collect_reads(u.index, vars, clocks);
                    }
                    for (auto slot : clocks)
                        if (auto c = local(slot))
                            live[l][*c] = 1;
                }
            }
            bool changed = true;
            while (changed) {
                changed = false;
                for (std::size_t l = 0; l < nloc; ++l) {
                    for (auto ei : proc.locations[l].out_edges) {
                        const CompiledEdge& e = proc.edges[ei];
                        std::vector<char> reset(nclk, 0);
                        for (const auto& u : e.updates)
                            if (u.kind == Update::Kind::ResetClock)
                                if (auto c = local(u.base))
                                    reset[*c] = 1;
                        for (std::size_t c = 0; c < nclk; ++c)
                            if (live[e.target][c] && !reset[c] && !live[l][c]) {
                                live[l][c] = 1;
                                changed = true;
                            }
                    }
                }
            }
            for (std::size_t l = 0; l < nloc; ++l)
                for (std::size_t c = 0; c < nclk; ++c)
                    if (!live[l][c])
                        proc.locations[l].dead_clocks.push_back(proc.clock_base + static_cast<std::uint32_t>(c));
        }
    }

    struct ClockConstant {
        std::string where;
        std::int32_t value;
        bool invariant;
    };

    const SystemModel& m_;
    Network* out_;
    ValidationReport report_;
    std::uint32_t next_var_ = 0;
    std::uint32_t next_clock_ = 0;
    std::vector<VarInfo> globals_;
    std::vector<std::uint32_t> channel_base_;
    std::map<std::string, std::size_t> template_by_name_;
    std::vector<ClockConstant> constants_;
    bool has_committed_ = false;
};

ValidationReport validate_model(const SystemModel& model)
{
    return NetworkCompiler(model, nullptr).run();
}

Network::Network(SystemModel model) : model_(std::move(model))
{
    ValidationReport report = NetworkCompiler(model_, this).run();
    if (!report.ok())
        throw ModelError("invalid model " + model_.name + ":\n" + report.to_string());
}

std::string Network::format_value(std::uint32_t slot, std::int32_t value) const
{
    const auto& et = var_enum_[slot];
    if (et) {
        const auto& syms = model_.enums[*et].symbols;
        if (value >= 0 && static_cast<std::size_t>(value) < syms.size())
            return syms[static_cast<std::size_t>(value)];
    }
    return std::to_string(value);
}

const std::string& Network::location_name(std::size_t p, std::uint16_t loc) const
{
    return model_.templates[processes_[p].template_index].locations[loc].id;
}

std::optional<std::size_t> Network::find_process(std::string_view name) const
{
    for (std::size_t p = 0; p < processes_.size(); ++p)
        if (processes_[p].name == name)
            return p;
    return std::nullopt;
}

std::optional<std::uint16_t> Network::find_location(std::size_t p, std::string_view name) const
{
    const auto& locs = model_.templates[processes_[p].template_index].locations;
    for (std::size_t l = 0; l < locs.size(); ++l)
        if (locs[l].id == name)
            return static_cast<std::uint16_t>(l);
    return std::nullopt;
}

const VarInfo* Network::find_local_var(std::size_t p, std::string_view name) const
{
    const auto& tpl = model_.templates[processes_[p].template_index];
    for (std::size_t i = 0; i < tpl.locals.size(); ++i)
        if (tpl.locals[i].name == name)
            return &local_vars_[p][i];
    return nullptr;
}

const VarInfo* Network::find_global_var(std::string_view name) const
{
    for (std::size_t i = 0; i < model_.globals.size(); ++i)
        if (model_.globals[i].name == name)
            return &global_vars_[i];
    return nullptr;
}

std::optional<std::pair<std::uint32_t, std::int32_t>> Network::find_symbol(std::string_view name) const
{
    for (std::size_t e = 0; e < model_.enums.size(); ++e) {
        const auto& syms = model_.enums[e].symbols;
        for (std::size_t i = 0; i < syms.size(); ++i)
            if (syms[i] == name)
                return std::make_pair(static_cast<std::uint32_t>(e), static_cast<std::int32_t>(i));
    }
    return std::nullopt;
}

}  // namespace srpmc::automata
