#include "srpmc/automata/semantics.hpp"

#include <algorithm>

namespace srpmc::automata {

std::size_t SystemStateHash::operator()(const SystemState& s) const noexcept
{
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](std::uint64_t v) {
        h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    };
    for (auto l : s.locations)
        mix(l);
    for (auto v : s.vars)
        mix(static_cast<std::uint32_t>(v));
    for (auto c : s.clocks)
        mix(static_cast<std::uint32_t>(c));
    return static_cast<std::size_t>(h);
}

SystemState initial_state(const Network& net)
{
    SystemState s;
    s.locations.reserve(net.process_count());
    for (const auto& p : net.processes())
        s.locations.push_back(p.initial);
    s.vars = net.initial_vars();
    s.clocks.assign(net.clock_count(), 0);
    return s;
}

namespace {

const CompiledLocation& current_location(const SystemState& s, const Network& net, std::size_t p)
{
    return net.process(p).locations[s.locations[p]];
}

bool in_committed(const SystemState& s, const Network& net, std::size_t p)
{
    return current_location(s, net, p).kind == LocationKind::Committed;
}

void normalize_dead_clocks(SystemState& s, const Network& net, std::size_t p)
{
    if (!net.model().reduce_inactive_clocks)
        return;
    for (auto slot : current_location(s, net, p).dead_clocks)
        s.clocks[slot] = 0;
}

void apply_updates(SystemState& s, const CompiledEdge& e, const Network& net)
{
    for (const auto& u : e.updates) {
        const Valuation val = s.valuation();
        if (u.kind == Update::Kind::ResetClock) {
            s.clocks[u.base] = u.value.empty() ? 0 : u.value.eval(val);
            continue;
        }
        std::uint32_t slot = u.base;
        if (!u.index.empty()) {
            const std::int32_t idx = u.index.eval(val);
            if (idx < 0 || static_cast<std::uint32_t>(idx) >= u.length)
                throw ModelError("assignment index " + std::to_string(idx) + " out of range for " +
                                 net.var_slot_name(u.base));
            slot += static_cast<std::uint32_t>(idx);
        }
        const std::int32_t v = u.value.eval(val);
        if (v < net.var_min(slot) || v > net.var_max(slot))
            throw ModelError("assignment " + net.var_slot_name(slot) + " := " + std::to_string(v) +
                             " outside domain [" + std::to_string(net.var_min(slot)) + "," +
                             std::to_string(net.var_max(slot)) + "]");
        s.vars[slot] = v;
    }
}

SystemState fire(const SystemState& state, const Transition& t, const Network& net)
{
    SystemState next = state;
    for (const auto& part : t.participants)
        apply_updates(next, net.process(part.process).edges[part.edge], net);
    for (const auto& part : t.participants)
        next.locations[part.process] = net.process(part.process).edges[part.edge].target;
    for (const auto& part : t.participants)
        normalize_dead_clocks(next, net, part.process);
    return next;
}

void enumerate_candidates(const SystemState& s, const Network& net, std::vector<Transition>& out)
{
    const Valuation val = s.valuation();
    const std::size_t n = net.process_count();
    for (std::size_t p = 0; p < n; ++p) {
        const auto& proc = net.process(p);
        for (auto ei : current_location(s, net, p).out_edges) {
            const CompiledEdge& e = proc.edges[ei];
            if (e.sync == SyncKind::Receive || !e.guard.holds(val))
                continue;
            const Participant sender{static_cast<std::uint32_t>(p), ei};
            if (e.sync == SyncKind::None) {
                out.push_back({std::nullopt, {sender}});
                continue;
            }
            // Receive edges of other processes on the same channel whose guard holds.
            std::vector<std::vector<Participant>> ready;
            for (std::size_t q = 0; q < n; ++q) {
                if (q == p)
                    continue;
                std::vector<Participant> options;
                const auto& qproc = net.process(q);
                for (auto fi : current_location(s, net, q).out_edges) {
                    const CompiledEdge& f = qproc.edges[fi];
                    if (f.sync == SyncKind::Receive && f.channel == e.channel && f.guard.holds(val))
                        options.push_back({static_cast<std::uint32_t>(q), fi});
                }
                if (!options.empty())
                    ready.push_back(std::move(options));
            }
            if (net.channel_kind(e.channel) == ChannelKind::Binary) {
                for (const auto& options : ready)
                    for (const auto& r : options)
                        out.push_back({e.channel, {sender, r}});
                continue;
            }
            // Broadcast: every ready process joins, each with one of its edges.
            std::vector<std::size_t> choice(ready.size(), 0);
            while (true) {
                Transition t{e.channel, {sender}};
                for (std::size_t k = 0; k < ready.size(); ++k)
                    t.participants.push_back(ready[k][choice[k]]);
                out.push_back(std::move(t));
                bool done = true;
                for (std::size_t k = ready.size(); k-- > 0;) {
                    if (++choice[k] < ready[k].size()) {
                        done = false;
                        break;
                    }
                    choice[k] = 0;
                }
                if (done)
                    break;
            }
        }
    }
}

}  // namespace

bool invariants_hold(const SystemState& s, const Network& net)
{
    for (std::size_t p = 0; p < net.process_count(); ++p)
        for (const auto& [slot, bound] : current_location(s, net, p).invariant)
            if (s.clocks[slot] > bound)
                return false;
    return true;
}

std::vector<std::pair<Transition, SystemState>> action_successors(const SystemState& state, const Network& net)
{
    std::vector<Transition> candidates;
    enumerate_candidates(state, net, candidates);

    bool committed = false;
    if (net.has_committed_locations())
        for (std::size_t p = 0; p < net.process_count() && !committed; ++p)
            committed = in_committed(state, net, p);

    std::vector<std::pair<Transition, SystemState>> out;
    out.reserve(candidates.size());
    for (auto& t : candidates) {
        if (committed && std::none_of(t.participants.begin(), t.participants.end(), [&](const Participant& part) {
                return in_committed(state, net, part.process);
            }))
            continue;
        SystemState next = fire(state, t, net);
        if (!invariants_hold(next, net))
            continue;
        out.emplace_back(std::move(t), std::move(next));
    }
    return out;
}

std::vector<Transition> enabled_actions(const SystemState& state, const Network& net)
{
    std::vector<Transition> out;
    for (auto& [t, s] : action_successors(state, net))
        out.push_back(std::move(t));
    return out;
}

std::optional<SystemState> delay_successor(const SystemState& state, const Network& net)
{
    for (std::size_t p = 0; p < net.process_count(); ++p)
        if (current_location(state, net, p).kind != LocationKind::Normal)
            return std::nullopt;
    SystemState next = state;
    const std::int32_t g = net.tick();
    const std::int32_t ceiling = net.clock_ceiling();
    for (auto& c : next.clocks)
        c = c + g > net.clock_cap() ? ceiling : c + g;
    for (std::size_t p = 0; p < net.process_count(); ++p)
        normalize_dead_clocks(next, net, p);
    if (!invariants_hold(next, net))
        return std::nullopt;
    return next;
}

SystemState apply_action(const SystemState& state, const Transition& t, const Network& net)
{
    if (t.participants.empty())
        throw ModelError("transition without participants");
    for (const auto& part : t.participants) {
        if (part.process >= net.process_count() || part.edge >= net.process(part.process).edges.size())
            throw ModelError("transition references unknown process or edge");
        if (net.process(part.process).edges[part.edge].source != state.locations[part.process])
            throw ModelError("transition edge does not leave the current location of " +
                             net.process(part.process).name);
    }
    return fire(state, t, net);
}

bool is_well_formed(const SystemState& s, const Network& net)
{
    if (s.locations.size() != net.process_count() || s.vars.size() != net.var_count() ||
        s.clocks.size() != net.clock_count())
        return false;
    for (std::size_t p = 0; p < net.process_count(); ++p)
        if (s.locations[p] >= net.process(p).locations.size())
            return false;
    for (std::uint32_t i = 0; i < s.vars.size(); ++i)
        if (s.vars[i] < net.var_min(i) || s.vars[i] > net.var_max(i))
            return false;
    const std::int32_t g = net.tick();
    for (auto c : s.clocks) {
        if (c < 0 || c > net.clock_ceiling())
            return false;
        if (c % g != 0 && c != net.clock_ceiling())
            return false;
    }
    return true;
}

}  // namespace srpmc::automata
