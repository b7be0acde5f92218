#include "srpmc/explorer/trace.hpp"

#include <json.hpp>

#include <sstream>

namespace srpmc::explorer {

using automata::Network;
using automata::Transition;

std::string_view to_string(TraceRole r) noexcept
{
    return r == TraceRole::Witness ? "witness" : "counterexample";
}

std::string_view to_string(TraceShape s) noexcept
{
    switch (s) {
    case TraceShape::Finite: return "finite";
    case TraceShape::Lasso: return "lasso";
    case TraceShape::Deadlock: return "deadlock";
    }
    return "?";
}

TraceError::TraceError(std::size_t line, const std::string& what)
    : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line)
{
}

namespace {

// Candidate steps from `s`, in graph order.
std::vector<TraceStep> candidates(const SystemState& s, const Network& net)
{
    std::vector<TraceStep> out;
    for (auto& [t, next] : automata::action_successors(s, net))
        out.push_back({false, std::move(t), std::move(next)});
    if (auto d = automata::delay_successor(s, net))
        out.push_back({true, {}, std::move(*d)});
    return out;
}

std::string normalize(std::string_view line)
{
    std::string out;
    bool space = false;
    for (char c : line) {
        if (c == ' ' || c == '\t' || c == '\r') {
            space = !out.empty();
            continue;
        }
        if (space)
            out += ' ';
        space = false;
        out += c;
    }
    return out;
}

}  // namespace

Trace build_trace(const StateSpace& space, std::span<const StateRef> path, TraceRole role, TraceShape shape,
                  std::size_t loop_state)
{
    if (path.empty() || !(path.front() == space.initial_ref()))
        throw std::invalid_argument("trace path must start at the initial state");
    const Network& net = space.network();
    Trace t;
    t.role = role;
    t.shape = shape;
    t.loop_state = loop_state;
    t.initial = space.state(path.front());
    SystemState cur = t.initial;
    for (std::size_t i = 1; i < path.size(); ++i) {
        const SystemState next = space.state(path[i]);
        bool found = false;
        for (auto& c : candidates(cur, net)) {
            if (c.state == next) {
                t.steps.push_back(std::move(c));
                found = true;
                break;
            }
        }
        if (!found)
            throw std::logic_error("trace path is not a path of the state graph");
        cur = next;
    }
    return t;
}

bool is_deadlock(const SystemState& state, const Network& net)
{
    SystemState cur = state;
    while (true) {
        if (!automata::action_successors(cur, net).empty())
            return false;
        auto d = automata::delay_successor(cur, net);
        if (!d || *d == cur)
            return true;
        cur = std::move(*d);
    }
}

void replay(const Network& net, const Trace& trace)
{
    if (trace.initial != automata::initial_state(net))
        throw TraceError(0, "trace does not start at the initial state");
    SystemState cur = trace.initial;
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        const TraceStep& step = trace.steps[i];
        bool ok = false;
        if (step.delay) {
            auto d = automata::delay_successor(cur, net);
            ok = d && *d == step.state;
        } else {
            for (const auto& [t, next] : automata::action_successors(cur, net))
                if (t == step.transition && next == step.state) {
                    ok = true;
                    break;
                }
        }
        if (!ok)
            throw TraceError(i + 1, "step " + std::to_string(i + 1) + " is not a successor of its predecessor");
        cur = step.state;
    }
    switch (trace.shape) {
    case TraceShape::Finite:
        break;
    case TraceShape::Lasso:
        if (trace.loop_state > trace.steps.size() || trace.state(trace.loop_state) != cur || trace.steps.empty())
            throw TraceError(0, "lasso does not close on state " + std::to_string(trace.loop_state));
        break;
    case TraceShape::Deadlock:
        if (!is_deadlock(cur, net))
            throw TraceError(0, "final state is not a deadlock");
        break;
    }
}

std::string format_step(const Network& net, std::size_t index, const SystemState& before, const TraceStep& step)
{
    std::string out = "#" + std::to_string(index) + (step.delay ? " delay" : " action");
    if (!step.delay) {
        if (step.transition.channel)
            out += " " + net.channel_name(*step.transition.channel);
        for (const auto& part : step.transition.participants) {
            const auto& proc = net.process(part.process);
            const auto& e = proc.edges[part.edge];
            out += " " + proc.name + ":" + net.location_name(part.process, e.source) + " -> " +
                   net.location_name(part.process, e.target);
        }
    }
    out += " |";
    for (std::uint32_t v = 0; v < net.var_count(); ++v)
        if (before.vars[v] != step.state.vars[v])
            out += " " + net.var_slot_name(v) + "=" + net.format_value(v, step.state.vars[v]);
    for (std::uint32_t c = 0; c < net.clock_count(); ++c)
        if (before.clocks[c] != step.state.clocks[c])
            out += " " + net.clock_name(c) + "=" + std::to_string(step.state.clocks[c]);
    return out;
}

std::string to_text(const Network& net, const Trace& trace)
{
    std::string out = "trace " + std::string(to_string(trace.role)) + " " + std::string(to_string(trace.shape)) + "\n";
    for (std::size_t i = 0; i < trace.steps.size(); ++i)
        out += format_step(net, i + 1, trace.state(i), trace.steps[i]) + "\n";
    if (trace.shape == TraceShape::Lasso)
        out += "loop " + std::to_string(trace.loop_state) + "\n";
    return out;
}

namespace {

nlohmann::ordered_json state_json(const Network& net, const SystemState& s)
{
    nlohmann::ordered_json j;
    auto& locs = j["locations"] = nlohmann::ordered_json::object();
    for (std::size_t p = 0; p < net.process_count(); ++p)
        locs[net.process(p).name] = net.location_name(p, s.locations[p]);
    auto& vars = j["vars"] = nlohmann::ordered_json::object();
    for (std::uint32_t v = 0; v < net.var_count(); ++v)
        vars[net.var_slot_name(v)] = net.format_value(v, s.vars[v]);
    auto& clocks = j["clocks"] = nlohmann::ordered_json::object();
    for (std::uint32_t c = 0; c < net.clock_count(); ++c)
        clocks[net.clock_name(c)] = s.clocks[c];
    return j;
}

std::string json_value_text(const nlohmann::ordered_json& v)
{
    return v.is_string() ? v.get<std::string>() : v.dump();
}

template <class F>
Trace parse_steps(const Network& net, TraceRole role, TraceShape shape, std::size_t loop_state,
                  std::size_t count, F&& line_of)
{
    Trace t;
    t.role = role;
    t.shape = shape;
    t.loop_state = loop_state;
    t.initial = automata::initial_state(net);
    SystemState cur = t.initial;
    for (std::size_t i = 0; i < count; ++i) {
        const auto [line, where] = line_of(i);
        const std::string want = normalize(line);
        bool found = false;
        for (auto& c : candidates(cur, net)) {
            if (normalize(format_step(net, i + 1, cur, c)) == want) {
                cur = c.state;
                t.steps.push_back(std::move(c));
                found = true;
                break;
            }
        }
        if (!found)
            throw TraceError(where, "step " + std::to_string(i + 1) + " matches no transition enabled here");
    }
    try {
        replay(net, t);
    } catch (const TraceError& e) {
        throw TraceError(0, e.what());
    }
    return t;
}

TraceRole parse_role(std::string_view s, std::size_t line)
{
    if (s == "witness")
        return TraceRole::Witness;
    if (s == "counterexample")
        return TraceRole::Counterexample;
    throw TraceError(line, "unknown trace role '" + std::string(s) + "'");
}

TraceShape parse_shape(std::string_view s, std::size_t line)
{
    if (s == "finite")
        return TraceShape::Finite;
    if (s == "lasso")
        return TraceShape::Lasso;
    if (s == "deadlock")
        return TraceShape::Deadlock;
    throw TraceError(line, "unknown trace shape '" + std::string(s) + "'");
}

}  // namespace

std::string to_json(const Network& net, const Trace& trace)
{
    nlohmann::ordered_json j;
    j["role"] = to_string(trace.role);
    j["shape"] = to_string(trace.shape);
    if (trace.shape == TraceShape::Lasso)
        j["loop_state"] = trace.loop_state;
    j["initial"] = state_json(net, trace.initial);
    auto& steps = j["steps"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        const TraceStep& step = trace.steps[i];
        const SystemState& before = trace.state(i);
        nlohmann::ordered_json s;
        s["index"] = i + 1;
        s["kind"] = step.delay ? "delay" : "action";
        if (!step.delay) {
            if (step.transition.channel)
                s["channel"] = net.channel_name(*step.transition.channel);
            auto& edges = s["edges"] = nlohmann::ordered_json::array();
            for (const auto& part : step.transition.participants) {
                const auto& proc = net.process(part.process);
                const auto& e = proc.edges[part.edge];
                edges.push_back({{"process", proc.name},
                                 {"edge", part.edge},
                                 {"from", net.location_name(part.process, e.source)},
                                 {"to", net.location_name(part.process, e.target)}});
            }
        }
        auto& vars = s["vars"] = nlohmann::ordered_json::object();
        for (std::uint32_t v = 0; v < net.var_count(); ++v)
            if (before.vars[v] != step.state.vars[v])
                vars[net.var_slot_name(v)] = net.format_value(v, step.state.vars[v]);
        auto& clocks = s["clocks"] = nlohmann::ordered_json::object();
        for (std::uint32_t c = 0; c < net.clock_count(); ++c)
            if (before.clocks[c] != step.state.clocks[c])
                clocks[net.clock_name(c)] = step.state.clocks[c];
        steps.push_back(std::move(s));
    }
    return j.dump(2) + "\n";
}

Trace parse_text_trace(const Network& net, std::string_view text)
{
    std::vector<std::pair<std::string, std::size_t>> steps;
    std::optional<TraceRole> role;
    TraceShape shape = TraceShape::Finite;
    std::size_t loop_state = 0;
    bool loop_seen = false;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        const std::string n = normalize(line);
        if (n.empty())
            continue;
        if (n.rfind("trace ", 0) == 0) {
            if (role || !steps.empty())
                throw TraceError(no, "unexpected trace header");
            std::istringstream h(n.substr(6));
            std::string r, s, extra;
            h >> r >> s >> extra;
            if (!extra.empty())
                throw TraceError(no, "malformed trace header");
            role = parse_role(r, no);
            shape = parse_shape(s, no);
            continue;
        }
        if (!role)
            throw TraceError(no, "missing trace header");
        if (n.rfind("loop ", 0) == 0) {
            if (shape != TraceShape::Lasso || loop_seen)
                throw TraceError(no, "unexpected loop marker");
            try {
                std::size_t used = 0;
                loop_state = std::stoul(n.substr(5), &used);
                if (used != n.size() - 5)
                    throw std::invalid_argument("trailing");
            } catch (const std::logic_error&) {
                throw TraceError(no, "malformed loop marker");
            }
            loop_seen = true;
            continue;
        }
        if (n.size() < 2 || n[0] != '#') {
            throw TraceError(no, "expected a step line");
        }
        if (loop_seen)
            throw TraceError(no, "step after loop marker");
        const std::string expect = "#" + std::to_string(steps.size() + 1) + " ";
        if (n.rfind(expect, 0) != 0)
            throw TraceError(no, "expected step " + std::to_string(steps.size() + 1));
        steps.emplace_back(n, no);
    }
    if (!role)
        throw TraceError(0, "empty trace");
    if (shape == TraceShape::Lasso && !loop_seen)
        throw TraceError(no, "lasso without loop marker");
    return parse_steps(net, *role, shape, loop_state, steps.size(), [&](std::size_t i) { return steps[i]; });
}

Trace parse_json_trace(const Network& net, std::string_view text)
{
    try {
        const auto j = nlohmann::ordered_json::parse(text);
        const TraceRole role = parse_role(j.at("role").get<std::string>(), 0);
        const TraceShape shape = parse_shape(j.at("shape").get<std::string>(), 0);
        const std::size_t loop_state = shape == TraceShape::Lasso ? j.at("loop_state").get<std::size_t>() : 0;
        std::vector<std::pair<std::string, std::size_t>> lines;
        for (const auto& s : j.at("steps")) {
            std::string line = "#" + std::to_string(s.at("index").get<std::size_t>()) + " " +
                               s.at("kind").get<std::string>();
            if (s.contains("channel"))
                line += " " + s["channel"].get<std::string>();
            if (s.contains("edges"))
                for (const auto& e : s["edges"])
                    line += " " + e.at("process").get<std::string>() + ":" + e.at("from").get<std::string>() +
                            " -> " + e.at("to").get<std::string>();
            line += " |";
            for (const auto& [k, v] : s.at("vars").items())
                line += " " + k + "=" + json_value_text(v);
            for (const auto& [k, v] : s.at("clocks").items())
                line += " " + k + "=" + json_value_text(v);
            lines.emplace_back(std::move(line), lines.size() + 1);
        }
        return parse_steps(net, role, shape, loop_state, lines.size(), [&](std::size_t i) { return lines[i]; });
    } catch (const nlohmann::json::exception& e) {
        throw TraceError(0, std::string("malformed JSON trace: ") + e.what());
    }
}

}  // namespace srpmc::explorer
