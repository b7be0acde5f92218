#include "oracle.hpp"

#include <deque>
#include <map>
#include <stdexcept>

namespace srpmc::testing {

using automata::SystemState;

std::optional<NaiveGraph> naive_explore(const automata::Network& net, std::size_t limit)
{
    NaiveGraph g;
    std::map<SystemState, std::uint32_t> index;
    std::vector<char> has_action;
    std::vector<std::optional<std::uint32_t>> delay_to;
    auto add = [&](const SystemState& s) -> std::optional<std::uint32_t> {
        auto [it, fresh] = index.emplace(s, static_cast<std::uint32_t>(g.states.size()));
        if (fresh)
            g.states.push_back(s);
        return it->second;
    };
    add(automata::initial_state(net));
    for (std::size_t i = 0; i < g.states.size(); ++i) {
        if (g.states.size() > limit)
            return std::nullopt;
        const SystemState s = g.states[i];
        std::vector<std::uint32_t> out;
        const auto actions = automata::action_successors(s, net);
        for (const auto& [t, next] : actions)
            out.push_back(*add(next));
        g.transitions += actions.size();
        has_action.push_back(!actions.empty());
        std::optional<std::uint32_t> d;
        if (auto next = automata::delay_successor(s, net)) {
            d = *add(*next);
            out.push_back(*d);
            if (*d != i)
                ++g.transitions;
        }
        delay_to.push_back(d);
        g.succ.push_back(std::move(out));
    }
    g.deadlock.assign(g.states.size(), 0);
    for (std::size_t i = 0; i < g.states.size(); ++i) {
        std::size_t cur = i;
        bool dl = true;
        for (std::size_t steps = 0; steps <= g.states.size(); ++steps) {
            if (has_action[cur]) {
                dl = false;
                break;
            }
            if (!delay_to[cur] || *delay_to[cur] == cur)
                break;
            cur = *delay_to[cur];
        }
        g.deadlock[i] = dl;
        g.deadlocks += dl;
    }
    return g;
}

namespace {

struct Value {
    bool is_location = false;
    std::vector<std::int32_t> values;
};

Value operand_value(const query::Operand& o, const SystemState& s, const automata::Network& net)
{
    if (o.kind == query::Operand::Kind::Integer)
        return {false, {o.value}};
    if (o.path.size() == 1) {
        if (const auto* v = net.find_global_var(o.path[0])) {
            Value out;
            for (std::uint32_t k = 0; k < v->length(); ++k)
                out.values.push_back(s.vars[v->base + k]);
            return out;
        }
        if (const auto sym = net.find_symbol(o.path[0]))
            return {false, {sym->second}};
        throw std::runtime_error("oracle: unknown name " + o.path[0]);
    }
    const auto p = net.find_process(o.path[0]);
    if (!p)
        throw std::runtime_error("oracle: unknown process " + o.path[0]);
    if (const auto* v = net.find_local_var(*p, o.path[1])) {
        Value out;
        for (std::uint32_t k = 0; k < v->length(); ++k)
            out.values.push_back(s.vars[v->base + k]);
        return out;
    }
    if (const auto loc = net.find_location(*p, o.path[1]))
        return {true, {s.locations[*p] == *loc ? 1 : 0}};
    throw std::runtime_error("oracle: unknown member " + o.path[1]);
}

}  // namespace

bool naive_eval(const query::Expr& e, const SystemState& s, bool deadlock, const automata::Network& net)
{
    using K = query::Expr::Kind;
    switch (e.kind) {
    case K::Constant: return e.value;
    case K::Deadlock: return deadlock;
    case K::Name: {
        const Value v = operand_value(e.lhs, s, net);
        return v.values.at(0) != 0;
    }
    case K::Compare: {
        const Value a = operand_value(e.lhs, s, net);
        const Value b = operand_value(e.rhs, s, net);
        if (a.values.size() != 1 || b.values.size() != 1) {
            const bool same = a.values == b.values;
            return e.op == query::CompareOp::Eq ? same : !same;
        }
        const auto x = a.values[0];
        const auto y = b.values[0];
        switch (e.op) {
        case query::CompareOp::Eq: return x == y;
        case query::CompareOp::Ne: return x != y;
        case query::CompareOp::Lt: return x < y;
        case query::CompareOp::Le: return x <= y;
        case query::CompareOp::Gt: return x > y;
        case query::CompareOp::Ge: return x >= y;
        }
        return false;
    }
    case K::Not: return !naive_eval(e.children[0], s, deadlock, net);
    case K::And:
        return naive_eval(e.children[0], s, deadlock, net) && naive_eval(e.children[1], s, deadlock, net);
    case K::Or:
        return naive_eval(e.children[0], s, deadlock, net) || naive_eval(e.children[1], s, deadlock, net);
    case K::Imply:
        return !naive_eval(e.children[0], s, deadlock, net) || naive_eval(e.children[1], s, deadlock, net);
    }
    return false;
}

namespace {

// States from which some maximal path stays inside `inside`.
std::vector<char> exists_globally(const NaiveGraph& g, const std::vector<char>& inside)
{
    std::vector<char> x = inside;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < g.states.size(); ++i) {
            if (!x[i])
                continue;
            bool keep = g.deadlock[i] != 0;
            for (auto t : g.succ[i])
                keep = keep || x[t];
            if (!keep) {
                x[i] = 0;
                changed = true;
            }
        }
    }
    return x;
}

}  // namespace

bool naive_check(const NaiveGraph& g, const query::Query& q, const automata::Network& net)
{
    const std::size_t n = g.states.size();
    std::vector<char> phi(n), psi(n);
    for (std::size_t i = 0; i < n; ++i) {
        phi[i] = naive_eval(q.phi, g.states[i], g.deadlock[i], net);
        if (q.kind == query::QueryKind::LeadsTo)
            psi[i] = naive_eval(q.psi, g.states[i], g.deadlock[i], net);
    }
    auto negate = [](std::vector<char> v) {
        for (auto& c : v)
            c = !c;
        return v;
    };
    switch (q.kind) {
    case query::QueryKind::ExistsEventually:
        for (auto c : phi)
            if (c)
                return true;
        return false;
    case query::QueryKind::ForallAlways:
        for (auto c : phi)
            if (!c)
                return false;
        return true;
    case query::QueryKind::ExistsAlways: return exists_globally(g, phi)[0] != 0;
    case query::QueryKind::ForallEventually: return exists_globally(g, negate(phi))[0] == 0;
    case query::QueryKind::LeadsTo: {
        const auto avoid = exists_globally(g, negate(psi));
        for (std::size_t i = 0; i < n; ++i)
            if (phi[i] && avoid[i])
                return false;
        return true;
    }
    }
    return false;
}

}  // namespace srpmc::testing
