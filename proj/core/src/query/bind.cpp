#include "srpmc/query/query.hpp"

#include <memory>

namespace srpmc::query {

using automata::Network;
using explorer::StatePredicate;

UnresolvedIdentifier::UnresolvedIdentifier(std::string name)
    : std::runtime_error("unknown identifier '" + name + "'"), name_(std::move(name))
{
}

namespace {

using Eval = std::function<bool(const SystemState&, bool)>;

std::string dotted(const Operand& o)
{
    std::string out;
    for (std::size_t i = 0; i < o.path.size(); ++i)
        out += (i ? "." : "") + o.path[i];
    for (auto idx : o.indices)
        out += "[" + std::to_string(idx) + "]";
    return out;
}

struct Value {
    bool constant = false;
    std::int32_t value = 0;
    std::uint32_t base = 0;
    std::uint32_t length = 1;
    bool array = false;
    std::optional<std::uint32_t> enum_type;
    std::string name;
};

std::string type_name(const Network& net, const Value& v)
{
    std::string t = v.enum_type ? net.model().enums[*v.enum_type].name : "int";
    return v.array ? t + "[" + std::to_string(v.length) + "]" : t;
}

Value slice(const automata::VarInfo& info, const Operand& o)
{
    Value v;
    v.name = dotted(o);
    v.enum_type = info.enum_type;
    v.base = info.base;
    std::size_t dim = 0;
    for (auto idx : o.indices) {
        if (dim >= info.dims.size())
            throw TypeError("'" + v.name + "' has too many indices");
        if (idx < 0 || static_cast<std::uint32_t>(idx) >= info.dims[dim])
            throw TypeError("index " + std::to_string(idx) + " out of range in '" + v.name + "'");
        std::uint32_t stride = 1;
        for (std::size_t d = dim + 1; d < info.dims.size(); ++d)
            stride *= info.dims[d];
        v.base += static_cast<std::uint32_t>(idx) * stride;
        ++dim;
    }
    v.length = 1;
    for (std::size_t d = dim; d < info.dims.size(); ++d)
        v.length *= info.dims[d];
    v.array = dim < info.dims.size();
    return v;
}

Value resolve(const Operand& o, const Network& net)
{
    if (o.kind == Operand::Kind::Integer) {
        Value v;
        v.constant = true;
        v.value = o.value;
        v.name = std::to_string(o.value);
        return v;
    }
    if (o.path.size() == 2) {
        const auto p = net.find_process(o.path[0]);
        if (!p)
            throw UnresolvedIdentifier(o.path[0]);
        if (const auto* info = net.find_local_var(*p, o.path[1]))
            return slice(*info, o);
        if (net.find_location(*p, o.path[1]))
            throw TypeError("location '" + dotted(o) + "' used as a value");
        throw UnresolvedIdentifier(o.path[0] + "." + o.path[1]);
    }
    if (o.path.size() == 1) {
        if (const auto* info = net.find_global_var(o.path[0]))
            return slice(*info, o);
        if (const auto sym = net.find_symbol(o.path[0])) {
            if (!o.indices.empty())
                throw TypeError("symbol '" + o.path[0] + "' cannot be indexed");
            Value v;
            v.constant = true;
            v.enum_type = sym->first;
            v.value = sym->second;
            v.name = o.path[0];
            return v;
        }
        throw UnresolvedIdentifier(o.path[0]);
    }
    throw UnresolvedIdentifier(dotted(o));
}

bool compare(CompareOp op, std::int32_t a, std::int32_t b)
{
    switch (op) {
    case CompareOp::Eq: return a == b;
    case CompareOp::Ne: return a != b;
    case CompareOp::Lt: return a < b;
    case CompareOp::Le: return a <= b;
    case CompareOp::Gt: return a > b;
    case CompareOp::Ge: return a >= b;
    }
    return false;
}

struct Bound {
    Eval eval;
    bool deadlock = false;
};

Bound bind_compare(const Expr& e, const Network& net)
{
    const Value a = resolve(e.lhs, net);
    const Value b = resolve(e.rhs, net);
    if (a.array || b.array) {
        if (!a.array || !b.array)
            throw TypeError("cannot compare " + type_name(net, a) + " '" + a.name + "' with " + type_name(net, b) +
                            " '" + b.name + "'");
        if (a.enum_type != b.enum_type)
            throw TypeError("cannot compare " + type_name(net, a) + " '" + a.name + "' with " + type_name(net, b) +
                            " '" + b.name + "'");
        if (e.op != CompareOp::Eq && e.op != CompareOp::Ne)
            throw TypeError("arrays support only == and != ('" + a.name + "')");
        const bool eq = e.op == CompareOp::Eq;
        if (a.length != b.length)
            return {[eq](const SystemState&, bool) { return !eq; }, false};
        return {[eq, x = a.base, y = b.base, n = a.length](const SystemState& s, bool) {
                    for (std::uint32_t i = 0; i < n; ++i)
                        if (s.vars[x + i] != s.vars[y + i])
                            return !eq;
                    return eq;
                },
                false};
    }
    if (a.enum_type != b.enum_type)
        throw TypeError("cannot compare " + type_name(net, a) + " '" + a.name + "' with " + type_name(net, b) + " '" +
                        b.name + "'");
    const CompareOp op = e.op;
    if (a.constant && b.constant) {
        const bool r = compare(op, a.value, b.value);
        return {[r](const SystemState&, bool) { return r; }, false};
    }
    if (b.constant)
        return {[op, x = a.base, c = b.value](const SystemState& s, bool) { return compare(op, s.vars[x], c); }, false};
    if (a.constant)
        return {[op, c = a.value, y = b.base](const SystemState& s, bool) { return compare(op, c, s.vars[y]); }, false};
    return {[op, x = a.base, y = b.base](const SystemState& s, bool) { return compare(op, s.vars[x], s.vars[y]); },
            false};
}

Bound bind_name(const Operand& o, const Network& net)
{
    if (o.path.size() == 2 && o.indices.empty()) {
        if (const auto p = net.find_process(o.path[0])) {
            if (const auto loc = net.find_location(*p, o.path[1]))
                return {[p = *p, l = *loc](const SystemState& s, bool) { return s.locations[p] == l; }, false};
        } else {
            throw UnresolvedIdentifier(o.path[0]);
        }
    }
    if (o.path.size() == 1 && o.indices.empty() && net.find_process(o.path[0]))
        throw TypeError("process '" + o.path[0] + "' used as a condition");
    const Value v = resolve(o, net);
    if (v.constant)
        throw TypeError("constant '" + v.name + "' used as a condition");
    if (v.array)
        throw TypeError("array '" + v.name + "' used as a condition");
    if (v.enum_type)
        throw TypeError("enumeration variable '" + v.name + "' used as a condition");
    return {[x = v.base](const SystemState& s, bool) { return s.vars[x] != 0; }, false};
}

Bound bind_expr(const Expr& e, const Network& net)
{
    switch (e.kind) {
    case Expr::Kind::Constant:
        return {[v = e.value](const SystemState&, bool) { return v; }, false};
    case Expr::Kind::Deadlock:
        return {[](const SystemState&, bool dl) { return dl; }, true};
    case Expr::Kind::Name:
        return bind_name(e.lhs, net);
    case Expr::Kind::Compare:
        return bind_compare(e, net);
    case Expr::Kind::Not: {
        Bound c = bind_expr(e.children.at(0), net);
        return {[f = std::move(c.eval)](const SystemState& s, bool dl) { return !f(s, dl); }, c.deadlock};
    }
    case Expr::Kind::And:
    case Expr::Kind::Or:
    case Expr::Kind::Imply: {
        Bound l = bind_expr(e.children.at(0), net);
        Bound r = bind_expr(e.children.at(1), net);
        const bool dl = l.deadlock || r.deadlock;
        if (e.kind == Expr::Kind::And)
            return {[f = std::move(l.eval), g = std::move(r.eval)](const SystemState& s, bool d) {
                        return f(s, d) && g(s, d);
                    },
                    dl};
        if (e.kind == Expr::Kind::Or)
            return {[f = std::move(l.eval), g = std::move(r.eval)](const SystemState& s, bool d) {
                        return f(s, d) || g(s, d);
                    },
                    dl};
        return {[f = std::move(l.eval), g = std::move(r.eval)](const SystemState& s, bool d) {
                    return !f(s, d) || g(s, d);
                },
                dl};
    }
    }
    throw std::logic_error("unknown expression kind");
}

}  // namespace

StatePredicate bind(const Expr& e, const Network& net)
{
    Bound b = bind_expr(e, net);
    return {std::move(b.eval), b.deadlock, false};
}

bool eval_state_expr(const Expr& e, const SystemState& state, const Network& net)
{
    const StatePredicate p = bind(e, net);
    return p.eval(state, p.uses_deadlock && explorer::is_deadlock(state, net));
}

QueryResult run_query(const explorer::StateSpace& space, const Query& q, const explorer::CheckLimits& limits)
{
    const Network& net = space.network();
    const StatePredicate phi = bind(q.phi, net);
    QueryResult r;
    r.source = q.source.empty() ? print(q) : q.source;
    r.kind = q.kind;
    switch (q.kind) {
    case QueryKind::ExistsEventually: r.verdict = explorer::check_reachable(space, phi, limits); break;
    case QueryKind::ForallAlways: r.verdict = explorer::check_always(space, phi, limits); break;
    case QueryKind::ExistsAlways: r.verdict = explorer::check_exists_always(space, phi, limits); break;
    case QueryKind::ForallEventually: r.verdict = explorer::check_eventually(space, phi, limits); break;
    case QueryKind::LeadsTo: r.verdict = explorer::check_leads_to(space, phi, bind(q.psi, net), limits); break;
    }
    return r;
}

QueryResult run_query(const explorer::StateSpace& space, std::string_view text, const explorer::CheckLimits& limits)
{
    return run_query(space, parse_query(text), limits);
}

}  // namespace srpmc::query
