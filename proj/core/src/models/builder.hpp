#pragma once

#include "srpmc/automata/model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace srpmc::models::detail {

using automata::Expr;
using automata::LocationKind;
using automata::Scope;
using automata::Sync;
using automata::Update;

struct VarRef {
    Scope scope;
    std::uint32_t id;

    Expr operator()() const { return Expr::var(scope, id); }
    Expr operator[](Expr index) const { return Expr::element(scope, id, std::move(index)); }
    Expr operator[](std::int32_t index) const { return Expr::element(scope, id, automata::lit(index)); }

    Update set(Expr value) const { return Update::assign(scope, id, std::move(value)); }
    Update set(Expr index, Expr value) const
    {
        return Update::assign_element(scope, id, std::move(index), std::move(value));
    }
};

struct ClockRef {
    Scope scope;
    std::uint32_t id;

    Expr operator()() const { return Expr::clock(scope, id); }
    Update reset() const { return Update::reset(scope, id); }
};

class TemplateBuilder {
public:
    explicit TemplateBuilder(std::string name) { t_.name = std::move(name); }

    Expr param(const std::string& name)
    {
        t_.params.push_back(name);
        return Expr::param(static_cast<std::uint32_t>(t_.params.size() - 1));
    }

    VarRef local(automata::VarDecl decl)
    {
        t_.locals.push_back(std::move(decl));
        return {Scope::Local, static_cast<std::uint32_t>(t_.locals.size() - 1)};
    }

    ClockRef clock(const std::string& name)
    {
        t_.clocks.push_back(name);
        return {Scope::Local, static_cast<std::uint32_t>(t_.clocks.size() - 1)};
    }

    void location(const std::string& id, LocationKind kind = LocationKind::Normal, bool initial = false)
    {
        t_.locations.push_back({id, kind, {}, initial});
    }

    void location(const std::string& id, ClockRef c, std::int32_t bound, bool initial = false)
    {
        t_.locations.push_back({id, LocationKind::Normal, {{c.scope, c.id, bound}}, initial});
    }

    void edge(const std::string& from, const std::string& to, Expr guard, Sync sync,
              std::vector<Update> updates = {})
    {
        t_.edges.push_back({from, to, std::move(guard), std::move(sync), std::move(updates)});
    }

    automata::Template take() { return std::move(t_); }

private:
    automata::Template t_;
};

inline automata::VarDecl enum_var(std::string name, std::uint32_t enum_type, std::int32_t symbols,
                                  std::vector<std::uint32_t> dims = {})
{
    automata::VarDecl v;
    v.name = std::move(name);
    v.min = 0;
    v.max = symbols - 1;
    v.init = 0;
    v.dims = std::move(dims);
    v.enum_type = enum_type;
    return v;
}

inline automata::VarDecl int_var(std::string name, std::int32_t min, std::int32_t max, std::int32_t init = 0)
{
    automata::VarDecl v;
    v.name = std::move(name);
    v.min = min;
    v.max = max;
    v.init = init;
    return v;
}

}  // namespace srpmc::models::detail
