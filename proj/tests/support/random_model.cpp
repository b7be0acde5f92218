#include "random_model.hpp"

namespace srpmc::testing {

using namespace automata;

namespace {

int pick(std::mt19937& rng, int lo, int hi)
{
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

bool chance(std::mt19937& rng, double p)
{
    return std::bernoulli_distribution(p)(rng);
}

}  // namespace

SystemModel random_model(std::mt19937& rng, const RandomModelShape& shape)
{
    SystemModel m;
    m.name = "random";
    m.tick_ms = pick(rng, 1, 2);
    const int g = m.tick_ms;
    m.globals.push_back({"g", 0, 2, 0, {}, std::nullopt});
    m.channels.push_back({"a", ChannelKind::Binary, 1});
    m.channels.push_back({"b", ChannelKind::Broadcast, 1});

    const int processes = pick(rng, 1, shape.max_processes);
    for (int p = 0; p < processes; ++p) {
        Template t;
        t.name = "T" + std::to_string(p);
        t.locals.push_back({"v", 0, 2, 0, {}, std::nullopt});
        t.clocks.push_back("x");
        const int locs = pick(rng, 2, shape.max_locations);
        for (int l = 0; l < locs; ++l) {
            Location loc;
            loc.id = "l" + std::to_string(l);
            loc.is_initial = l == 0;
            const int k = pick(rng, 0, 9);
            loc.kind = k == 0 ? LocationKind::Committed : k == 1 ? LocationKind::Urgent : LocationKind::Normal;
            if (chance(rng, 0.4))
                loc.invariant.push_back({Scope::Local, 0, g * pick(rng, 1, 4)});
            t.locations.push_back(std::move(loc));
        }
        const int edges = pick(rng, 1, shape.max_edges);
        for (int e = 0; e < edges; ++e) {
            Edge edge;
            edge.source = "l" + std::to_string(pick(rng, 0, locs - 1));
            edge.target = "l" + std::to_string(pick(rng, 0, locs - 1));
            std::vector<Expr> guard;
            if (chance(rng, 0.5)) {
                const Expr c = lit(g * pick(rng, 0, 4));
                guard.push_back(chance(rng, 0.7) ? ge(Expr::clock(Scope::Local, 0), c)
                                                 : le(Expr::clock(Scope::Local, 0), c));
            }
            if (chance(rng, 0.3))
                guard.push_back(eq(Expr::var(Scope::Local, 0), lit(pick(rng, 0, 2))));
            if (chance(rng, 0.2))
                guard.push_back(ne(Expr::var(Scope::Global, 0), lit(pick(rng, 0, 2))));
            if (!guard.empty())
                edge.guard = all_of(guard);
            const int s = pick(rng, 0, 5);
            if (s == 1)
                edge.sync = Sync::send(0);
            else if (s == 2)
                edge.sync = Sync::receive(0);
            else if (s == 3)
                edge.sync = Sync::send(1);
            else if (s == 4)
                edge.sync = Sync::receive(1);
            if (chance(rng, 0.4))
                edge.updates.push_back(Update::reset(Scope::Local, 0));
            if (chance(rng, 0.4))
                edge.updates.push_back(Update::assign(Scope::Local, 0, lit(pick(rng, 0, 2))));
            if (chance(rng, 0.2))
                edge.updates.push_back(
                    Update::assign(Scope::Global, 0, min(Expr::var(Scope::Global, 0) + lit(1), lit(2))));
            t.edges.push_back(std::move(edge));
        }
        m.templates.push_back(std::move(t));
        m.processes.push_back({"P" + std::to_string(p), "T" + std::to_string(p), {}});
    }
    return m;
}

std::string random_formula(std::mt19937& rng, const SystemModel& model, int depth)
{
    const int processes = static_cast<int>(model.processes.size());
    auto atom = [&]() -> std::string {
        const int p = pick(rng, 0, processes - 1);
        const auto& name = model.processes[p].name;
        const int locs = static_cast<int>(model.templates[p].locations.size());
        static const char* ops[] = {"==", "!=", "<", "<=", ">", ">="};
        switch (pick(rng, 0, 6)) {
        case 0:
        case 1: return name + ".l" + std::to_string(pick(rng, 0, locs - 1));
        case 2: return name + ".v " + ops[pick(rng, 0, 5)] + " " + std::to_string(pick(rng, 0, 2));
        case 3: return "g " + std::string(ops[pick(rng, 0, 5)]) + " " + std::to_string(pick(rng, 0, 2));
        case 4: return "deadlock";
        case 5: return chance(rng, 0.5) ? "true" : "false";
        default: return name + ".v";
        }
    };
    if (depth == 0 || chance(rng, 0.3))
        return atom();
    switch (pick(rng, 0, 3)) {
    case 0: return "!(" + random_formula(rng, model, depth - 1) + ")";
    case 1: return "(" + random_formula(rng, model, depth - 1) + " && " + random_formula(rng, model, depth - 1) + ")";
    case 2: return "(" + random_formula(rng, model, depth - 1) + " || " + random_formula(rng, model, depth - 1) + ")";
    default:
        return "(" + random_formula(rng, model, depth - 1) + " imply " + random_formula(rng, model, depth - 1) + ")";
    }
}

std::string random_query(std::mt19937& rng, const SystemModel& model)
{
    switch (pick(rng, 0, 4)) {
    case 0: return "E<> " + random_formula(rng, model);
    case 1: return "A[] " + random_formula(rng, model);
    case 2: return "E[] " + random_formula(rng, model);
    case 3: return "A<> " + random_formula(rng, model);
    default: return random_formula(rng, model) + " --> " + random_formula(rng, model);
    }
}

}  // namespace srpmc::testing
