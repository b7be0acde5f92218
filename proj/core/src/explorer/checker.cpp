#include "srpmc/explorer/checker.hpp"

#include <deque>

namespace srpmc::explorer {

StatePredicate StatePredicate::constant(bool value)
{
    return {[value](const SystemState&, bool) { return value; }, false, false};
}

StatePredicate StatePredicate::deadlock()
{
    return {[](const SystemState&, bool dl) { return dl; }, true, false};
}

StatePredicate operator!(StatePredicate p)
{
    auto f = std::move(p.eval);
    return {[f](const SystemState& s, bool dl) { return !f(s, dl); }, p.uses_deadlock, p.reads_clocks};
}

StatePredicate operator&&(StatePredicate a, StatePredicate b)
{
    auto f = std::move(a.eval);
    auto g = std::move(b.eval);
    return {[f, g](const SystemState& s, bool dl) { return f(s, dl) && g(s, dl); },
            a.uses_deadlock || b.uses_deadlock, a.reads_clocks || b.reads_clocks};
}

StatePredicate operator||(StatePredicate a, StatePredicate b)
{
    auto f = std::move(a.eval);
    auto g = std::move(b.eval);
    return {[f, g](const SystemState& s, bool dl) { return f(s, dl) || g(s, dl); },
            a.uses_deadlock || b.uses_deadlock, a.reads_clocks || b.reads_clocks};
}

namespace {

constexpr std::uint8_t kWhite = 0;
constexpr std::uint8_t kGrey = 1;
constexpr std::uint8_t kBlack = 2;

class Watch {
public:
    explicit Watch(const CheckLimits& limits) : deadline_(limits.deadline) {}

    void poll()
    {
        if (deadline_ && (count_++ & 0xffffu) == 0 && std::chrono::steady_clock::now() > *deadline_)
            throw CheckTimeout();
    }

private:
    std::optional<std::chrono::steady_clock::time_point> deadline_;
    std::uint32_t count_ = 0;
};

// Evaluates a predicate on explicit states, caching per stored key.
class Evaluator {
public:
    Evaluator(const StateSpace& space, const StatePredicate& p) : space_(space), p_(p)
    {
        if (!p_.eval)
            throw std::invalid_argument("empty state predicate");
        if (!p_.reads_clocks)
            cache_.assign(space.key_count(), 0);
    }

    bool operator()(StateRef r)
    {
        if (p_.reads_clocks) {
            buf_ = space_.state(r);
            return p_.eval(buf_, p_.uses_deadlock && space_.is_deadlock(r));
        }
        std::uint8_t& c = cache_[r.node];
        if (c == 0) {
            space_.node_state(r.node, buf_);
            const bool f = p_.eval(buf_, false);
            const bool t = p_.uses_deadlock ? p_.eval(buf_, true) : f;
            c = static_cast<std::uint8_t>(1 | (f ? 2 : 0) | (t ? 4 : 0));
        }
        const bool f = (c & 2) != 0;
        const bool t = (c & 4) != 0;
        if (f == t)
            return f;
        return space_.is_deadlock(r) ? t : f;
    }

private:
    const StateSpace& space_;
    const StatePredicate& p_;
    std::vector<std::uint8_t> cache_;
    SystemState buf_;
};

// First state in key/code order satisfying `pred`.
template <class Pred>
bool any_state(const StateSpace& space, Pred&& pred, Watch& watch)
{
    for (std::uint32_t n = 0; n < space.key_count(); ++n) {
        watch.poll();
        for (std::uint32_t code : space.codes(n))
            if (pred(StateRef{n, code}))
                return true;
    }
    return false;
}

std::vector<StateRef> path_to(const StateSpace& space, const std::vector<StateId>& parent, StateId target)
{
    std::vector<StateRef> path;
    for (StateId cur = target;; cur = parent[cur]) {
        path.push_back(space.ref(cur));
        if (parent[cur] == cur)
            break;
    }
    return {path.rbegin(), path.rend()};
}

// Breadth-first search visiting states in graph order; `visit` returns true
// to stop at a state. Returns the path to it.
template <class Visit>
std::optional<std::vector<StateRef>> bfs(const StateSpace& space, Visit&& visit, std::uint64_t& explored,
                                         std::vector<StateId>& parent, Watch& watch)
{
    parent.assign(space.state_count(), kNoState);
    const StateRef root = space.initial_ref();
    const StateId root_id = space.id(root);
    parent[root_id] = root_id;
    std::deque<StateRef> queue{root};
    std::vector<Successor> succ;
    while (!queue.empty()) {
        const StateRef r = queue.front();
        queue.pop_front();
        ++explored;
        watch.poll();
        if (visit(r))
            return path_to(space, parent, space.id(r));
        const StateId rid = space.id(r);
        space.successors(r, succ);
        for (const auto& s : succ) {
            const StateId sid = space.id(s.ref);
            if (parent[sid] == kNoState) {
                parent[sid] = rid;
                queue.push_back(s.ref);
            }
        }
    }
    return std::nullopt;
}

struct PathResult {
    std::vector<StateRef> path;
    TraceShape shape = TraceShape::Finite;
    std::size_t loop_state = 0;
};

// Depth-first search inside the `inside` subgraph from `root` (which must
// satisfy it) for a cycle or a deadlock state. Black states in `colour`
// are known to lead to neither and stay black across calls.
template <class Inside>
std::optional<PathResult> maximal_path(const StateSpace& space, Inside&& inside, StateRef root,
                                       std::vector<std::uint8_t>& colour, std::uint64_t& explored, Watch& watch)
{
    struct Frame {
        StateRef ref;
        StateId id;
        std::size_t next;
    };
    std::vector<Frame> stack;
    auto finish = [&](TraceShape shape, std::size_t loop, std::optional<StateRef> closing) {
        PathResult r;
        for (const auto& f : stack)
            r.path.push_back(f.ref);
        if (closing)
            r.path.push_back(*closing);
        r.shape = shape;
        r.loop_state = loop;
        return r;
    };
    auto push = [&](StateRef r, StateId id) {
        colour[id] = kGrey;
        ++explored;
        watch.poll();
        stack.push_back({r, id, 0});
        return space.is_deadlock(r);
    };

    const StateId root_id = space.id(root);
    if (colour[root_id] == kBlack)
        return std::nullopt;
    if (push(root, root_id))
        return finish(TraceShape::Deadlock, 0, std::nullopt);
    std::vector<Successor> succ;
    while (!stack.empty()) {
        const StateRef cur = stack.back().ref;
        space.successors(cur, succ);
        bool pushed = false;
        while (stack.back().next < succ.size()) {
            const StateRef t = succ[stack.back().next++].ref;
            if (!inside(t))
                continue;
            const StateId tid = space.id(t);
            if (colour[tid] == kGrey) {
                std::size_t pos = stack.size();
                while (stack[pos - 1].id != tid)
                    --pos;
                return finish(TraceShape::Lasso, pos - 1, t);
            }
            if (colour[tid] == kBlack)
                continue;
            if (push(t, tid))
                return finish(TraceShape::Deadlock, 0, std::nullopt);
            pushed = true;
            break;
        }
        if (!pushed) {
            colour[stack.back().id] = kBlack;
            stack.pop_back();
        }
    }
    return std::nullopt;
}

Verdict flip(Verdict v)
{
    v.satisfied = !v.satisfied;
    if (v.evidence)
        v.evidence->role = TraceRole::Counterexample;
    return v;
}

}  // namespace

Verdict check_reachable(const StateSpace& space, const StatePredicate& phi, const CheckLimits& limits)
{
    Watch watch(limits);
    Evaluator eval(space, phi);
    Verdict v;
    if (!any_state(space, eval, watch)) {
        v.states_explored = space.state_count();
        return v;
    }
    std::vector<StateId> parent;
    auto path = bfs(space, eval, v.states_explored, parent, watch);
    if (!path)
        throw std::logic_error("state satisfying the predicate is unreachable");
    v.satisfied = true;
    v.evidence = build_trace(space, *path, TraceRole::Witness, TraceShape::Finite);
    return v;
}

Verdict check_always(const StateSpace& space, const StatePredicate& phi, const CheckLimits& limits)
{
    return flip(check_reachable(space, !phi, limits));
}

Verdict check_exists_always(const StateSpace& space, const StatePredicate& phi, const CheckLimits& limits)
{
    Watch watch(limits);
    Evaluator eval(space, phi);
    Verdict v;
    const StateRef root = space.initial_ref();
    if (!eval(root)) {
        v.states_explored = 1;
        return v;
    }
    std::vector<std::uint8_t> colour(space.state_count(), kWhite);
    auto found = maximal_path(space, eval, root, colour, v.states_explored, watch);
    if (found) {
        v.satisfied = true;
        v.evidence = build_trace(space, found->path, TraceRole::Witness, found->shape, found->loop_state);
    }
    return v;
}

Verdict check_eventually(const StateSpace& space, const StatePredicate& phi, const CheckLimits& limits)
{
    return flip(check_exists_always(space, !phi, limits));
}

Verdict check_leads_to(const StateSpace& space, const StatePredicate& phi, const StatePredicate& psi,
                       const CheckLimits& limits)
{
    Watch watch(limits);
    Evaluator premise(space, phi);
    Evaluator goal(space, psi);
    auto avoid = [&goal](StateRef r) { return !goal(r); };
    auto candidate = [&](StateRef r) { return premise(r) && !goal(r); };

    Verdict v;
    std::uint64_t scratch = 0;
    bool violated = false;
    {
        std::vector<std::uint8_t> colour(space.state_count(), kWhite);
        violated = any_state(space, [&](StateRef r) {
            return candidate(r) && maximal_path(space, avoid, r, colour, scratch, watch).has_value();
        }, watch);
    }
    if (!violated) {
        v.satisfied = true;
        v.states_explored = space.state_count();
        return v;
    }

    // Earliest violating premise state in breadth-first order.
    std::vector<std::uint8_t> colour(space.state_count(), kWhite);
    std::optional<PathResult> tail;
    std::vector<StateId> parent;
    auto prefix = bfs(
        space,
        [&](StateRef r) {
            if (!candidate(r))
                return false;
            tail = maximal_path(space, avoid, r, colour, v.states_explored, watch);
            return tail.has_value();
        },
        v.states_explored, parent, watch);
    if (!prefix || !tail)
        throw std::logic_error("leads-to violation vanished during trace search");
    std::vector<StateRef> path = *prefix;
    const std::size_t offset = path.size() - 1;
    path.insert(path.end(), tail->path.begin() + 1, tail->path.end());
    v.satisfied = false;
    v.evidence = build_trace(space, path, TraceRole::Counterexample, tail->shape, tail->loop_state + offset);
    return v;
}

}  // namespace srpmc::explorer
