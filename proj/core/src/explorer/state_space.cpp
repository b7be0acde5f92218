#include "srpmc/explorer/state_space.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <deque>
#include <set>

namespace srpmc::explorer {

using automata::Network;
using Op = automata::Program::Op;

BudgetExceeded::BudgetExceeded(std::uint64_t budget)
    : std::runtime_error("state budget of " + std::to_string(budget) + " states exceeded"), budget_(budget)
{
}

// ---------------------------------------------------------------------------
// Codec

StateCodec::StateCodec(const Network& net, std::optional<std::uint32_t> omit_clock)
    : omit_(omit_clock),
      tick_(net.tick()),
      ceiling_(net.clock_ceiling()),
      saturated_code_(net.clock_cap() / net.tick() + 1)
{
    for (std::size_t p = 0; p < net.process_count(); ++p)
        locations_.push_back(make_field(0, static_cast<std::int32_t>(net.process(p).locations.size()) - 1));
    for (std::uint32_t v = 0; v < net.var_count(); ++v)
        vars_.push_back(make_field(net.var_min(v), net.var_max(v)));
    for (std::uint32_t c = 0; c < net.clock_count(); ++c)
        clocks_.push_back(make_field(0, omit_ == c ? 0 : saturated_code_));
}

StateCodec::Field StateCodec::make_field(std::int32_t lo, std::int32_t hi)
{
    const auto range = static_cast<std::uint64_t>(static_cast<std::int64_t>(hi) - lo);
    const auto width = static_cast<std::uint8_t>(range == 0 ? 0 : std::bit_width(range));
    if (used_in_word_ + width > 64) {
        ++words_;
        used_in_word_ = 0;
    }
    Field f{static_cast<std::uint32_t>(words_ - 1), static_cast<std::uint8_t>(used_in_word_), width, lo};
    used_in_word_ += width;
    bits_ += width;
    return f;
}

void StateCodec::encode(const SystemState& s, std::uint64_t* out) const
{
    std::memset(out, 0, words_ * sizeof(std::uint64_t));
    auto put = [out](const Field& f, std::int64_t v) {
        if (f.width != 0)
            out[f.word] |= static_cast<std::uint64_t>(v - f.offset) << f.shift;
    };
    for (std::size_t i = 0; i < locations_.size(); ++i)
        put(locations_[i], s.locations[i]);
    for (std::size_t i = 0; i < vars_.size(); ++i)
        put(vars_[i], s.vars[i]);
    for (std::size_t i = 0; i < clocks_.size(); ++i)
        if (omit_ != i)
            put(clocks_[i], clock_code(s.clocks[i]));
}

void StateCodec::decode(const std::uint64_t* in, SystemState& s) const
{
    auto get = [in](const Field& f) -> std::int64_t {
        if (f.width == 0)
            return f.offset;
        const std::uint64_t mask = f.width == 64 ? ~0ULL : (1ULL << f.width) - 1;
        return static_cast<std::int64_t>((in[f.word] >> f.shift) & mask) + f.offset;
    };
    s.locations.resize(locations_.size());
    s.vars.resize(vars_.size());
    s.clocks.resize(clocks_.size());
    for (std::size_t i = 0; i < locations_.size(); ++i)
        s.locations[i] = static_cast<std::uint16_t>(get(locations_[i]));
    for (std::size_t i = 0; i < vars_.size(); ++i)
        s.vars[i] = static_cast<std::int32_t>(get(vars_[i]));
    for (std::size_t i = 0; i < clocks_.size(); ++i)
        s.clocks[i] = omit_ == i ? 0 : clock_value(static_cast<std::uint32_t>(get(clocks_[i])));
}

// ---------------------------------------------------------------------------
// Clock analysis

namespace {

bool is_comparison(Op op)
{
    return op == Op::Eq || op == Op::Ne || op == Op::Lt || op == Op::Le || op == Op::Gt || op == Op::Ge;
}

// Constants `slot` is compared with; nullopt if it is read any other way.
std::optional<std::set<std::int32_t>> clock_constants(const Network& net, std::uint32_t slot)
{
    std::set<std::int32_t> out;
    auto reads = [slot](const automata::Program& p) {
        return std::any_of(p.code().begin(), p.code().end(), [slot](const auto& in) {
            return in.op == Op::Clock && static_cast<std::uint32_t>(in.a) == slot;
        });
    };
    for (const auto& proc : net.processes()) {
        for (const auto& loc : proc.locations)
            for (const auto& [c, bound] : loc.invariant)
                if (c == slot)
                    out.insert(bound);
        for (const auto& e : proc.edges) {
            const auto& code = e.guard.code();
            for (std::size_t i = 0; i < code.size(); ++i) {
                if (code[i].op != Op::Clock || static_cast<std::uint32_t>(code[i].a) != slot)
                    continue;
                if (i + 2 < code.size() && code[i + 1].op == Op::Push && is_comparison(code[i + 2].op)) {
                    out.insert(code[i + 1].a);
                } else if (i >= 1 && i + 1 < code.size() && code[i - 1].op == Op::Push &&
                           is_comparison(code[i + 1].op)) {
                    out.insert(code[i - 1].a);
                } else {
                    return std::nullopt;
                }
            }
            for (const auto& u : e.updates)
                if (reads(u.index) || reads(u.value))
                    return std::nullopt;
        }
    }
    return out;
}

}  // namespace

bool factorable_clock(const Network& net, std::uint32_t slot)
{
    return slot < net.clock_count() && clock_constants(net, slot).has_value();
}

std::optional<std::uint32_t> auto_factored_clock(const Network& net)
{
    std::optional<std::uint32_t> best;
    std::int32_t best_max = -1;
    std::int32_t runner_up = -1;
    for (std::uint32_t c = 0; c < net.clock_count(); ++c) {
        const auto consts = clock_constants(net, c);
        // Clocks that cannot be factored still compete, at the full cap.
        const std::int32_t m = !consts ? net.clock_cap() : consts->empty() ? 0 : *consts->rbegin();
        if (m > best_max) {
            runner_up = best_max;
            best_max = m;
            best = consts ? std::optional<std::uint32_t>(c) : std::nullopt;
        } else if (m > runner_up) {
            runner_up = m;
        }
    }
    if (!best || best_max <= runner_up || best_max / net.tick() < 2)
        return std::nullopt;
    return best;
}

// ---------------------------------------------------------------------------
// Construction

namespace {

std::optional<std::uint32_t> choose_clock(const Network& net, const ExploreOptions& o)
{
    switch (o.factoring) {
    case ClockFactoring::Off: return std::nullopt;
    case ClockFactoring::Auto: return auto_factored_clock(net);
    case ClockFactoring::Slot:
        if (!factorable_clock(net, o.factored_slot))
            throw std::invalid_argument("clock slot " + std::to_string(o.factored_slot) + " cannot be factored");
        return o.factored_slot;
    }
    return std::nullopt;
}

}  // namespace

StateSpace::StateSpace(const Network& net, ExploreOptions options)
    : net_(net), options_(options), factored_(choose_clock(net, options)), codec_(net, factored_)
{
    scratch_.resize(codec_.words());
    setup_factoring();
    table_.assign(1024, kNoState);
    SystemState init = automata::initial_state(net);
    if (factored_) {
        initial_code_ = codec_.clock_code(init.clocks[*factored_]);
        init.clocks[*factored_] = 0;
    }
    intern(init);
    row(reach_, 0)[initial_code_ / 64] |= 1ULL << (initial_code_ % 64);
    explore();
    compute_ranks();
}

void StateSpace::setup_factoring()
{
    if (!factored_) {
        codes_ = 1;
        regions_ = {{0, 0}};
        region_of_ = {0};
        words_ = 1;
        return;
    }
    const std::uint32_t slot = *factored_;
    codes_ = codec_.saturated_code() + 1;
    words_ = (codes_ + 63) / 64;
    if (codes_ > (1u << 23))
        throw std::invalid_argument("factored clock range too large");

    // Singleton codes: every constant (both neighbours when it falls between
    // ticks) and the saturated value.
    std::set<std::uint32_t> singles{codec_.saturated_code()};
    const std::int32_t g = net_.tick();
    const auto constants = clock_constants(net_, slot);
    for (std::int32_t c : *constants) {
        if (c < 0)
            continue;
        const auto lo = static_cast<std::uint32_t>(c / g);
        const auto hi = static_cast<std::uint32_t>((c + g - 1) / g);
        for (auto k : {lo, hi})
            if (k < codes_)
                singles.insert(k);
    }
    std::uint32_t start = 0;
    for (std::uint32_t k : singles) {
        if (k > start)
            regions_.emplace_back(start, k - 1);
        regions_.emplace_back(k, k);
        start = k + 1;
    }
    region_of_.assign(codes_, 0);
    for (std::size_t r = 0; r < regions_.size(); ++r)
        for (std::uint32_t k = regions_[r].first; k <= regions_[r].second; ++k)
            region_of_[k] = static_cast<std::uint16_t>(r);

    for (std::size_t p = 0; p < net_.process_count(); ++p) {
        const auto& proc = net_.process(p);
        if (std::any_of(proc.locations.begin(), proc.locations.end(), [slot](const auto& loc) {
                return std::find(loc.dead_clocks.begin(), loc.dead_clocks.end(), slot) != loc.dead_clocks.end();
            })) {
            owner_ = p;
            for (const auto& loc : proc.locations)
                dead_at_.push_back(std::find(loc.dead_clocks.begin(), loc.dead_clocks.end(), slot) !=
                                   loc.dead_clocks.end());
        }
    }
}

std::uint64_t StateSpace::hash_key(const std::uint64_t* k) const
{
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (std::size_t i = 0; i < codec_.words(); ++i) {
        h ^= k[i];
        h *= 0xff51afd7ed558ccdULL;
        h ^= h >> 33;
    }
    return h;
}

std::uint32_t StateSpace::lookup(const std::uint64_t* k, std::uint64_t h, std::size_t& slot) const
{
    const std::size_t mask = table_.size() - 1;
    const std::size_t bytes = codec_.words() * sizeof(std::uint64_t);
    for (slot = h & mask;; slot = (slot + 1) & mask) {
        const std::uint32_t id = table_[slot];
        if (id == kNoState || std::memcmp(key(id), k, bytes) == 0)
            return id;
    }
}

void StateSpace::grow_table()
{
    std::vector<std::uint32_t> fresh(table_.size() * 2, kNoState);
    fresh.swap(table_);
    const std::size_t mask = table_.size() - 1;
    for (std::uint32_t id = 0; id < nodes_.size(); ++id) {
        std::size_t slot = hash_key(key(id)) & mask;
        while (table_[slot] != kNoState)
            slot = (slot + 1) & mask;
        table_[slot] = id;
    }
}

std::uint32_t StateSpace::intern(const SystemState& s)
{
    codec_.encode(s, scratch_.data());
    const std::uint64_t h = hash_key(scratch_.data());
    std::size_t slot = 0;
    const std::uint32_t found = lookup(scratch_.data(), h, slot);
    if (found != kNoState)
        return found;
    if (nodes_.size() >= options_.state_budget || nodes_.size() >= kNoState - 1)
        throw BudgetExceeded(options_.state_budget);
    const auto id = static_cast<std::uint32_t>(nodes_.size());
    keys_.insert(keys_.end(), scratch_.begin(), scratch_.end());
    nodes_.emplace_back();
    reach_.resize(reach_.size() + words_, 0);
    table_[slot] = id;
    if (nodes_.size() * 2 > table_.size())
        grow_table();
    return id;
}

void StateSpace::node_state(std::uint32_t node, SystemState& out) const
{
    codec_.decode(key(node), out);
}

SystemState StateSpace::state(StateRef r) const
{
    SystemState s;
    node_state(r.node, s);
    if (factored_)
        s.clocks[*factored_] = codec_.clock_value(r.code);
    return s;
}

namespace {

struct Probe {
    std::uint32_t target;
    std::uint32_t code;
    bool delay;
};

}  // namespace

void StateSpace::expand(std::uint32_t node)
{
    SystemState base;
    node_state(node, base);
    const std::size_t slot = factored_.value_or(0);

    auto probe = [&](std::uint32_t code, std::vector<Probe>& out) -> bool {
        out.clear();
        SystemState s = base;
        if (factored_) {
            s.clocks[slot] = codec_.clock_value(code);
            if (!automata::invariants_hold(s, net_))
                return false;
        }
        auto project = [&](SystemState& next, bool delay) {
            std::uint32_t y = 0;
            if (factored_) {
                y = codec_.clock_code(next.clocks[slot]);
                next.clocks[slot] = 0;
            }
            out.push_back({intern(next), y, delay});
        };
        for (auto& [t, next] : automata::action_successors(s, net_))
            project(next, false);
        if (auto d = automata::delay_successor(s, net_))
            project(*d, true);
        return true;
    };

    const bool dead = factored_ && owner_ && dead_at_[base.locations[*owner_]];
    std::vector<Probe> a, b;
    std::vector<std::uint64_t> packed;
    const std::size_t seg_begin = segments_.size();
    if (seg_begin + regions_.size() >= 0xffffffffu)
        throw BudgetExceeded(options_.state_budget);
    for (std::size_t r = 0; r < regions_.size(); ++r) {
        const auto [lo, hi] = regions_[r];
        if (dead && lo != 0)
            break;
        if (!probe(lo, a))
            continue;
        packed.clear();
        bool has_delay = false;
        if (hi > lo && !dead) {
            probe(lo + 1, b);
            if (a.size() != b.size())
                throw std::logic_error("clock region with non-uniform successors");
            for (std::size_t i = 0; i < a.size(); ++i) {
                if (a[i].target != b[i].target || a[i].delay != b[i].delay)
                    throw std::logic_error("clock region with non-uniform successors");
                EdgeKind kind = kConst;
                if (a[i].code != b[i].code) {
                    if (a[i].code == lo && b[i].code == lo + 1)
                        kind = kIdentity;
                    else if (a[i].code == lo + 1 && b[i].code == lo + 2)
                        kind = kShift;
                    else
                        throw std::logic_error("clock region with non-affine successors");
                }
                packed.push_back(pack_edge(a[i].target, kind, a[i].delay, kind == kConst ? a[i].code : 0));
                has_delay = has_delay || a[i].delay;
            }
        } else {
            for (const auto& p : a) {
                packed.push_back(pack_edge(p.target, kConst, p.delay, p.code));
                has_delay = has_delay || p.delay;
            }
        }
        if (segments_.size() > seg_begin) {
            Segment& prev = segments_.back();
            const auto first = edges_.begin() + static_cast<std::ptrdiff_t>(prev.edge_begin);
            if (prev.region_hi + 1u == r && prev.edge_count == packed.size() &&
                std::equal(packed.begin(), packed.end(), first)) {
                prev.region_hi = static_cast<std::uint16_t>(r);
                continue;
            }
        }
        Segment seg;
        seg.edge_begin = edges_.size();
        if (packed.size() > 0xffffu)
            throw std::length_error("too many successors of one state");
        seg.edge_count = static_cast<std::uint16_t>(packed.size());
        seg.region = static_cast<std::uint16_t>(r);
        seg.region_hi = static_cast<std::uint16_t>(r);
        seg.has_delay = has_delay;
        segments_.push_back(seg);
        edges_.insert(edges_.end(), packed.begin(), packed.end());
    }
    Node& n = nodes_[node];
    n.seg_begin = static_cast<std::uint32_t>(seg_begin);
    n.seg_count = static_cast<std::uint16_t>(segments_.size() - seg_begin);
    n.expanded = true;
}

void StateSpace::image(std::uint64_t edge, const std::uint64_t* in, std::uint64_t* out) const
{
    switch (edge_kind(edge)) {
    case kIdentity:
        std::copy(in, in + words_, out);
        return;
    case kShift: {
        std::uint64_t carry = 0;
        for (std::size_t w = 0; w < words_; ++w) {
            out[w] = (in[w] << 1) | carry;
            carry = in[w] >> 63;
        }
        return;
    }
    case kConst: {
        std::fill(out, out + words_, 0);
        const std::uint32_t c = edge_code(edge);
        out[c / 64] = 1ULL << (c % 64);
        return;
    }
    }
}

void StateSpace::explore()
{
    std::vector<std::uint64_t> pending(words_, 0);
    std::vector<char> queued(1, 1);
    std::copy(row(reach_, 0), row(reach_, 0) + words_, pending.begin());
    std::deque<std::uint32_t> queue{0};

    std::vector<std::uint64_t> delta(words_), mask(words_), img(words_);
    std::vector<std::uint64_t> region_mask(regions_.size() * words_, 0);
    for (std::size_t r = 0; r < regions_.size(); ++r)
        for (std::uint32_t k = regions_[r].first; k <= regions_[r].second; ++k)
            region_mask[r * words_ + k / 64] |= 1ULL << (k % 64);

    while (!queue.empty()) {
        const std::uint32_t n = queue.front();
        queue.pop_front();
        queued[n] = 0;
        std::copy(row(pending, n), row(pending, n) + words_, delta.begin());
        std::fill(row(pending, n), row(pending, n) + words_, 0);
        if (!nodes_[n].expanded) {
            expand(n);
            pending.resize(nodes_.size() * words_, 0);
            queued.resize(nodes_.size(), 0);
        }
        const Node node = nodes_[n];
        for (std::size_t s = node.seg_begin; s < node.seg_begin + node.seg_count; ++s) {
            const Segment seg = segments_[s];
            bool any = false;
            for (std::size_t w = 0; w < words_; ++w) {
                std::uint64_t m = 0;
                for (std::uint32_t r = seg.region; r <= seg.region_hi; ++r)
                    m |= region_mask[r * words_ + w];
                mask[w] = delta[w] & m;
                any = any || mask[w] != 0;
            }
            if (!any)
                continue;
            for (std::uint64_t e = seg.edge_begin; e < seg.edge_begin + seg.edge_count; ++e) {
                const std::uint64_t edge = edges_[e];
                image(edge, mask.data(), img.data());
                const std::uint32_t t = edge_target(edge);
                std::uint64_t* reach = row(reach_, t);
                std::uint64_t* pend = row(pending, t);
                bool fresh = false;
                for (std::size_t w = 0; w < words_; ++w) {
                    const std::uint64_t add = img[w] & ~reach[w];
                    if (add != 0) {
                        reach[w] |= add;
                        pend[w] |= add;
                        fresh = true;
                    }
                }
                if (fresh && !queued[t]) {
                    queued[t] = 1;
                    queue.push_back(t);
                }
            }
        }
    }
}

void StateSpace::compute_ranks()
{
    base_.resize(nodes_.size() + 1);
    std::uint64_t total = 0;
    for (std::uint32_t n = 0; n < nodes_.size(); ++n) {
        base_[n] = total;
        for (std::size_t w = 0; w < words_; ++w)
            total += static_cast<std::uint64_t>(std::popcount(row(reach_, n)[w]));
    }
    base_[nodes_.size()] = total;
    if (total >= kNoState)
        throw BudgetExceeded(options_.state_budget);
    state_count_ = total;
    std::vector<std::uint32_t>().swap(table_);
    table_.clear();
    // Rebuild a compact lookup table for find().
    table_.assign(std::bit_ceil(std::max<std::size_t>(nodes_.size() * 2, 16)), kNoState);
    const std::size_t mask = table_.size() - 1;
    for (std::uint32_t id = 0; id < nodes_.size(); ++id) {
        std::size_t slot = hash_key(key(id)) & mask;
        while (table_[slot] != kNoState)
            slot = (slot + 1) & mask;
        table_[slot] = id;
    }
}

// ---------------------------------------------------------------------------
// Queries

StateId StateSpace::id(StateRef r) const noexcept
{
    const std::uint64_t* bits = row(reach_, r.node);
    std::uint64_t rank = base_[r.node];
    const std::uint32_t w = r.code / 64;
    for (std::uint32_t i = 0; i < w; ++i)
        rank += static_cast<std::uint64_t>(std::popcount(bits[i]));
    const std::uint32_t off = r.code % 64;
    if (off != 0)
        rank += static_cast<std::uint64_t>(std::popcount(bits[w] & ((1ULL << off) - 1)));
    return static_cast<StateId>(rank);
}

StateRef StateSpace::ref(StateId id) const
{
    if (id >= state_count_)
        throw std::out_of_range("state id " + std::to_string(id) + " out of range");
    const auto it = std::upper_bound(base_.begin(), base_.end(), static_cast<std::uint64_t>(id));
    const auto node = static_cast<std::uint32_t>((it - base_.begin()) - 1);
    std::uint64_t left = id - base_[node];
    const std::uint64_t* bits = row(reach_, node);
    for (std::uint32_t w = 0; w < words_; ++w) {
        std::uint64_t word = bits[w];
        const auto count = static_cast<std::uint64_t>(std::popcount(word));
        if (left >= count) {
            left -= count;
            continue;
        }
        for (; left > 0; --left)
            word &= word - 1;
        return {node, w * 64 + static_cast<std::uint32_t>(std::countr_zero(word))};
    }
    throw std::logic_error("corrupt state ranks");
}

StateId StateSpace::find(const SystemState& s) const
{
    if (s.locations.size() != net_.process_count() || s.vars.size() != net_.var_count() ||
        s.clocks.size() != net_.clock_count())
        return kNoState;
    SystemState projected = s;
    std::uint32_t code = 0;
    if (factored_) {
        code = codec_.clock_code(s.clocks[*factored_]);
        if (code >= codes_ || codec_.clock_value(code) != s.clocks[*factored_])
            return kNoState;
        projected.clocks[*factored_] = 0;
    }
    std::vector<std::uint64_t> k(codec_.words());
    codec_.encode(projected, k.data());
    std::size_t slot = 0;
    const std::uint32_t node = lookup(k.data(), hash_key(k.data()), slot);
    if (node == kNoState)
        return kNoState;
    // Packing truncates out-of-domain values; compare the round trip.
    SystemState back;
    node_state(node, back);
    if (back != projected)
        return kNoState;
    if ((row(reach_, node)[code / 64] >> (code % 64) & 1ULL) == 0)
        return kNoState;
    return id({node, code});
}

const StateSpace::Segment* StateSpace::segment_for(StateRef r) const
{
    const Node& n = nodes_[r.node];
    const std::uint16_t region = region_of_[r.code];
    for (std::size_t s = n.seg_begin; s < n.seg_begin + n.seg_count; ++s)
        if (segments_[s].region <= region && region <= segments_[s].region_hi)
            return &segments_[s];
    return nullptr;
}

void StateSpace::successors(StateRef r, std::vector<Successor>& out) const
{
    out.clear();
    const Segment* seg = segment_for(r);
    if (!seg)
        return;
    for (std::uint64_t e = seg->edge_begin; e < seg->edge_begin + seg->edge_count; ++e) {
        const std::uint64_t edge = edges_[e];
        out.push_back({{edge_target(edge), apply(edge, r.code)}, edge_delay(edge)});
    }
}

bool StateSpace::has_action(StateRef r) const
{
    const Segment* seg = segment_for(r);
    return seg && seg->edge_count > seg->has_delay;
}

bool StateSpace::is_deadlock(StateRef r) const
{
    if (deadlock_known_.empty()) {
        deadlock_known_.assign(nodes_.size() * words_, 0);
        deadlock_value_.assign(nodes_.size() * words_, 0);
    }
    auto bit = [this](const std::vector<std::uint64_t>& v, StateRef s) {
        return (row(v, s.node)[s.code / 64] >> (s.code % 64) & 1ULL) != 0;
    };
    std::vector<StateRef> chain;
    StateRef cur = r;
    bool result = false;
    while (true) {
        if (bit(deadlock_known_, cur)) {
            result = bit(deadlock_value_, cur);
            break;
        }
        chain.push_back(cur);
        const Segment* seg = segment_for(cur);
        if (!seg || seg->edge_count == 0) {
            result = true;
            break;
        }
        if (seg->edge_count > seg->has_delay) {
            result = false;
            break;
        }
        const std::uint64_t delay = edges_[seg->edge_begin + seg->edge_count - 1];
        const StateRef next{edge_target(delay), apply(delay, cur.code)};
        if (next == cur) {
            result = true;
            break;
        }
        cur = next;
    }
    for (const StateRef& s : chain) {
        row(deadlock_known_, s.node)[s.code / 64] |= 1ULL << (s.code % 64);
        if (result)
            row(deadlock_value_, s.node)[s.code / 64] |= 1ULL << (s.code % 64);
    }
    return result;
}

std::vector<std::uint32_t> StateSpace::codes(std::uint32_t node) const
{
    std::vector<std::uint32_t> out;
    const std::uint64_t* bits = row(reach_, node);
    for (std::uint32_t w = 0; w < words_; ++w)
        for (std::uint64_t word = bits[w]; word != 0; word &= word - 1)
            out.push_back(w * 64 + static_cast<std::uint32_t>(std::countr_zero(word)));
    return out;
}

GraphSummary StateSpace::summary() const
{
    GraphSummary g;
    g.states = state_count_;
    g.keys = nodes_.size();
    for (std::uint32_t n = 0; n < nodes_.size(); ++n) {
        for (std::uint32_t code : codes(n)) {
            const StateRef r{n, code};
            const Segment* seg = segment_for(r);
            if (seg) {
                g.transitions += seg->edge_count - seg->has_delay;
                if (seg->has_delay) {
                    const std::uint64_t d = edges_[seg->edge_begin + seg->edge_count - 1];
                    if (!(StateRef{edge_target(d), apply(d, code)} == r))
                        ++g.transitions;
                }
            }
            if (is_deadlock(r))
                ++g.deadlocks;
        }
    }
    return g;
}

}  // namespace srpmc::explorer
