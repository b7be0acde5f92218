#include "srpmc/models/protocols.hpp"

#include "builder.hpp"
#include "srpmc/models/attributes.hpp"

#include <array>

namespace srpmc::models {

using namespace automata;
using detail::ClockRef;
using detail::enum_var;
using detail::int_var;
using detail::TemplateBuilder;
using detail::VarRef;

std::string_view to_string(Protocol p) noexcept
{
    return p == Protocol::SRP ? "SRP" : "CSRP";
}

std::optional<Protocol> parse_protocol(std::string_view name) noexcept
{
    if (name == "SRP" || name == "srp")
        return Protocol::SRP;
    if (name == "CSRP" || name == "csrp")
        return Protocol::CSRP;
    return std::nullopt;
}

TimerTooShort::TimerTooShort(int timer_ms, int required_ms)
    : TopologyError("talker timer " + std::to_string(timer_ms) + " ms does not exceed the worst-case response time " +
                    std::to_string(required_ms) + " ms"),
      timer_ms_(timer_ms),
      required_ms_(required_ms)
{
}

namespace {

Expr sym(TalkerAttribute v) { return lit(static_cast<std::int32_t>(v)); }
Expr sym(ListenerAttribute v) { return lit(static_cast<std::int32_t>(v)); }
Expr sym(ReservationStatus v) { return lit(static_cast<std::int32_t>(v)); }
Expr sym(LnrStatus v) { return lit(static_cast<std::int32_t>(v)); }

using TA = TalkerAttribute;
using LA = ListenerAttribute;
using Re = ReservationStatus;
using Lnr = LnrStatus;

Expr merge(Expr a, Expr b)
{
    std::vector<std::int32_t> table;
    for (auto x : kAllListenerAttributes)
        for (auto y : kAllListenerAttributes)
            table.push_back(static_cast<std::int32_t>(merge_listener_attributes(x, y)));
    return Expr::table(std::move(table), a * lit(4) + b);
}

struct Channels {
    std::uint32_t ta_link, tf_link, la_link, fwd_ta, fwd_tf, la_up, start_stream;
    std::uint32_t fd_link = 0, fd_fwd = 0;
};

struct Globals {
    VarRef la_msg, up_msg;
    VarRef la_lnr{Scope::Global, 0}, up_lnr{Scope::Global, 0}, fd_lnr{Scope::Global, 0},
        lnr_bridge{Scope::Global, 0};
};

class ProtocolBuilder {
public:
    ProtocolBuilder(const TopologyConfig& config, bool consistent)
        : c_(config), csrp_(consistent), n_(config.bridges), lo_(rounded_min_process_ms(config)),
          hi_(config.max_process_ms)
    {
    }

    SystemModel build()
    {
        m_.name = csrp_ ? "CSRP" : "SRP";
        m_.tick_ms = c_.tick_ms;
        m_.enums = {
            {"TalkerAttribute", {"NU_TA", "TA", "TF"}},
            {"ListenerAttribute", {"NU_LA", "LR", "LAF", "LRF"}},
            {"ReservationStatus", {"NU_Re", "Yes", "No"}},
            {"LnrStatus", {"Unknown", "Ready", "Failed"}},
        };
        declare_globals();
        declare_channels();
        m_.templates.push_back(csrp_ ? talker_csrp() : talker_srp());
        m_.templates.push_back(stream());
        m_.templates.push_back(listener());
        m_.templates.push_back(bridge_input());
        m_.templates.push_back(bridge_output());

        m_.processes.push_back({"T", "Talker", {}});
        m_.processes.push_back({"S", "Stream", {}});
        for (int l = 0; l < n_; ++l)
            m_.processes.push_back({"L" + std::to_string(l), "Listener", {l, listener_link(l)}});
        for (int b = 0; b < n_; ++b)
            m_.processes.push_back({"BI" + std::to_string(b), "BridgeInput", {b, b}});
        for (const auto& p : output_ports(c_)) {
            const bool edge = p.index == 0;
            std::vector<std::int32_t> args{p.bridge, edge ? listener_link(p.bridge) : p.bridge + 1, edge ? 1 : 0,
                                           edge ? p.bridge : 0};
            const auto down = downstream_listeners(p, c_);
            for (int l = 0; l < n_; ++l)
                args.push_back(down.count(l) ? 1 : 0);
            m_.processes.push_back({p.name(), "BridgeOutput", std::move(args)});
        }
        return std::move(m_);
    }

private:
    // Links 0..n-1 enter input port BIb; links n..2n-1 join BQb0 and Lb.
    std::int32_t listener_link(int l) const { return n_ + l; }
    std::uint32_t links() const { return static_cast<std::uint32_t>(2 * n_); }
    std::uint32_t un() const { return static_cast<std::uint32_t>(n_); }

    VarRef global(VarDecl decl)
    {
        m_.globals.push_back(std::move(decl));
        return {Scope::Global, static_cast<std::uint32_t>(m_.globals.size() - 1)};
    }

    std::uint32_t channel(const std::string& name, ChannelKind kind, std::uint32_t size)
    {
        m_.channels.push_back({name, kind, size});
        return static_cast<std::uint32_t>(m_.channels.size() - 1);
    }

    void declare_globals()
    {
        g_.la_msg = global(enum_var("la_msg", kListenerAttributeEnum, 4, {links()}));
        g_.up_msg = global(enum_var("up_msg", kListenerAttributeEnum, 4, {un()}));
        if (!csrp_)
            return;
        g_.la_lnr = global(enum_var("la_lnr", kLnrStatusEnum, 3, {links(), un()}));
        g_.up_lnr = global(enum_var("up_lnr", kLnrStatusEnum, 3, {un(), un()}));
        g_.fd_lnr = global(enum_var("fd_lnr", kLnrStatusEnum, 3, {un()}));
        g_.lnr_bridge = global(enum_var("LNR_bridge", kLnrStatusEnum, 3, {un(), un()}));
    }

    void declare_channels()
    {
        ch_.ta_link = channel("ta_link", ChannelKind::Broadcast, links());
        ch_.tf_link = channel("tf_link", ChannelKind::Broadcast, links());
        ch_.la_link = channel("la_link", ChannelKind::Broadcast, links());
        ch_.fwd_ta = channel("fwd_ta", ChannelKind::Broadcast, un());
        ch_.fwd_tf = channel("fwd_tf", ChannelKind::Broadcast, un());
        ch_.la_up = channel("la_up", ChannelKind::Broadcast, un());
        ch_.start_stream = channel("start_stream", ChannelKind::Binary, 1);
        if (csrp_) {
            ch_.fd_link = channel("fd_link", ChannelKind::Broadcast, links());
            ch_.fd_fwd = channel("fd_fwd", ChannelKind::Broadcast, un());
        }
    }

    // Flattened index of row/column in an n-column matrix.
    Expr cell(Expr row, int col) const { return row * lit(n_) + lit(col); }

    Template talker_srp()
    {
        TemplateBuilder t("Talker");
        auto las = t.local(enum_var("LAs_received", kListenerAttributeEnum, 4));
        auto started = t.local(int_var("started", 0, 1));
        t.location("Init", LocationKind::Committed, true);
        t.location("Waiting");
        t.location("Got_response", LocationKind::Committed);

        t.edge("Init", "Waiting", {}, Sync::send(ch_.ta_link, lit(0)));
        t.edge("Waiting", "Got_response", {}, Sync::receive(ch_.la_link, lit(0)),
               {las.set(g_.la_msg[0]), g_.la_msg.set(lit(0), sym(LA::NU_LA))});
        const Expr start = eq(started(), lit(0)) && (eq(las(), sym(LA::LR)) || eq(las(), sym(LA::LRF)));
        t.edge("Got_response", "Waiting", start, Sync::send(ch_.start_stream), {started.set(lit(1))});
        t.edge("Got_response", "Waiting", !start, Sync::none());
        return t.take();
    }

    Expr admitted(VarRef lnr, int j) const
    {
        const Expr v = lnr[j];
        const Expr demoted = Expr::ite(eq(v, sym(Lnr::Ready)), sym(Lnr::Failed), v);
        switch (c_.policy) {
        case AdmissionPolicy::AdmitAllReady:
            return v;
        case AdmissionPolicy::AllOrNothing: {
            std::vector<Expr> failed;
            for (int k = 0; k < n_; ++k)
                failed.push_back(eq(lnr[k], sym(Lnr::Failed)));
            return Expr::ite(any_of(failed), demoted, v);
        }
        case AdmissionPolicy::Mask:
            return (c_.admission_mask >> j) & 1u ? v : demoted;
        }
        return v;
    }

    Template talker_csrp()
    {
        TemplateBuilder t("Talker");
        auto las = t.local(enum_var("LAs_received", kListenerAttributeEnum, 4));
        auto lnr = t.local(enum_var("LNR", kLnrStatusEnum, 3, {un()}));
        auto x = t.clock("x");
        t.location("Init", LocationKind::Committed, true);
        t.location("Waiting", x, c_.timer_ms);
        t.location("Final_decision", LocationKind::Committed);
        t.location("End_SRP");

        t.edge("Init", "Waiting", {}, Sync::send(ch_.ta_link, lit(0)), {x.reset()});

        std::vector<Update> receive{las.set(g_.la_msg[0]), g_.la_msg.set(lit(0), sym(LA::NU_LA))};
        for (int j = 0; j < n_; ++j) {
            receive.push_back(lnr.set(lit(j), max(lnr[j], g_.la_lnr[cell(lit(0), j)])));
            receive.push_back(g_.la_lnr.set(cell(lit(0), j), sym(Lnr::Unknown)));
        }
        t.edge("Waiting", "Waiting", {}, Sync::receive(ch_.la_link, lit(0)), std::move(receive));

        std::vector<Update> decide;
        std::vector<Expr> any_admitted;
        for (int j = 0; j < n_; ++j) {
            decide.push_back(g_.fd_lnr.set(lit(j), admitted(lnr, j)));
            any_admitted.push_back(eq(g_.fd_lnr[j], sym(Lnr::Ready)));
        }
        t.edge("Waiting", "Final_decision", ge(x(), lit(c_.timer_ms)), Sync::send(ch_.fd_link, lit(0)),
               std::move(decide));
        t.edge("Final_decision", "End_SRP", any_of(any_admitted), Sync::send(ch_.start_stream));
        t.edge("Final_decision", "End_SRP", !any_of(any_admitted), Sync::none());
        return t.take();
    }

    Template stream()
    {
        TemplateBuilder t("Stream");
        t.location("Idle", LocationKind::Normal, true);
        t.location("Stream_transmission");
        t.edge("Idle", "Stream_transmission", {}, Sync::receive(ch_.start_stream));
        return t.take();
    }

    Template listener()
    {
        TemplateBuilder t("Listener");
        const Expr id = t.param("id");
        const Expr link = t.param("link");
        auto transmitted = t.local(enum_var("LA_transmitted", kListenerAttributeEnum, 4));
        auto response = t.local(enum_var("response", kListenerAttributeEnum, 4));
        VarRef can_receive{Scope::Local, 0}, lnr_received{Scope::Local, 0};
        if (csrp_) {
            can_receive = t.local(enum_var("Can_I_receive", kReservationStatusEnum, 3));
            lnr_received = t.local(enum_var("LNR_received", kLnrStatusEnum, 3, {un()}));
        }
        auto clk = t.clock("t");
        const std::string done = csrp_ ? "prev_End" : "End";
        t.location("Waiting", LocationKind::Normal, true);
        t.location("Process_time", clk, hi_);
        t.location(done);
        if (csrp_)
            t.location("End_SRP");

        t.edge("Waiting", done, {}, Sync::receive(ch_.ta_link, link));
        t.edge("Waiting", "Process_time", {}, Sync::receive(ch_.ta_link, link),
               {response.set(sym(LA::LR)), clk.reset()});
        t.edge("Waiting", "Process_time", {}, Sync::receive(ch_.ta_link, link),
               {response.set(sym(LA::LAF)), clk.reset()});
        t.edge("Waiting", done, {}, Sync::receive(ch_.tf_link, link));
        t.edge("Waiting", "Process_time", {}, Sync::receive(ch_.tf_link, link),
               {response.set(sym(LA::LAF)), clk.reset()});

        std::vector<Update> answer{transmitted.set(response()), g_.la_msg.set(link, response())};
        if (csrp_) {
            const Expr status = Expr::ite(eq(response(), sym(LA::LR)), sym(Lnr::Ready), sym(Lnr::Failed));
            for (int j = 0; j < n_; ++j)
                answer.push_back(
                    g_.la_lnr.set(cell(link, j), Expr::ite(eq(id, lit(j)), status, sym(Lnr::Unknown))));
        }
        answer.push_back(response.set(sym(LA::NU_LA)));
        t.edge("Process_time", done, ge(clk(), lit(lo_)), Sync::send(ch_.la_link, link), std::move(answer));

        if (csrp_) {
            std::vector<Update> fd;
            for (int j = 0; j < n_; ++j)
                fd.push_back(lnr_received.set(lit(j), g_.fd_lnr[j]));
            fd.push_back(can_receive.set(
                Expr::ite(eq(g_.fd_lnr[id], sym(Lnr::Ready)), sym(Re::Yes), sym(Re::No))));
            t.edge("prev_End", "End_SRP", {}, Sync::receive(ch_.fd_link, link), std::move(fd));
        }
        return t.take();
    }

    Template bridge_input()
    {
        TemplateBuilder t("BridgeInput");
        const Expr b = t.param("bridge");
        const Expr link = t.param("link");
        auto ta = t.local(enum_var("TA_received", kTalkerAttributeEnum, 3));
        auto merged = t.local(enum_var("LA_merged", kListenerAttributeEnum, 4));
        VarRef lnr_merged{Scope::Local, 0};
        if (csrp_)
            lnr_merged = t.local(enum_var("LNR_merged", kLnrStatusEnum, 3, {un()}));
        auto clk = t.clock("t");
        t.location("Init", LocationKind::Normal, true);
        t.location("Forward_TA", LocationKind::Committed);
        t.location("Waiting_P_answer");
        t.location("Process_time", clk, hi_);
        if (csrp_) {
            t.location("FD_forward", LocationKind::Committed);
            t.location("End_SRP");
        }

        t.edge("Init", "Forward_TA", {}, Sync::receive(ch_.ta_link, link), {ta.set(sym(TA::TA))});
        t.edge("Init", "Forward_TA", {}, Sync::receive(ch_.tf_link, link), {ta.set(sym(TA::TF))});
        t.edge("Forward_TA", "Waiting_P_answer", eq(ta(), sym(TA::TA)), Sync::send(ch_.fwd_ta, b));
        t.edge("Forward_TA", "Waiting_P_answer", eq(ta(), sym(TA::TF)), Sync::send(ch_.fwd_tf, b));

        auto absorb = [&](bool start_window) {
            std::vector<Update> u;
            if (start_window)
                u.push_back(clk.reset());
            u.push_back(merged.set(merge(merged(), g_.up_msg[b])));
            u.push_back(g_.up_msg.set(b, sym(LA::NU_LA)));
            if (csrp_)
                for (int j = 0; j < n_; ++j) {
                    u.push_back(lnr_merged.set(lit(j), max(lnr_merged[j], g_.up_lnr[cell(b, j)])));
                    u.push_back(g_.up_lnr.set(cell(b, j), sym(Lnr::Unknown)));
                }
            return u;
        };
        t.edge("Waiting_P_answer", "Process_time", {}, Sync::receive(ch_.la_up, b), absorb(true));
        t.edge("Process_time", "Process_time", {}, Sync::receive(ch_.la_up, b), absorb(false));

        std::vector<Update> answer{g_.la_msg.set(link, merged())};
        if (csrp_)
            for (int j = 0; j < n_; ++j)
                answer.push_back(g_.la_lnr.set(cell(link, j), lnr_merged[j]));
        t.edge("Process_time", "Waiting_P_answer", ge(clk(), lit(lo_)), Sync::send(ch_.la_link, link),
               std::move(answer));

        if (csrp_) {
            std::vector<Update> fd;
            for (int j = 0; j < n_; ++j)
                fd.push_back(g_.lnr_bridge.set(cell(b, j), g_.fd_lnr[j]));
            t.edge("Waiting_P_answer", "FD_forward", {}, Sync::receive(ch_.fd_link, link), std::move(fd));
            t.edge("FD_forward", "End_SRP", {}, Sync::send(ch_.fd_fwd, b));
        }
        return t.take();
    }

    Template bridge_output()
    {
        TemplateBuilder t("BridgeOutput");
        const Expr b = t.param("bridge");
        const Expr link = t.param("link");
        const Expr is_edge = t.param("is_edge");
        const Expr attached = t.param("listener");
        std::vector<Expr> downstream;
        for (int l = 0; l < n_; ++l)
            downstream.push_back(t.param("down" + std::to_string(l)));
        auto ta = t.local(enum_var("TA_state", kTalkerAttributeEnum, 3));
        auto received = t.local(enum_var("LA_received", kListenerAttributeEnum, 4));
        auto reserved = t.local(enum_var("Re_reserved", kReservationStatusEnum, 3));
        VarRef lnr_in{Scope::Local, 0};
        if (csrp_)
            lnr_in = t.local(enum_var("LNR_in", kLnrStatusEnum, 3, {un()}));
        auto clk = t.clock("t");
        t.location("Init", LocationKind::Normal, true);
        t.location("Check_TA", clk, hi_);
        t.location("Waiting_L_answer");
        t.location("Check_resources", LocationKind::Committed);
        if (csrp_) {
            t.location("FD_update", LocationKind::Committed);
            t.location("End_SRP");
        }

        t.edge("Init", "Check_TA", {}, Sync::receive(ch_.fwd_ta, b), {ta.set(sym(TA::TA)), clk.reset()});
        t.edge("Init", "Check_TA", {}, Sync::receive(ch_.fwd_tf, b), {ta.set(sym(TA::TF)), clk.reset()});
        const Expr window = ge(clk(), lit(lo_));
        t.edge("Check_TA", "Waiting_L_answer", window && eq(ta(), sym(TA::TA)), Sync::send(ch_.ta_link, link),
               {ta.set(sym(TA::None))});
        t.edge("Check_TA", "Waiting_L_answer", window, Sync::send(ch_.tf_link, link), {ta.set(sym(TA::None))});

        std::vector<Update> take{received.set(g_.la_msg[link]), g_.la_msg.set(link, sym(LA::NU_LA))};
        if (csrp_)
            for (int j = 0; j < n_; ++j) {
                take.push_back(lnr_in.set(lit(j), g_.la_lnr[cell(link, j)]));
                take.push_back(g_.la_lnr.set(cell(link, j), sym(Lnr::Unknown)));
            }
        t.edge("Waiting_L_answer", "Check_resources", {}, Sync::receive(ch_.la_link, link), std::move(take));

        // Pass forwards the request, Refuse answers LAF for it, Failure relays an LAF.
        enum class Outcome { Pass, Refuse, Failure };
        auto forward = [&](Outcome o, std::vector<Update> u) {
            u.push_back(g_.up_msg.set(b, o == Outcome::Pass ? received() : sym(LA::LAF)));
            if (csrp_) {
                const Expr own = o == Outcome::Pass ? sym(Lnr::Ready) : sym(Lnr::Failed);
                for (int j = 0; j < n_; ++j) {
                    const Expr in = lnr_in[j];
                    const Expr relayed =
                        o == Outcome::Refuse ? Expr::ite(eq(in, sym(Lnr::Ready)), sym(Lnr::Failed), in) : in;
                    const Expr at_edge = Expr::ite(eq(attached, lit(j)), own, sym(Lnr::Unknown));
                    u.push_back(g_.up_lnr.set(cell(b, j), Expr::ite(eq(is_edge, lit(1)), at_edge, relayed)));
                }
                for (int j = 0; j < n_; ++j)
                    u.push_back(lnr_in.set(lit(j), sym(Lnr::Unknown)));
            }
            return u;
        };
        const Expr ready = eq(received(), sym(LA::LR)) || eq(received(), sym(LA::LRF));
        const Sync up = Sync::send(ch_.la_up, b);
        t.edge("Check_resources", "Waiting_L_answer", ready && eq(reserved(), sym(Re::NU_Re)), up,
               forward(Outcome::Pass, {reserved.set(sym(Re::Yes))}));
        t.edge("Check_resources", "Waiting_L_answer", ready && eq(reserved(), sym(Re::NU_Re)), up,
               forward(Outcome::Refuse, {reserved.set(sym(Re::No))}));
        t.edge("Check_resources", "Waiting_L_answer", ready && eq(reserved(), sym(Re::Yes)), up,
               forward(Outcome::Pass, {}));
        t.edge("Check_resources", "Waiting_L_answer", ready && eq(reserved(), sym(Re::No)), up,
               forward(Outcome::Refuse, {}));
        t.edge("Check_resources", "Waiting_L_answer", eq(received(), sym(LA::LAF)), up,
               forward(Outcome::Failure, {}));

        if (csrp_) {
            std::vector<Expr> kept;
            for (int l = 0; l < n_; ++l)
                kept.push_back(eq(downstream[l], lit(1)) && eq(g_.fd_lnr[l], sym(Lnr::Ready)));
            const Expr release = eq(reserved(), sym(Re::Yes)) && !any_of(kept);
            t.edge("Waiting_L_answer", "FD_update", {}, Sync::receive(ch_.fd_fwd, b),
                   {reserved.set(Expr::ite(release, sym(Re::No), reserved()))});
            t.edge("FD_update", "End_SRP", {}, Sync::send(ch_.fd_link, link));
        }
        return t.take();
    }

    const TopologyConfig& c_;
    bool csrp_;
    int n_;
    int lo_;
    int hi_;
    SystemModel m_;
    Globals g_{{Scope::Global, 0}, {Scope::Global, 0}};
    Channels ch_{};
};

}  // namespace

SystemModel build_srp_model(const TopologyConfig& config)
{
    check_topology(config);
    return ProtocolBuilder(config, false).build();
}

SystemModel build_csrp_model(const TopologyConfig& config)
{
    check_topology(config);
    const int bound = worst_case_response_ms(config);
    if (config.timer_ms <= bound)
        throw TimerTooShort(config.timer_ms, bound);
    if (config.timer_ms % config.tick_ms != 0)
        throw TopologyError("timer " + std::to_string(config.timer_ms) + " ms is not a multiple of the tick " +
                            std::to_string(config.tick_ms) + " ms");
    return ProtocolBuilder(config, true).build();
}

SystemModel build_model(Protocol protocol, const TopologyConfig& config)
{
    return protocol == Protocol::SRP ? build_srp_model(config) : build_csrp_model(config);
}

}  // namespace srpmc::models
