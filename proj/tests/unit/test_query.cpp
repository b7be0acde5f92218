#include "srpmc/explorer/state_space.hpp"
#include "srpmc/models/attributes.hpp"
#include "srpmc/models/protocols.hpp"
#include "srpmc/models/topology.hpp"
#include "srpmc/query/corpus.hpp"
#include "srpmc/query/query.hpp"

#include "random_model.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace srpmc;
using namespace srpmc::query;

namespace {

bool same_expr(std::string_view a, std::string_view b)
{
    return parse_state_expr(a) == parse_state_expr(b);
}

ParseError parse_error(std::string_view text)
{
    try {
        parse_query(text);
    } catch (const ParseError& e) {
        return e;
    }
    FAIL("no parse error for: " << text);
    return ParseError(0, 0, {}, "");
}

models::TopologyConfig one_bridge()
{
    auto c = models::TopologyConfig::reference();
    c.bridges = 1;
    return c;
}

}  // namespace

TEST_CASE("query shapes")
{
    auto q = parse_query("E[] T.LAs_received == NU_LA");
    CHECK(q.kind == QueryKind::ExistsAlways);
    CHECK(q.phi.kind == Expr::Kind::Compare);
    CHECK(q.phi.lhs.path == std::vector<std::string>{"T", "LAs_received"});
    CHECK(q.phi.rhs.path == std::vector<std::string>{"NU_LA"});

    q = parse_query("A[] true");
    CHECK(q.kind == QueryKind::ForallAlways);
    CHECK(q.phi.kind == Expr::Kind::Constant);
    CHECK(q.phi.value);

    q = parse_query("A[] deadlock imply T.LNR == LNR_bridge[0] && T.LNR == L0.LNR_received");
    CHECK(q.kind == QueryKind::ForallAlways);
    REQUIRE(q.phi.kind == Expr::Kind::Imply);
    const auto& rhs = q.phi.children[1];
    REQUIRE(rhs.kind == Expr::Kind::And);
    CHECK(rhs.children[0].rhs.indices == std::vector<std::int32_t>{0});

    q = parse_query("L0.End\n  && L0.LA_transmitted != NU_LA\n--> BQ00.LA_received != NU_LA");
    CHECK(q.kind == QueryKind::LeadsTo);
    CHECK(q.psi.kind == Expr::Kind::Compare);
    CHECK(parse_query("E<> x >= -3").phi.rhs.value == -3);
}

TEST_CASE("operator precedence")
{
    CHECK(same_expr("a || b && c", "a || (b && c)"));
    CHECK(same_expr("a && b || c", "(a && b) || c"));
    CHECK(same_expr("!a && b", "(!a) && b"));
    CHECK(same_expr("x == 1 && y != 2", "(x == 1) && (y != 2)"));
    CHECK(same_expr("a imply b || c", "a imply (b || c)"));
    CHECK(same_expr("a || b imply c", "(a || b) imply c"));
    CHECK(same_expr("a imply b imply c", "a imply (b imply c)"));
    CHECK(same_expr("!(x == 1)", "!(x == 1)"));
    CHECK_FALSE(same_expr("a imply b imply c", "(a imply b) imply c"));
    CHECK_FALSE(same_expr("!a && b", "!(a && b)"));
    CHECK_THROWS_AS(parse_state_expr("!x == 1"), ParseError);
    CHECK_THROWS_AS(parse_state_expr("x == y == z"), ParseError);
}

TEST_CASE("syntax errors carry positions and expected tokens")
{
    auto e = parse_error("E<> (");
    CHECK(e.line() == 1);
    CHECK(e.column() == 6);
    CHECK(e.found() == "end of input");
    CHECK(std::find(e.expected().begin(), e.expected().end(), "'('") != e.expected().end());

    e = parse_error("E<> a &&\n  )");
    CHECK(e.line() == 2);
    CHECK(e.column() == 3);

    e = parse_error("a --> b --> c");
    CHECK(e.column() == 9);

    e = parse_error("E<> a b");
    CHECK(e.column() == 7);

    e = parse_error("");
    CHECK(e.line() == 1);
    CHECK(e.column() == 1);
    CHECK_THROWS_AS(parse_query("E<> a $ b"), ParseError);
    CHECK_THROWS_AS(parse_query("E<> a[x]"), ParseError);
}

TEST_CASE("parser totality on random input")
{
    std::mt19937 rng(11);
    const std::vector<std::string> pieces{"E<>", "A[]", "E[]", "A<>", "-->", "(", ")", "!", "&&", "||", "imply",
                                          "==", "!=", "<", "<=", ">", ">=", "x", "P.l", "[", "]", "0", "-",
                                          "deadlock", "true", ".", "\n", " ", "#", "@", "12345678901234"};
    for (int i = 0; i < 5000; ++i) {
        std::string text;
        const int n = static_cast<int>(rng() % 12);
        for (int k = 0; k < n; ++k)
            text += pieces[rng() % pieces.size()] + (rng() % 2 ? " " : "");
        try {
            const auto q = parse_query(text);
            CHECK(parse_query(print(q)).same_structure(q));
        } catch (const ParseError& e) {
            CHECK(e.line() >= 1);
            CHECK(e.column() >= 1);
        }
    }
}

TEST_CASE("print and parse round trip on generated queries")
{
    std::mt19937 rng(5);
    for (int i = 0; i < 300; ++i) {
        const auto model = testing::random_model(rng);
        const auto text = testing::random_query(rng, model);
        CAPTURE(text);
        const auto q = parse_query(text);
        const auto printed = print(q);
        CHECK(parse_query(printed).same_structure(q));
        CHECK(print(parse_query(printed)) == printed);
    }
}

TEST_CASE("binding and evaluation")
{
    const automata::Network net(models::build_srp_model(one_bridge()));
    auto s = automata::initial_state(net);
    const auto l0 = *net.find_process("L0");

    s.locations[l0] = *net.find_location(l0, "End");
    CHECK(eval_state_expr(parse_state_expr("L0.End"), s, net));
    CHECK_FALSE(eval_state_expr(parse_state_expr("L0.Waiting"), s, net));
    CHECK(eval_state_expr(parse_state_expr("L0.Waiting imply false"), s, net));
    CHECK(eval_state_expr(parse_state_expr("L0.LA_transmitted == NU_LA"), s, net));
    CHECK(eval_state_expr(parse_state_expr("NU_LA == L0.LA_transmitted"), s, net));

    try {
        bind(parse_state_expr("L9.End"), net);
        FAIL("unknown process accepted");
    } catch (const UnresolvedIdentifier& e) {
        CHECK(e.name() == "L9");
    }
    try {
        bind(parse_state_expr("L0.Nowhere"), net);
        FAIL("unknown location accepted");
    } catch (const UnresolvedIdentifier& e) {
        CHECK(e.name().find("Nowhere") != std::string::npos);
    }
    CHECK_THROWS_AS(bind(parse_state_expr("L0.LA_transmitted == 1"), net), TypeError);
    CHECK_THROWS_AS(bind(parse_state_expr("L0.LA_transmitted == Yes"), net), TypeError);
}

TEST_CASE("array comparison")
{
    const automata::Network net(models::build_csrp_model(one_bridge()));
    auto s = automata::initial_state(net);
    CHECK(eval_state_expr(parse_state_expr("T.LNR == LNR_bridge[0]"), s, net));
    CHECK(eval_state_expr(parse_state_expr("T.LNR == L0.LNR_received"), s, net));
    const auto* lnr = net.find_local_var(*net.find_process("T"), "LNR");
    REQUIRE(lnr != nullptr);
    s.vars[lnr->base] = static_cast<int>(models::LnrStatus::Ready);
    CHECK_FALSE(eval_state_expr(parse_state_expr("T.LNR == LNR_bridge[0]"), s, net));
    CHECK(eval_state_expr(parse_state_expr("T.LNR != LNR_bridge[0]"), s, net));
    CHECK(eval_state_expr(parse_state_expr("T.LNR[0] == Ready"), s, net));
    CHECK_THROWS_AS(bind(parse_state_expr("T.LNR == Ready"), net), TypeError);
}

TEST_CASE("run_query carries the source text")
{
    const automata::Network net(models::build_srp_model(one_bridge()));
    const explorer::StateSpace space(net);
    const auto r = run_query(space, "E<> true");
    CHECK(r.verdict.satisfied);
    CHECK(r.source == "E<> true");
    REQUIRE(r.verdict.evidence.has_value());
    CHECK(r.verdict.evidence->size() == 0);
}

TEST_CASE("corpus format")
{
    const auto entries = parse_corpus("# header\n@id 3\nE<> a\n  && b\n\n# note\n@id 7\n# inside\nA[] c\n\nE[] d\n");
    REQUIRE(entries.size() == 3);
    CHECK(entries[0].id == 3);
    CHECK(parse_query(entries[0].text).same_structure(parse_query("E<> a && b")));
    CHECK(entries[1].id == 7);
    CHECK(entries[1].text == "A[] c");
    CHECK_FALSE(entries[2].id.has_value());
    CHECK(entries[2].line == 11);

    CHECK(parse_corpus("").empty());
    CHECK(parse_corpus("# only comments\n\n").empty());
    auto line_of = [](std::string_view text) {
        try {
            parse_corpus(text);
        } catch (const CorpusError& e) {
            return e.line();
        }
        return std::size_t{0};
    };
    CHECK(line_of("@id 1\nE<> a\n\n@id 1\nE<> b\n") == 4);
    CHECK(line_of("@id x\nE<> a\n") == 1);
    CHECK(line_of("E<> a\n@id 2\nE<> b\n") == 2);
    CHECK(line_of("E<> a\n\n@id 4\n") == 3);
}

TEST_CASE("shipped corpus")
{
    const auto srp = load_corpus(SRPMC_CORPUS_DIR "/srp.q");
    const auto csrp = load_corpus(SRPMC_CORPUS_DIR "/csrp.q");
    REQUIRE(srp.size() == 25);
    REQUIRE(csrp.size() == 38);
    const automata::Network srp_net(models::build_srp_model());
    const automata::Network csrp_net(models::build_csrp_model());
    std::set<int> ids;
    for (const auto& e : srp) {
        REQUIRE(e.id.has_value());
        ids.insert(*e.id);
        const auto q = parse_query(e.text);
        bind(q.phi, srp_net);
        if (q.kind == QueryKind::LeadsTo)
            bind(q.psi, srp_net);
        CHECK(e.text.find("[].") == std::string::npos);
    }
    for (const auto& e : csrp) {
        REQUIRE(e.id.has_value());
        ids.insert(*e.id);
        const auto q = parse_query(e.text);
        bind(q.phi, csrp_net);
        if (q.kind == QueryKind::LeadsTo)
            bind(q.psi, csrp_net);
        CHECK(e.text.find("L0.L0.") == std::string::npos);
    }
    CHECK(ids.size() == 63);
    CHECK(*ids.begin() == 1);
    CHECK(*ids.rbegin() == 63);

    // The consequent of 63 lists every non-empty consistent distribution.
    const auto config = models::TopologyConfig::reference();
    std::string rhs;
    for (const auto& d : models::enumerate_consistent_distributions(config)) {
        if (d.subset == 0)
            continue;
        rhs += (rhs.empty() ? "" : " || ") + models::distribution_formula(d, "Can_I_receive");
    }
    const auto q63 = parse_query(csrp.back().text);
    CHECK(*csrp.back().id == 63);
    CHECK(q63.same_structure(parse_query("S.Stream_transmission --> " + rhs)));
}
