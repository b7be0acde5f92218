#include "srpmc/explorer/trace.hpp"
#include "srpmc/suite/suite.hpp"

#include "evidence.hpp"

#include <doctest.h>

#include <filesystem>
#include <json.hpp>
#include <sstream>

using namespace srpmc;
using namespace srpmc::suite;
using namespace std::chrono_literals;

namespace {

const std::filesystem::path kCorpusDir = SRPMC_CORPUS_DIR;

std::shared_ptr<const automata::Network> toy_network()
{
    automata::SystemModel m;
    m.name = "toy";
    automata::Template t;
    t.name = "Toy";
    t.locations = {{"A", automata::LocationKind::Normal, {}, true}, {"B", automata::LocationKind::Normal, {}, false}};
    t.edges.push_back({"A", "B", {}, automata::Sync::none(), {}});
    m.templates.push_back(std::move(t));
    m.processes.push_back({"P", "Toy", {}});
    return std::make_shared<const automata::Network>(std::move(m));
}

std::vector<query::CorpusEntry> toy_corpus()
{
    return query::parse_corpus("@id 1\nE<> P.B\n\n@id 2\nA[] P.A\n\n@id 3\nE<> false\n");
}

std::vector<ManifestEntry> toy_manifest()
{
    return parse_manifest("1 SRP SAT\n2 SRP UNSAT\n3 SRP UNSAT\n");
}

SuiteReport toy_report(const std::vector<ManifestEntry>& manifest)
{
    const auto net = toy_network();
    const explorer::StateSpace space(*net);
    return make_report(Protocol::SRP, run_queries(space, toy_corpus()), manifest, net);
}

std::size_t count_lines(const std::string& s)
{
    std::size_t n = 0;
    for (char c : s)
        n += c == '\n';
    return n;
}

}  // namespace

TEST_CASE("manifest parsing")
{
    const auto m = parse_manifest("# header\n1 SRP SAT\n\n26 CSRP UNSAT  # note\n");
    REQUIRE(m.size() == 2);
    CHECK(m[0] == ManifestEntry{1, Protocol::SRP, true});
    CHECK(m[1] == ManifestEntry{26, Protocol::CSRP, false});
    CHECK(parse_manifest(render_manifest(m)) == m);

    auto error_line = [](std::string_view text) -> std::size_t {
        try {
            parse_manifest(text);
        } catch (const ManifestError& e) {
            return e.line();
        }
        return 0;
    };
    CHECK(error_line("1 SRP SAT\n2 XYZ SAT\n") == 2);
    CHECK(error_line("1 SRP MAYBE\n") == 1);
    CHECK(error_line("x SRP SAT\n") == 1);
    CHECK(error_line("1 SRP\n") == 1);
    CHECK(error_line("1 SRP SAT extra\n") == 1);
    CHECK(error_line("1 SRP SAT\n1 SRP UNSAT\n") == 2);
    CHECK_THROWS_AS(load_manifest("/nonexistent/manifest.txt"), ManifestError);
}

TEST_CASE("shipped manifest")
{
    const auto m = load_manifest(kCorpusDir / "manifest.txt");
    REQUIRE(m.size() == 63);
    int unsat = 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        CHECK(m[i].id == static_cast<int>(i) + 1);
        CHECK(m[i].protocol == (m[i].id <= 25 ? Protocol::SRP : Protocol::CSRP));
        unsat += !m[i].expected;
    }
    CHECK(unsat == 7);
    for (int id : {22, 25, 51, 54, 57, 61, 62})
        CHECK_FALSE(m[id - 1].expected);
}

TEST_CASE("report from outcomes")
{
    const auto report = toy_report(toy_manifest());
    REQUIRE(report.rows.size() == 3);
    CHECK(report.ok());
    CHECK(report.matches == 3);
    CHECK(report.rows[0].outcome.satisfied == true);
    CHECK(report.rows[1].outcome.satisfied == false);
    CHECK(report.rows[1].outcome.kind == query::QueryKind::ForallAlways);

    const auto text = emit_report(report, ReportFormat::Text);
    CHECK(count_lines(text) == 5);
    CHECK(text.rfind("Query", 0) == 0);
    CHECK(text.find("Not satisfied") != std::string::npos);
    CHECK(text.find("3 queries, 3 matches, 0 mismatches") != std::string::npos);
    CHECK(emit_report(report, "text") == text);
    CHECK(emit_report(toy_report(toy_manifest()), ReportFormat::Text) == text);

    const auto json = nlohmann::json::parse(emit_report(report, ReportFormat::Json));
    CHECK(json["queries"] == 3);
    CHECK(json["mismatches"] == 0);
    CHECK(json["rows"][0]["result"] == "SAT");
    CHECK(json["rows"][1]["expected"] == "UNSAT");
    CHECK_FALSE(json["rows"][0].contains("wall_ms"));
    CHECK(nlohmann::json::parse(emit_report(report, ReportFormat::Json, true))["rows"][0].contains("wall_ms"));

    CHECK_THROWS_AS(parse_report_format("xml"), std::invalid_argument);
    CHECK(parse_report_format("json") == ReportFormat::Json);
}

TEST_CASE("flipped expectations are reported")
{
    const auto net = toy_network();
    const explorer::StateSpace space(*net);
    const auto outcomes = run_queries(space, toy_corpus());
    const auto manifest = toy_manifest();
    for (std::size_t i = 0; i < manifest.size(); ++i) {
        auto flipped = manifest;
        flipped[i].expected = !flipped[i].expected;
        const auto r = make_report(Protocol::SRP, outcomes, flipped, net);
        CHECK_FALSE(r.ok());
        CHECK(r.mismatches == 1);
        CHECK_FALSE(r.rows[i].match);
        CHECK(emit_report(r, ReportFormat::Text).find("NO") != std::string::npos);
    }
    auto missing = manifest;
    missing.push_back({9, Protocol::SRP, true});
    CHECK_THROWS_AS(make_report(Protocol::SRP, outcomes, missing), std::invalid_argument);
    CHECK_THROWS_AS(make_report(Protocol::SRP, outcomes, {manifest[0], manifest[1]}), std::invalid_argument);
    // Entries of the other protocol are ignored.
    auto other = manifest;
    other.push_back({9, Protocol::CSRP, true});
    CHECK(make_report(Protocol::SRP, outcomes, other).rows.size() == 3);
}

TEST_CASE("counterexample export")
{
    const auto report = toy_report(toy_manifest());
    const auto witness = export_counterexample(report, 1);
    REQUIRE(witness);
    const auto trace = explorer::parse_text_trace(*report.rows[0].network, *witness);
    CHECK_NOTHROW(explorer::replay(*report.rows[0].network, trace));
    CHECK(export_counterexample(report, 2));
    CHECK_FALSE(export_counterexample(report, 3));
    CHECK_THROWS_AS(export_counterexample(report, 42), std::out_of_range);

    SuiteReport no_model = report;
    no_model.rows[0].network = nullptr;
    CHECK_THROWS_AS(export_counterexample(no_model, 1), std::logic_error);
}

TEST_CASE("corpus errors and limits")
{
    const auto net = toy_network();
    const explorer::StateSpace space(*net);
    CHECK_THROWS_AS(compile_corpus(query::parse_corpus("@id 1\nE<> Q.B\n"), *net), query::UnresolvedIdentifier);
    CHECK(run_queries(space, {}).empty());
    const auto empty = make_report(Protocol::SRP, {}, {});
    CHECK(empty.ok());
    CHECK(emit_report(empty, ReportFormat::Text).find("0 queries, 0 matches, 0 mismatches") != std::string::npos);

    const auto timed = run_queries(space, toy_corpus(), 0ms);
    REQUIRE(timed.size() == 3);
    for (const auto& o : timed) {
        CHECK_FALSE(o.satisfied);
        CHECK(o.error == "query time limit exceeded");
    }
    const auto r = make_report(Protocol::SRP, timed, toy_manifest());
    CHECK(r.mismatches == 3);
    CHECK(emit_report(r, ReportFormat::Text).find("Error") != std::string::npos);
}

TEST_CASE("budget overflow fails every row")
{
    SuiteConfig config;
    config.state_budget = 1000;
    const auto r = run_suite(Protocol::SRP, kCorpusDir / "srp.q", kCorpusDir / "manifest.txt", config);
    CHECK(r.rows.size() == 25);
    CHECK(r.mismatches == 25);
    for (const auto& row : r.rows)
        CHECK(row.outcome.error.find("budget") != std::string::npos);
}

TEST_CASE("SRP suite reproduces the expected verdicts")
{
    const auto manifest = load_manifest(kCorpusDir / "manifest.txt");
    const auto corpus = query::load_corpus(kCorpusDir / "srp.q");
    const auto r = run_suite(Protocol::SRP, corpus, manifest);
    CHECK(r.rows.size() == 25);
    CHECK(r.model_states == 6'350'877);
    for (const auto& row : r.rows) {
        CAPTURE(row.expected.id);
        CHECK(row.match);
        const auto q = query::parse_query(row.outcome.text);
        const explorer::Verdict v{*row.outcome.satisfied, row.outcome.evidence, 0};
        CHECK(testing::validate_evidence(*row.network, q, v) == "");
    }
    CHECK(r.ok());
    for (int id : {22, 25}) {
        const auto text = export_counterexample(r, id);
        REQUIRE(text);
        CHECK_NOTHROW(explorer::replay(*r.rows[0].network, explorer::parse_text_trace(*r.rows[0].network, *text)));
    }
}
