#include "settings.hpp"

#include "srpmc/explorer/state_space.hpp"
#include "srpmc/explorer/trace.hpp"
#include "srpmc/models/protocols.hpp"
#include "srpmc/query/corpus.hpp"
#include "srpmc/query/query.hpp"
#include "srpmc/suite/suite.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

namespace {

using namespace srpmc;
using cli::RunConfig;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

automata::SystemModel toy_model()
{
    automata::SystemModel m;
    m.name = "toy";
    automata::Template t;
    t.name = "Toy";
    t.locations = {{"A", automata::LocationKind::Normal, {}, true}, {"B", automata::LocationKind::Normal, {}, false}};
    t.edges.push_back({"A", "B", {}, automata::Sync::none(), {}});
    m.templates.push_back(std::move(t));
    m.processes.push_back({"P", "Toy", {}});
    return m;
}

models::TopologyConfig topology(const RunConfig& c)
{
    models::TopologyConfig t = models::TopologyConfig::reference();
    t.tick_ms = c.tick_ms;
    t.timer_ms = c.timer_ms;
    t.bridges = c.bridges;
    return t;
}

std::shared_ptr<const automata::Network> build_network(const RunConfig& c)
{
    if (c.protocol == "toy")
        return std::make_shared<const automata::Network>(toy_model());
    return std::make_shared<const automata::Network>(
        models::build_model(*models::parse_protocol(c.protocol), topology(c)));
}

void write_file(const std::filesystem::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << content))
        throw IoError("cannot write " + path.string());
}

std::string render_trace(const automata::Network& net, const explorer::Trace& trace, const std::filesystem::path& path)
{
    return path.extension() == ".json" ? explorer::to_json(net, trace) : explorer::to_text(net, trace);
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_check(const RunConfig& c)
{
    if (c.query.empty())
        throw cli::UsageError("check needs --query");
    const auto q = query::parse_query(c.query);
    const auto net = build_network(c);
    query::bind(q.phi, *net);
    if (q.kind == query::QueryKind::LeadsTo)
        query::bind(q.psi, *net);

    const auto t0 = std::chrono::steady_clock::now();
    const explorer::StateSpace space(*net, {.state_budget = c.budget});
    const auto r = query::run_query(space, q, explorer::CheckLimits::within(std::chrono::seconds(c.time_limit_s)));
    const double elapsed = seconds_since(t0);

    if (c.format == "json") {
        nlohmann::ordered_json j;
        j["query"] = r.source;
        j["kind"] = query::to_string(r.kind);
        j["satisfied"] = r.verdict.satisfied;
        j["states_explored"] = r.verdict.states_explored;
        j["model_states"] = space.state_count();
        j["evidence"] = r.verdict.evidence ? nlohmann::ordered_json(to_string(r.verdict.evidence->shape)) : nullptr;
        j["seconds"] = elapsed;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "query: " << r.source << "\n"
                  << "result: " << (r.verdict.satisfied ? "Satisfied" : "Not satisfied") << "\n"
                  << "states explored: " << r.verdict.states_explored << "\n"
                  << "model states: " << space.state_count() << "\n";
        char t[32];
        std::snprintf(t, sizeof t, "%.2fs", elapsed);
        std::cout << "time: " << t << "\n";
    }
    if (!c.trace_out.empty()) {
        if (r.verdict.evidence)
            write_file(c.trace_out, render_trace(*net, *r.verdict.evidence, c.trace_out));
        else
            std::cerr << "srpmc: no evidence for this verdict, " << c.trace_out << " not written\n";
    }
    return r.verdict.satisfied ? cli::kExitOk : cli::kExitNotSatisfied;
}

int cmd_suite(const RunConfig& c)
{
    if (c.protocol == "toy")
        throw cli::UsageError("suite runs on srp or csrp");
    if (c.corpus.empty() || c.manifest.empty())
        throw cli::UsageError("suite needs --corpus and --manifest");
    const auto protocol = *models::parse_protocol(c.protocol);
    suite::SuiteConfig sc;
    sc.topology = topology(c);
    sc.state_budget = c.budget;
    sc.query_time_limit = std::chrono::seconds(c.time_limit_s);
    const auto report = suite::run_suite(protocol, query::load_corpus(c.corpus), suite::load_manifest(c.manifest), sc);
    std::cout << suite::emit_report(report, c.format, true);
    if (!c.trace_out.empty()) {
        std::filesystem::create_directories(c.trace_out);
        for (const auto& row : report.rows)
            if (auto text = suite::export_counterexample(report, row.expected.id))
                write_file(std::filesystem::path(c.trace_out) / ("eq" + std::to_string(row.expected.id) + ".trace"),
                           *text);
    }
    return report.ok() ? cli::kExitOk : cli::kExitNotSatisfied;
}

int cmd_explore(const RunConfig& c, const std::vector<std::string>& predicates)
{
    const auto net = build_network(c);
    std::vector<query::Expr> exprs;
    for (const auto& p : predicates) {
        exprs.push_back(query::parse_state_expr(p));
        query::bind(exprs.back(), *net);
    }
    const auto t0 = std::chrono::steady_clock::now();
    const explorer::StateSpace space(*net, {.state_budget = c.budget});
    const auto g = space.summary();
    const double elapsed = seconds_since(t0);

    std::vector<std::uint64_t> holds(exprs.size(), 0);
    std::ostringstream dump;
    if (!exprs.empty()) {
        for (explorer::StateId id = 0; id < space.state_count(); ++id) {
            const auto ref = space.ref(id);
            if (!space.is_deadlock(ref))
                continue;
            const auto s = space.state(ref);
            dump << "deadlock " << id << ":";
            for (std::size_t i = 0; i < exprs.size(); ++i) {
                const bool v = query::eval_state_expr(exprs[i], s, *net);
                holds[i] += v;
                dump << " " << (v ? "true" : "false");
            }
            dump << "\n";
        }
    }

    if (c.format == "json") {
        nlohmann::ordered_json j;
        j["states"] = g.states;
        j["transitions"] = g.transitions;
        j["deadlocks"] = g.deadlocks;
        j["keys"] = g.keys;
        j["seconds"] = elapsed;
        nlohmann::ordered_json preds = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < exprs.size(); ++i)
            preds.push_back({{"predicate", predicates[i]}, {"holds_at_deadlocks", holds[i]}});
        j["predicates"] = std::move(preds);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "states=" << g.states << " transitions=" << g.transitions << " deadlocks=" << g.deadlocks << "\n";
        std::cout << dump.str();
        for (std::size_t i = 0; i < exprs.size(); ++i)
            std::cout << "predicate " << i << " holds at " << holds[i] << "/" << g.deadlocks
                      << " deadlocks: " << predicates[i] << "\n";
    }
    return cli::kExitOk;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int fail(int code, const std::string& what)
{
    std::cerr << "srpmc: " << what << "\n";
    return code;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Explicit-state model checker for the SRP and CSRP reference models"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for all subcommands");

    cli::Settings flags;
    std::string config_path;
    std::vector<std::string> predicates;

    auto add_common = [&](CLI::App* sub) {
        auto opt = [&](const std::string& key, const std::string& help) {
            sub->add_option_function<std::string>(
                "--" + key, [&flags, key](const std::string& v) { flags[key] = v; }, help);
        };
        opt("protocol", "srp, csrp or toy (default srp)");
        opt("tick", "time granularity in ms (default 10)");
        opt("timer", "CSRP talker timer in ms (default 1500)");
        opt("bridges", "number of bridges, 1..3 (default 3)");
        opt("budget", "maximum stored states (default 50000000)");
        opt("format", "text or json (default text)");
        opt("time-limit", "per-query time limit in seconds (default 600)");
        sub->add_option("--config", config_path, "key=value settings file");
    };

    auto* check = app.add_subcommand("check", "Check one query; exit 0 iff satisfied");
    add_common(check);
    check->add_option_function<std::string>("--query", [&](const std::string& v) { flags["query"] = v; }, "query text");
    check->add_option_function<std::string>(
        "--trace-out", [&](const std::string& v) { flags["trace-out"] = v; },
        "write the witness or counterexample here (.json for JSON)");

    auto* suite_cmd = app.add_subcommand("suite", "Run a corpus against a manifest; exit 0 iff all match");
    add_common(suite_cmd);
    suite_cmd->add_option_function<std::string>(
        "--corpus", [&](const std::string& v) { flags["corpus"] = v; }, "query corpus file");
    suite_cmd->add_option_function<std::string>(
        "--manifest", [&](const std::string& v) { flags["manifest"] = v; }, "expected verdicts file");
    suite_cmd->add_option_function<std::string>(
        "--trace-out", [&](const std::string& v) { flags["trace-out"] = v; },
        "directory for one trace file per query with evidence");

    auto* explore = app.add_subcommand("explore", "Explore the model and print graph counts");
    add_common(explore);
    explore->add_option("--predicate", predicates, "state formula to evaluate at every deadlock (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return cli::kExitUsage;
    }

    try {
        const cli::Settings env = cli::env_settings([](const char* name) { return std::getenv(name); });
        if (config_path.empty())
            if (const char* p = std::getenv("SRPMC_CONFIG"))
                config_path = p;
        const cli::Settings file = config_path.empty() ? cli::Settings{} : cli::parse_config(read_file(config_path));
        const RunConfig config = cli::resolve(flags, env, file);
        if (check->parsed())
            return cmd_check(config);
        if (suite_cmd->parsed())
            return cmd_suite(config);
        return cmd_explore(config, predicates);
    } catch (const cli::UsageError& e) {
        return fail(cli::kExitUsage, e.what());
    } catch (const cli::ConfigError& e) {
        return fail(cli::kExitParse, e.what());
    } catch (const query::ParseError& e) {
        return fail(cli::kExitParse, e.what());
    } catch (const query::CorpusError& e) {
        return fail(e.line() == 0 ? cli::kExitIo : cli::kExitParse, e.what());
    } catch (const suite::ManifestError& e) {
        return fail(e.line() == 0 ? cli::kExitIo : cli::kExitParse, e.what());
    } catch (const query::UnresolvedIdentifier& e) {
        return fail(cli::kExitBinding, e.what());
    } catch (const query::TypeError& e) {
        return fail(cli::kExitBinding, e.what());
    } catch (const models::TopologyError& e) {
        return fail(cli::kExitModel, e.what());
    } catch (const automata::ModelError& e) {
        return fail(cli::kExitModel, e.what());
    } catch (const explorer::BudgetExceeded& e) {
        return fail(cli::kExitBudget, e.what());
    } catch (const explorer::CheckTimeout& e) {
        return fail(cli::kExitTimeout, e.what());
    } catch (const IoError& e) {
        return fail(cli::kExitIo, e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        return fail(cli::kExitIo, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(cli::kExitUsage, e.what());
    }
}
