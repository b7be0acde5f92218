#include "srpmc/suite/suite.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace srpmc::suite {

ManifestError::ManifestError(std::size_t line, const std::string& what)
    : std::runtime_error(line == 0 ? what : "manifest line " + std::to_string(line) + ": " + what), line_(line)
{
}

namespace {

std::vector<std::string_view> split_words(std::string_view s)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r'))
            ++i;
        const std::size_t b = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r')
            ++i;
        if (i > b)
            out.push_back(s.substr(b, i - b));
    }
    return out;
}

std::string_view verdict_word(bool satisfied) { return satisfied ? "SAT" : "UNSAT"; }

std::string_view result_name(const QueryOutcome& o)
{
    if (!o.satisfied)
        return "Error";
    return *o.satisfied ? "Satisfied" : "Not satisfied";
}

std::string pad(std::string s, std::size_t width)
{
    if (s.size() < width)
        s.append(width - s.size(), ' ');
    return s;
}

}  // namespace

std::vector<ManifestEntry> parse_manifest(std::string_view text)
{
    std::vector<ManifestEntry> out;
    std::set<int> seen;
    std::size_t no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        const auto words = split_words(line);
        if (!words.empty()) {
            if (words.size() != 3)
                throw ManifestError(no, "expected `<id> <SRP|CSRP> <SAT|UNSAT>`");
            ManifestEntry e;
            const auto* first = words[0].data();
            const auto* last = first + words[0].size();
            if (auto [p, ec] = std::from_chars(first, last, e.id); ec != std::errc{} || p != last || e.id <= 0)
                throw ManifestError(no, "bad query id `" + std::string(words[0]) + "`");
            const auto protocol = models::parse_protocol(words[1]);
            if (!protocol)
                throw ManifestError(no, "unknown protocol `" + std::string(words[1]) + "`");
            e.protocol = *protocol;
            if (words[2] == "SAT")
                e.expected = true;
            else if (words[2] == "UNSAT")
                e.expected = false;
            else
                throw ManifestError(no, "expected SAT or UNSAT, found `" + std::string(words[2]) + "`");
            if (!seen.insert(e.id).second)
                throw ManifestError(no, "duplicate id " + std::to_string(e.id));
            out.push_back(e);
        }
        if (end == text.size())
            break;
    }
    return out;
}

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ManifestError(0, "cannot read manifest " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_manifest(ss.str());
}

std::string render_manifest(const std::vector<ManifestEntry>& manifest)
{
    std::string out;
    for (const auto& e : manifest)
        out += std::to_string(e.id) + " " + std::string(models::to_string(e.protocol)) + " " +
               std::string(verdict_word(e.expected)) + "\n";
    return out;
}

std::vector<query::Query> compile_corpus(const std::vector<query::CorpusEntry>& corpus, const automata::Network& net)
{
    std::vector<query::Query> out;
    for (const auto& e : corpus) {
        if (!e.id)
            throw query::CorpusError(e.line, "query without @id");
        query::Query q;
        try {
            q = query::parse_query(e.text);
        } catch (const query::ParseError& err) {
            throw query::CorpusError(e.line, "query " + std::to_string(*e.id) + ": " + err.what());
        }
        query::bind(q.phi, net);
        if (q.kind == query::QueryKind::LeadsTo)
            query::bind(q.psi, net);
        out.push_back(std::move(q));
    }
    return out;
}

std::vector<QueryOutcome> run_queries(const explorer::StateSpace& space, const std::vector<query::CorpusEntry>& corpus,
                                      std::chrono::milliseconds time_limit)
{
    const auto queries = compile_corpus(corpus, space.network());
    std::vector<QueryOutcome> out;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        QueryOutcome o;
        o.id = *corpus[i].id;
        o.text = corpus[i].text;
        o.kind = queries[i].kind;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            auto r = query::run_query(space, queries[i], explorer::CheckLimits::within(time_limit));
            o.satisfied = r.verdict.satisfied;
            o.states = r.verdict.states_explored;
            o.evidence = std::move(r.verdict.evidence);
        } catch (const explorer::CheckTimeout& e) {
            o.error = e.what();
        }
        o.wall = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
        out.push_back(std::move(o));
    }
    return out;
}

SuiteReport make_report(Protocol protocol, const std::vector<QueryOutcome>& outcomes,
                        const std::vector<ManifestEntry>& manifest, std::shared_ptr<const automata::Network> network)
{
    std::map<int, const QueryOutcome*> by_id;
    for (const auto& o : outcomes)
        if (!by_id.emplace(o.id, &o).second)
            throw std::invalid_argument("duplicate query id " + std::to_string(o.id));
    std::set<int> listed;
    SuiteReport report;
    for (const auto& e : manifest) {
        listed.insert(e.id);
        if (e.protocol != protocol)
            continue;
        const auto it = by_id.find(e.id);
        if (it == by_id.end())
            throw std::invalid_argument("manifest id " + std::to_string(e.id) + " is not in the corpus");
        SuiteRow row{e, *it->second, false, network};
        row.match = row.outcome.satisfied && *row.outcome.satisfied == e.expected;
        ++(row.match ? report.matches : report.mismatches);
        report.rows.push_back(std::move(row));
    }
    for (const auto& o : outcomes) {
        const auto m = std::find_if(manifest.begin(), manifest.end(), [&](const auto& e) { return e.id == o.id; });
        if (m == manifest.end())
            throw std::invalid_argument("corpus id " + std::to_string(o.id) + " is not in the manifest");
        if (m->protocol != protocol)
            throw std::invalid_argument("corpus id " + std::to_string(o.id) + " is listed for " +
                                        std::string(models::to_string(m->protocol)));
    }
    return report;
}

SuiteReport run_suite(Protocol protocol, const std::vector<query::CorpusEntry>& corpus,
                      const std::vector<ManifestEntry>& manifest, const SuiteConfig& config)
{
    const auto net = std::make_shared<const automata::Network>(models::build_model(protocol, config.topology));
    compile_corpus(corpus, *net);
    std::vector<QueryOutcome> outcomes;
    std::uint64_t states = 0;
    try {
        const explorer::StateSpace space(*net, {.state_budget = config.state_budget});
        states = space.state_count();
        outcomes = run_queries(space, corpus, config.query_time_limit);
    } catch (const explorer::BudgetExceeded& e) {
        for (const auto& c : corpus) {
            QueryOutcome o;
            o.id = *c.id;
            o.text = c.text;
            o.kind = query::parse_query(c.text).kind;
            o.error = e.what();
            outcomes.push_back(std::move(o));
        }
    }
    SuiteReport report = make_report(protocol, outcomes, manifest, net);
    report.model_states = states;
    return report;
}

SuiteReport run_suite(Protocol protocol, const std::filesystem::path& corpus, const std::filesystem::path& manifest,
                      const SuiteConfig& config)
{
    return run_suite(protocol, query::load_corpus(corpus), load_manifest(manifest), config);
}

SuiteReport combine(const SuiteReport& a, const SuiteReport& b)
{
    SuiteReport out = a;
    out.rows.insert(out.rows.end(), b.rows.begin(), b.rows.end());
    out.matches += b.matches;
    out.mismatches += b.mismatches;
    out.model_states += b.model_states;
    return out;
}

ReportFormat parse_report_format(std::string_view name)
{
    if (name == "text")
        return ReportFormat::Text;
    if (name == "json")
        return ReportFormat::Json;
    throw std::invalid_argument("unknown report format `" + std::string(name) + "` (expected text or json)");
}

std::string emit_report(const SuiteReport& report, ReportFormat format, bool timing)
{
    if (format == ReportFormat::Json) {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& r : report.rows) {
            nlohmann::ordered_json j;
            j["id"] = r.expected.id;
            j["protocol"] = models::to_string(r.expected.protocol);
            j["query"] = r.outcome.text;
            j["kind"] = query::to_string(r.outcome.kind);
            j["expected"] = verdict_word(r.expected.expected);
            j["result"] = r.outcome.satisfied ? nlohmann::ordered_json(verdict_word(*r.outcome.satisfied)) : nullptr;
            j["match"] = r.match;
            j["states"] = r.outcome.states;
            j["evidence"] = r.outcome.evidence ? nlohmann::ordered_json(to_string(r.outcome.evidence->shape)) : nullptr;
            if (!r.outcome.error.empty())
                j["error"] = r.outcome.error;
            if (timing)
                j["wall_ms"] = r.outcome.wall.count();
            rows.push_back(std::move(j));
        }
        nlohmann::ordered_json doc;
        doc["rows"] = std::move(rows);
        doc["queries"] = report.rows.size();
        doc["matches"] = report.matches;
        doc["mismatches"] = report.mismatches;
        return doc.dump(2) + "\n";
    }

    std::string out = pad("Query", 10) + pad("Protocol", 10) + pad("Expected", 10) + pad("Result", 15) +
                      pad("Match", 7) + (timing ? pad("States", 12) + "Time" : std::string("States")) + "\n";
    std::string notes;
    for (const auto& r : report.rows) {
        std::string line = pad(std::to_string(r.expected.id), 10) +
                           pad(std::string(models::to_string(r.expected.protocol)), 10) +
                           pad(std::string(verdict_word(r.expected.expected)), 10) +
                           pad(std::string(result_name(r.outcome)), 15) + pad(r.match ? "yes" : "NO", 7);
        if (timing) {
            char t[32];
            std::snprintf(t, sizeof t, "%.1fs", static_cast<double>(r.outcome.wall.count()) / 1000.0);
            line += pad(std::to_string(r.outcome.states), 12) + t;
        } else {
            line += std::to_string(r.outcome.states);
        }
        out += line + "\n";
        if (!r.outcome.error.empty())
            notes += "  " + std::to_string(r.expected.id) + ": " + r.outcome.error + "\n";
    }
    out += notes;
    out += std::to_string(report.rows.size()) + " queries, " + std::to_string(report.matches) + " matches, " +
           std::to_string(report.mismatches) + " mismatches\n";
    return out;
}

std::string emit_report(const SuiteReport& report, std::string_view format, bool timing)
{
    return emit_report(report, parse_report_format(format), timing);
}

std::optional<std::string> export_counterexample(const SuiteReport& report, int id)
{
    for (const auto& r : report.rows) {
        if (r.expected.id != id)
            continue;
        if (!r.outcome.evidence)
            return std::nullopt;
        if (!r.network)
            throw std::logic_error("report row " + std::to_string(id) + " has no model attached");
        return explorer::to_text(*r.network, *r.outcome.evidence);
    }
    throw std::out_of_range("no query " + std::to_string(id) + " in the report");
}

}  // namespace srpmc::suite
