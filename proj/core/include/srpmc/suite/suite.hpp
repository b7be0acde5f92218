#pragma once

// Query suites: a corpus of tagged queries, a manifest of expected verdicts,
// and the comparison report.
//
// Manifest format: one `<id> <SRP|CSRP> <SAT|UNSAT>` entry per line, `#`
// starts a comment.

#include "srpmc/explorer/state_space.hpp"
#include "srpmc/explorer/trace.hpp"
#include "srpmc/models/protocols.hpp"
#include "srpmc/query/corpus.hpp"
#include "srpmc/query/query.hpp"

#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace srpmc::suite {

using models::Protocol;

struct ManifestEntry {
    int id = 0;
    Protocol protocol = Protocol::SRP;
    bool expected = true;  // satisfied

    friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

class ManifestError : public std::runtime_error {
public:
    ManifestError(std::size_t line, const std::string& what);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

std::vector<ManifestEntry> parse_manifest(std::string_view text);
/// Throws ManifestError (line 0) when the file cannot be read.
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path);
std::string render_manifest(const std::vector<ManifestEntry>& manifest);

struct SuiteConfig {
    models::TopologyConfig topology = models::TopologyConfig::reference();
    std::uint64_t state_budget = explorer::kDefaultStateBudget;
    std::chrono::milliseconds query_time_limit{std::chrono::minutes(10)};
};

/// Result of running one query, independent of any expectation.
struct QueryOutcome {
    int id = 0;
    std::string text;
    query::QueryKind kind = query::QueryKind::ExistsEventually;
    std::optional<bool> satisfied;  // empty when the query did not finish
    std::string error;              // why it did not finish
    std::uint64_t states = 0;
    std::chrono::milliseconds wall{0};
    std::optional<explorer::Trace> evidence;
};

struct SuiteRow {
    ManifestEntry expected;
    QueryOutcome outcome;
    bool match = false;
    std::shared_ptr<const automata::Network> network;  // model the query ran on
};

struct SuiteReport {
    std::vector<SuiteRow> rows;
    std::size_t matches = 0;
    std::size_t mismatches = 0;
    std::uint64_t model_states = 0;  // per protocol, summed

    bool ok() const noexcept { return mismatches == 0; }
};

/// Parses and binds every corpus entry against `net`; throws the first
/// query::ParseError, UnresolvedIdentifier or TypeError.
std::vector<query::Query> compile_corpus(const std::vector<query::CorpusEntry>& corpus,
                                         const automata::Network& net);

/// Runs every query of the corpus on an explored model.
std::vector<QueryOutcome> run_queries(const explorer::StateSpace& space,
                                      const std::vector<query::CorpusEntry>& corpus,
                                      std::chrono::milliseconds time_limit = std::chrono::minutes(10));

/// Matches outcomes against the manifest entries of `protocol`, in manifest
/// order. Throws std::invalid_argument when a manifest id has no outcome or
/// an outcome id is missing from the manifest.
SuiteReport make_report(Protocol protocol, const std::vector<QueryOutcome>& outcomes,
                        const std::vector<ManifestEntry>& manifest,
                        std::shared_ptr<const automata::Network> network = nullptr);

/// Builds the model once, explores it, and runs the corpus. A state budget
/// overflow fails every row.
SuiteReport run_suite(Protocol protocol, const std::vector<query::CorpusEntry>& corpus,
                      const std::vector<ManifestEntry>& manifest, const SuiteConfig& config = {});
SuiteReport run_suite(Protocol protocol, const std::filesystem::path& corpus,
                      const std::filesystem::path& manifest, const SuiteConfig& config = {});

/// Rows of `a` followed by rows of `b`.
SuiteReport combine(const SuiteReport& a, const SuiteReport& b);

enum class ReportFormat : std::uint8_t { Text, Json };
/// Throws std::invalid_argument for other names.
ReportFormat parse_report_format(std::string_view name);

/// Aligned table or JSON document. Identical reports render to identical
/// bytes; `timing` adds per-query wall times.
std::string emit_report(const SuiteReport& report, ReportFormat format, bool timing = false);
std::string emit_report(const SuiteReport& report, std::string_view format, bool timing = false);

/// Evidence trace of a row in the state-explorer text format, or nullopt
/// when the verdict carries none. Throws std::out_of_range for unknown ids
/// and std::logic_error when the row has no model attached.
std::optional<std::string> export_counterexample(const SuiteReport& report, int id);

}  // namespace srpmc::suite
