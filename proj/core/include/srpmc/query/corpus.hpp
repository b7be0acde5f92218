#pragma once

// Query corpus files: UTF-8 text, `#` starts a comment, `@id <n>` tags the
// next query, physical lines are joined until a blank line ends a query.
// Comment-only lines neither add text nor end a query.

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace srpmc::query {

struct CorpusEntry {
    std::optional<int> id;
    std::string text;
    std::size_t line = 0;  // first line of the query text
};

class CorpusError : public std::runtime_error {
public:
    CorpusError(std::size_t line, const std::string& what);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

std::vector<CorpusEntry> parse_corpus(std::string_view text);
/// Throws CorpusError (line 0) when the file cannot be read.
std::vector<CorpusEntry> load_corpus(const std::filesystem::path& path);

}  // namespace srpmc::query
