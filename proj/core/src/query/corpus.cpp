#include "srpmc/query/corpus.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace srpmc::query {

CorpusError::CorpusError(std::size_t line, const std::string& what)
    : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line)
{
}

namespace {

std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<CorpusEntry> parse_corpus(std::string_view text)
{
    std::vector<CorpusEntry> out;
    std::set<int> seen;
    std::optional<int> pending_id;
    std::size_t pending_line = 0;
    CorpusEntry cur;
    bool open = false;

    auto close = [&] {
        if (open) {
            out.push_back(std::move(cur));
            cur = {};
            open = false;
        }
    };

    std::size_t no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        const std::string_view raw = text.substr(start, end - start);
        start = end + 1;
        ++no;
        if (trim(raw).empty()) {
            close();
            if (end == text.size())
                break;
            continue;
        }
        const auto hash = raw.find('#');
        const std::string_view line = trim(hash == std::string_view::npos ? raw : raw.substr(0, hash));
        if (line.empty()) {
            if (end == text.size())
                break;
            continue;
        }
        if (line.rfind("@id", 0) == 0 && (line.size() == 3 || line[3] == ' ' || line[3] == '\t')) {
            if (open)
                throw CorpusError(no, "@id inside a query; separate queries with a blank line");
            if (pending_id)
                throw CorpusError(no, "@id " + std::to_string(*pending_id) + " (line " +
                                          std::to_string(pending_line) + ") tags no query");
            const std::string_view num = trim(line.substr(3));
            int id = 0;
            const auto res = std::from_chars(num.data(), num.data() + num.size(), id);
            if (num.empty() || res.ec != std::errc() || res.ptr != num.data() + num.size())
                throw CorpusError(no, "malformed @id tag");
            if (!seen.insert(id).second)
                throw CorpusError(no, "duplicate @id " + std::to_string(id));
            pending_id = id;
            pending_line = no;
        } else {
            if (!open) {
                open = true;
                cur.id = pending_id;
                cur.line = no;
                pending_id.reset();
            } else {
                cur.text += ' ';
            }
            cur.text += line;
        }
        if (end == text.size())
            break;
    }
    close();
    if (pending_id)
        throw CorpusError(pending_line, "@id " + std::to_string(*pending_id) + " tags no query");
    return out;
}

std::vector<CorpusEntry> load_corpus(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw CorpusError(0, "cannot read corpus file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_corpus(ss.str());
}

}  // namespace srpmc::query
