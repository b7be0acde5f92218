#include "settings.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace srpmc::cli {

ConfigError::ConfigError(std::size_t line, const std::string& what)
    : std::runtime_error("config line " + std::to_string(line) + ": " + what), line_(line)
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

template <class T>
T number(const std::string& key, const std::string& text)
{
    T v{};
    const auto* last = text.data() + text.size();
    const auto [p, ec] = std::from_chars(text.data(), last, v);
    if (ec != std::errc{} || p != last)
        throw UsageError("invalid value `" + text + "` for " + key);
    return v;
}

}  // namespace

const std::vector<std::string>& setting_keys()
{
    static const std::vector<std::string> keys{"protocol", "tick",   "timer",  "bridges",   "budget",    "query",
                                               "corpus",   "manifest", "format", "trace-out", "time-limit"};
    return keys;
}

std::string env_name(std::string_view key)
{
    std::string out = "SRPMC_";
    for (char c : key)
        out += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

Settings parse_config(std::string_view text)
{
    Settings out;
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
        line = trim(line);
        if (!line.empty()) {
            const auto eq = line.find('=');
            if (eq == std::string_view::npos)
                throw ConfigError(no, "expected `key = value`");
            const std::string key(trim(line.substr(0, eq)));
            const auto& keys = setting_keys();
            if (std::find(keys.begin(), keys.end(), key) == keys.end())
                throw ConfigError(no, "unknown key `" + key + "`");
            out[key] = std::string(trim(line.substr(eq + 1)));
        }
        if (end == text.size())
            break;
    }
    return out;
}

Settings env_settings(const std::function<const char*(const char*)>& getenv)
{
    Settings out;
    for (const auto& key : setting_keys())
        if (const char* v = getenv(env_name(key).c_str()))
            out[key] = v;
    return out;
}

RunConfig resolve(const Settings& flags, const Settings& env, const Settings& file)
{
    Settings merged = file;
    for (const auto& [k, v] : env)
        merged[k] = v;
    for (const auto& [k, v] : flags)
        merged[k] = v;

    RunConfig c;
    for (const auto& [key, value] : merged) {
        if (key == "protocol") {
            std::string p = value;
            std::transform(p.begin(), p.end(), p.begin(), [](unsigned char ch) { return std::tolower(ch); });
            if (p != "srp" && p != "csrp" && p != "toy")
                throw UsageError("unknown protocol `" + value + "` (expected srp, csrp or toy)");
            c.protocol = p;
        } else if (key == "tick") {
            c.tick_ms = number<int>(key, value);
        } else if (key == "timer") {
            c.timer_ms = number<int>(key, value);
        } else if (key == "bridges") {
            c.bridges = number<int>(key, value);
        } else if (key == "budget") {
            c.budget = number<std::uint64_t>(key, value);
        } else if (key == "time-limit") {
            c.time_limit_s = number<int>(key, value);
        } else if (key == "query") {
            c.query = value;
        } else if (key == "corpus") {
            c.corpus = value;
        } else if (key == "manifest") {
            c.manifest = value;
        } else if (key == "format") {
            if (value != "text" && value != "json")
                throw UsageError("unknown format `" + value + "` (expected text or json)");
            c.format = value;
        } else if (key == "trace-out") {
            c.trace_out = value;
        } else {
            throw UsageError("unknown setting `" + key + "`");
        }
    }
    if (c.tick_ms <= 0)
        throw UsageError("tick must be positive");
    if (c.budget == 0)
        throw UsageError("budget must be positive");
    if (c.time_limit_s <= 0)
        throw UsageError("time limit must be positive");
    if (c.protocol == "csrp" && (c.timer_ms <= 0 || c.timer_ms % c.tick_ms != 0))
        throw UsageError("timer must be a positive multiple of the tick");
    return c;
}

}  // namespace srpmc::cli
