#pragma once

// Run configuration of the srpmc tool. Each setting can come from a flag
// (`--tick 10`), an environment variable (`SRPMC_TICK=10`) or a config file
// line (`tick = 10`); flags win over the environment, which wins over the
// file, which wins over the defaults.

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace srpmc::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitNotSatisfied = 1,  // check: verdict false; suite: any mismatch
    kExitUsage = 2,
    kExitParse = 3,    // query, corpus, manifest or config file syntax
    kExitModel = 4,    // model construction
    kExitBudget = 5,   // state budget exceeded
    kExitIo = 6,
    kExitBinding = 7,  // unresolved identifier or ill-typed formula
    kExitTimeout = 8,  // query time limit exceeded
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::size_t line, const std::string& what);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

using Settings = std::map<std::string, std::string>;

struct RunConfig {
    std::string protocol = "srp";  // srp, csrp or toy
    int tick_ms = 10;
    int timer_ms = 1500;
    int bridges = 3;
    std::uint64_t budget = 50'000'000;
    std::string query;
    std::string corpus;
    std::string manifest;
    std::string format = "text";
    std::string trace_out;
    int time_limit_s = 600;
};

/// Keys accepted from every source, as spelled in flags without the dashes.
const std::vector<std::string>& setting_keys();

/// `trace-out` → `SRPMC_TRACE_OUT`.
std::string env_name(std::string_view key);

/// `key = value` lines; `#` starts a comment. Throws ConfigError.
Settings parse_config(std::string_view text);

Settings env_settings(const std::function<const char*(const char*)>& getenv);

/// Merges the sources by precedence and validates. Throws UsageError.
RunConfig resolve(const Settings& flags, const Settings& env, const Settings& file);

}  // namespace srpmc::cli
