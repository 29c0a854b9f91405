#pragma once

#include <optional>
#include <string>

#include "bargmann/serialization.hpp"

namespace bargmann {
namespace runner {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kSectorCapEnvVar = "BARGMANN_SECTOR_CAP";

// Exit codes of the CLI.
inline constexpr int kStatusOk = 0;
inline constexpr int kStatusError = 1;       // other runtime failures
inline constexpr int kStatusUsage = 2;       // config / usage errors
inline constexpr int kStatusCapacity = 3;    // sector cap exceeded
inline constexpr int kStatusValidation = 4;  // oracle disagreement

struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Command-line overrides applied on top of the config document.
struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<double> tolerance;
    bool force_validate = false;
};

struct ExperimentConfig {
    std::string kind;  // trace | hom | suppression | renyi | spectrum | kernel | quasiprob
    json raw;          // effective config document (overrides applied)
    EstimationMode mode;
    std::uint64_t seed = 0;
    std::string out_path;
    bool validate = false;
    std::optional<double> tolerance;
};

/// Validates and normalizes a config document. `default_stem` names outputs
/// when the config carries no "out".
ExperimentConfig parse_config(json doc, const Overrides& overrides,
                              const std::string& default_stem);

struct RunOutcome {
    int status = kStatusOk;
    json document;         // the result JSON as written
    std::string out_path;  // empty when nothing was written
    std::string message;
};

/// Runs one experiment, writes `{"manifest", "result"[, "validation"]}` to
/// the configured output path. Only manifest.wall_time_s varies between
/// identical runs.
RunOutcome run_experiment(const ExperimentConfig& cfg);

/// Re-runs a trace/hom config across one numeric axis (a JSON pointer such
/// as /mode/N or /states/1/theta), appending one CSV row per value; rows are
/// flushed as they complete.
RunOutcome run_sweep(json doc, const Overrides& overrides,
                     const std::string& default_stem, const std::string& axis,
                     const std::vector<double>& values);

/// Maps exception types onto the CLI exit codes above.
int status_for_exception(const std::exception& e);

/// Applies BARGMANN_SECTOR_CAP when present; returns false on a malformed value.
bool apply_sector_cap_env();

}  // namespace runner
}  // namespace bargmann
