#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "phasebound/bounds.hpp"
#include "phasebound/robustness.hpp"

namespace phasebound::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

enum class Command { bound, scan, efficiency, sample, trace_estimate, spin, two_mode };

std::string command_name(Command command);
/// Throws ConfigError on unknown names.
Command parse_command(const std::string& name);

struct FamilySpec {
    std::string family;
    std::map<std::string, double> params;
};

struct ImperfectionConfig {
    std::optional<double> eta;
    BoundKind bound_kind = BoundKind::state_test;
    std::vector<double> eta_grid;
};

struct SamplingConfig {
    std::int64_t trials = 1;
    std::uint64_t seed = 0;
    int replications = 0;
};

struct ProtocolConfig {
    bool radial = true;
    bool thermal = true;
    std::vector<double> r_grid;
    std::string radial_rule = "adaptive";
    std::vector<double> n_tc_values{100.0, 200.0, 400.0};
    bool extrapolate = true;
};

struct ScenarioConfig {
    std::optional<Command> command;
    std::optional<FamilySpec> state;
    std::optional<FamilySpec> measurement;
    TestKind test_kind = TestKind::state_test;
    std::optional<ImperfectionConfig> imperfection;
    std::optional<SamplingConfig> sampling;
    std::optional<ProtocolConfig> protocol;
    std::string format = "json";
    std::optional<std::string> path;
    std::optional<int> dim;
    Json echo;  // the accepted configuration, including command-line overrides
};

/// Strict parsing: unknown keys and out-of-range values raise ConfigError
/// naming the offending field.
ScenarioConfig parse_config(const Json& json);
ScenarioConfig load_config(const std::string& path);

/// Rewrites the seed and truncation override in both the parsed config and its echo.
void apply_overrides(ScenarioConfig& config, std::optional<std::uint64_t> seed, std::optional<int> dim);

struct ReportDocument {
    Json json;
    std::vector<BoundReport> reports;

    std::string to_json() const;
    std::string to_csv() const;
};

ReportDocument run_scenario(const ScenarioConfig& config, Command command);

Json report_to_json(const BoundReport& report);
/// Rounds every float to 12 significant digits; non-finite values become strings.
Json round_numbers(const Json& json);
/// Canonical text of a document: rounded numbers, two-space indent, final newline.
std::string serialize(const Json& json);
double round_significant(double value);

/// Writes through a temporary file and a rename. Throws IoError.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace phasebound::cli
