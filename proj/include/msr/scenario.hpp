#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "msr/cluster.hpp"
#include "msr/io.hpp"

namespace msr {

enum class VerifyMode { Exact, MdsAlso };

std::string_view to_string(VerifyMode mode);

struct ScenarioStep {
    std::vector<int> fail;
};

struct Scenario {
    CodeParams params;
    /// Absent when the scenario runs against existing shards.
    std::optional<std::vector<std::uint8_t>> data;
    std::vector<ScenarioStep> steps;
    VerifyMode verify = VerifyMode::Exact;
};

/// Parses a scenario file. `params` is either a full params object or
/// {k, seed, field_degree?, max_retries?} to generate one; `params_ref` names a
/// params file relative to `base_dir`. `data` is {path} (relative to base_dir)
/// or {random: {bytes, seed}} and may be omitted when `allow_missing_data`.
Scenario parse_scenario(const Json& j, const std::filesystem::path& base_dir, bool allow_missing_data = false);
Scenario load_scenario(const std::filesystem::path& path, bool allow_missing_data = false);

struct StepResult {
    int index = 0; // 1-based
    std::vector<int> failed;
    std::optional<PatternKind> kind;
    std::optional<BandwidthReport> bandwidth;
    bool extract_ok = false;
    std::optional<bool> mds_ok; // only in MdsAlso mode
    std::optional<ErrorCode> error;
    std::string message;

    bool ok() const;
};

struct SimulationReport {
    int k = 0;
    VerifyMode verify = VerifyMode::Exact;
    std::vector<StepResult> steps;

    /// Every step repaired exactly, every extraction matched, every row optimal.
    bool ok() const;
};

struct SimulationHooks {
    /// Called after nodes are erased, before repair.
    std::function<void(const std::vector<int>&)> on_failed;
    /// Called with the regenerated node ids once a step's repair is installed.
    std::function<void(const Cluster&, const std::vector<int>&)> on_repaired;
};

/// Runs the steps against `cluster` in order, stopping after the first step
/// that errors. Nodes already failed before a step must be named by it.
/// After each repair the data is extracted from the first k live nodes and
/// compared with `expected`; MdsAlso additionally checks k-subsets.
SimulationReport simulate(Cluster& cluster, const std::vector<ScenarioStep>& steps, VerifyMode verify,
                          const std::vector<std::uint8_t>& expected, const SimulationHooks& hooks = {});

/// Ingests the scenario's data and runs it.
SimulationReport simulate(const Scenario& scenario, ClusterOptions options = {});

Json simulation_to_json(const SimulationReport& report);
std::string format_simulation(const SimulationReport& report);

} // namespace msr
