#include "msr/scenario.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace msr {

namespace {

constexpr std::size_t kMdsExhaustiveLimit = 20;
constexpr std::size_t kMdsSampledSubsets = 8;

const Json& require(const Json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key)) {
        fail(ErrorCode::Format, std::string("scenario is missing '") + key + "'");
    }
    return j.at(key);
}

std::uint64_t unsigned_field(const Json& j, const char* key)
{
    const Json& v = require(j, key);
    if (!is_nonnegative_integer(v)) {
        fail(ErrorCode::Format, std::string("'") + key + "' must be a nonnegative integer");
    }
    return v.get<std::uint64_t>();
}

CodeParams scenario_params(const Json& j, const std::filesystem::path& base_dir)
{
    if (j.contains("params_ref")) {
        const Json& ref = j.at("params_ref");
        if (!ref.is_string()) {
            fail(ErrorCode::Format, "'params_ref' must be a path");
        }
        return params_from_json(read_json(base_dir / ref.get<std::string>()));
    }
    const Json& pj = require(j, "params");
    if (pj.contains("version")) {
        return params_from_json(pj);
    }
    const std::uint64_t k = unsigned_field(pj, "k");
    if (k < static_cast<std::uint64_t>(kMinK) || k > static_cast<std::uint64_t>(kMaxK)) {
        fail(ErrorCode::InvalidArgument, "k must lie in 2..8");
    }
    const std::uint64_t seed = pj.contains("seed") ? unsigned_field(pj, "seed") : 0;
    GenerateOptions options;
    if (pj.contains("max_retries")) {
        options.max_retries = static_cast<int>(unsigned_field(pj, "max_retries"));
    }
    if (pj.contains("field_degree")) {
        return generate(static_cast<int>(k), GaloisField::make_default(static_cast<unsigned>(unsigned_field(pj, "field_degree"))),
                        seed, options);
    }
    return generate_with_escalation(static_cast<int>(k), seed, options);
}

std::vector<std::vector<int>> mds_subsets(int n, int k, std::uint64_t seed)
{
    std::vector<std::vector<int>> all;
    std::vector<int> pick(static_cast<std::size_t>(k));
    std::iota(pick.begin(), pick.end(), 1);
    while (true) {
        all.push_back(pick);
        int i = k - 1;
        while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - k + i + 1) {
            --i;
        }
        if (i < 0) {
            break;
        }
        ++pick[static_cast<std::size_t>(i)];
        for (int t = i + 1; t < k; ++t) {
            pick[static_cast<std::size_t>(t)] = pick[static_cast<std::size_t>(t - 1)] + 1;
        }
    }
    if (all.size() <= kMdsExhaustiveLimit) {
        return all;
    }
    Rng rng(seed);
    std::vector<std::vector<int>> chosen;
    for (std::size_t i = 0; i < kMdsSampledSubsets; ++i) {
        const std::size_t at = static_cast<std::size_t>(rng.below(all.size() - i)) + i;
        std::swap(all[i], all[at]);
        chosen.push_back(all[i]);
    }
    return chosen;
}

} // namespace

std::string_view to_string(VerifyMode mode)
{
    return mode == VerifyMode::Exact ? "exact" : "mds_also";
}

Scenario parse_scenario(const Json& j, const std::filesystem::path& base_dir, bool allow_missing_data)
{
    if (!j.is_object()) {
        fail(ErrorCode::Format, "scenario must be a JSON object");
    }
    Scenario s{.params = scenario_params(j, base_dir), .data = {}, .steps = {}};

    if (j.contains("data")) {
        const Json& d = j.at("data");
        if (d.contains("path")) {
            if (!d.at("path").is_string()) {
                fail(ErrorCode::Format, "'data.path' must be a string");
            }
            s.data = read_bytes(base_dir / d.at("path").get<std::string>());
        } else if (d.contains("random")) {
            const Json& r = d.at("random");
            s.data = random_bytes(static_cast<std::size_t>(unsigned_field(r, "bytes")),
                                  r.contains("seed") ? unsigned_field(r, "seed") : 0);
        } else {
            fail(ErrorCode::Format, "'data' needs 'path' or 'random'");
        }
    } else if (!allow_missing_data) {
        fail(ErrorCode::Format, "scenario is missing 'data'");
    }

    const Json& steps = require(j, "steps");
    if (!steps.is_array()) {
        fail(ErrorCode::Format, "'steps' must be an array");
    }
    for (const auto& step : steps) {
        const Json& f = require(step, "fail");
        if (!f.is_array()) {
            fail(ErrorCode::Format, "'fail' must be an array of node ids");
        }
        ScenarioStep parsed;
        for (const auto& id : f) {
            if (!id.is_number_integer()) {
                fail(ErrorCode::Format, "node ids must be integers");
            }
            parsed.fail.push_back(id.get<int>());
        }
        s.steps.push_back(std::move(parsed));
    }

    if (j.contains("verify")) {
        const Json& v = j.at("verify");
        if (v == "exact") {
            s.verify = VerifyMode::Exact;
        } else if (v == "mds_also") {
            s.verify = VerifyMode::MdsAlso;
        } else {
            fail(ErrorCode::Format, "'verify' must be \"exact\" or \"mds_also\"");
        }
    }
    return s;
}

Scenario load_scenario(const std::filesystem::path& path, bool allow_missing_data)
{
    return parse_scenario(read_json(path), path.parent_path(), allow_missing_data);
}

bool StepResult::ok() const
{
    return !error && bandwidth && bandwidth->all_optimal() && extract_ok && mds_ok.value_or(true);
}

bool SimulationReport::ok() const
{
    return std::all_of(steps.begin(), steps.end(), [](const StepResult& s) { return s.ok(); });
}

SimulationReport simulate(Cluster& cluster, const std::vector<ScenarioStep>& steps, VerifyMode verify,
                          const std::vector<std::uint8_t>& expected, const SimulationHooks& hooks)
{
    const CodeParams& p = cluster.params();
    SimulationReport report{.k = p.k, .verify = verify, .steps = {}};

    for (std::size_t i = 0; i < steps.size(); ++i) {
        StepResult result;
        result.index = static_cast<int>(i) + 1;
        result.failed = steps[i].fail;
        std::sort(result.failed.begin(), result.failed.end());
        try {
            const FailurePattern pattern = FailurePattern::classify(result.failed, p.k);
            result.kind = pattern.kind;

            std::vector<int> fresh;
            for (int id : pattern.failed) {
                if (cluster.is_live(id)) {
                    fresh.push_back(id);
                }
            }
            cluster.fail_nodes(fresh);
            if (hooks.on_failed) {
                hooks.on_failed(fresh);
            }
            result.bandwidth = cluster.run_repair(pattern);
            if (hooks.on_repaired) {
                hooks.on_repaired(cluster, pattern.failed);
            }

            const std::vector<int> live = cluster.live_nodes();
            const std::vector<int> first(live.begin(), live.begin() + p.k);
            result.extract_ok = cluster.extract(first) == expected;
            if (verify == VerifyMode::MdsAlso) {
                bool all = true;
                for (const auto& subset : mds_subsets(p.n(), p.k, p.seed ^ static_cast<std::uint64_t>(i + 1))) {
                    all = all && cluster.extract(subset) == expected;
                }
                result.mds_ok = all;
            }
        } catch (const Error& e) {
            result.error = e.code();
            result.message = e.what();
        }
        const bool stop = result.error.has_value();
        report.steps.push_back(std::move(result));
        if (stop) {
            break;
        }
    }
    return report;
}

SimulationReport simulate(const Scenario& scenario, ClusterOptions options)
{
    if (!scenario.data) {
        fail(ErrorCode::InvalidArgument, "scenario has no data to ingest");
    }
    Cluster cluster = Cluster::ingest(*scenario.data, scenario.params, options);
    return simulate(cluster, scenario.steps, scenario.verify, *scenario.data);
}

Json simulation_to_json(const SimulationReport& report)
{
    Json j;
    j["k"] = report.k;
    j["verify"] = to_string(report.verify);
    j["ok"] = report.ok();
    Json steps = Json::array();
    for (const StepResult& s : report.steps) {
        Json step;
        step["step"] = s.index;
        step["failed"] = s.failed;
        if (s.kind) {
            step["pattern"] = to_string(*s.kind);
        }
        if (s.error) {
            step["status"] = "error";
            step["error"] = to_string(*s.error);
            step["message"] = s.message;
        } else {
            step["status"] = "repaired";
            const Json bw = report_to_json(*s.bandwidth);
            step["d"] = bw["d"];
            step["r"] = bw["r"];
            step["blocks"] = bw["blocks"];
            step["rows"] = bw["rows"];
            step["extract_ok"] = s.extract_ok;
            if (s.mds_ok) {
                step["mds_ok"] = *s.mds_ok;
            }
        }
        steps.push_back(std::move(step));
    }
    j["steps"] = std::move(steps);
    return j;
}

std::string format_simulation(const SimulationReport& report)
{
    std::ostringstream os;
    for (const StepResult& s : report.steps) {
        os << "step " << s.index << " fail {";
        for (std::size_t i = 0; i < s.failed.size(); ++i) {
            os << (i ? "," : "") << s.failed[i];
        }
        os << "}";
        if (s.kind) {
            os << " " << to_string(*s.kind);
        }
        if (s.error) {
            os << ": " << s.message << "\n";
            continue;
        }
        os << (s.extract_ok ? " extract ok" : " EXTRACT MISMATCH");
        if (s.mds_ok) {
            os << (*s.mds_ok ? ", mds ok" : ", MDS MISMATCH");
        }
        os << "\n" << format_report_table(*s.bandwidth);
    }
    os << (report.ok() ? "all repairs exact and optimal\n" : "simulation FAILED\n");
    return os.str();
}

} // namespace msr
