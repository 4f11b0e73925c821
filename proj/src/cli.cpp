#include "msr/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "msr/cluster.hpp"
#include "msr/io.hpp"
#include "msr/scenario.hpp"

namespace fs = std::filesystem;

namespace msr::cli {

namespace {

struct ShardSet {
    Json manifest;
    std::vector<std::optional<NodeContent>> nodes;
    std::size_t original_length = 0;
};

void print_violations(const CodeParams& p, const std::vector<Violation>& violations, std::ostream& out)
{
    out << "k=" << p.k << " n=" << p.n() << " field GF(2^" << p.gf().degree() << ") poly "
        << p.gf().format(p.gf().polynomial()) << " seed " << p.seed << ": " << violations.size()
        << " violation(s)\n";
    for (const Violation& v : violations) {
        out << "  " << to_string(v.kind);
        if (!v.indices.empty()) {
            out << " at";
            for (std::size_t i : v.indices) {
                out << " " << i;
            }
        }
        if (!v.detail.empty()) {
            out << ": " << v.detail;
        }
        out << "\n";
    }
}

Json make_manifest(const Cluster& c)
{
    const CodeParams& p = c.params();
    Json j;
    j["version"] = kManifestFormatVersion;
    j["k"] = p.k;
    j["field"] = field_to_json(p.gf());
    j["original_length"] = c.original_length();
    j["block_count"] = c.block_count();
    j["symbol_bytes"] = symbol_bytes(p.gf());
    j["params_fingerprint"] = params_fingerprint(p);
    Json shards = Json::array();
    for (int id = 1; id <= p.n(); ++id) {
        shards.push_back({{"node", id}, {"file", shard_name(id)}});
    }
    j["shards"] = std::move(shards);
    return j;
}

void write_shard(const fs::path& dir, const NodeContent& node, const GaloisField& field)
{
    write_bytes(dir / shard_name(node.node_id), symbols_to_bytes(node.symbols, field));
}

/// Loads the manifest and whichever of `wanted` shards exist (all nodes when empty).
ShardSet load_shards(const fs::path& dir, const CodeParams& p, const std::vector<int>& wanted)
{
    ShardSet s;
    s.manifest = read_json(dir / kManifestName);
    const Json& m = s.manifest;
    if (!m.contains("params_fingerprint") || m["params_fingerprint"] != params_fingerprint(p)) {
        fail(ErrorCode::InvalidArgument, "shards in " + dir.string() + " were encoded with different params");
    }
    if (!m.contains("original_length") || !is_nonnegative_integer(m["original_length"]) ||
        !m.contains("block_count") || !is_nonnegative_integer(m["block_count"])) {
        fail(ErrorCode::Format, "manifest lacks original_length or block_count");
    }
    s.original_length = m["original_length"].get<std::size_t>();
    const auto blocks = m["block_count"].get<std::size_t>();
    const std::size_t expected_bytes = blocks * static_cast<std::size_t>(p.k) * symbol_bytes(p.gf());

    s.nodes.resize(static_cast<std::size_t>(p.n()));
    for (int id = 1; id <= p.n(); ++id) {
        if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), id) == wanted.end()) {
            continue;
        }
        const fs::path file = dir / shard_name(id);
        if (!fs::exists(file)) {
            if (!wanted.empty()) {
                fail(ErrorCode::InvalidArgument, "missing shard " + file.string());
            }
            continue;
        }
        const std::vector<std::uint8_t> bytes = read_bytes(file);
        if (bytes.size() != expected_bytes) {
            fail(ErrorCode::Format, file.string() + " has " + std::to_string(bytes.size()) + " bytes, expected " +
                                        std::to_string(expected_bytes));
        }
        s.nodes[static_cast<std::size_t>(id - 1)] = NodeContent{id, bytes_to_symbols(bytes, p.gf())};
    }
    return s;
}

int cmd_gen_params(int k, std::optional<unsigned> degree, std::uint64_t seed, const std::string& out_path,
                   int max_retries, bool random_v, std::ostream& out, std::ostream& err)
{
    const GenerateOptions options{.max_retries = max_retries, .random_v = random_v};
    std::optional<CodeParams> p;
    try {
        p = degree ? generate(k, GaloisField::make_default(*degree), seed, options)
                   : generate_with_escalation(k, seed, options);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    }
    write_text(out_path, dump_json(params_to_json(*p)));
    const auto violations = validate(*p);
    print_violations(*p, violations, out);
    out << "wrote " << out_path << "\n";
    return violations.empty() ? kExitOk : kExitFailure;
}

int cmd_validate(const std::string& params_path, std::ostream& out)
{
    const CodeParams p = params_from_json(read_json(params_path));
    const auto violations = validate(p);
    print_violations(p, violations, out);
    return violations.empty() ? kExitOk : kExitFailure;
}

int cmd_encode(const std::string& params_path, const std::string& in_path, const std::string& out_dir,
               std::ostream& out)
{
    const CodeParams p = params_from_json(read_json(params_path));
    const std::vector<std::uint8_t> data = read_bytes(in_path);
    const Cluster c = Cluster::ingest(data, p, {.retain_oracle = false});

    fs::create_directories(out_dir);
    for (int id = 1; id <= p.n(); ++id) {
        write_shard(out_dir, *c.node(id), p.gf());
    }
    write_text(fs::path(out_dir) / kManifestName, dump_json(make_manifest(c)));
    out << "encoded " << data.size() << " bytes into " << c.block_count() << " block(s) on " << p.n()
        << " nodes in " << out_dir << "\n";
    return kExitOk;
}

int cmd_extract(const std::string& params_path, const std::string& in_dir, std::vector<int> nodes,
                const std::string& out_path, std::ostream& out)
{
    const CodeParams p = params_from_json(read_json(params_path));
    std::sort(nodes.begin(), nodes.end());
    if (std::adjacent_find(nodes.begin(), nodes.end()) != nodes.end()) {
        fail(ErrorCode::DuplicateNodes, "--nodes lists a node twice");
    }
    for (int id : nodes) {
        if (id < 1 || id > p.n()) {
            fail(ErrorCode::IndexOutOfRange, "node " + std::to_string(id) + " outside 1.." + std::to_string(p.n()));
        }
    }
    if (nodes.size() < static_cast<std::size_t>(p.k)) {
        fail(ErrorCode::NotEnoughLiveNodes,
             "extraction needs at least k = " + std::to_string(p.k) + " nodes, got " + std::to_string(nodes.size()));
    }
    ShardSet shards = load_shards(in_dir, p, nodes);
    const Cluster c = Cluster::from_nodes(p, std::move(shards.nodes), shards.original_length, {.retain_oracle = false});
    const std::vector<std::uint8_t> data = c.extract(nodes);
    write_bytes(out_path, data);
    out << "extracted " << data.size() << " bytes to " << out_path << "\n";
    return kExitOk;
}

int cmd_simulate(const std::string& scenario_path, const std::string& report_path, const std::string& shard_dir,
                 bool production, std::ostream& out)
{
    const bool shards_mode = !shard_dir.empty();
    const Scenario scenario = load_scenario(scenario_path, shards_mode);
    const ClusterOptions options{.retain_oracle = !production};

    SimulationReport report;
    if (shards_mode) {
        const CodeParams& p = scenario.params;
        ShardSet shards = load_shards(shard_dir, p, {});
        Cluster cluster = Cluster::from_nodes(p, std::move(shards.nodes), shards.original_length, options);
        std::vector<std::uint8_t> expected;
        if (scenario.data) {
            expected = *scenario.data;
        } else {
            const std::vector<int> live = cluster.live_nodes();
            expected = cluster.extract(std::vector<int>(live.begin(), live.begin() + p.k));
        }
        SimulationHooks hooks;
        hooks.on_failed = [&](const std::vector<int>& ids) {
            for (int id : ids) {
                fs::remove(fs::path(shard_dir) / shard_name(id));
            }
        };
        hooks.on_repaired = [&](const Cluster& c, const std::vector<int>& ids) {
            for (int id : ids) {
                write_shard(shard_dir, *c.node(id), p.gf());
            }
        };
        report = simulate(cluster, scenario.steps, scenario.verify, expected, hooks);
    } else {
        report = simulate(scenario, options);
    }

    write_text(report_path, dump_json(simulation_to_json(report)));
    out << format_simulation(report);
    return report.ok() ? kExitOk : kExitFailure;
}

} // namespace

int exit_code_for(ErrorCode code)
{
    switch (code) {
    case ErrorCode::GenerationExhausted:
    case ErrorCode::InconsistentContents:
    case ErrorCode::VerificationFailure:
    case ErrorCode::UnsupportedPattern:
    case ErrorCode::SolveFailure:
    case ErrorCode::NonsingularityFailure:
        return kExitFailure;
    default:
        return kExitUsage;
    }
}

std::string shard_name(int node_id)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "node_%02d.shard", node_id);
    return buf;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Cooperative regenerating code toolkit: parameters, encoding, repair simulation", "msrsim"};
    app.require_subcommand(1);

    int k = 0;
    std::optional<unsigned> degree;
    std::uint64_t seed = 0;
    std::string out_path;
    int max_retries = 1000;
    bool random_v = false;
    auto* gen = app.add_subcommand("gen-params", "Generate and validate a parameter set");
    gen->add_option("--k", k, "Number of systematic nodes (n = 2k)")->required()->check(CLI::Range(kMinK, kMaxK));
    gen->add_option("--field-degree", degree, "Field degree m of GF(2^m); default GF(2^8), escalating to GF(2^16)")
        ->check(CLI::Range(1u, 16u));
    gen->add_option("--seed", seed, "Random seed");
    gen->add_option("--out", out_path, "Output params file")->required();
    gen->add_option("--max-retries", max_retries, "Candidates to try per field")->check(CLI::PositiveNumber);
    gen->add_flag("--random-v", random_v, "Draw a random nonsingular V instead of the identity");

    std::string params_path;
    auto* val = app.add_subcommand("validate-params", "Check a params file against every repair hypothesis");
    val->add_option("--params", params_path, "Params file")->required()->check(CLI::ExistingFile);

    std::string in_path;
    std::string out_dir;
    auto* enc = app.add_subcommand("encode", "Split a file into 2k node shards plus a manifest");
    enc->add_option("--params", params_path, "Params file")->required()->check(CLI::ExistingFile);
    enc->add_option("--in", in_path, "Input file")->required()->check(CLI::ExistingFile);
    enc->add_option("--out-dir", out_dir, "Shard directory")->required();

    std::string in_dir;
    std::vector<int> nodes;
    auto* ext = app.add_subcommand("extract", "Rebuild the original file from any k shards");
    ext->add_option("--params", params_path, "Params file")->required()->check(CLI::ExistingFile);
    ext->add_option("--in-dir", in_dir, "Shard directory")->required()->check(CLI::ExistingDirectory);
    ext->add_option("--nodes", nodes, "Node ids to read, comma separated")->required()->delimiter(',');
    ext->add_option("--out", out_path, "Output file")->required();

    std::string scenario_path;
    std::string report_path;
    std::string shard_dir;
    bool production = false;
    auto* sim = app.add_subcommand("simulate", "Run a failure/repair scenario and report repair bandwidth");
    sim->add_option("--scenario", scenario_path, "Scenario file")->required()->check(CLI::ExistingFile);
    sim->add_option("--report", report_path, "Report file (JSON)")->required();
    sim->add_option("--shards", shard_dir, "Run against the shards in this directory, rewriting repaired ones")
        ->check(CLI::ExistingDirectory);
    sim->add_flag("--production", production, "Keep no ground-truth copy; repairs are checked only by extraction");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o;
        std::ostringstream e2;
        const int code = app.exit(e, o, e2);
        out << o.str();
        err << e2.str();
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*gen) {
            return cmd_gen_params(k, degree, seed, out_path, max_retries, random_v, out, err);
        }
        if (*val) {
            return cmd_validate(params_path, out);
        }
        if (*enc) {
            return cmd_encode(params_path, in_path, out_dir, out);
        }
        if (*ext) {
            return cmd_extract(params_path, in_dir, nodes, out_path, out);
        }
        return cmd_simulate(scenario_path, report_path, shard_dir, production, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

} // namespace msr::cli
