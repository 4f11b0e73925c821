#include "msr/cluster.hpp"

#include <algorithm>
#include <set>

namespace msr {

std::size_t symbol_bytes(const GaloisField& field)
{
    switch (field.degree()) {
    case 8: return 1;
    case 16: return 2;
    default:
        fail(ErrorCode::InvalidArgument, "byte storage needs GF(2^8) or GF(2^16), got GF(2^" +
                                             std::to_string(field.degree()) + ")");
    }
}

std::vector<Symbol> bytes_to_symbols(std::span<const std::uint8_t> bytes, const GaloisField& field)
{
    const std::size_t width = symbol_bytes(field);
    std::vector<Symbol> out((bytes.size() + width - 1) / width, 0);
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        out[i / width] |= static_cast<Symbol>(bytes[i] << (8 * (i % width)));
    }
    return out;
}

std::vector<std::uint8_t> symbols_to_bytes(std::span<const Symbol> symbols, const GaloisField& field)
{
    const std::size_t width = symbol_bytes(field);
    std::vector<std::uint8_t> out(symbols.size() * width);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<std::uint8_t>(symbols[i / width] >> (8 * (i % width)));
    }
    return out;
}

Cluster::Cluster(CodeParams p, std::size_t blocks, std::size_t original_length)
    : params_(std::move(p)), blocks_(blocks), original_length_(original_length),
      nodes_(static_cast<std::size_t>(params_.n()))
{
}

Cluster Cluster::ingest(std::span<const std::uint8_t> bytes, const CodeParams& p, ClusterOptions options)
{
    const auto k = static_cast<std::size_t>(p.k);
    const std::size_t chunk = k * k;
    std::vector<Symbol> symbols = bytes_to_symbols(bytes, p.gf());
    const std::size_t blocks = (symbols.size() + chunk - 1) / chunk;
    symbols.resize(blocks * chunk, 0);

    Cluster c(p, blocks, bytes.size());
    std::vector<NodeContent> nodes;
    for (int id = 1; id <= p.n(); ++id) {
        nodes.push_back({id, std::vector<Symbol>(blocks * k, 0)});
    }
    for (std::size_t b = 0; b < blocks; ++b) {
        // Systematic node j takes the j-th run of k symbols in each chunk.
        Matrix X(p.field, k, k);
        for (std::size_t j = 0; j < k; ++j) {
            for (std::size_t r = 0; r < k; ++r) {
                X(r, j) = symbols[b * chunk + j * k + r];
            }
        }
        const ParityBlock parity = encode({X}, p);
        for (std::size_t j = 0; j < k; ++j) {
            for (std::size_t r = 0; r < k; ++r) {
                nodes[j].symbols[b * k + r] = X(r, j);
                nodes[k + j].symbols[b * k + r] = parity.Y(r, j);
            }
        }
    }
    if (options.retain_oracle) {
        c.oracle_ = nodes;
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        c.nodes_[i] = std::move(nodes[i]);
    }
    return c;
}

Cluster Cluster::from_nodes(const CodeParams& p, std::vector<std::optional<NodeContent>> nodes,
                            std::size_t original_length, ClusterOptions options)
{
    const auto k = static_cast<std::size_t>(p.k);
    if (nodes.size() != static_cast<std::size_t>(p.n())) {
        fail(ErrorCode::DimensionMismatch, "expected " + std::to_string(p.n()) + " node slots");
    }
    std::optional<std::size_t> length;
    std::size_t present = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!nodes[i]) {
            continue;
        }
        ++present;
        if (nodes[i]->node_id != static_cast<int>(i) + 1) {
            fail(ErrorCode::InvalidArgument, "node slot " + std::to_string(i + 1) + " holds node " +
                                                 std::to_string(nodes[i]->node_id));
        }
        if (length && *length != nodes[i]->symbols.size()) {
            fail(ErrorCode::DimensionMismatch, "nodes hold different numbers of symbols");
        }
        length = nodes[i]->symbols.size();
    }
    if (present < k) {
        fail(ErrorCode::NotEnoughLiveNodes, "a cluster needs at least k live nodes");
    }
    if (*length % k != 0) {
        fail(ErrorCode::DimensionMismatch, "node content is not a whole number of blocks");
    }
    const std::size_t blocks = *length / k;
    if (original_length > blocks * k * k * symbol_bytes(p.gf())) {
        fail(ErrorCode::InvalidArgument, "original length exceeds the stored capacity");
    }
    Cluster c(p, blocks, original_length);
    if (options.retain_oracle && present == nodes.size()) {
        std::vector<NodeContent> oracle;
        for (const auto& n : nodes) {
            oracle.push_back(*n);
        }
        c.oracle_ = std::move(oracle);
    }
    c.nodes_ = std::move(nodes);
    return c;
}

void Cluster::require_id(int node_id) const
{
    if (node_id < 1 || node_id > params_.n()) {
        fail(ErrorCode::IndexOutOfRange, "node " + std::to_string(node_id) + " outside 1.." + std::to_string(params_.n()));
    }
}

bool Cluster::is_live(int node_id) const
{
    require_id(node_id);
    return nodes_[static_cast<std::size_t>(node_id - 1)].has_value();
}

std::vector<int> Cluster::live_nodes() const
{
    std::vector<int> out;
    for (int id = 1; id <= params_.n(); ++id) {
        if (is_live(id)) {
            out.push_back(id);
        }
    }
    return out;
}

std::vector<int> Cluster::failed_nodes() const
{
    std::vector<int> out;
    for (int id = 1; id <= params_.n(); ++id) {
        if (!is_live(id)) {
            out.push_back(id);
        }
    }
    return out;
}

const std::optional<NodeContent>& Cluster::node(int node_id) const
{
    require_id(node_id);
    return nodes_[static_cast<std::size_t>(node_id - 1)];
}

std::vector<std::uint8_t> Cluster::extract(std::span<const int> from_nodes) const
{
    const auto k = static_cast<std::size_t>(params_.k);
    if (from_nodes.size() < k) {
        fail(ErrorCode::NotEnoughLiveNodes, "extraction needs " + std::to_string(k) + " nodes, got " +
                                                std::to_string(from_nodes.size()));
    }
    std::vector<NodeContent> contents;
    for (int id : from_nodes) {
        if (!is_live(id)) {
            fail(ErrorCode::NotEnoughLiveNodes, "node " + std::to_string(id) + " is not live");
        }
        contents.push_back(*node(id));
    }
    const Collector collector(params_, std::vector<int>(from_nodes.begin(), from_nodes.end()));
    const auto systematic = collector.recover_systematic(contents);

    std::vector<Symbol> symbols(blocks_ * k * k);
    for (std::size_t b = 0; b < blocks_; ++b) {
        for (std::size_t j = 0; j < k; ++j) {
            std::copy_n(systematic[j].symbols.begin() + static_cast<std::ptrdiff_t>(b * k), k,
                        symbols.begin() + static_cast<std::ptrdiff_t>(b * k * k + j * k));
        }
    }
    std::vector<std::uint8_t> bytes = symbols_to_bytes(symbols, params_.gf());
    bytes.resize(original_length_);
    return bytes;
}

void Cluster::fail_nodes(std::span<const int> node_ids)
{
    std::set<int> unique;
    for (int id : node_ids) {
        require_id(id);
        if (!is_live(id)) {
            fail(ErrorCode::AlreadyFailed, "node " + std::to_string(id) + " has already failed");
        }
        if (!unique.insert(id).second) {
            fail(ErrorCode::DuplicateNodes, "node " + std::to_string(id) + " listed twice");
        }
    }
    if (failed_nodes().size() + unique.size() > static_cast<std::size_t>(params_.k)) {
        fail(ErrorCode::TooManyFailures, "more than k failed nodes would make the data unrecoverable");
    }
    for (int id : unique) {
        nodes_[static_cast<std::size_t>(id - 1)].reset();
    }
}

BandwidthReport Cluster::run_repair(const FailurePattern& pattern)
{
    if (pattern.failed != failed_nodes()) {
        fail(ErrorCode::InvalidArgument, "repair pattern does not match the failed nodes");
    }
    const RepairPlan plan = plan_repair(pattern, params_);

    std::vector<Phase1Message> phase1;
    for (int helper : plan.helpers) {
        auto messages = helper_messages(*node(helper), plan, params_);
        std::move(messages.begin(), messages.end(), std::back_inserter(phase1));
    }
    RepairOutcome outcome = run_newcomers(plan, phase1, params_);

    if (oracle_) {
        for (const NodeContent& rebuilt : outcome.regenerated) {
            if (!(rebuilt == (*oracle_)[static_cast<std::size_t>(rebuilt.node_id - 1)])) {
                fail(ErrorCode::VerificationFailure,
                     "regenerated node " + std::to_string(rebuilt.node_id) + " differs from the original");
            }
        }
    }
    for (NodeContent& rebuilt : outcome.regenerated) {
        nodes_[static_cast<std::size_t>(rebuilt.node_id - 1)] = std::move(rebuilt);
    }
    return outcome.report;
}

bool Cluster::matches_oracle() const
{
    if (!oracle_) {
        return false;
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i] && !(*nodes_[i] == (*oracle_)[i])) {
            return false;
        }
    }
    return true;
}

} // namespace msr
