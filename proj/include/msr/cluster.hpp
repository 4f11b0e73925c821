#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "msr/codec.hpp"
#include "msr/params.hpp"
#include "msr/repair.hpp"

namespace msr {

/// Bytes per stored symbol: 1 for GF(2^8), 2 (little-endian) for GF(2^16).
/// Other fields cannot carry arbitrary bytes and are rejected.
std::size_t symbol_bytes(const GaloisField& field);
std::vector<Symbol> bytes_to_symbols(std::span<const std::uint8_t> bytes, const GaloisField& field);
std::vector<std::uint8_t> symbols_to_bytes(std::span<const Symbol> symbols, const GaloisField& field);

struct ClusterOptions {
    /// Keep a copy of every node for verification. Off in "production" runs,
    /// where repairs are trusted without a ground truth to compare against.
    bool retain_oracle = true;
};

/// In-memory cluster of 2k nodes. Every node holds one k-vector per block.
class Cluster {
public:
    static Cluster ingest(std::span<const std::uint8_t> bytes, const CodeParams& p, ClusterOptions options = {});
    /// Rebuilds a cluster from stored node contents (index i holds node i+1).
    /// The oracle is taken from the given contents when all 2k are present.
    static Cluster from_nodes(const CodeParams& p, std::vector<std::optional<NodeContent>> nodes,
                              std::size_t original_length, ClusterOptions options = {});

    const CodeParams& params() const { return params_; }
    std::size_t block_count() const { return blocks_; }
    std::size_t original_length() const { return original_length_; }
    bool has_oracle() const { return oracle_.has_value(); }

    bool is_live(int node_id) const;
    std::vector<int> live_nodes() const;
    std::vector<int> failed_nodes() const;
    const std::optional<NodeContent>& node(int node_id) const;

    /// Reassembles the ingested bytes from the given nodes (at least k, all live).
    std::vector<std::uint8_t> extract(std::span<const int> from_nodes) const;

    /// Erases the listed nodes. The oracle is untouched.
    void fail_nodes(std::span<const int> node_ids);

    /// Repairs exactly the currently failed nodes with the cooperative protocol,
    /// one plan reused across all blocks. Throws VerificationFailure if an
    /// oracle is kept and a regenerated node differs from it.
    BandwidthReport run_repair(const FailurePattern& pattern);

    /// True when every live node matches the oracle (false without an oracle).
    bool matches_oracle() const;

private:
    Cluster(CodeParams p, std::size_t blocks, std::size_t original_length);

    void require_id(int node_id) const;

    CodeParams params_;
    std::size_t blocks_;
    std::size_t original_length_;
    std::vector<std::optional<NodeContent>> nodes_;
    std::optional<std::vector<NodeContent>> oracle_;
};

} // namespace msr
