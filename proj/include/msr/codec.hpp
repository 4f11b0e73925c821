#pragma once

#include <span>
#include <vector>

#include "msr/matrix.hpp"
#include "msr/params.hpp"

namespace msr {

/// k x k source block; column j holds x_j, the content of systematic node j+1.
struct SourceBlock {
    Matrix X;
};

/// k x k parity block; column j holds y_j, the content of parity node k+j+1.
struct ParityBlock {
    Matrix Y;
};

/// What one node stores. Node ids are 1-based: 1..k systematic, k+1..2k parity.
/// `symbols` is block-major: block b occupies [b*k, (b+1)*k).
struct NodeContent {
    int node_id = 0;
    std::vector<Symbol> symbols;

    friend bool operator==(const NodeContent&, const NodeContent&) = default;
};

/// Y = delta V_hat X^t U + epsilon X P.
ParityBlock encode(const SourceBlock& source, const CodeParams& p);

/// X = delta' U_hat Y^t V + epsilon' Y Q.
SourceBlock dual_encode(const ParityBlock& parity, const CodeParams& p);

/// Column j (0-based) of X P, i.e. z_j = sum_l p_lj x_l. With Y and Q this is z'_j.
std::vector<Symbol> z_column(const Matrix& X, const Matrix& P, std::size_t j);

/// The 2k single-block node contents for a source block.
std::vector<NodeContent> encode_nodes(const SourceBlock& source, const CodeParams& p);

/// Rebuilds source blocks from node contents. The first k distinct nodes
/// determine the solution; any further nodes are checked against it.
class Collector {
public:
    Collector(const CodeParams& p, std::vector<int> node_ids);

    const std::vector<int>& node_ids() const { return node_ids_; }

    /// Returns the systematic contents (nodes 1..k) for every block present in
    /// `contents`, which must hold exactly the collector's nodes in any order.
    /// Throws InconsistentContents when surplus nodes disagree with the solution.
    std::vector<NodeContent> recover_systematic(std::span<const NodeContent> contents) const;

private:
    CodeParams params_;
    std::vector<int> node_ids_;
    bool systematic_only_ = false;
    std::vector<Symbol> node_map_; // 2k*k rows by k^2 cols: node symbols as a function of vec(X)
    Matrix decode_;                // k^2 x k^2, vec(X) from the first k nodes stacked
};

/// Single-block data collection from k (or more) nodes.
SourceBlock collect(std::span<const NodeContent> contents, const CodeParams& p);

} // namespace msr
