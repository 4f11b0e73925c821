#include "msr/codec.hpp"

#include <algorithm>
#include <set>

namespace msr {

namespace {

void require_block(const Matrix& m, const CodeParams& p, const char* what)
{
    require_same_field(m.gf(), p.gf());
    const auto k = static_cast<std::size_t>(p.k);
    if (m.rows() != k || m.cols() != k) {
        fail(ErrorCode::DimensionMismatch, std::string(what) + " must be " + std::to_string(k) + "x" +
                                               std::to_string(k));
    }
}

} // namespace

ParityBlock encode(const SourceBlock& source, const CodeParams& p)
{
    require_block(source.X, p, "source block");
    const Matrix interference = p.V_hat * source.X.transpose() * p.U;
    const Matrix mixed = source.X * p.P;
    return {interference.scaled(p.delta.value()) + mixed.scaled(p.epsilon.value())};
}

SourceBlock dual_encode(const ParityBlock& parity, const CodeParams& p)
{
    require_block(parity.Y, p, "parity block");
    const Matrix interference = p.U_hat * parity.Y.transpose() * p.V;
    const Matrix mixed = parity.Y * p.Q;
    return {interference.scaled(p.delta_prime.value()) + mixed.scaled(p.epsilon_prime.value())};
}

std::vector<Symbol> z_column(const Matrix& X, const Matrix& P, std::size_t j)
{
    require_same_field(X.gf(), P.gf());
    if (X.cols() != P.rows()) {
        fail(ErrorCode::DimensionMismatch, "mixing matrix does not match block width");
    }
    if (j >= P.cols()) {
        fail(ErrorCode::IndexOutOfRange, "column " + std::to_string(j + 1) + " beyond k = " +
                                             std::to_string(P.cols()));
    }
    const GaloisField& f = X.gf();
    std::vector<Symbol> z(X.rows(), 0);
    for (std::size_t l = 0; l < X.cols(); ++l) {
        const Symbol coef = P(l, j);
        for (std::size_t r = 0; r < X.rows(); ++r) {
            z[r] ^= f.mul(coef, X(r, l));
        }
    }
    return z;
}

std::vector<NodeContent> encode_nodes(const SourceBlock& source, const CodeParams& p)
{
    const ParityBlock parity = encode(source, p);
    std::vector<NodeContent> nodes;
    nodes.reserve(static_cast<std::size_t>(p.n()));
    for (int j = 0; j < p.k; ++j) {
        nodes.push_back({j + 1, source.X.column(static_cast<std::size_t>(j))});
    }
    for (int j = 0; j < p.k; ++j) {
        nodes.push_back({p.k + j + 1, parity.Y.column(static_cast<std::size_t>(j))});
    }
    return nodes;
}

Collector::Collector(const CodeParams& p, std::vector<int> node_ids)
    : params_(p), node_ids_(std::move(node_ids)), decode_(p.field, 0, 0)
{
    const auto k = static_cast<std::size_t>(p.k);
    const std::size_t unknowns = k * k;
    std::set<int> seen;
    for (int id : node_ids_) {
        if (id < 1 || id > p.n()) {
            fail(ErrorCode::IndexOutOfRange, "node " + std::to_string(id) + " outside 1.." + std::to_string(p.n()));
        }
        if (!seen.insert(id).second) {
            fail(ErrorCode::DuplicateNodes, "node " + std::to_string(id) + " given twice");
        }
    }
    if (node_ids_.size() < k) {
        fail(ErrorCode::NotEnoughLiveNodes, "data collection needs " + std::to_string(k) + " nodes, got " +
                                                std::to_string(node_ids_.size()));
    }

    // Column u of node_map_ is the image of the unit block with vec(X)_u = 1,
    // where vec stacks the columns x_1..x_k.
    node_map_.assign(static_cast<std::size_t>(p.n()) * k * unknowns, 0);
    for (std::size_t u = 0; u < unknowns; ++u) {
        Matrix unit(p.field, k, k);
        unit(u % k, u / k) = 1;
        const ParityBlock image = encode({unit}, p);
        node_map_[u * unknowns + u] = 1;
        for (std::size_t j = 0; j < k; ++j) {
            for (std::size_t r = 0; r < k; ++r) {
                node_map_[(k * k + j * k + r) * unknowns + u] = image.Y(r, j);
            }
        }
    }

    std::vector<int> primary(node_ids_.begin(), node_ids_.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(primary.begin(), primary.end());
    systematic_only_ = primary.back() <= p.k;
    if (systematic_only_) {
        return;
    }
    Matrix system(p.field, unknowns, unknowns);
    for (std::size_t s = 0; s < k; ++s) {
        const auto base = static_cast<std::size_t>(node_ids_[s] - 1) * k;
        for (std::size_t r = 0; r < k; ++r) {
            for (std::size_t u = 0; u < unknowns; ++u) {
                system(s * k + r, u) = node_map_[(base + r) * unknowns + u];
            }
        }
    }
    decode_ = invert(system);
}

std::vector<NodeContent> Collector::recover_systematic(std::span<const NodeContent> contents) const
{
    const CodeParams& p = params_;
    const GaloisField& f = p.gf();
    const auto k = static_cast<std::size_t>(p.k);
    const std::size_t unknowns = k * k;

    if (contents.size() != node_ids_.size()) {
        fail(ErrorCode::InvalidArgument, "expected contents for " + std::to_string(node_ids_.size()) + " nodes");
    }
    // Order the inputs to match node_ids_.
    std::vector<const NodeContent*> ordered(node_ids_.size(), nullptr);
    for (const NodeContent& c : contents) {
        const auto it = std::find(node_ids_.begin(), node_ids_.end(), c.node_id);
        if (it == node_ids_.end()) {
            fail(ErrorCode::InvalidArgument, "unexpected node " + std::to_string(c.node_id));
        }
        auto& slot = ordered[static_cast<std::size_t>(it - node_ids_.begin())];
        if (slot != nullptr) {
            fail(ErrorCode::DuplicateNodes, "node " + std::to_string(c.node_id) + " given twice");
        }
        slot = &c;
    }
    const std::size_t length = ordered.front()->symbols.size();
    if (length % k != 0) {
        fail(ErrorCode::DimensionMismatch, "node content length is not a multiple of k");
    }
    for (const NodeContent* c : ordered) {
        if (c->symbols.size() != length) {
            fail(ErrorCode::DimensionMismatch, "node contents have different lengths");
        }
        for (Symbol s : c->symbols) {
            if (!f.contains(s)) {
                fail(ErrorCode::InvalidArgument, "symbol outside the field in node " + std::to_string(c->node_id));
            }
        }
    }
    const std::size_t blocks = length / k;

    std::vector<NodeContent> out;
    for (int j = 0; j < p.k; ++j) {
        out.push_back({j + 1, std::vector<Symbol>(length, 0)});
    }

    std::vector<Symbol> stacked(unknowns);
    std::vector<Symbol> x(unknowns);
    for (std::size_t b = 0; b < blocks; ++b) {
        for (std::size_t s = 0; s < k; ++s) {
            std::copy_n(ordered[s]->symbols.begin() + static_cast<std::ptrdiff_t>(b * k), k,
                        stacked.begin() + static_cast<std::ptrdiff_t>(s * k));
        }
        if (systematic_only_) {
            for (std::size_t s = 0; s < k; ++s) {
                const auto col = static_cast<std::size_t>(ordered[s]->node_id - 1);
                std::copy_n(stacked.begin() + static_cast<std::ptrdiff_t>(s * k), k,
                            x.begin() + static_cast<std::ptrdiff_t>(col * k));
            }
        } else {
            for (std::size_t u = 0; u < unknowns; ++u) {
                x[u] = dot(f, decode_.row(u), stacked);
            }
        }
        for (std::size_t s = k; s < ordered.size(); ++s) {
            const auto base = static_cast<std::size_t>(ordered[s]->node_id - 1) * k;
            for (std::size_t r = 0; r < k; ++r) {
                const std::span<const Symbol> map_row(node_map_.data() + (base + r) * unknowns, unknowns);
                if (dot(f, map_row, x) != ordered[s]->symbols[b * k + r]) {
                    fail(ErrorCode::InconsistentContents,
                         "node " + std::to_string(ordered[s]->node_id) + " disagrees with the other nodes in block " +
                             std::to_string(b));
                }
            }
        }
        for (std::size_t j = 0; j < k; ++j) {
            std::copy_n(x.begin() + static_cast<std::ptrdiff_t>(j * k), k,
                        out[j].symbols.begin() + static_cast<std::ptrdiff_t>(b * k));
        }
    }
    return out;
}

SourceBlock collect(std::span<const NodeContent> contents, const CodeParams& p)
{
    std::vector<int> ids;
    for (const NodeContent& c : contents) {
        if (c.symbols.size() != static_cast<std::size_t>(p.k)) {
            fail(ErrorCode::DimensionMismatch, "node " + std::to_string(c.node_id) + " does not hold one block");
        }
        ids.push_back(c.node_id);
    }
    const Collector collector(p, std::move(ids));
    const auto systematic = collector.recover_systematic(contents);
    const auto k = static_cast<std::size_t>(p.k);
    Matrix X(p.field, k, k);
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t r = 0; r < k; ++r) {
            X(r, j) = systematic[j].symbols[r];
        }
    }
    return {X};
}

} // namespace msr
