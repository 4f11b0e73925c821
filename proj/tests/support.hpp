#pragma once

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "msr/codec.hpp"
#include "msr/params.hpp"
#include "msr/repair.hpp"

namespace msr::test {

inline FieldRef gf8()
{
    static const FieldRef f = GaloisField::make_default(8);
    return f;
}

inline FieldRef gf16()
{
    static const FieldRef f = GaloisField::make_default(16);
    return f;
}

inline Symbol random_symbol(const GaloisField& f, Rng& rng)
{
    return static_cast<Symbol>(rng.below(f.order()));
}

inline Matrix random_matrix(const FieldRef& f, std::size_t rows, std::size_t cols, Rng& rng)
{
    Matrix m(f, rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            m(r, c) = random_symbol(*f, rng);
        }
    }
    return m;
}

inline Matrix random_nonsingular(const FieldRef& f, std::size_t n, Rng& rng)
{
    while (true) {
        Matrix m = random_matrix(f, n, n, rng);
        if (rank(m) == n) {
            return m;
        }
    }
}

inline CauchySpec random_cauchy_spec(const FieldRef& f, std::size_t k, Rng& rng)
{
    const std::vector<Symbol> pool = sample_distinct(*f, 2 * k, rng);
    return {f, {pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k)},
            {pool.begin() + static_cast<std::ptrdiff_t>(k), pool.end()}};
}

/// Generated params, memoized per (k, seed).
inline const CodeParams& fixture(int k, std::uint64_t seed = 1)
{
    static std::map<std::pair<int, std::uint64_t>, CodeParams> cache;
    auto it = cache.find({k, seed});
    if (it == cache.end()) {
        it = cache.emplace(std::pair{k, seed}, generate(k, gf8(), seed)).first;
    }
    return it->second;
}

/// 2k node contents for `blocks` random source blocks, plus the blocks.
struct Stored {
    std::vector<SourceBlock> blocks;
    std::vector<NodeContent> nodes;

    const NodeContent& node(int id) const { return nodes[static_cast<std::size_t>(id - 1)]; }
};

inline Stored store_random(const CodeParams& p, std::size_t blocks, Rng& rng)
{
    Stored s;
    for (int id = 1; id <= p.n(); ++id) {
        s.nodes.push_back({id, {}});
    }
    for (std::size_t b = 0; b < blocks; ++b) {
        SourceBlock X{random_matrix(p.field, static_cast<std::size_t>(p.k), static_cast<std::size_t>(p.k), rng)};
        for (const NodeContent& c : encode_nodes(X, p)) {
            auto& dst = s.nodes[static_cast<std::size_t>(c.node_id - 1)].symbols;
            dst.insert(dst.end(), c.symbols.begin(), c.symbols.end());
        }
        s.blocks.push_back(std::move(X));
    }
    return s;
}

/// Phase-1 traffic of every helper for `plan`.
inline std::vector<Phase1Message> phase1_traffic(const Stored& s, const RepairPlan& plan, const CodeParams& p)
{
    std::vector<Phase1Message> out;
    for (int helper : plan.helpers) {
        for (auto& m : helper_messages(s.node(helper), plan, p)) {
            out.push_back(std::move(m));
        }
    }
    return out;
}

inline RepairOutcome repair_failed(const Stored& s, std::vector<int> failed, const CodeParams& p)
{
    const RepairPlan plan = plan_repair(FailurePattern::classify(std::move(failed), p.k), p);
    return run_newcomers(plan, phase1_traffic(s, plan, p), p);
}

inline bool regenerated_exactly(const Stored& s, const RepairOutcome& out)
{
    return std::all_of(out.regenerated.begin(), out.regenerated.end(),
                       [&](const NodeContent& c) { return c == s.node(c.node_id); });
}

/// All k-subsets of {1..n} in lexicographic order.
inline std::vector<std::vector<int>> subsets(int n, int k)
{
    std::vector<std::vector<int>> out;
    std::vector<bool> mask(static_cast<std::size_t>(n), false);
    std::fill(mask.begin(), mask.begin() + k, true);
    do {
        std::vector<int> s;
        for (int i = 0; i < n; ++i) {
            if (mask[static_cast<std::size_t>(i)]) {
                s.push_back(i + 1);
            }
        }
        out.push_back(std::move(s));
    } while (std::prev_permutation(mask.begin(), mask.end()));
    return out;
}

/// k distinct ids from {1..n}, in random order.
inline std::vector<int> random_subset(int n, int k, Rng& rng)
{
    std::vector<int> ids(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        ids[static_cast<std::size_t>(i)] = i + 1;
    }
    for (int i = 0; i < k; ++i) {
        const auto j = static_cast<std::size_t>(i) + rng.below(static_cast<std::uint64_t>(n - i));
        std::swap(ids[static_cast<std::size_t>(i)], ids[j]);
    }
    ids.resize(static_cast<std::size_t>(k));
    return ids;
}

} // namespace msr::test
