#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "msr/codec.hpp"
#include "msr/params.hpp"

namespace msr {

enum class PatternKind { SystematicGroup, ParityGroup, MixedPair };

std::string_view to_string(PatternKind kind);

/// A set of simultaneously failed nodes the cooperative protocol can repair:
/// any r systematic nodes, any r parity nodes, or one of each.
struct FailurePattern {
    std::vector<int> failed; // ascending node ids
    PatternKind kind = PatternKind::SystematicGroup;
    int a = 0; // MixedPair: failed systematic node a
    int b = 0; // MixedPair: failed parity node k+b

    int r() const { return static_cast<int>(failed.size()); }

    /// Throws UnsupportedPattern for mixed sets of three or more nodes.
    static FailurePattern classify(std::vector<int> failed, int k);
};

enum class ProbeBasis { V, U };

/// Column `index` (1-based) of V or U. Helpers send <probe, stored vector>.
struct ProbeVector {
    ProbeBasis basis = ProbeBasis::V;
    int index = 0;

    friend bool operator==(const ProbeVector&, const ProbeVector&) = default;
};

/// v_i for newcomer i <= k, u_i for newcomer k+i.
ProbeVector probe_for(int newcomer, int k);

struct Phase1Edge {
    int helper = 0;
    int newcomer = 0;
    ProbeVector probe;
};

struct Phase2Edge {
    int sender = 0;
    int receiver = 0;
};

struct RepairPlan {
    FailurePattern pattern;
    int k = 0;
    std::vector<int> newcomers;
    std::vector<int> helpers;
    std::vector<Phase1Edge> phase1_edges;
    std::vector<Phase2Edge> phase2_edges;

    int d() const { return static_cast<int>(helpers.size()); }
    int r() const { return static_cast<int>(newcomers.size()); }
};

/// One repair symbol per block per edge.
struct Phase1Message {
    int from = 0;
    int to = 0;
    std::vector<Symbol> symbols;
};

struct Phase2Message {
    int from = 0;
    int to = 0;
    std::vector<Symbol> symbols;
};

/// Exact nonnegative rational, kept in lowest terms.
struct Rational {
    long long num = 0;
    long long den = 1;

    static Rational make(long long num, long long den);
    bool is_integer() const { return den == 1; }
    std::string to_string() const;

    friend bool operator==(const Rational&, const Rational&) = default;
};

/// Lower bound on per-newcomer repair bandwidth for cooperative MDS repair:
/// B (d + r - 1) / (k (d + r - k)). Throws InvalidRegime when d + r <= k.
Rational optimal_bandwidth(long long B, long long k, long long d, long long r);

struct NewcomerBandwidth {
    int newcomer = 0;
    std::size_t downloaded = 0; // phase-1 symbols per block
    std::size_t exchanged = 0;  // phase-2 symbols per block
    std::size_t gamma = 0;
    Rational optimal_gamma;
    bool is_optimal = false;
};

struct BandwidthReport {
    int k = 0;
    int d = 0;
    int r = 0;
    std::size_t blocks = 0;
    std::vector<NewcomerBandwidth> rows;

    bool all_optimal() const;
};

/// Tallies per-block symbols received by each newcomer from the actual messages.
BandwidthReport tally_bandwidth(const RepairPlan& plan, std::span<const Phase1Message> phase1,
                                std::span<const Phase2Message> phase2, std::size_t blocks);

std::string format_report_table(const BandwidthReport& report);

RepairPlan plan_repair(const FailurePattern& pattern, const CodeParams& p);

/// Helper side: <probe of newcomer, helper vector> for a single k-vector.
Symbol phase1_symbol(std::span<const Symbol> helper_vector, int newcomer, const CodeParams& p);

/// Helper side: the phase-1 message from `helper` to every newcomer of the plan.
std::vector<Phase1Message> helper_messages(const NodeContent& helper, const RepairPlan& plan,
                                           const CodeParams& p);

struct RepairOutcome {
    std::vector<NodeContent> regenerated;
    std::vector<Phase2Message> phase2;
    BandwidthReport report;
};

// Newcomer side. These see only the plan, the public code parameters and the
// messages; survivor contents never reach them.
RepairOutcome repair_parity_group(const RepairPlan& plan, std::span<const Phase1Message> phase1,
                                  const CodeParams& p);
RepairOutcome repair_systematic_group(const RepairPlan& plan, std::span<const Phase1Message> phase1,
                                      const CodeParams& p);
RepairOutcome repair_mixed_pair(const RepairPlan& plan, std::span<const Phase1Message> phase1,
                                const CodeParams& p);

/// Dispatches on the plan's pattern kind.
RepairOutcome run_newcomers(const RepairPlan& plan, std::span<const Phase1Message> phase1,
                            const CodeParams& p);

/// Mixed pair, phase 2: the combination parity newcomer k+b sends to newcomer a,
/// computed from k+b's phase-1 inbox only.
std::vector<Symbol> mixed_symbol_to_systematic(const RepairPlan& plan, std::span<const Phase1Message> phase1,
                                               const CodeParams& p);
/// Mixed pair, phase 2: the combination newcomer a sends to parity newcomer k+b.
std::vector<Symbol> mixed_symbol_to_parity(const RepairPlan& plan, std::span<const Phase1Message> phase1,
                                           const CodeParams& p);

/// The k x k matrix newcomer a inverts in mixed repair of nodes a and k+b
/// (1-based a, b): first row (eps - (eps+delta) p_ab q_ba) u_b^t + delta p_ab v_a^t,
/// then delta u_j^t + eps p_aj v_a^t for j != b in increasing order.
Matrix mixed_matrix(const CodeParams& p, int a, int b);

struct MixedMatrixAnalysis {
    bool determinant_nonzero = false;
    /// eps - (eps+delta) p_ab q_ba; zero selects the row-reduction argument.
    Symbol corner = 0;
    /// 1 + h^t A^-1 g, evaluated numerically; absent when corner == 0 or delta == 0.
    std::optional<Symbol> sherman_morrison;
    /// eps (eps+delta) (1 - p_ab q_ba)^2 / (delta * corner); absent when undefined.
    std::optional<Symbol> sherman_morrison_closed_form;
    /// Nonsingularity decided through the rank-one factorization instead of a determinant.
    bool factored_nonsingular = false;
};

MixedMatrixAnalysis analyze_mixed_matrix(const CodeParams& p, int a, int b);

/// True iff the mixed repair matrix for (a, b) is invertible and both the
/// determinant and the factored route agree on it.
bool check_mixed_matrix(const CodeParams& p, int a, int b);

} // namespace msr
