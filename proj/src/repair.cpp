#include "msr/repair.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace msr {

namespace {

// The code seen from one side. In the primal view the systematic nodes hold
// the data vectors d_i = x_i and the parity nodes the coded vectors
// c_j = y_j; data newcomers probe with G = V, coded newcomers with H = U,
// and H = G M. The dual view swaps X and Y, U and V, P and Q, and uses
// (delta', epsilon'). Every protocol step is written once against a view.
struct CodeView {
    const Matrix& G;
    const Matrix& H;
    const Matrix& G_hat;
    const Matrix& H_hat;
    const Matrix& M;
    const Matrix& N;
    Symbol delta;
    Symbol epsilon;
    int k;
    bool primal;

    int data_node(std::size_t i) const { return primal ? static_cast<int>(i) + 1 : k + static_cast<int>(i) + 1; }
    int coded_node(std::size_t j) const { return primal ? k + static_cast<int>(j) + 1 : static_cast<int>(j) + 1; }
    std::size_t coded_index(int node) const
    {
        return static_cast<std::size_t>(primal ? node - k - 1 : node - 1);
    }
};

CodeView primal_view(const CodeParams& p)
{
    return {p.V, p.U, p.V_hat, p.U_hat, p.P, p.Q, p.delta.value(), p.epsilon.value(), p.k, true};
}

CodeView dual_view(const CodeParams& p)
{
    return {p.U, p.V, p.U_hat, p.V_hat, p.Q, p.P, p.delta_prime.value(), p.epsilon_prime.value(), p.k, false};
}

template <typename Message>
std::size_t payload_blocks(std::span<const Message> messages)
{
    if (messages.empty()) {
        fail(ErrorCode::MissingMessage, "no repair messages");
    }
    const std::size_t blocks = messages.front().symbols.size();
    for (const Message& m : messages) {
        if (m.symbols.size() != blocks) {
            fail(ErrorCode::DimensionMismatch, "repair messages carry different numbers of blocks");
        }
    }
    return blocks;
}

// The messages addressed to one newcomer, keyed by sender.
template <typename Message>
class Inbox {
public:
    Inbox(int owner, std::span<const Message> messages) : owner_(owner)
    {
        for (const Message& m : messages) {
            if (m.to != owner) {
                continue;
            }
            if (!by_sender_.emplace(m.from, &m.symbols).second) {
                fail(ErrorCode::InvalidArgument, "node " + std::to_string(m.from) + " sent newcomer " +
                                                     std::to_string(owner) + " two messages in one phase");
            }
        }
    }

    const std::vector<Symbol>& from(int sender) const
    {
        const auto it = by_sender_.find(sender);
        if (it == by_sender_.end()) {
            fail(ErrorCode::MissingMessage, "newcomer " + std::to_string(owner_) + " has no message from node " +
                                                std::to_string(sender));
        }
        return *it->second;
    }

private:
    int owner_;
    std::map<int, const std::vector<Symbol>*> by_sender_;
};

using Phase1Inbox = Inbox<Phase1Message>;
using Phase2Inbox = Inbox<Phase2Message>;

void set_row(Matrix& m, std::size_t row, std::span<const Symbol> values)
{
    for (std::size_t c = 0; c < m.cols(); ++c) {
        m(row, c) = values[c];
    }
}

std::vector<Symbol> row_of(const Matrix& m, std::size_t row)
{
    const auto r = m.row(row);
    return {r.begin(), r.end()};
}

// k x blocks matrix: column b is the vector for block b.
NodeContent to_node(int node_id, const Matrix& columns)
{
    NodeContent out{node_id, std::vector<Symbol>(columns.rows() * columns.cols())};
    for (std::size_t b = 0; b < columns.cols(); ++b) {
        for (std::size_t r = 0; r < columns.rows(); ++r) {
            out.symbols[b * columns.rows() + r] = columns(r, b);
        }
    }
    return out;
}

void require_kind(const RepairPlan& plan, PatternKind kind)
{
    if (plan.pattern.kind != kind) {
        fail(ErrorCode::InvalidArgument, std::string("plan is for ") + std::string(to_string(plan.pattern.kind)) +
                                             ", expected " + std::string(to_string(kind)));
    }
}

void require_plan_matches(const RepairPlan& plan, const CodeParams& p)
{
    if (plan.k != p.k) {
        fail(ErrorCode::InvalidArgument, "plan built for k = " + std::to_string(plan.k) + ", params have k = " +
                                             std::to_string(p.k));
    }
}

// Group repair of the coded nodes in `plan.newcomers` under `view`.
RepairOutcome group_repair(const RepairPlan& plan, std::span<const Phase1Message> phase1, const CodeParams& p,
                           const CodeView& view)
{
    require_plan_matches(plan, p);
    const GaloisField& f = p.gf();
    const auto k = static_cast<std::size_t>(p.k);
    const std::size_t blocks = payload_blocks(phase1);

    std::set<std::size_t> lost;
    for (int id : plan.newcomers) {
        lost.insert(view.coded_index(id));
    }

    // Phase 1 results, per newcomer, built from its own inbox only.
    // S row l = <h_i, d_l>;  T = M^t S, so T row j = <h_i, z_j>.
    struct Local {
        int id;
        std::size_t coded;
        Matrix S;
        Matrix T;
    };
    std::vector<Local> locals;
    for (int id : plan.newcomers) {
        const Phase1Inbox inbox(id, phase1);
        Matrix S(p.field, k, blocks);
        for (std::size_t l = 0; l < k; ++l) {
            set_row(S, l, inbox.from(view.data_node(l)));
        }
        Matrix T = view.M.transpose() * S;
        locals.push_back({id, view.coded_index(id), std::move(S), std::move(T)});
    }

    // Phase 2: newcomer i hands newcomer j the value <h_i, z_j>.
    std::vector<Phase2Message> phase2;
    for (const Local& sender : locals) {
        for (const Local& receiver : locals) {
            if (sender.id != receiver.id) {
                phase2.push_back({sender.id, receiver.id, row_of(sender.T, receiver.coded)});
            }
        }
    }

    RepairOutcome outcome;
    const Symbol delta_inv = f.inv(view.delta);
    const Matrix probes_t = view.H.transpose();
    for (const Local& self : locals) {
        const Phase1Inbox inbox(self.id, phase1);
        const Phase2Inbox exchange(self.id, std::span<const Phase2Message>(phase2));
        // W row j = <h_j, z_i>.
        Matrix W(p.field, k, blocks);
        set_row(W, self.coded, self.T.row(self.coded));
        for (std::size_t j = 0; j < k; ++j) {
            if (j == self.coded) {
                continue;
            }
            if (lost.count(j)) {
                set_row(W, j, exchange.from(view.coded_node(j)));
                continue;
            }
            // <h_i, c_j> = delta <h_j, z_i> + eps <h_i, z_j>
            const auto& received = inbox.from(view.coded_node(j));
            for (std::size_t b = 0; b < blocks; ++b) {
                W(j, b) = f.mul(delta_inv, f.sub(received[b], f.mul(view.epsilon, self.T(j, b))));
            }
        }
        Matrix z(p.field, k, blocks);
        try {
            z = solve(probes_t, W);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::SingularMatrix) {
                throw;
            }
            fail(ErrorCode::SolveFailure, "probe vectors are linearly dependent; parameters are invalid");
        }
        const Matrix rebuilt = (view.G_hat * self.S).scaled(view.delta) + z.scaled(view.epsilon);
        outcome.regenerated.push_back(to_node(self.id, rebuilt));
    }

    outcome.report = tally_bandwidth(plan, phase1, phase2, blocks);
    outcome.phase2 = std::move(phase2);
    return outcome;
}

// Mixed repair, data node `a` and coded node `b` lost (0-based view indices).
// The coded newcomer's phase-2 combination for the data newcomer:
//   sum_{j != b} N_ja <h_b, c_j> + (delta + eps) N_ba sum_{i != a} M_ib <h_b, d_i>
// which equals delta <g_a, z_b> + (eps - (eps + delta) M_ab N_ba) <h_b, d_a>.
std::vector<Symbol> mixed_exchange(const CodeView& view, std::size_t a, std::size_t b, const Phase1Inbox& inbox,
                                   const GaloisField& f, std::size_t blocks)
{
    const auto k = static_cast<std::size_t>(view.k);
    std::vector<Symbol> out(blocks, 0);
    for (std::size_t j = 0; j < k; ++j) {
        if (j == b) {
            continue;
        }
        const Symbol coef = view.N(j, a);
        const auto& msg = inbox.from(view.coded_node(j));
        for (std::size_t t = 0; t < blocks; ++t) {
            out[t] ^= f.mul(coef, msg[t]);
        }
    }
    const Symbol outer = f.mul(f.add(view.delta, view.epsilon), view.N(b, a));
    for (std::size_t i = 0; i < k; ++i) {
        if (i == a) {
            continue;
        }
        const Symbol coef = f.mul(outer, view.M(i, b));
        const auto& msg = inbox.from(view.data_node(i));
        for (std::size_t t = 0; t < blocks; ++t) {
            out[t] ^= f.mul(coef, msg[t]);
        }
    }
    return out;
}

Symbol mixed_corner(const CodeView& view, std::size_t a, std::size_t b, const GaloisField& f)
{
    return f.sub(view.epsilon, f.mul(f.add(view.epsilon, view.delta), f.mul(view.M(a, b), view.N(b, a))));
}

Matrix mixed_system(const CodeView& view, std::size_t a, std::size_t b, const FieldRef& field)
{
    const GaloisField& f = *field;
    const auto k = static_cast<std::size_t>(view.k);
    const Symbol corner = mixed_corner(view, a, b, f);
    Matrix R(field, k, k);
    for (std::size_t c = 0; c < k; ++c) {
        R(0, c) = f.add(f.mul(corner, view.H(c, b)), f.mul(f.mul(view.delta, view.M(a, b)), view.G(c, a)));
    }
    std::size_t row = 1;
    for (std::size_t j = 0; j < k; ++j) {
        if (j == b) {
            continue;
        }
        const Symbol g_coef = f.mul(view.epsilon, view.M(a, j));
        for (std::size_t c = 0; c < k; ++c) {
            R(row, c) = f.add(f.mul(view.delta, view.H(c, j)), f.mul(g_coef, view.G(c, a)));
        }
        ++row;
    }
    return R;
}

Matrix mixed_reconstruct(const CodeView& view, std::size_t a, std::size_t b, const Phase1Inbox& inbox,
                         std::span<const Symbol> exchanged, const FieldRef& field, std::size_t blocks)
{
    const GaloisField& f = *field;
    const auto k = static_cast<std::size_t>(view.k);
    Matrix rhs(field, k, blocks);

    // Row 0: exchanged - delta sum_{i != a} M_ib <g_a, d_i>.
    for (std::size_t t = 0; t < blocks; ++t) {
        rhs(0, t) = exchanged[t];
    }
    for (std::size_t i = 0; i < k; ++i) {
        if (i == a) {
            continue;
        }
        const auto& msg = inbox.from(view.data_node(i));
        const Symbol coef = f.mul(view.delta, view.M(i, b));
        for (std::size_t t = 0; t < blocks; ++t) {
            rhs(0, t) = f.sub(rhs(0, t), f.mul(coef, msg[t]));
        }
    }
    // Rows for j != b: <g_a, c_j> - eps sum_{i != a} M_ij <g_a, d_i>.
    std::size_t row = 1;
    for (std::size_t j = 0; j < k; ++j) {
        if (j == b) {
            continue;
        }
        set_row(rhs, row, inbox.from(view.coded_node(j)));
        for (std::size_t i = 0; i < k; ++i) {
            if (i == a) {
                continue;
            }
            const auto& msg = inbox.from(view.data_node(i));
            const Symbol coef = f.mul(view.epsilon, view.M(i, j));
            for (std::size_t t = 0; t < blocks; ++t) {
                rhs(row, t) = f.sub(rhs(row, t), f.mul(coef, msg[t]));
            }
        }
        ++row;
    }

    try {
        return solve(mixed_system(view, a, b, field), rhs);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::SingularMatrix) {
            throw;
        }
        fail(ErrorCode::NonsingularityFailure, "mixed repair matrix is singular; parameters are invalid");
    }
}

void require_mixed_indices(const CodeParams& p, int a, int b)
{
    if (a < 1 || a > p.k || b < 1 || b > p.k) {
        fail(ErrorCode::IndexOutOfRange, "mixed pair indices must be in 1.." + std::to_string(p.k));
    }
}

} // namespace

std::string_view to_string(PatternKind kind)
{
    switch (kind) {
    case PatternKind::SystematicGroup: return "SystematicGroup";
    case PatternKind::ParityGroup: return "ParityGroup";
    case PatternKind::MixedPair: return "MixedPair";
    }
    return "Unknown";
}

FailurePattern FailurePattern::classify(std::vector<int> failed, int k)
{
    if (failed.empty()) {
        fail(ErrorCode::InvalidArgument, "failure pattern is empty");
    }
    std::sort(failed.begin(), failed.end());
    if (std::adjacent_find(failed.begin(), failed.end()) != failed.end()) {
        fail(ErrorCode::DuplicateNodes, "failure pattern lists a node twice");
    }
    if (failed.front() < 1 || failed.back() > 2 * k) {
        fail(ErrorCode::IndexOutOfRange, "failed node outside 1.." + std::to_string(2 * k));
    }
    const auto systematic = std::count_if(failed.begin(), failed.end(), [k](int id) { return id <= k; });
    const auto total = static_cast<std::ptrdiff_t>(failed.size());

    FailurePattern out;
    if (systematic == total) {
        out.kind = PatternKind::SystematicGroup;
    } else if (systematic == 0) {
        out.kind = PatternKind::ParityGroup;
    } else if (total == 2) {
        out.kind = PatternKind::MixedPair;
        out.a = failed[0];
        out.b = failed[1] - k;
    } else {
        std::ostringstream os;
        os << "no optimal cooperative repair for " << systematic << " systematic and " << total - systematic
           << " parity failures together";
        fail(ErrorCode::UnsupportedPattern, os.str());
    }
    out.failed = std::move(failed);
    return out;
}

ProbeVector probe_for(int newcomer, int k)
{
    if (newcomer < 1 || newcomer > 2 * k) {
        fail(ErrorCode::IndexOutOfRange, "newcomer " + std::to_string(newcomer) + " outside 1.." + std::to_string(2 * k));
    }
    return newcomer <= k ? ProbeVector{ProbeBasis::V, newcomer} : ProbeVector{ProbeBasis::U, newcomer - k};
}

Rational Rational::make(long long num, long long den)
{
    if (den == 0) {
        fail(ErrorCode::DivisionByZero, "rational with zero denominator");
    }
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const long long g = std::gcd(num, den);
    return {num / g, den / g};
}

std::string Rational::to_string() const
{
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

Rational optimal_bandwidth(long long B, long long k, long long d, long long r)
{
    if (B <= 0 || k <= 0 || d <= 0 || r <= 0) {
        fail(ErrorCode::InvalidArgument, "bandwidth bound needs positive B, k, d, r");
    }
    if (d + r <= k) {
        fail(ErrorCode::InvalidRegime, "d + r must exceed k");
    }
    return Rational::make(B * (d + r - 1), k * (d + r - k));
}

bool BandwidthReport::all_optimal() const
{
    return std::all_of(rows.begin(), rows.end(), [](const NewcomerBandwidth& row) { return row.is_optimal; });
}

BandwidthReport tally_bandwidth(const RepairPlan& plan, std::span<const Phase1Message> phase1,
                                std::span<const Phase2Message> phase2, std::size_t blocks)
{
    BandwidthReport report{plan.k, plan.d(), plan.r(), blocks, {}};
    const Rational optimal = optimal_bandwidth(static_cast<long long>(plan.k) * plan.k, plan.k, plan.d(), plan.r());
    for (int id : plan.newcomers) {
        NewcomerBandwidth row;
        row.newcomer = id;
        // Every message carries one symbol per block, so per-block counts are
        // message counts once payload sizes are confirmed.
        for (const Phase1Message& m : phase1) {
            if (m.to == id) {
                if (m.symbols.size() != blocks) {
                    fail(ErrorCode::DimensionMismatch, "phase-1 message with wrong payload size");
                }
                ++row.downloaded;
            }
        }
        for (const Phase2Message& m : phase2) {
            if (m.to == id) {
                if (m.symbols.size() != blocks) {
                    fail(ErrorCode::DimensionMismatch, "phase-2 message with wrong payload size");
                }
                ++row.exchanged;
            }
        }
        row.gamma = row.downloaded + row.exchanged;
        row.optimal_gamma = optimal;
        row.is_optimal = Rational::make(static_cast<long long>(row.gamma), 1) == optimal;
        report.rows.push_back(row);
    }
    return report;
}

std::string format_report_table(const BandwidthReport& report)
{
    std::ostringstream os;
    os << "newcomer  downloaded  exchanged  gamma  optimal  optimal?\n";
    for (const auto& row : report.rows) {
        char line[128];
        std::snprintf(line, sizeof line, "%8d  %10zu  %9zu  %5zu  %7s  %s\n", row.newcomer, row.downloaded,
                      row.exchanged, row.gamma, row.optimal_gamma.to_string().c_str(), row.is_optimal ? "yes" : "no");
        os << line;
    }
    return os.str();
}

RepairPlan plan_repair(const FailurePattern& pattern, const CodeParams& p)
{
    const FailurePattern checked = FailurePattern::classify(pattern.failed, p.k);
    if (checked.kind != pattern.kind || checked.a != pattern.a || checked.b != pattern.b) {
        fail(ErrorCode::InvalidArgument, "failure pattern classification does not match its node set");
    }

    RepairPlan plan;
    plan.pattern = checked;
    plan.k = p.k;
    plan.newcomers = checked.failed;
    for (int id = 1; id <= p.n(); ++id) {
        if (!std::binary_search(checked.failed.begin(), checked.failed.end(), id)) {
            plan.helpers.push_back(id);
        }
    }
    for (int newcomer : plan.newcomers) {
        const ProbeVector probe = probe_for(newcomer, p.k);
        for (int helper : plan.helpers) {
            plan.phase1_edges.push_back({helper, newcomer, probe});
        }
    }
    for (int sender : plan.newcomers) {
        for (int receiver : plan.newcomers) {
            if (sender != receiver) {
                plan.phase2_edges.push_back({sender, receiver});
            }
        }
    }
    return plan;
}

Symbol phase1_symbol(std::span<const Symbol> helper_vector, int newcomer, const CodeParams& p)
{
    const ProbeVector probe = probe_for(newcomer, p.k);
    const Matrix& basis = probe.basis == ProbeBasis::V ? p.V : p.U;
    return dot(p.gf(), basis.column(static_cast<std::size_t>(probe.index - 1)), helper_vector);
}

std::vector<Phase1Message> helper_messages(const NodeContent& helper, const RepairPlan& plan, const CodeParams& p)
{
    if (!std::binary_search(plan.helpers.begin(), plan.helpers.end(), helper.node_id)) {
        fail(ErrorCode::InvalidArgument, "node " + std::to_string(helper.node_id) + " is not a helper in this plan");
    }
    const auto k = static_cast<std::size_t>(p.k);
    if (helper.symbols.size() % k != 0) {
        fail(ErrorCode::DimensionMismatch, "helper content is not a whole number of blocks");
    }
    const std::size_t blocks = helper.symbols.size() / k;
    const std::span<const Symbol> all(helper.symbols);

    std::vector<Phase1Message> out;
    for (const Phase1Edge& edge : plan.phase1_edges) {
        if (edge.helper != helper.node_id) {
            continue;
        }
        const Matrix& basis = edge.probe.basis == ProbeBasis::V ? p.V : p.U;
        const auto probe = basis.column(static_cast<std::size_t>(edge.probe.index - 1));
        Phase1Message msg{helper.node_id, edge.newcomer, std::vector<Symbol>(blocks)};
        for (std::size_t b = 0; b < blocks; ++b) {
            msg.symbols[b] = dot(p.gf(), probe, all.subspan(b * k, k));
        }
        out.push_back(std::move(msg));
    }
    return out;
}

RepairOutcome repair_parity_group(const RepairPlan& plan, std::span<const Phase1Message> phase1, const CodeParams& p)
{
    require_kind(plan, PatternKind::ParityGroup);
    return group_repair(plan, phase1, p, primal_view(p));
}

RepairOutcome repair_systematic_group(const RepairPlan& plan, std::span<const Phase1Message> phase1,
                                      const CodeParams& p)
{
    require_kind(plan, PatternKind::SystematicGroup);
    return group_repair(plan, phase1, p, dual_view(p));
}

std::vector<Symbol> mixed_symbol_to_systematic(const RepairPlan& plan, std::span<const Phase1Message> phase1,
                                               const CodeParams& p)
{
    require_kind(plan, PatternKind::MixedPair);
    require_plan_matches(plan, p);
    const auto a = static_cast<std::size_t>(plan.pattern.a - 1);
    const auto b = static_cast<std::size_t>(plan.pattern.b - 1);
    const Phase1Inbox inbox(p.k + plan.pattern.b, phase1);
    return mixed_exchange(primal_view(p), a, b, inbox, p.gf(), payload_blocks(phase1));
}

std::vector<Symbol> mixed_symbol_to_parity(const RepairPlan& plan, std::span<const Phase1Message> phase1,
                                           const CodeParams& p)
{
    require_kind(plan, PatternKind::MixedPair);
    require_plan_matches(plan, p);
    const auto a = static_cast<std::size_t>(plan.pattern.a - 1);
    const auto b = static_cast<std::size_t>(plan.pattern.b - 1);
    const Phase1Inbox inbox(plan.pattern.a, phase1);
    // In the dual view Y is the data side: the lost data index is b and the lost coded index a.
    return mixed_exchange(dual_view(p), b, a, inbox, p.gf(), payload_blocks(phase1));
}

RepairOutcome repair_mixed_pair(const RepairPlan& plan, std::span<const Phase1Message> phase1, const CodeParams& p)
{
    require_kind(plan, PatternKind::MixedPair);
    require_plan_matches(plan, p);
    const std::size_t blocks = payload_blocks(phase1);
    const int sys_id = plan.pattern.a;
    const int par_id = p.k + plan.pattern.b;
    const auto a = static_cast<std::size_t>(plan.pattern.a - 1);
    const auto b = static_cast<std::size_t>(plan.pattern.b - 1);

    std::vector<Phase2Message> phase2;
    phase2.push_back({par_id, sys_id, mixed_symbol_to_systematic(plan, phase1, p)});
    phase2.push_back({sys_id, par_id, mixed_symbol_to_parity(plan, phase1, p)});

    RepairOutcome outcome;
    {
        const Phase1Inbox inbox(sys_id, phase1);
        const Phase2Inbox exchange(sys_id, std::span<const Phase2Message>(phase2));
        const Matrix x_a = mixed_reconstruct(primal_view(p), a, b, inbox, exchange.from(par_id), p.field, blocks);
        outcome.regenerated.push_back(to_node(sys_id, x_a));
    }
    {
        const Phase1Inbox inbox(par_id, phase1);
        const Phase2Inbox exchange(par_id, std::span<const Phase2Message>(phase2));
        const Matrix y_b = mixed_reconstruct(dual_view(p), b, a, inbox, exchange.from(sys_id), p.field, blocks);
        outcome.regenerated.push_back(to_node(par_id, y_b));
    }
    outcome.report = tally_bandwidth(plan, phase1, phase2, blocks);
    outcome.phase2 = std::move(phase2);
    return outcome;
}

RepairOutcome run_newcomers(const RepairPlan& plan, std::span<const Phase1Message> phase1, const CodeParams& p)
{
    switch (plan.pattern.kind) {
    case PatternKind::ParityGroup: return repair_parity_group(plan, phase1, p);
    case PatternKind::SystematicGroup: return repair_systematic_group(plan, phase1, p);
    case PatternKind::MixedPair: return repair_mixed_pair(plan, phase1, p);
    }
    fail(ErrorCode::InvalidArgument, "unknown pattern kind");
}

Matrix mixed_matrix(const CodeParams& p, int a, int b)
{
    require_mixed_indices(p, a, b);
    return mixed_system(primal_view(p), static_cast<std::size_t>(a - 1), static_cast<std::size_t>(b - 1), p.field);
}

MixedMatrixAnalysis analyze_mixed_matrix(const CodeParams& p, int a, int b)
{
    require_mixed_indices(p, a, b);
    const GaloisField& f = p.gf();
    const CodeView view = primal_view(p);
    const auto ai = static_cast<std::size_t>(a - 1);
    const auto bi = static_cast<std::size_t>(b - 1);
    const auto k = static_cast<std::size_t>(p.k);
    const Symbol delta = view.delta;
    const Symbol eps = view.epsilon;
    const Symbol p_ab = p.P(ai, bi);
    const Symbol q_ba = p.Q(bi, ai);
    const bool basis_ok = rank(p.U) == k;

    MixedMatrixAnalysis out;
    out.determinant_nonzero = determinant(mixed_matrix(p, a, b)) != 0;
    out.corner = mixed_corner(view, ai, bi, f);

    if (out.corner == 0) {
        // Row reduction leaves delta p_ab q_ba u_b^t on top of delta u_j^t, j != b.
        out.factored_nonsingular = basis_ok && f.mul(delta, f.mul(p_ab, q_ba)) != 0;
        return out;
    }
    if (delta == 0) {
        // A = diag(corner, delta I) is singular; decide on the first factor itself.
        Matrix first(p.field, k, k);
        first(0, 0) = f.mul(eps, f.sub(1, f.mul(p_ab, q_ba)));
        std::size_t row = 1;
        for (std::size_t j = 0; j < k; ++j) {
            if (j == bi) {
                continue;
            }
            first(0, row) = f.mul(delta, f.mul(p_ab, p.Q(j, ai)));
            first(row, 0) = f.mul(eps, f.mul(q_ba, p.P(ai, j)));
            std::size_t col = 1;
            for (std::size_t l = 0; l < k; ++l) {
                if (l == bi) {
                    continue;
                }
                first(row, col) = f.mul(eps, f.mul(p.P(ai, j), p.Q(l, ai)));
                ++col;
            }
            ++row;
        }
        out.factored_nonsingular = basis_ok && determinant(first) != 0;
        return out;
    }

    // 1 + h^t A^-1 g with A = diag(corner, delta I), g = [delta p_ab; eps p_a,(j != b)],
    // h = [q_ba; q_(j != b),a].
    Symbol scalar = f.add(1, f.mul(q_ba, f.div(f.mul(delta, p_ab), out.corner)));
    const Symbol eps_over_delta = f.div(eps, delta);
    for (std::size_t j = 0; j < k; ++j) {
        if (j != bi) {
            scalar = f.add(scalar, f.mul(p.Q(j, ai), f.mul(eps_over_delta, p.P(ai, j))));
        }
    }
    out.sherman_morrison = scalar;

    const Symbol gap = f.sub(1, f.mul(p_ab, q_ba));
    out.sherman_morrison_closed_form =
        f.div(f.mul(f.mul(eps, f.add(eps, delta)), f.mul(gap, gap)), f.mul(delta, out.corner));
    out.factored_nonsingular = basis_ok && scalar != 0;
    return out;
}

bool check_mixed_matrix(const CodeParams& p, int a, int b)
{
    const MixedMatrixAnalysis analysis = analyze_mixed_matrix(p, a, b);
    return analysis.determinant_nonzero && analysis.factored_nonsingular;
}

} // namespace msr
