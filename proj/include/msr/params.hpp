#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "msr/galois.hpp"
#include "msr/matrix.hpp"

namespace msr {

inline constexpr int kMinK = 2;
inline constexpr int kMaxK = 8;

/// A complete parameter set for the n = 2k code.
///
/// Columns of U and V are the two bases (u_i, v_i); P and Q = P^-1 are the
/// change-of-basis matrices with U = V P. U_hat and V_hat hold the dual bases
/// (U^t)^-1 and (V^t)^-1. Systematic nodes 1..k store the columns of X,
/// parity nodes k+1..2k the columns of
///     Y = delta * V_hat X^t U + epsilon * X P,
/// and X = delta' * U_hat Y^t V + epsilon' * Y Q inverts it.
struct CodeParams {
    int k = 0;
    FieldRef field;
    std::optional<CauchySpec> cauchy; // provenance of P; absent for hand-built P
    Matrix V;
    Matrix P;
    Matrix Q;
    Matrix U;
    Matrix U_hat;
    Matrix V_hat;
    Element delta;
    Element epsilon;
    Element delta_prime;
    Element epsilon_prime;
    std::uint64_t seed = 0;

    int n() const { return 2 * k; }
    int block_symbols() const { return k * k; }
    const GaloisField& gf() const { return *field; }
};

/// delta' and epsilon' from delta * delta' + epsilon * epsilon' = 1 and
/// epsilon * delta' + delta * epsilon' = 0. Throws DegenerateConstants when
/// delta^2 = epsilon^2.
std::pair<Element, Element> solve_dual_constants(const Element& delta, const Element& epsilon);

/// Builds every derived matrix and constant from (V, P, delta, epsilon).
/// Q, U_hat, V_hat come from Gauss-Jordan. No validation is performed.
CodeParams derive_params(const Matrix& V, const Matrix& P, const Element& delta, const Element& epsilon,
                         std::uint64_t seed = 0);

/// As derive_params but with P = cauchy(spec) and Q from the closed-form
/// Cauchy inverse.
CodeParams assemble_params(const CauchySpec& spec, const Matrix& V, const Element& delta,
                           const Element& epsilon, std::uint64_t seed = 0);

struct GenerateOptions {
    int max_retries = 1000;
    bool random_v = false;
};

/// Randomized generate-and-validate. Deterministic for fixed (k, field, seed, options).
/// Throws GenerationExhausted when no candidate passes within max_retries.
CodeParams generate(int k, const FieldRef& field, std::uint64_t seed, GenerateOptions options = {});

/// generate() over GF(2^8), escalating to GF(2^16) if GF(2^8) is exhausted.
CodeParams generate_with_escalation(int k, std::uint64_t seed, GenerateOptions options = {});

enum class ViolationKind {
    Shape,            // matrix dimensions or fields disagree with k
    SingularV,        // V not invertible
    BasisRelation,    // U != V P or V != U Q
    InverseMismatch,  // Q P != I
    DualBasis,        // U^t U_hat != I or V^t V_hat != I
    SuperRegular,     // P has a singular square submatrix
    ConstantEquation, // delta delta' + eps eps' != 1 or eps delta' + delta eps' != 0
    ZeroConstant,     // one of delta, epsilon, delta', epsilon' is zero
    DegenerateConstants, // delta^2 == epsilon^2
    ProductOne,       // p_ij q_ji == 1
};

std::string_view to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    /// 1-based indices of the offending entries. For ProductOne: {i, j}.
    /// For SuperRegular: the rows of the singular minor then its columns.
    std::vector<std::size_t> indices;
    std::string detail;
};

/// Checks every hypothesis the repair protocols depend on. Empty iff all hold.
std::vector<Violation> validate(const CodeParams& p);

} // namespace msr
