#include "msr/params.hpp"

#include <sstream>
#include <tuple>

namespace msr {

namespace {

Element zero_of(const FieldRef& f) { return Element(f, 0); }

Element square(const Element& x) { return x * x; }

Matrix random_nonsingular(const FieldRef& field, int k, Rng& rng)
{
    const auto n = static_cast<std::size_t>(k);
    for (;;) {
        Matrix m(field, n, n);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) {
                m(r, c) = static_cast<Symbol>(rng.below(field->order()));
            }
        }
        if (rank(m) == n) {
            return m;
        }
    }
}

std::pair<Element, Element> draw_constants(const FieldRef& field, Rng& rng)
{
    const Element delta(field, sample_nonzero(*field, rng));
    for (;;) {
        Element epsilon(field, sample_nonzero(*field, rng));
        if (!(square(delta) == square(epsilon))) {
            return {delta, epsilon};
        }
    }
}

bool is_identity(const Matrix& m)
{
    return m.is_square() && m == Matrix::identity(m.field(), m.rows());
}

std::string entry_name(char name, std::size_t i, std::size_t j)
{
    std::ostringstream os;
    os << name << "_" << i << j;
    return os.str();
}

} // namespace

std::pair<Element, Element> solve_dual_constants(const Element& delta, const Element& epsilon)
{
    require_same_field(*delta.field(), *epsilon.field());
    if (delta.is_zero() || epsilon.is_zero()) {
        fail(ErrorCode::DegenerateConstants, "delta and epsilon must be nonzero");
    }
    // [delta eps; eps delta] [delta'; eps'] = [1; 0] by Cramer's rule.
    const Element det = square(delta) - square(epsilon);
    if (det.is_zero()) {
        fail(ErrorCode::DegenerateConstants, "delta^2 == epsilon^2, the dual constants are undetermined");
    }
    const Element zero = zero_of(delta.field());
    return {delta / det, (zero - epsilon) / det};
}

CodeParams derive_params(const Matrix& V, const Matrix& P, const Element& delta, const Element& epsilon,
                         std::uint64_t seed)
{
    if (!V.is_square() || !P.is_square() || V.rows() != P.rows()) {
        fail(ErrorCode::DimensionMismatch, "V and P must be square of the same order");
    }
    require_same_field(V.gf(), P.gf());
    require_same_field(V.gf(), *delta.field());
    const auto [delta_prime, epsilon_prime] = solve_dual_constants(delta, epsilon);
    Matrix U = V * P;
    Matrix Q = invert(P);
    Matrix U_hat = invert(U.transpose());
    Matrix V_hat = invert(V.transpose());
    return CodeParams{
        .k = static_cast<int>(V.rows()),
        .field = V.field(),
        .cauchy = std::nullopt,
        .V = V,
        .P = P,
        .Q = std::move(Q),
        .U = std::move(U),
        .U_hat = std::move(U_hat),
        .V_hat = std::move(V_hat),
        .delta = delta,
        .epsilon = epsilon,
        .delta_prime = delta_prime,
        .epsilon_prime = epsilon_prime,
        .seed = seed,
    };
}

CodeParams assemble_params(const CauchySpec& spec, const Matrix& V, const Element& delta,
                           const Element& epsilon, std::uint64_t seed)
{
    CodeParams p = derive_params(V, cauchy(spec), delta, epsilon, seed);
    p.Q = cauchy_inverse(spec);
    p.cauchy = spec;
    return p;
}

CodeParams generate(int k, const FieldRef& field, std::uint64_t seed, GenerateOptions options)
{
    if (k < kMinK || k > kMaxK) {
        fail(ErrorCode::InvalidArgument, "k must be in " + std::to_string(kMinK) + ".." +
                                             std::to_string(kMaxK) + ", got " + std::to_string(k));
    }
    if (!field) {
        fail(ErrorCode::InvalidArgument, "no field given");
    }
    if (field->order() < static_cast<std::uint32_t>(2 * k + 2)) {
        fail(ErrorCode::InvalidArgument, "field of order " + std::to_string(field->order()) +
                                             " is too small for k = " + std::to_string(k));
    }

    Rng rng(seed);
    const Matrix V = options.random_v ? random_nonsingular(field, k, rng)
                                      : Matrix::identity(field, static_cast<std::size_t>(k));
    auto [delta, epsilon] = draw_constants(field, rng);

    // Failures almost always come from the Cauchy generators (p_ij q_ji = 1),
    // so those are redrawn every attempt and the constants only occasionally.
    constexpr int kConstantsPeriod = 16;
    for (int attempt = 0; attempt < options.max_retries; ++attempt) {
        if (attempt > 0 && attempt % kConstantsPeriod == 0) {
            std::tie(delta, epsilon) = draw_constants(field, rng);
        }
        const auto gens = sample_distinct(*field, static_cast<std::size_t>(2 * k), rng);
        CauchySpec spec{field, {gens.begin(), gens.begin() + k}, {gens.begin() + k, gens.end()}};
        CodeParams candidate = assemble_params(spec, V, delta, epsilon, seed);
        if (validate(candidate).empty()) {
            return candidate;
        }
    }
    fail(ErrorCode::GenerationExhausted, "no valid parameters for k = " + std::to_string(k) +
                                             " over GF(2^" + std::to_string(field->degree()) +
                                             ") after " + std::to_string(options.max_retries) +
                                             " candidates");
}

CodeParams generate_with_escalation(int k, std::uint64_t seed, GenerateOptions options)
{
    try {
        return generate(k, GaloisField::make_default(8), seed, options);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::GenerationExhausted) {
            throw;
        }
    }
    return generate(k, GaloisField::make_default(16), seed, options);
}

std::string_view to_string(ViolationKind kind)
{
    switch (kind) {
    case ViolationKind::Shape: return "Shape";
    case ViolationKind::SingularV: return "SingularV";
    case ViolationKind::BasisRelation: return "BasisRelation";
    case ViolationKind::InverseMismatch: return "InverseMismatch";
    case ViolationKind::DualBasis: return "DualBasis";
    case ViolationKind::SuperRegular: return "SuperRegular";
    case ViolationKind::ConstantEquation: return "ConstantEquation";
    case ViolationKind::ZeroConstant: return "ZeroConstant";
    case ViolationKind::DegenerateConstants: return "DegenerateConstants";
    case ViolationKind::ProductOne: return "ProductOne";
    }
    return "Unknown";
}

std::vector<Violation> validate(const CodeParams& p)
{
    std::vector<Violation> out;
    const auto k = static_cast<std::size_t>(p.k);

    if (!p.field || p.k < 1) {
        out.push_back({ViolationKind::Shape, {}, "missing field or k < 1"});
        return out;
    }
    for (const Matrix* m : {&p.V, &p.P, &p.Q, &p.U, &p.U_hat, &p.V_hat}) {
        if (m->rows() != k || m->cols() != k || !m->gf().same_as(*p.field)) {
            out.push_back({ViolationKind::Shape, {}, "a code matrix is not k x k over the code field"});
            return out;
        }
    }
    for (const Element* e : {&p.delta, &p.epsilon, &p.delta_prime, &p.epsilon_prime}) {
        if (!e->field()->same_as(*p.field)) {
            out.push_back({ViolationKind::Shape, {}, "a constant is not over the code field"});
            return out;
        }
    }

    const Matrix I = Matrix::identity(p.field, k);
    if (rank(p.V) != k) {
        out.push_back({ViolationKind::SingularV, {}, "V is singular"});
    }
    if (!(p.U == p.V * p.P)) {
        out.push_back({ViolationKind::BasisRelation, {}, "U != V P"});
    }
    if (!(p.V == p.U * p.Q)) {
        out.push_back({ViolationKind::BasisRelation, {}, "V != U Q"});
    }
    if (!is_identity(p.Q * p.P) || !is_identity(p.P * p.Q)) {
        out.push_back({ViolationKind::InverseMismatch, {}, "Q is not the inverse of P"});
    }
    if (!(p.U.transpose() * p.U_hat == I)) {
        out.push_back({ViolationKind::DualBasis, {}, "U_hat != (U^t)^-1"});
    }
    if (!(p.V.transpose() * p.V_hat == I)) {
        out.push_back({ViolationKind::DualBasis, {}, "V_hat != (V^t)^-1"});
    }
    if (k <= kSuperRegularMaxOrder) {
        if (const auto minor = find_singular_minor(p.P)) {
            Violation v{ViolationKind::SuperRegular, {}, ""};
            std::ostringstream os;
            os << "singular " << minor->rows.size() << "x" << minor->rows.size() << " minor of P, rows";
            for (auto r : minor->rows) {
                v.indices.push_back(r + 1);
                os << ' ' << r + 1;
            }
            os << ", cols";
            for (auto c : minor->cols) {
                v.indices.push_back(c + 1);
                os << ' ' << c + 1;
            }
            v.detail = os.str();
            out.push_back(std::move(v));
        }
    } else {
        out.push_back({ViolationKind::SuperRegular, {}, "P too large for exhaustive minor check"});
    }

    const Element one(p.field, 1);
    const bool any_zero = p.delta.is_zero() || p.epsilon.is_zero() || p.delta_prime.is_zero() ||
                          p.epsilon_prime.is_zero();
    if (any_zero) {
        out.push_back({ViolationKind::ZeroConstant, {}, "delta, epsilon, delta', epsilon' must all be nonzero"});
    }
    if (square(p.delta) == square(p.epsilon)) {
        out.push_back({ViolationKind::DegenerateConstants, {}, "delta^2 == epsilon^2"});
    }
    if (!(p.delta * p.delta_prime + p.epsilon * p.epsilon_prime == one)) {
        out.push_back({ViolationKind::ConstantEquation, {}, "delta delta' + epsilon epsilon' != 1"});
    }
    if (!(p.epsilon * p.delta_prime + p.delta * p.epsilon_prime).is_zero()) {
        out.push_back({ViolationKind::ConstantEquation, {}, "epsilon delta' + delta epsilon' != 0"});
    }

    const GaloisField& f = *p.field;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            if (f.mul(p.P(i, j), p.Q(j, i)) == 1) {
                out.push_back({ViolationKind::ProductOne,
                               {i + 1, j + 1},
                               entry_name('p', i + 1, j + 1) + " * " + entry_name('q', j + 1, i + 1) + " == 1"});
            }
        }
    }
    return out;
}

} // namespace msr
