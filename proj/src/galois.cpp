#include "msr/galois.hpp"

#include <array>
#include <cstdio>
#include <numeric>

namespace msr {

namespace {

unsigned poly_degree(std::uint32_t p)
{
    unsigned d = 0;
    while (p >>= 1) {
        ++d;
    }
    return d;
}

// Remainder of a divided by b over GF(2)[x].
std::uint32_t poly_rem(std::uint32_t a, std::uint32_t b)
{
    const unsigned db = poly_degree(b);
    while (a != 0 && poly_degree(a) >= db) {
        a ^= b << (poly_degree(a) - db);
    }
    return a;
}

constexpr std::array<std::uint32_t, 17> kDefaultPolys = {
    0,      0x3,    0x7,    0xB,    0x13,   0x25,   0x43,   0x89,  0x11B,
    0x211,  0x409,  0x805,  0x1053, 0x201B, 0x4443, 0x8003, 0x1100B,
};

} // namespace

bool is_irreducible(std::uint32_t poly, unsigned degree)
{
    if (degree == 0 || degree > 16 || poly_degree(poly) != degree || (poly >> degree) != 1) {
        return false;
    }
    // Any reducible polynomial has a factor of degree <= degree / 2.
    for (std::uint32_t divisor = 2; poly_degree(divisor) <= degree / 2; ++divisor) {
        if (poly_rem(poly, divisor) == 0) {
            return false;
        }
    }
    return true;
}

std::uint32_t poly_mulmod(std::uint32_t a, std::uint32_t b, std::uint32_t poly, unsigned degree)
{
    std::uint32_t result = 0;
    while (b != 0) {
        if (b & 1u) {
            result ^= a;
        }
        b >>= 1;
        a <<= 1;
        if (a & (1u << degree)) {
            a ^= poly;
        }
    }
    return result;
}

GaloisField::GaloisField(unsigned degree, std::uint32_t poly)
    : degree_(degree), poly_(poly), order_(1u << degree)
{
    if (degree < 1 || degree > 16) {
        fail(ErrorCode::InvalidArgument, "field degree must be in 1..16, got " + std::to_string(degree));
    }
    if (!is_irreducible(poly, degree)) {
        fail(ErrorCode::InvalidArgument,
             "reduction polynomial " + std::to_string(poly) + " is not irreducible of degree " +
                 std::to_string(degree));
    }

    const std::uint32_t group = order_ - 1;
    exp_.assign(2 * static_cast<std::size_t>(group), 0);
    log_.assign(order_, 0);

    // Find an element whose powers cover the whole multiplicative group.
    for (std::uint32_t candidate = (order_ == 2 ? 1 : 2); candidate < order_; ++candidate) {
        std::uint32_t x = 1;
        std::uint32_t period = 0;
        do {
            x = poly_mulmod(x, candidate, poly_, degree_);
            ++period;
        } while (x != 1);
        if (period == group) {
            generator_ = static_cast<Symbol>(candidate);
            break;
        }
    }

    std::uint32_t x = 1;
    for (std::uint32_t i = 0; i < group; ++i) {
        exp_[i] = static_cast<Symbol>(x);
        exp_[i + group] = static_cast<Symbol>(x);
        log_[x] = i;
        x = poly_mulmod(x, generator_, poly_, degree_);
    }
}

FieldRef GaloisField::make(unsigned degree, std::uint32_t reduction_poly)
{
    return std::make_shared<const GaloisField>(degree, reduction_poly);
}

std::uint32_t GaloisField::default_polynomial(unsigned degree)
{
    if (degree < 1 || degree > 16) {
        fail(ErrorCode::InvalidArgument, "field degree must be in 1..16, got " + std::to_string(degree));
    }
    return kDefaultPolys[degree];
}

FieldRef GaloisField::make_default(unsigned degree)
{
    return make(degree, default_polynomial(degree));
}

Symbol GaloisField::inv(Symbol a) const
{
    if (a == 0) {
        fail(ErrorCode::DivisionByZero, "zero has no inverse");
    }
    const std::uint32_t group = order_ - 1;
    return exp_[(group - log_[a]) % group];
}

Symbol GaloisField::div(Symbol a, Symbol b) const
{
    if (b == 0) {
        fail(ErrorCode::DivisionByZero, "division by zero");
    }
    return mul(a, inv(b));
}

Symbol GaloisField::pow(Symbol a, std::uint64_t e) const
{
    if (e == 0) {
        return 1;
    }
    if (a == 0) {
        return 0;
    }
    const std::uint64_t group = order_ - 1;
    return exp_[(static_cast<std::uint64_t>(log_[a]) * (e % group)) % group];
}

std::string GaloisField::format(Symbol value) const
{
    char buf[16];
    if (degree_ <= 8) {
        std::snprintf(buf, sizeof buf, "0x%02x", static_cast<unsigned>(value));
    } else {
        std::snprintf(buf, sizeof buf, "0x%04x", static_cast<unsigned>(value));
    }
    return buf;
}

void require_same_field(const GaloisField& a, const GaloisField& b)
{
    if (&a != &b && !a.same_as(b)) {
        fail(ErrorCode::FieldMismatch, "operands belong to different fields");
    }
}

Element::Element(FieldRef field, std::uint32_t value) : field_(std::move(field)), value_(0)
{
    if (!field_) {
        fail(ErrorCode::InvalidArgument, "element without a field");
    }
    if (!field_->contains(value)) {
        fail(ErrorCode::InvalidArgument, "value " + std::to_string(value) + " outside GF(2^" +
                                             std::to_string(field_->degree()) + ")");
    }
    value_ = static_cast<Symbol>(value);
}

Element Element::inverse() const
{
    return Element(field_, field_->inv(value_));
}

Element field_arith(const Element& a, const Element& b, FieldOp op)
{
    require_same_field(*a.field(), *b.field());
    const GaloisField& f = *a.field();
    switch (op) {
    case FieldOp::Add: return Element(a.field(), f.add(a.value(), b.value()));
    case FieldOp::Sub: return Element(a.field(), f.sub(a.value(), b.value()));
    case FieldOp::Mul: return Element(a.field(), f.mul(a.value(), b.value()));
    case FieldOp::Div: return Element(a.field(), f.div(a.value(), b.value()));
    }
    fail(ErrorCode::InvalidArgument, "unknown field operation");
}

Element operator+(const Element& a, const Element& b) { return field_arith(a, b, FieldOp::Add); }
Element operator-(const Element& a, const Element& b) { return field_arith(a, b, FieldOp::Sub); }
Element operator*(const Element& a, const Element& b) { return field_arith(a, b, FieldOp::Mul); }
Element operator/(const Element& a, const Element& b) { return field_arith(a, b, FieldOp::Div); }

bool operator==(const Element& a, const Element& b)
{
    return a.field()->same_as(*b.field()) && a.value() == b.value();
}

std::vector<Symbol> sample_distinct(const GaloisField& field, std::size_t count, Rng& rng)
{
    if (count > field.order()) {
        fail(ErrorCode::NotEnoughElements, "cannot draw " + std::to_string(count) +
                                               " distinct elements from a field of order " +
                                               std::to_string(field.order()));
    }
    // Partial Fisher-Yates over the full value range.
    std::vector<Symbol> pool(field.order());
    std::iota(pool.begin(), pool.end(), Symbol{0});
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(count);
    return pool;
}

std::vector<Symbol> sample_distinct(const GaloisField& field, std::size_t count, std::uint64_t seed)
{
    Rng rng(seed);
    return sample_distinct(field, count, rng);
}

Symbol sample_nonzero(const GaloisField& field, Rng& rng)
{
    return static_cast<Symbol>(1 + rng.below(field.order() - 1));
}

} // namespace msr
