#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "msr/error.hpp"
#include "msr/rng.hpp"

namespace msr {

/// Raw symbol value. Always interpreted relative to some GaloisField.
using Symbol = std::uint16_t;

class GaloisField;
using FieldRef = std::shared_ptr<const GaloisField>;

/// True iff `poly` has degree exactly `degree` and no factor over GF(2) of
/// degree 1..degree/2 (exhaustive trial division).
bool is_irreducible(std::uint32_t poly, unsigned degree);

/// Carry-less product of a and b reduced modulo `poly` (bitwise shift-reduce).
std::uint32_t poly_mulmod(std::uint32_t a, std::uint32_t b, std::uint32_t poly, unsigned degree);

/// GF(2^m) for 1 <= m <= 16 with an explicit reduction polynomial.
/// Multiplication goes through log/antilog tables built from a generator
/// found by search, so any irreducible polynomial works, primitive or not.
class GaloisField {
public:
    static FieldRef make(unsigned degree, std::uint32_t reduction_poly);
    /// Field with the library's standard polynomial for `degree`
    /// (0x11B for m = 8, 0x1100B for m = 16).
    static FieldRef make_default(unsigned degree);
    static std::uint32_t default_polynomial(unsigned degree);

    unsigned degree() const { return degree_; }
    std::uint32_t polynomial() const { return poly_; }
    std::uint32_t order() const { return order_; }
    Symbol generator() const { return generator_; }

    bool same_as(const GaloisField& other) const
    {
        return degree_ == other.degree_ && poly_ == other.poly_;
    }

    bool contains(std::uint32_t value) const { return value < order_; }

    Symbol add(Symbol a, Symbol b) const { return static_cast<Symbol>(a ^ b); }
    Symbol sub(Symbol a, Symbol b) const { return static_cast<Symbol>(a ^ b); }

    Symbol mul(Symbol a, Symbol b) const
    {
        if (a == 0 || b == 0) {
            return 0;
        }
        return exp_[log_[a] + log_[b]];
    }

    Symbol div(Symbol a, Symbol b) const;
    Symbol inv(Symbol a) const;
    Symbol pow(Symbol a, std::uint64_t e) const;

    std::string format(Symbol value) const;

    GaloisField(unsigned degree, std::uint32_t poly);

private:
    unsigned degree_;
    std::uint32_t poly_;
    std::uint32_t order_;
    Symbol generator_ = 1;
    // exp_ is doubled so mul needs no modular reduction of the log sum.
    std::vector<Symbol> exp_;
    std::vector<std::uint32_t> log_;
};

/// Field element carrying its field. Arithmetic between elements of
/// different fields throws FieldMismatch.
class Element {
public:
    Element(FieldRef field, std::uint32_t value);

    Symbol value() const { return value_; }
    const FieldRef& field() const { return field_; }
    bool is_zero() const { return value_ == 0; }

    Element inverse() const;

    friend Element operator+(const Element& a, const Element& b);
    friend Element operator-(const Element& a, const Element& b);
    friend Element operator*(const Element& a, const Element& b);
    friend Element operator/(const Element& a, const Element& b);
    friend bool operator==(const Element& a, const Element& b);

private:
    FieldRef field_;
    Symbol value_;
};

enum class FieldOp { Add, Sub, Mul, Div };

Element field_arith(const Element& a, const Element& b, FieldOp op);

void require_same_field(const GaloisField& a, const GaloisField& b);

/// `count` pairwise-distinct field values, drawn without replacement.
std::vector<Symbol> sample_distinct(const GaloisField& field, std::size_t count, Rng& rng);
std::vector<Symbol> sample_distinct(const GaloisField& field, std::size_t count, std::uint64_t seed);

/// Uniform nonzero element.
Symbol sample_nonzero(const GaloisField& field, Rng& rng);

} // namespace msr
