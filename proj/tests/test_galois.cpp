#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <numeric>

#include "msr/galois.hpp"
#include "support.hpp"

using namespace msr;
using msr::test::gf8;
using msr::test::gf16;

namespace {

// Shift-and-add multiply with reduction, written independently of the library.
std::uint32_t slow_mul(std::uint32_t a, std::uint32_t b, std::uint32_t poly, unsigned m)
{
    std::uint32_t acc = 0;
    while (b) {
        if (b & 1) {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if (a & (1u << m)) {
            a ^= poly;
        }
    }
    return acc;
}

struct LogTables {
    std::vector<std::uint32_t> exp;
    std::vector<int> log;
};

// Antilog table by repeated multiplication with g; empty if g is not primitive.
LogTables tables_from(std::uint32_t g, std::uint32_t poly, unsigned m)
{
    const std::uint32_t q = 1u << m;
    LogTables t{std::vector<std::uint32_t>(q - 1), std::vector<int>(q, -1)};
    std::uint32_t x = 1;
    for (std::uint32_t i = 0; i + 1 < q; ++i) {
        if (t.log[x] >= 0) {
            return {};
        }
        t.exp[i] = x;
        t.log[x] = static_cast<int>(i);
        x = slow_mul(x, g, poly, m);
    }
    return t;
}

LogTables oracle(std::uint32_t poly, unsigned m)
{
    for (std::uint32_t g = 2; g < (1u << m); ++g) {
        auto t = tables_from(g, poly, m);
        if (!t.exp.empty()) {
            return t;
        }
    }
    return tables_from(1, poly, m);
}

std::uint32_t oracle_mul(const LogTables& t, std::uint32_t a, std::uint32_t b)
{
    if (a == 0 || b == 0) {
        return 0;
    }
    const auto n = t.exp.size();
    return t.exp[(static_cast<std::size_t>(t.log[a]) + static_cast<std::size_t>(t.log[b])) % n];
}

} // namespace

TEST_CASE("addition is xor")
{
    const Element a(gf8(), 0x57), b(gf8(), 0x83);
    CHECK((a + b).value() == 0xD4);
    CHECK((a - b).value() == 0xD4);
    CHECK(field_arith(a, b, FieldOp::Add).value() == 0xD4);
}

TEST_CASE("multiplication matches the log-table oracle")
{
    const LogTables t = oracle(0x11B, 8);
    REQUIRE(t.exp.size() == 255);
    CHECK(oracle_mul(t, 0x57, 0x83) == 0xC1);
    CHECK(gf8()->mul(0x57, 0x83) == 0xC1);
    CHECK(field_arith(Element(gf8(), 0x57), Element(gf8(), 0x83), FieldOp::Mul).value() == 0xC1);

    for (std::uint32_t a = 0; a < 256; ++a) {
        for (std::uint32_t b = 0; b < 256; ++b) {
            REQUIRE(gf8()->mul(static_cast<Symbol>(a), static_cast<Symbol>(b)) == oracle_mul(t, a, b));
        }
    }
}

TEST_CASE("every default field agrees with the oracle")
{
    Rng rng(5);
    for (unsigned m = 1; m <= 16; ++m) {
        CAPTURE(m);
        const FieldRef f = GaloisField::make_default(m);
        const LogTables t = oracle(f->polynomial(), m);
        REQUIRE(t.exp.size() == f->order() - 1);
        for (int i = 0; i < 2000; ++i) {
            const auto a = static_cast<Symbol>(rng.below(f->order()));
            const auto b = static_cast<Symbol>(rng.below(f->order()));
            REQUIRE(f->mul(a, b) == oracle_mul(t, a, b));
            REQUIRE(poly_mulmod(a, b, f->polynomial(), m) == slow_mul(a, b, f->polynomial(), m));
        }
    }
}

TEST_CASE("0x11B is irreducible but x is not a generator")
{
    CHECK(is_irreducible(0x11B, 8));
    CHECK_FALSE(is_irreducible(0x11A, 8));
    CHECK_FALSE(is_irreducible(0x105, 8)); // x^8 + x^2 + 1 = (x^4 + x + 1)^2
    CHECK(tables_from(2, 0x11B, 8).exp.empty());
    CHECK(gf8()->generator() != 2);
    CHECK_FALSE(tables_from(gf8()->generator(), 0x11B, 8).exp.empty());
    CHECK(GaloisField::default_polynomial(16) == 0x1100B);
}

TEST_CASE("field construction rejects bad specs")
{
    CHECK_THROWS_AS(GaloisField::make(8, 0x11A), Error);
    CHECK_THROWS_AS(GaloisField::make(0, 0x1), Error);
    CHECK_THROWS_AS(GaloisField::make(17, 0x2000B), Error);
    CHECK_THROWS_AS(GaloisField::make(8, 0x13), Error);
}

TEST_CASE("multiplicative identity")
{
    Rng rng(1);
    for (int i = 0; i < 100; ++i) {
        const Element x(gf8(), static_cast<std::uint32_t>(rng.below(256)));
        CHECK(x * Element(gf8(), 1) == x);
    }
}

TEST_CASE("inverse")
{
    CHECK(Element(gf8(), 1).inverse().value() == 1);

    Rng rng(2);
    for (int i = 0; i < 100; ++i) {
        const Element x(gf8(), static_cast<std::uint32_t>(1 + rng.below(255)));
        CHECK(x.inverse().inverse() == x);
    }

    for (unsigned m = 1; m <= 8; ++m) {
        const FieldRef f = GaloisField::make_default(m);
        for (std::uint32_t x = 1; x < f->order(); ++x) {
            REQUIRE(f->mul(static_cast<Symbol>(x), f->inv(static_cast<Symbol>(x))) == 1);
        }
    }

    try {
        (void)Element(gf8(), 0).inverse();
        FAIL("expected DivisionByZero");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DivisionByZero);
    }
    try {
        (void)(Element(gf8(), 3) / Element(gf8(), 0));
        FAIL("expected DivisionByZero");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DivisionByZero);
    }
}

TEST_CASE("operands from different fields never mix")
{
    const FieldRef f4 = GaloisField::make_default(4);
    try {
        (void)(Element(gf8(), 3) * Element(f4, 3));
        FAIL("expected FieldMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::FieldMismatch);
    }
    CHECK_THROWS_AS(Element(f4, 16), Error);
}

TEST_CASE("division and powers")
{
    Rng rng(3);
    const FieldRef f = gf8();
    for (int i = 0; i < 200; ++i) {
        const auto a = static_cast<Symbol>(rng.below(256));
        const auto b = static_cast<Symbol>(1 + rng.below(255));
        CHECK(f->mul(f->div(a, b), b) == a);
        CHECK(field_arith(Element(f, a), Element(f, b), FieldOp::Div) == Element(f, f->div(a, b)));
    }
    CHECK(f->pow(0x03, 0) == 1);
    CHECK(f->pow(0, 5) == 0);
    Symbol acc = 1;
    for (std::uint64_t e = 0; e < 300; ++e) {
        REQUIRE(f->pow(0x57, e) == acc);
        acc = f->mul(acc, 0x57);
    }
}

TEST_CASE("field axioms on random triples")
{
    for (unsigned m : {2u, 5u, 8u, 13u, 16u}) {
        CAPTURE(m);
        const FieldRef f = GaloisField::make_default(m);
        Rng rng(m);
        for (int i = 0; i < 1000; ++i) {
            const Element a(f, static_cast<std::uint32_t>(rng.below(f->order())));
            const Element b(f, static_cast<std::uint32_t>(rng.below(f->order())));
            const Element c(f, static_cast<std::uint32_t>(rng.below(f->order())));
            REQUIRE((a + b) + c == a + (b + c));
            REQUIRE((a * b) * c == a * (b * c));
            REQUIRE(a * (b + c) == a * b + a * c);
            REQUIRE(a * b == b * a);
            REQUIRE((a + a).is_zero());
        }
    }
}

TEST_CASE("sample_distinct")
{
    std::vector<Symbol> all = sample_distinct(*gf8(), 256, 9);
    std::sort(all.begin(), all.end());
    std::vector<Symbol> expected(256);
    std::iota(expected.begin(), expected.end(), Symbol{0});
    CHECK(all == expected);

    CHECK(sample_distinct(*gf8(), 6, 42) == sample_distinct(*gf8(), 6, 42));
    CHECK(sample_distinct(*gf8(), 6, 42) != sample_distinct(*gf8(), 6, 43));

    const FieldRef f2 = GaloisField::make_default(1);
    try {
        (void)sample_distinct(*f2, 3, 1);
        FAIL("expected NotEnoughElements");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotEnoughElements);
    }

    Rng rng(4);
    for (int i = 0; i < 50; ++i) {
        auto s = sample_distinct(*gf16(), 20, rng);
        std::sort(s.begin(), s.end());
        REQUIRE(std::adjacent_find(s.begin(), s.end()) == s.end());
    }
}

TEST_CASE("symbol formatting")
{
    CHECK(gf8()->format(0x0A) == "0x0a");
    CHECK(gf16()->format(0x0A) == "0x000a");
}
