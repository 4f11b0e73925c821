#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "msr/codec.hpp"
#include "support.hpp"

using namespace msr;
using namespace msr::test;

namespace {

ErrorCode code_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::InvalidArgument;
}

std::vector<Element> col(const Matrix& m, std::size_t j)
{
    std::vector<Element> out;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out.push_back(m.at(r, j));
    }
    return out;
}

Element inner(const std::vector<Element>& a, const std::vector<Element>& b)
{
    Element acc(a[0].field(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc = acc + a[i] * b[i];
    }
    return acc;
}

// Column form of the encoder: y_j = delta sum_i vhat_i (u_j^t x_i) + eps z_j,
// z_j = sum_l p_lj x_l. Written with element arithmetic only.
std::vector<Element> parity_column(const Matrix& X, const CodeParams& p, std::size_t j)
{
    const auto k = static_cast<std::size_t>(p.k);
    std::vector<Element> y(k, Element(p.field, 0));
    const auto uj = col(p.U, j);
    for (std::size_t i = 0; i < k; ++i) {
        const Element s = p.delta * inner(uj, col(X, i));
        const auto vhat = col(p.V_hat, i);
        for (std::size_t r = 0; r < k; ++r) {
            y[r] = y[r] + s * vhat[r];
        }
    }
    for (std::size_t l = 0; l < k; ++l) {
        const auto xl = col(X, l);
        for (std::size_t r = 0; r < k; ++r) {
            y[r] = y[r] + p.epsilon * p.P.at(l, j) * xl[r];
        }
    }
    return y;
}

// x_j = delta' sum_i uhat_i (v_j^t y_i) + eps' z'_j, z'_j = sum_l q_lj y_l.
std::vector<Element> source_column(const Matrix& Y, const CodeParams& p, std::size_t j)
{
    const auto k = static_cast<std::size_t>(p.k);
    std::vector<Element> x(k, Element(p.field, 0));
    const auto vj = col(p.V, j);
    for (std::size_t i = 0; i < k; ++i) {
        const Element s = p.delta_prime * inner(vj, col(Y, i));
        const auto uhat = col(p.U_hat, i);
        for (std::size_t r = 0; r < k; ++r) {
            x[r] = x[r] + s * uhat[r];
        }
    }
    for (std::size_t l = 0; l < k; ++l) {
        const auto yl = col(Y, l);
        for (std::size_t r = 0; r < k; ++r) {
            x[r] = x[r] + p.epsilon_prime * p.Q.at(l, j) * yl[r];
        }
    }
    return x;
}

Matrix random_block(const CodeParams& p, Rng& rng)
{
    return random_matrix(p.field, static_cast<std::size_t>(p.k), static_cast<std::size_t>(p.k), rng);
}

std::vector<NodeContent> pick(const std::vector<NodeContent>& nodes, const std::vector<int>& ids)
{
    std::vector<NodeContent> out;
    for (int id : ids) {
        out.push_back(nodes[static_cast<std::size_t>(id - 1)]);
    }
    return out;
}

} // namespace

TEST_CASE("zero maps to zero")
{
    const CodeParams& p = fixture(3);
    CHECK(encode({Matrix(p.field, 3, 3)}, p).Y == Matrix(p.field, 3, 3));
    CHECK(dual_encode({Matrix(p.field, 3, 3)}, p).X == Matrix(p.field, 3, 3));
    CHECK(code_of([&] { (void)encode({Matrix(p.field, 3, 2)}, p); }) == ErrorCode::DimensionMismatch);
    CHECK(code_of([&] { (void)dual_encode({Matrix(p.field, 4, 4)}, p); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("matrix form and column form of the encoder agree")
{
    Rng rng(1);
    for (int k : {2, 3, 4, 5}) {
        for (bool random_v : {false, true}) {
            const CodeParams p = generate(k, gf8(), 3, {.max_retries = 1000, .random_v = random_v});
            for (int t = 0; t < 25; ++t) {
                const Matrix X = random_block(p, rng);
                const Matrix Y = encode({X}, p).Y;
                const Matrix Xb = dual_encode({Y}, p).X;
                for (std::size_t j = 0; j < static_cast<std::size_t>(k); ++j) {
                    const auto y = parity_column(X, p, j);
                    const auto x = source_column(Y, p, j);
                    for (std::size_t r = 0; r < static_cast<std::size_t>(k); ++r) {
                        REQUIRE(Y(r, j) == y[r].value());
                        REQUIRE(Xb(r, j) == x[r].value());
                    }
                }
            }
        }
    }
}

TEST_CASE("six-node fixture, first parity node")
{
    // Node 4 stores delta sum_j vhat_j (u_1^t x_j) + eps z_1.
    const CodeParams& p = fixture(3);
    const GaloisField& f = p.gf();
    const Matrix X = Matrix::from_rows(p.field, {{0x01, 0x02, 0x03}, {0x10, 0x20, 0x30}, {0xaa, 0xbb, 0xcc}});
    const Matrix Y = encode({X}, p).Y;
    for (std::size_t r = 0; r < 3; ++r) {
        Symbol y = 0;
        for (std::size_t j = 0; j < 3; ++j) {
            const Symbol u1xj = dot(f, p.U.column(0), X.column(j));
            y = f.add(y, f.mul(p.delta.value(), f.mul(p.V_hat(r, j), u1xj)));
            y = f.add(y, f.mul(p.epsilon.value(), f.mul(p.P(j, 0), X(r, j))));
        }
        CHECK(Y(r, 0) == y);
    }
}

TEST_CASE("encoder round trip")
{
    Rng rng(2);
    for (int k : {3, 4, 5}) {
        const CodeParams& p = fixture(k);
        for (int t = 0; t < 100; ++t) {
            const Matrix X = random_block(p, rng);
            REQUIRE(dual_encode(encode({X}, p), p).X == X);
            const Matrix Y = random_block(p, rng);
            REQUIRE(encode(dual_encode({Y}, p), p).Y == Y);
        }
    }
}

TEST_CASE("encoder is linear")
{
    Rng rng(3);
    const CodeParams& p = fixture(4);
    for (int t = 0; t < 50; ++t) {
        const Matrix A = random_block(p, rng), B = random_block(p, rng);
        const Symbol c = random_symbol(p.gf(), rng);
        REQUIRE(encode({A.scaled(c) + B}, p).Y == encode({A}, p).Y.scaled(c) + encode({B}, p).Y);
    }
}

TEST_CASE("z_column")
{
    Rng rng(4);
    const CodeParams& p = fixture(3);
    const Matrix X = random_block(p, rng);
    const Matrix I = Matrix::identity(p.field, 3);
    for (std::size_t j = 0; j < 3; ++j) {
        CHECK(z_column(X, I, j) == X.column(j));
        CHECK(z_column(X, p.P, j) == (X * p.P).column(j));
        std::vector<Symbol> z(3, 0);
        for (std::size_t l = 0; l < 3; ++l) {
            for (std::size_t r = 0; r < 3; ++r) {
                z[r] = p.gf().add(z[r], p.gf().mul(p.P(l, j), X(r, l)));
            }
        }
        CHECK(z_column(X, p.P, j) == z);
    }
    CHECK(code_of([&] { (void)z_column(X, p.P, 3); }) == ErrorCode::IndexOutOfRange);
}

TEST_CASE("collect from systematic and parity nodes")
{
    Rng rng(5);
    const CodeParams& p = fixture(3);
    const Matrix X = random_block(p, rng);
    const auto nodes = encode_nodes({X}, p);
    CHECK(collect(pick(nodes, {1, 2, 3}), p).X == X);
    CHECK(collect(pick(nodes, {3, 1, 2}), p).X == X);

    Matrix Y(p.field, 3, 3);
    for (std::size_t j = 0; j < 3; ++j) {
        for (std::size_t r = 0; r < 3; ++r) {
            Y(r, j) = nodes[3 + j].symbols[r];
        }
    }
    CHECK(collect(pick(nodes, {4, 5, 6}), p).X == dual_encode({Y}, p).X);
}

TEST_CASE("any k nodes rebuild the block")
{
    Rng rng(6);
    for (int k : {3, 4}) {
        const CodeParams& p = fixture(k);
        const Matrix X = random_block(p, rng);
        const auto nodes = encode_nodes({X}, p);
        const auto all = subsets(2 * k, k);
        CHECK(all.size() == (k == 3 ? 20u : 70u));
        for (const auto& s : all) {
            REQUIRE(collect(pick(nodes, s), p).X == X);
        }
    }
    const CodeParams& p = fixture(5);
    const Matrix X = random_block(p, rng);
    const auto nodes = encode_nodes({X}, p);
    for (int t = 0; t < 50; ++t) {
        const std::vector<int> ids = random_subset(10, 5, rng);
        REQUIRE(collect(pick(nodes, ids), p).X == X);
    }
}

TEST_CASE("collect with random V")
{
    Rng rng(7);
    const CodeParams p = generate(3, gf8(), 9, {.max_retries = 1000, .random_v = true});
    const Matrix X = random_block(p, rng);
    const auto nodes = encode_nodes({X}, p);
    for (const auto& s : subsets(6, 3)) {
        REQUIRE(collect(pick(nodes, s), p).X == X);
    }
}

TEST_CASE("collect errors")
{
    Rng rng(8);
    const CodeParams& p = fixture(3);
    const auto nodes = encode_nodes({random_block(p, rng)}, p);
    CHECK(code_of([&] { (void)collect(pick(nodes, {1, 1, 2}), p); }) == ErrorCode::DuplicateNodes);
    CHECK(code_of([&] { (void)collect(pick(nodes, {1, 2}), p); }) == ErrorCode::NotEnoughLiveNodes);

    auto bad = pick(nodes, {1, 4, 5, 6});
    bad[3].symbols[1] ^= 1;
    CHECK(code_of([&] { (void)collect(bad, p); }) == ErrorCode::InconsistentContents);
    auto surplus = pick(nodes, {1, 4, 5, 6});
    CHECK_NOTHROW((void)collect(surplus, p));

    NodeContent stray = nodes[0];
    stray.node_id = 7;
    CHECK(code_of([&] { (void)collect(std::vector<NodeContent>{stray, nodes[1], nodes[2]}, p); }) ==
          ErrorCode::IndexOutOfRange);
}

TEST_CASE("collector over many blocks")
{
    Rng rng(9);
    const CodeParams& p = fixture(4);
    const Stored s = store_random(p, 12, rng);
    const Collector c(p, {8, 2, 6, 5});
    std::vector<NodeContent> contents{s.node(8), s.node(2), s.node(6), s.node(5)};
    const auto sys = c.recover_systematic(contents);
    REQUIRE(sys.size() == 4);
    for (int id = 1; id <= 4; ++id) {
        CHECK(sys[static_cast<std::size_t>(id - 1)] == s.node(id));
    }
}
