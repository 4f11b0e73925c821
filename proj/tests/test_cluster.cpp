#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <type_traits>

#include "msr/cluster.hpp"
#include "msr/io.hpp"
#include "msr/scenario.hpp"
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

using NewcomerFn = RepairOutcome (*)(const RepairPlan&, std::span<const Phase1Message>, const CodeParams&);

// Newcomer logic sees plans, messages and public parameters, nothing else.
static_assert(std::is_same_v<decltype(&repair_parity_group), NewcomerFn>);
static_assert(std::is_same_v<decltype(&repair_systematic_group), NewcomerFn>);
static_assert(std::is_same_v<decltype(&repair_mixed_pair), NewcomerFn>);
static_assert(std::is_same_v<decltype(&run_newcomers), NewcomerFn>);
static_assert(!std::is_invocable_v<decltype(&run_newcomers), const RepairPlan&, const Cluster&, const CodeParams&>);
static_assert(!std::is_invocable_v<decltype(&run_newcomers), const RepairPlan&, std::span<const NodeContent>,
                                   const CodeParams&>);
static_assert(!std::is_convertible_v<Cluster, std::span<const Phase1Message>>);

std::vector<int> ids(std::initializer_list<int> l)
{
    return l;
}

} // namespace

TEST_CASE("ingest and extract")
{
    const CodeParams& p = fixture(3);

    const Cluster empty = Cluster::ingest({}, p);
    CHECK(empty.block_count() == 0);
    CHECK(empty.extract(ids({1, 2, 3})).empty());
    CHECK(empty.extract(ids({4, 5, 6})).empty());

    const std::vector<std::uint8_t> nine{1, 2, 3, 4, 5, 6, 7, 8, 9};
    const Cluster c9 = Cluster::ingest(nine, p);
    CHECK(c9.block_count() == 1);
    for (int id = 1; id <= 6; ++id) {
        CHECK(c9.node(id)->symbols.size() == 3);
    }
    CHECK(c9.node(1)->symbols == std::vector<Symbol>{1, 2, 3});
    CHECK(c9.extract(ids({1, 2, 3})) == nine);
    CHECK(c9.extract(ids({2, 4, 6})) == nine);

    std::vector<std::uint8_t> ten(nine);
    ten.push_back(10);
    const Cluster c10 = Cluster::ingest(ten, p);
    CHECK(c10.block_count() == 2);
    CHECK(c10.original_length() == 10);
    CHECK(c10.node(1)->symbols == std::vector<Symbol>{1, 2, 3, 10, 0, 0});
    for (const auto& s : subsets(6, 3)) {
        REQUIRE(c10.extract(s) == ten);
    }
}

TEST_CASE("sixteen-bit symbols")
{
    const CodeParams p = generate(3, gf16(), 2);
    const std::vector<std::uint8_t> data = random_bytes(101, 3);
    const Cluster c = Cluster::ingest(data, p);
    CHECK(c.block_count() == 6); // 51 symbols over blocks of 9
    for (const auto& s : subsets(6, 3)) {
        REQUIRE(c.extract(s) == data);
    }
    CHECK(bytes_to_symbols(std::vector<std::uint8_t>{0x34, 0x12, 0x78}, *gf16()) == std::vector<Symbol>{0x1234, 0x78});
    CHECK(symbols_to_bytes(std::vector<Symbol>{0x1234}, *gf16()) == std::vector<std::uint8_t>{0x34, 0x12});
    CHECK(code_of([] { (void)symbol_bytes(*GaloisField::make_default(4)); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("failure bookkeeping")
{
    const CodeParams& p = fixture(3);
    Cluster c = Cluster::ingest(random_bytes(100, 1), p);
    c.fail_nodes({});
    CHECK(c.failed_nodes().empty());

    c.fail_nodes(ids({2}));
    CHECK_FALSE(c.is_live(2));
    CHECK(c.live_nodes() == ids({1, 3, 4, 5, 6}));
    CHECK(code_of([&] { c.fail_nodes(ids({2})); }) == ErrorCode::AlreadyFailed);
    CHECK(code_of([&] { c.fail_nodes(ids({3, 3})); }) == ErrorCode::DuplicateNodes);
    CHECK(code_of([&] { c.fail_nodes(ids({1, 3, 4})); }) == ErrorCode::TooManyFailures);
    CHECK(code_of([&] { c.fail_nodes(ids({9})); }) == ErrorCode::IndexOutOfRange);
    CHECK(code_of([&] { (void)c.extract(ids({1, 2, 3})); }) == ErrorCode::NotEnoughLiveNodes);
    CHECK(code_of([&] { (void)c.extract(ids({1, 3})); }) == ErrorCode::NotEnoughLiveNodes);
    CHECK(code_of([&] { (void)c.run_repair(FailurePattern::classify({2, 3}, 3)); }) == ErrorCode::InvalidArgument);

    c.run_repair(FailurePattern::classify({2}, 3));
    CHECK(c.failed_nodes().empty());
    CHECK(c.matches_oracle());

    Cluster d = Cluster::ingest(random_bytes(100, 1), p);
    d.fail_nodes(ids({1, 2, 3}));
    CHECK(code_of([&] { d.fail_nodes(ids({4})); }) == ErrorCode::TooManyFailures);
}

TEST_CASE("single failures")
{
    const CodeParams& p = fixture(3);
    const auto data = random_bytes(999, 2);
    Cluster c = Cluster::ingest(data, p);
    for (int id = 1; id <= 6; ++id) {
        c.fail_nodes(ids({id}));
        const BandwidthReport r = c.run_repair(FailurePattern::classify({id}, 3));
        REQUIRE(r.d == 5);
        REQUIRE(r.rows.size() == 1);
        REQUIRE(r.rows[0].gamma == 5);
        REQUIRE(r.rows[0].is_optimal);
        REQUIRE(c.matches_oracle());
        REQUIRE(c.extract(ids({4, 5, 6})) == data);
    }
}

TEST_CASE("all two-node failures")
{
    const CodeParams& p = fixture(3);
    const auto data = random_bytes(2000, 3);
    Cluster c = Cluster::ingest(data, p);
    for (const auto& failed : subsets(6, 2)) {
        c.fail_nodes(failed);
        const BandwidthReport r = c.run_repair(FailurePattern::classify(failed, 3));
        REQUIRE(r.rows.size() == 2);
        for (const auto& row : r.rows) {
            REQUIRE(row.gamma == 5);
            REQUIRE(row.optimal_gamma == Rational::make(5, 1));
            REQUIRE(row.is_optimal);
        }
        REQUIRE(c.matches_oracle());
        for (const auto& s : subsets(6, 3)) {
            REQUIRE(c.extract(s) == data);
        }
    }
}

TEST_CASE("a triple failure is refused before any data is touched")
{
    const CodeParams& p = fixture(3);
    CHECK(code_of([&] { (void)FailurePattern::classify({1, 2, 4}, 3); }) == ErrorCode::UnsupportedPattern);
    Cluster c = Cluster::ingest(random_bytes(50, 4), p);
    const SimulationReport r = simulate(c, {{{1, 2, 4}}}, VerifyMode::Exact, random_bytes(50, 4));
    REQUIRE(r.steps.size() == 1);
    CHECK(r.steps[0].error == ErrorCode::UnsupportedPattern);
    CHECK(c.failed_nodes().empty());
    CHECK_FALSE(r.ok());
}

TEST_CASE("production mode keeps no oracle")
{
    const CodeParams& p = fixture(4);
    const auto data = random_bytes(777, 5);
    Cluster c = Cluster::ingest(data, p, {.retain_oracle = false});
    CHECK_FALSE(c.has_oracle());
    c.fail_nodes(ids({3, 6}));
    c.run_repair(FailurePattern::classify({3, 6}, 4));
    CHECK(c.extract(ids({5, 6, 7, 8})) == data);
    CHECK_FALSE(c.matches_oracle());
}

TEST_CASE("rebuilt from stored nodes")
{
    const CodeParams& p = fixture(3);
    const auto data = random_bytes(300, 6);
    const Cluster c = Cluster::ingest(data, p);
    std::vector<std::optional<NodeContent>> nodes;
    for (int id = 1; id <= 6; ++id) {
        nodes.push_back(*c.node(id));
    }
    nodes[4].reset();
    Cluster d = Cluster::from_nodes(p, nodes, data.size());
    CHECK_FALSE(d.has_oracle());
    CHECK(d.failed_nodes() == ids({5}));
    d.run_repair(FailurePattern::classify({5}, 3));
    CHECK(*d.node(5) == *c.node(5));

    nodes[0].reset();
    nodes[1].reset();
    nodes[2].reset();
    CHECK(code_of([&] { (void)Cluster::from_nodes(p, nodes, data.size()); }) == ErrorCode::NotEnoughLiveNodes);
}

TEST_CASE("verification catches a wrong repair")
{
    const CodeParams& good = fixture(3);
    const auto data = random_bytes(90, 7);
    Cluster c = Cluster::ingest(data, good);
    std::vector<std::optional<NodeContent>> nodes;
    for (int id = 1; id <= 6; ++id) {
        nodes.push_back(*c.node(id));
    }
    // Same stored data, but the repair runs with different constants.
    CodeParams other = derive_params(good.V, good.P, good.epsilon, good.delta);
    Cluster d = Cluster::from_nodes(other, nodes, data.size());
    d.fail_nodes(ids({4}));
    CHECK(code_of([&] { (void)d.run_repair(FailurePattern::classify({4}, 3)); }) == ErrorCode::VerificationFailure);
}

TEST_CASE("scenario simulation")
{
    Json j = {{"params", {{"k", 3}, {"seed", 1}}},
              {"data", {{"random", {{"bytes", 500}, {"seed", 9}}}}},
              {"steps", Json::array({{{"fail", {1, 5}}}, {{"fail", {2}}}, {{"fail", {4, 6}}}})},
              {"verify", "mds_also"}};
    const Scenario s = parse_scenario(j, ".");
    const SimulationReport r = simulate(s);
    REQUIRE(r.steps.size() == 3);
    CHECK(r.ok());
    CHECK(r.steps[0].kind == PatternKind::MixedPair);
    CHECK(r.steps[1].bandwidth->rows[0].gamma == 5);
    CHECK(r.steps[2].mds_ok == true);

    // Determinism: identical scenarios give identical reports.
    CHECK(simulation_to_json(simulate(parse_scenario(j, "."))) == simulation_to_json(r));

    j["steps"] = Json::array();
    const SimulationReport empty = simulate(parse_scenario(j, "."));
    CHECK(empty.steps.empty());
    CHECK(empty.ok());

    j["steps"] = Json::array({{{"fail", {1, 2}}}, {{"fail", {1, 2, 4}}}, {{"fail", {3}}}});
    const SimulationReport stopped = simulate(parse_scenario(j, "."));
    REQUIRE(stopped.steps.size() == 2);
    CHECK(stopped.steps[0].ok());
    CHECK(stopped.steps[1].error == ErrorCode::UnsupportedPattern);
    CHECK(simulation_to_json(stopped)["steps"][1]["error"] == "UnsupportedPattern");

    j["verify"] = "sometimes";
    CHECK(code_of([&] { (void)parse_scenario(j, "."); }) == ErrorCode::Format);
    j.erase("verify");
    j.erase("data");
    CHECK(code_of([&] { (void)parse_scenario(j, "."); }) == ErrorCode::Format);
    CHECK_NOTHROW((void)parse_scenario(j, ".", true));
}

TEST_CASE("conservation under random failure sequences")
{
    Rng rng(10);
    for (int k : {2, 3, 4, 5}) {
        const CodeParams& p = fixture(k, 3);
        const auto data = random_bytes(static_cast<std::size_t>(50 + rng.below(400)), rng.next());
        Cluster c = Cluster::ingest(data, p);
        for (int step = 0; step < 12; ++step) {
            std::vector<int> failed;
            switch (rng.below(3)) {
            case 0: failed = random_subset(k, 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(k))), rng); break;
            case 1:
                for (int id : random_subset(k, 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(k))), rng)) {
                    failed.push_back(id + k);
                }
                break;
            default:
                failed = {1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(k))),
                          k + 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(k)))};
            }
            c.fail_nodes(failed);
            std::sort(failed.begin(), failed.end());
            c.run_repair(FailurePattern::classify(failed, k));
            REQUIRE(c.matches_oracle());
            REQUIRE(c.extract(random_subset(2 * k, k, rng)) == data);
        }
    }
}
