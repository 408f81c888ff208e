#include <doctest.h>

#include <algorithm>
#include <memory>
#include <random>

#include "findyn/constructions.hpp"
#include "findyn/system_map.hpp"

using namespace findyn;

namespace {

std::shared_ptr<const FiniteSystem> sys(FiniteSystem s) {
    return std::make_shared<const FiniteSystem>(std::move(s));
}

std::vector<Vertex> mod_table(Vertex m, Vertex k) {
    std::vector<Vertex> t(static_cast<std::size_t>(m));
    for (Vertex v = 0; v < m; ++v) t[static_cast<std::size_t>(v)] = v % k;
    return t;
}

} // namespace

TEST_CASE("validate_map") {
    auto l3 = sys(loop(3));
    auto id = identity_map(l3);
    CHECK(id.factor());

    // mod-3 reduction of the 6-loop is a factor
    SystemMap red(sys(loop(6)), l3, mod_table(6, 3));
    CHECK(red.surjective());
    CHECK(red.factor());

    // a cycle cannot collapse onto a non-self-loop vertex
    auto check = check_map_table(loop(2), loop(2), {0, 0});
    CHECK(!check.homomorphism);
    REQUIRE(check.witness == Edge{0, 1});
    CHECK_THROWS_AS(SystemMap(sys(loop(2)), sys(loop(2)), std::vector<Vertex>{0, 0}), error);
}

TEST_CASE("quotient by partition") {
    auto l6 = sys(loop(6));
    auto [iso, iso_map] = quotient_by_partition(l6, {{0}, {1}, {2}, {3}, {4}, {5}});
    CHECK(iso->rel() == loop(6).rel());
    CHECK(iso_map.factor());

    auto [q, qm] = quotient_by_partition(l6, {{0, 2, 4}, {1, 3, 5}});
    CHECK(q->rel() == loop(2).rel());
    CHECK(qm.factor());

    // collapsing each dumbbell loop to a point: self-loops joined by an edge
    auto d = sys(dumbbell({2, 1, 2}));
    auto [dq, dqm] = quotient_by_partition(d, {{0, 1}, {2, 3}});
    CHECK(dq->rel() == FiniteRelation(2, {{0, 0}, {0, 1}, {1, 1}}));
    CHECK(dqm.factor());
    // with an interior path vertex the quotient keeps it
    auto d2 = sys(dumbbell({2, 2, 2}));
    auto [dq2, dqm2] = quotient_by_partition(d2, {{0, 1}, {2}, {3, 4}});
    CHECK(dq2->rel() == FiniteRelation(3, {{0, 0}, {0, 1}, {1, 2}, {2, 2}}));
    CHECK(dqm2.factor());

    CHECK_THROWS_AS(quotient_by_partition(l6, {{0, 1}, {1, 2}}), error);
}

TEST_CASE("enumerate_maps between loops counts K when K divides M") {
    EnumCaps caps{12, 12, 10'000'000};
    for (Vertex m = 1; m <= 10; ++m)
        for (Vertex k = 1; k <= 10; ++k) {
            auto maps = enumerate_maps(sys(loop(m)), sys(loop(k)), MapMode::all, caps);
            if (m % k == 0) {
                REQUIRE(maps.size() == static_cast<std::size_t>(k));
                for (const auto& f : maps) REQUIRE(f.factor());
            } else {
                REQUIRE(maps.empty());
            }
        }
    CHECK(enumerate_maps(sys(loop(6)), sys(loop(4)), MapMode::all, caps).empty());
}

TEST_CASE("enumerate_maps respects caps") {
    EnumCaps caps{4, 8, 10'000'000};
    CHECK_THROWS_AS(enumerate_maps(sys(loop(6)), sys(loop(3)), MapMode::all, caps), error);
    EnumCaps tiny{12, 8, 3};
    CHECK_THROWS_AS(enumerate_maps(sys(loop(6)), sys(loop(3)), MapMode::all, tiny), error);
}

TEST_CASE("dumbbell self-surjections are rigid") {
    auto d = sys(dumbbell({2, 1, 2}));
    EnumCaps caps{12, 12, 10'000'000};
    auto maps = enumerate_maps(d, d, MapMode::surjective, caps);
    REQUIRE(maps.size() == 1);
    CHECK(maps[0].table() == identity_map(d).table());
}

TEST_CASE("check_lift") {
    // mod-k reductions of doubled loops are +- lifts
    for (Vertex k = 1; k <= 4; ++k) {
        SystemMap red(sys(loop(2 * k)), sys(loop(k)), mod_table(2 * k, k));
        auto v = check_lift(red);
        CHECK(v.is_plus);
        CHECK(v.is_pm);
    }
    // the identity has singleton fibers
    auto l3 = sys(loop(3));
    auto v = check_lift(identity_map(l3));
    CHECK(!v.is_plus);
    REQUIRE(!v.failures.empty());
    CHECK(v.failures[0].find("(iii)") != std::string::npos);
}

TEST_CASE("factor images inherit the dynamics properties") {
    std::mt19937_64 rng(2025);
    int tested = 0;
    while (tested < 60) {
        Vertex n = 2 + static_cast<Vertex>(rng() % 3);
        std::vector<Edge> edges;
        for (Vertex a = 0; a < n; ++a)
            for (Vertex b = 0; b < n; ++b)
                if (rng() % 3 == 0) edges.emplace_back(a, b);
        FiniteRelation r(n, std::move(edges));
        if (!is_surjective_relation(r)) continue;
        auto dom = sys(FiniteSystem(r));
        std::vector<std::vector<Vertex>> blocks(2);
        for (Vertex v = 0; v < n; ++v) blocks[static_cast<std::size_t>(v % 2)].push_back(v);
        if (blocks[0].empty() || blocks[1].empty()) continue;
        auto [q, qm] = quotient_by_partition(dom, blocks);
        REQUIRE(qm.factor());
        auto up = classify(*dom, 10);
        auto down = classify(*q, 10);
        if (up.recurrent) REQUIRE(down.recurrent);
        if (up.transitive) REQUIRE(down.transitive);
        if (up.mixing) REQUIRE(down.mixing);
        // Per monotonicity under factors
        for (int t : up.per_window)
            REQUIRE(std::count(down.per_window.begin(), down.per_window.end(), t) == 1);
        ++tested;
    }
}

TEST_CASE("factors_onto_loop and colouring period") {
    auto found = factors_onto_loop(sys(loop(6)), 3);
    REQUIRE(found.map.has_value());
    CHECK(found.map->factor());

    CHECK(loop_period(wedge(2, 3)) == 1);
    CHECK(!factors_onto_loop(sys(wedge(2, 3)), 2).map.has_value());

    // suspensions factor onto the layer loop
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        Vertex n = 1 + static_cast<Vertex>(rng() % 4);
        std::vector<Edge> e;
        for (Vertex a = 0; a < n; ++a) e.emplace_back(a, (a + 1) % n);
        auto s = FiniteSystem(FiniteRelation(n, std::move(e)));
        int fold = 2 + static_cast<int>(rng() % 3);
        auto got = factors_onto_loop(sys(suspension(s, fold)), fold);
        REQUIRE(got.map.has_value());
        REQUIRE(got.map->factor());
    }

    // dumbbells factor onto loops dividing both arms
    CHECK(factors_onto_loop(sys(dumbbell({2, 1, 2})), 2).map.has_value());
    CHECK(!factors_onto_loop(sys(dumbbell({2, 1, 3})), 2).map.has_value());

    // two aligned 2-loops with a mis-phased pair of cross edges: every
    // directed cycle is even but no 2-colouring exists
    FiniteRelation tricky(4, {{0, 1}, {1, 0}, {2, 3}, {3, 2}, {0, 2}, {0, 3}});
    CHECK(cycle_gcd(tricky) == 2);
    CHECK(loop_period(FiniteSystem(tricky)) == 1);
}

TEST_CASE("lift composition keeps clauses (i) and (iii)") {
    // pi: loop(12) -> loop(6) is a +- lift; composing with factor surjections
    // on both sides keeps the factor and fiber clauses
    auto l12 = sys(loop(12)), l6 = sys(loop(6)), l3 = sys(loop(3));
    SystemMap pi(l12, l6, mod_table(12, 6));
    REQUIRE(check_lift(pi).is_pm);
    SystemMap pi3(l6, l3, mod_table(6, 3));
    auto composed = compose_maps(pi3, pi);
    CHECK(composed.factor());
    auto v = check_lift(composed);
    CHECK(v.is_plus); // clauses (i) and (iii) survive, (ii) re-verified here
}
