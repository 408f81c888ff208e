#include <doctest.h>

#include <memory>
#include <numeric>
#include <random>

#include "findyn/constructions.hpp"

using namespace findyn;

namespace {

std::shared_ptr<const FiniteSystem> sys(FiniteSystem s) {
    return std::make_shared<const FiniteSystem>(std::move(s));
}

} // namespace

TEST_CASE("shape edge sets") {
    CHECK(dumbbell({2, 1, 2}).rel() ==
          FiniteRelation(4, {{0, 1}, {1, 0}, {1, 2}, {2, 3}, {3, 2}}));
    CHECK(wedge(2, 3).rel() == FiniteRelation(4, {{0, 1}, {1, 0}, {1, 2}, {2, 3}, {3, 1}}));
    CHECK(pointed_loop(1).rel() == loop(1).rel());
    CHECK(pointed_loop(4).rel() == FiniteRelation(4, {{0, 0}, {0, 1}, {1, 2}, {2, 3}, {3, 0}}));
    // the 1 loop and the 1-0-1 dumbbell are both the trivial relation
    CHECK(dumbbell({1, 0, 1}).rel() == loop(1).rel());
    CHECK_THROWS_AS(dumbbell({0, 1, 1}), error);

    CHECK(parse_shape("loop:5").rel() == loop(5).rel());
    CHECK(parse_shape("dumbbell:2,1,2").rel() == dumbbell({2, 1, 2}).rel());
    CHECK(parse_shape("wedge:2,3").rel() == wedge(2, 3).rel());
    CHECK(parse_shape("pointed:4").rel() == pointed_loop(4).rel());
    CHECK_THROWS_AS(parse_shape("blob:3"), error);
}

TEST_CASE("wedges swap arms up to isomorphism") {
    // wedge point to wedge point, out-loop onto the in-loop and conversely
    for (long n = 1; n <= 4; ++n)
        for (long m = 1; m <= 4; ++m) {
            auto a = wedge(n, m);
            auto b = wedge(m, n);
            std::vector<Vertex> table(static_cast<std::size_t>(n + m - 1));
            for (long i = 1; i <= n + m - 1; ++i) {
                long img = i <= n - 1 ? m + i : (i == n ? m : i - n);
                table[static_cast<std::size_t>(i - 1)] = static_cast<Vertex>(img - 1);
            }
            SystemMap h(sys(a), sys(b), table);
            REQUIRE(h.factor());
            std::vector<Vertex> sorted(table);
            std::sort(sorted.begin(), sorted.end());
            for (std::size_t i = 0; i < sorted.size(); ++i)
                REQUIRE(sorted[i] == static_cast<Vertex>(i)); // bijective
        }
}

TEST_CASE("wedge classification by coprimality") {
    for (long n = 1; n <= 5; ++n)
        for (long m = 1; m <= 5; ++m) {
            auto rep = classify(wedge(n, m));
            long g = std::gcd(n, m);
            if (g == 1) {
                REQUIRE(rep.mixing);
            } else {
                REQUIRE(!rep.mixing);
                REQUIRE(rep.loop_period == g);
            }
        }
    // a dumbbell with a real connecting path is never transitive and its
    // basic sets are the two loops
    for (long l = 1; l <= 3; ++l) {
        auto rep = classify(dumbbell({2, l, 3}));
        REQUIRE(!rep.transitive);
        REQUIRE(basic_sets(dumbbell({2, l, 3}).rel()).size() == 2);
    }
}

TEST_CASE("canonical dumbbell maps") {
    // src (2,3,2), dst (2,1,2), midpoints i=3, j=3 (1-based)
    auto res = canonical_dumbbell_map({2, 3, 2}, {2, 1, 2}, 3, 3);
    REQUIRE(res.map.has_value());
    CHECK(res.map->factor());
    // matches the unique enumeration witness anchored at (3,3)
    EnumCaps caps{12, 12, 10'000'000};
    auto all = enumerate_maps(sys(dumbbell({2, 3, 2})), sys(dumbbell({2, 1, 2})), MapMode::factor, caps);
    int anchored = 0;
    bool found = false;
    for (const auto& m : all) {
        if (m.table()[2] == 2) ++anchored;
        if (m.table() == res.map->table()) found = true;
    }
    CHECK(found);
    CHECK(anchored == 1);
    CHECK(res.map->table() == std::vector<Vertex>{0, 1, 2, 3, 2, 3});

    CHECK(!canonical_dumbbell_map({2, 1, 2}, {2, 2, 2}, 3, 3).map.has_value()); // L < L1
    CHECK(!canonical_dumbbell_map({4, 1, 4}, {3, 1, 3}, 5, 4).map.has_value()); // 3 does not divide 4
    CHECK_THROWS_AS(canonical_dumbbell_map({2, 1, 2}, {2, 0, 2}, 2, 2), error); // dst path empty
    CHECK_THROWS_AS(canonical_dumbbell_map({2, 1, 2}, {2, 1, 2}, 1, 2), error); // i off the path
}

TEST_CASE("canonical dumbbell maps agree with enumeration on small shapes") {
    EnumCaps caps{9, 9, 40'000'000};
    std::vector<DumbbellShape> shapes;
    for (long n = 1; n <= 3; ++n)
        for (long l = 1; l <= 3; ++l)
            for (long m = 1; m <= 3; ++m)
                if (n + l + m - 1 <= 9) shapes.push_back({n, l, m});
    for (const auto& src : shapes)
        for (const auto& dst : shapes) {
            if (src.vertex_count() > 9 || dst.vertex_count() > 9) continue;
            auto maps = enumerate_maps(sys(dumbbell(src)), sys(dumbbell(dst)), MapMode::factor, caps);
            // every feasible anchored map shows up among the enumerated factors
            std::vector<std::vector<Vertex>> canonical;
            for (long i = src.n_in; i <= src.n_in + src.l; ++i)
                for (long j = dst.n_in; j <= dst.n_in + dst.l; ++j) {
                    auto res = canonical_dumbbell_map(src, dst, i, j);
                    if (res.map) canonical.push_back(res.map->table());
                }
            for (const auto& t : canonical) {
                bool seen = false;
                for (const auto& m : maps) seen = seen || m.table() == t;
                REQUIRE(seen);
            }
            // uniqueness holds when the anchor image is interior to the
            // target path; at the path endpoints the backward walk can branch
            for (long i = src.n_in; i <= src.n_in + src.l; ++i)
                for (long j = dst.n_in + 1; j < dst.n_in + dst.l; ++j) {
                    int count = 0;
                    for (const auto& m : maps)
                        if (m.table()[static_cast<std::size_t>(i - 1)] ==
                            static_cast<Vertex>(j - 1))
                            ++count;
                    REQUIRE(count <= 1);
                }
        }
}

TEST_CASE("loop cover") {
    auto [l, m] = loop_cover(sys(loop(3)));
    CHECK(l->size() == 3);
    CHECK(m.factor());

    auto [lw, mw] = loop_cover(sys(wedge(2, 3)));
    CHECK(mw.factor());
    CHECK(lw->size() <= 2 * static_cast<long>(wedge(2, 3).edges().size()));

    auto [lf, mf] = loop_cover(sys(FiniteSystem(full_relation(2))));
    CHECK(mf.factor());

    CHECK_THROWS_AS(loop_cover(sys(dumbbell({2, 1, 2}))), error);
}

TEST_CASE("dumbbell cover") {
    auto c1 = dumbbell_cover(sys(loop(3)));
    CHECK(c1.onto.factor());

    auto c2 = dumbbell_cover(sys(dumbbell({2, 1, 2})));
    CHECK(c2.onto.factor());

    auto c3 = dumbbell_cover(sys(FiniteSystem(full_relation(3))));
    CHECK(c3.onto.factor());
}

TEST_CASE("loop union cover") {
    auto u = sys(FiniteSystem(disjoint_union(loop(2).rel(), loop(3).rel())));
    auto [cover, onto] = loop_union_cover(u);
    CHECK(onto.factor());
    auto bs = basic_sets(cover->rel());
    REQUIRE(bs.size() == 2);
    for (const auto& b : bs) REQUIRE(b.size() == 6); // lifted to the lcm

    // an edge leaving its basic set rules the cover out
    FiniteRelation crossing(4, {{0, 1}, {1, 0}, {2, 3}, {3, 2}, {0, 2}});
    CHECK_THROWS_AS(loop_union_cover(sys(FiniteSystem(crossing))), error);
}

TEST_CASE("mixture bounds") {
    auto b35 = mixture_bound(3, 5);
    CHECK(b35.paper_bound == 33);
    CHECK(b35.x == 2);
    CHECK(b35.y == 1);
    CHECK(b35.exact_threshold == 16);

    CHECK(mixture_bound(2, 3).exact_threshold == 7);
    for (long n = 1; n <= 6; ++n) CHECK(mixture_bound(1, n).exact_threshold == 1 + n);

    CHECK_THROWS_AS(mixture_bound(2, 4), error);

    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 10; ++trial) {
        long m = 1 + static_cast<long>(rng() % 20), n = 1 + static_cast<long>(rng() % 20);
        if (std::gcd(m, n) != 1) {
            --trial;
            continue;
        }
        auto b = mixture_bound(m, n);
        REQUIRE(b.exact_threshold <= b.paper_bound);
        // everything from the paper bound on is a positive mixture
        for (long k = b.paper_bound; k <= b.paper_bound + m + n; ++k) {
            bool ok = false;
            for (long bb = 1; bb * n < k && !ok; ++bb) ok = (k - bb * n) % m == 0;
            REQUIRE(ok);
        }
    }
}

TEST_CASE("wedge mixing threshold") {
    auto triv = wedge_mixing_threshold(FiniteSystem(FiniteRelation(1, {{0, 0}})));
    CHECK(triv.k >= 1);
    auto [w0, m0] = wedge_factor_from_threshold(sys(FiniteSystem(FiniteRelation(1, {{0, 0}}))), triv,
                                                triv.k, triv.k);
    CHECK(m0.factor());

    auto target = sys(wedge(2, 3));
    auto t = wedge_mixing_threshold(*target);
    for (long da : {0L, 1L, 3L})
        for (long db : {0L, 2L}) {
            auto [w, m] = wedge_factor_from_threshold(target, t, t.k + da, t.k + db);
            REQUIRE(m.factor());
        }

    auto full3 = sys(FiniteSystem(full_relation(3)));
    auto t3 = wedge_mixing_threshold(*full3);
    auto [w3, m3] = wedge_factor_from_threshold(full3, t3, t3.k, t3.k + 1);
    CHECK(m3.factor());

    CHECK_THROWS_AS(wedge_mixing_threshold(loop(2)), error);

    // the brute-force probe is never above the constructive threshold
    auto probe = wedge_threshold_probe(FiniteSystem(FiniteRelation(1, {{0, 0}})), 6);
    CHECK(probe == 1);
}

TEST_CASE("wedge pair sequences") {
    auto fib = wedge_pair_sequence(1, 1, 1, 2, 3);
    REQUIRE(fib ==
            std::vector<std::pair<long, long>>{{1, 1}, {2, 3}, {5, 8}});
    CHECK_THROWS_AS(wedge_pair_sequence(2, 2, 1, 1, 3), error);

    std::mt19937_64 rng(11);
    int tried = 0;
    while (tried < 20) {
        long a = 1 + static_cast<long>(rng() % 3), b = 1 + static_cast<long>(rng() % 3);
        long c = 1 + static_cast<long>(rng() % 3), d = 1 + static_cast<long>(rng() % 3);
        if (std::abs(a * d - b * c) != 1) continue;
        ++tried;
        auto seq = wedge_pair_sequence(a, b, c, d, 10);
        for (std::size_t i = 0; i < seq.size(); ++i) {
            REQUIRE(std::gcd(seq[i].first, seq[i].second) == 1);
            if (i >= 2) {
                REQUIRE(seq[i].first > seq[i - 1].first);
                REQUIRE(seq[i].second > seq[i - 1].second);
            }
        }
    }
}

TEST_CASE("pointed-loop representation of non-periodic permutations") {
    auto got = wedge_representation_of_nonperiodic(sys(loop(10)), 3);
    REQUIRE(got.has_value());
    CHECK(got->factor());
    CHECK(got->codomain() == pointed_loop(3));

    CHECK(!wedge_representation_of_nonperiodic(sys(loop(3)), 5).has_value());

    auto minimal = wedge_representation_of_nonperiodic(sys(loop(5)), 3);
    REQUIRE(minimal.has_value());
    CHECK(minimal->factor());

    CHECK_THROWS_AS(wedge_representation_of_nonperiodic(sys(wedge(2, 3)), 2), error);
}
