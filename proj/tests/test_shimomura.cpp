#include <doctest.h>

#include <memory>
#include <numeric>
#include <random>

#include "findyn/constructions.hpp"
#include "findyn/gamma.hpp"
#include "findyn/shimomura.hpp"
#include "findyn/word.hpp"

using namespace findyn;

namespace {

std::shared_ptr<const FiniteSystem> sys(FiniteSystem s) {
    return std::make_shared<const FiniteSystem>(std::move(s));
}

// a random prefix built as a quotient tower: bonding maps are factors by
// construction, nothing else is promised
ShimomuraPrefix random_quotient_prefix(std::mt19937_64& rng, int depth, Vertex top_size) {
    std::vector<Edge> edges;
    for (Vertex a = 0; a < top_size; ++a) {
        edges.emplace_back(a, static_cast<Vertex>(rng() % top_size));
        edges.emplace_back(static_cast<Vertex>(rng() % top_size), a);
    }
    for (int extra = 0; extra < top_size; ++extra)
        edges.emplace_back(static_cast<Vertex>(rng() % top_size),
                           static_cast<Vertex>(rng() % top_size));
    auto top = sys(FiniteSystem(FiniteRelation(top_size, std::move(edges))));

    std::vector<std::shared_ptr<const FiniteSystem>> levels{top};
    std::vector<SystemMap> bonding;
    for (int d = 1; d < depth; ++d) {
        auto cur = levels.back();
        Vertex n = cur->size();
        Vertex target = std::max<Vertex>(1, n - 1 - static_cast<Vertex>(rng() % 2));
        std::vector<std::vector<Vertex>> blocks(static_cast<std::size_t>(target));
        for (Vertex v = 0; v < n; ++v)
            blocks[static_cast<std::size_t>(v < target ? v : static_cast<Vertex>(rng() % target))]
                .push_back(v);
        auto [q, qm] = quotient_by_partition(cur, blocks);
        levels.push_back(q);
        bonding.push_back(qm);
    }
    std::reverse(levels.begin(), levels.end());
    std::reverse(bonding.begin(), bonding.end());
    return ShimomuraPrefix(std::move(levels), std::move(bonding));
}

} // namespace

TEST_CASE("prefix construction validates bonding maps") {
    auto l2 = sys(loop(2)), l4 = sys(loop(4));
    std::vector<Vertex> mod{0, 1, 0, 1};
    ShimomuraPrefix ok({l2, l4}, {SystemMap(l4, l2, mod)});
    CHECK(ok.depth() == 2);
    // non-factor bonding (into the 2-loop as a subsystem of the full square)
    auto f2 = sys(FiniteSystem(full_relation(2)));
    CHECK_THROWS_AS(ShimomuraPrefix({f2, l4}, {SystemMap(l4, f2, mod)}), error);
}

TEST_CASE("composites satisfy the cocycle identity") {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 20; ++trial) {
        auto p = random_quotient_prefix(rng, 5, 8);
        for (int n = 1; n <= 5; ++n)
            for (int k = n; k <= 5; ++k)
                for (int m = k; m <= 5; ++m) {
                    auto direct = p.composite(m, n);
                    auto lower = p.composite(k, n);
                    auto upper = p.composite(m, k);
                    std::vector<Vertex> glued(upper.size());
                    for (std::size_t v = 0; v < upper.size(); ++v)
                        glued[v] = lower[static_cast<std::size_t>(upper[v])];
                    REQUIRE(direct == glued);
                }
    }
}

TEST_CASE("named builders validate at depth 4") {
    std::vector<std::pair<NamedPrefix, std::map<std::string, std::string>>> cases = {
        {NamedPrefix::thm_4_04, {}},
        {NamedPrefix::prop_4_05, {}},
        {NamedPrefix::thm_4_08_star, {}},
        {NamedPrefix::thm_4_09, {}},
        {NamedPrefix::thm_4_09, {{"star", "1"}}},
        {NamedPrefix::thm_4_10, {}},
        {NamedPrefix::thm_4_15, {}},
        {NamedPrefix::thm_4_16, {}},
        {NamedPrefix::example_3, {}},
        {NamedPrefix::example_3, {{"K", "2"}}},
    };
    for (const auto& [name, params] : cases) {
        CAPTURE(named_prefix_to_string(name));
        auto p = build_named_prefix(name, params, 4);
        auto verdict = validate_prefix(p);
        REQUIRE(verdict.pointed);
        bool star_tree = name == NamedPrefix::thm_4_08_star;
        if (!star_tree) {
            REQUIRE(verdict.all_resolved());
            for (int n = 1; n < p.depth(); ++n) {
                REQUIRE(p.bonding(n).factor());
                auto lift = check_lift(p.bonding(n));
                REQUIRE(lift.is_pm);
            }
        } else {
            // the redirected dumbbell leaves the path interior of the first
            // dumbbell with singleton fibers one level down; its bifurcation
            // witness sits two levels up, beyond a depth-4 prefix
            for (std::size_t i = 0; i + 1 < verdict.bifurcating.size(); ++i)
                REQUIRE(verdict.bifurcating[i].resolved);
            REQUIRE(!verdict.bifurcating.back().resolved);
            for (const auto& f : verdict.shimomura) REQUIRE(f.resolved);
            for (const auto& f : verdict.invertible) REQUIRE(f.resolved);
            auto deeper = build_named_prefix(name, params, 6, {30'000'000});
            auto dv = validate_prefix(deeper);
            for (int n = 0; n < 4; ++n) {
                REQUIRE(dv.bifurcating[static_cast<std::size_t>(n)].resolved);
                REQUIRE(dv.bifurcating[static_cast<std::size_t>(n)].witness_m <= n + 1 + 2);
                // the composite to the witness level is a +- directional lift
                int m = std::max(dv.bifurcating[static_cast<std::size_t>(n)].witness_m,
                                 std::max(dv.shimomura[static_cast<std::size_t>(n)].witness_m,
                                          dv.invertible[static_cast<std::size_t>(n)].witness_m));
                SystemMap composite(deeper.level_ptr(m), deeper.level_ptr(n + 1),
                                    deeper.composite(m, n + 1));
                REQUIRE(check_lift(composite).is_pm);
            }
        }
        // predicted level sizes match the built ones
        for (int n = 1; n <= p.depth(); ++n)
            REQUIRE(named_prefix_level_size(name, params, n) == p.level(n).size());
    }
}

TEST_CASE("adding machine layout") {
    auto p = build_named_prefix(NamedPrefix::thm_4_10, {}, 5);
    std::vector<long> sizes;
    for (int n = 1; n <= 5; ++n) sizes.push_back(p.level(n).size());
    CHECK(sizes == std::vector<long>{1, 2, 6, 24, 120});
    // bonding maps are the mod reductions
    for (int n = 1; n < 5; ++n)
        for (Vertex v = 0; v < p.level(n + 1).size(); ++v)
            REQUIRE(p.bonding(n)(v) == v % p.level(n).size());

    CHECK_THROWS_AS(build_named_prefix(NamedPrefix::thm_4_10, {{"seq", "1,2,5"}}, 3), error);
    CHECK_THROWS_AS(build_named_prefix(NamedPrefix::thm_4_10, {{"seq", "1,2,2"}}, 3), error);
    auto custom = build_named_prefix(NamedPrefix::thm_4_10, {{"seq", "1,2,6,18"}}, 4);
    CHECK(custom.level(4).size() == 18);
}

TEST_CASE("thread systems have sentinel self-loops only") {
    auto p = build_named_prefix(NamedPrefix::prop_4_05, {}, 4);
    for (int n = 2; n <= 4; ++n) {
        auto fs = fixed_set(p.level(n).rel());
        REQUIRE(fs.size() == 2);
        REQUIRE(fs.front() == 0);
        REQUIRE(fs.back() == p.level(n).size() - 1);
        // 2^n parallel threads of length 2^{n+1}
        long threads = (p.level(n).size() - 2) / (1 << (n + 1));
        REQUIRE(threads == (1 << n));
    }
}

TEST_CASE("dumbbell tree shape") {
    auto p = build_named_prefix(NamedPrefix::thm_4_04, {}, 4);
    // 4^{n-1} dumbbells at level n, each with two basic sets
    for (int n = 2; n <= 4; ++n) {
        long copies = 1;
        for (int i = 1; i < n; ++i) copies *= 4;
        REQUIRE(static_cast<long>(basic_sets(p.level(n).rel()).size()) == 2 * copies);
    }
    CHECK(p.level(4).size() == 64 * (2 * 24 + 32 - 1));
}

TEST_CASE("wedge sequence levels") {
    auto p = build_named_prefix(NamedPrefix::thm_4_15, {}, 4);
    // (M,N): (1,1) -> (2,3) -> (5,8) -> (13,21); wedge on N+M-1 vertices
    std::vector<long> sizes;
    for (int n = 1; n <= 4; ++n) sizes.push_back(p.level(n).size());
    CHECK(sizes == std::vector<long>{1, 4, 12, 33});
    for (int n = 2; n <= 4; ++n) REQUIRE(classify(p.level(n)).mixing);
}

TEST_CASE("pointed wrapping satisfies the endpoint conditions") {
    auto p = build_named_prefix(NamedPrefix::thm_4_16, {}, 4);
    // word eLLee: N = 1, 5, 13, 29 and p(i) = 1 at 1, 2, N'-1, N'
    std::vector<long> sizes;
    for (int n = 1; n <= 4; ++n) sizes.push_back(p.level(n).size());
    CHECK(sizes == std::vector<long>{1, 5, 13, 29});
    for (int n = 2; n < 4; ++n) {
        const auto& b = p.bonding(n);
        long big = p.level(n + 1).size();
        REQUIRE(b(0) == 0);
        REQUIRE(b(1) == 0);
        REQUIRE(b(static_cast<Vertex>(big - 2)) == 0);
        REQUIRE(b(static_cast<Vertex>(big - 1)) == 0);
    }
    // the eLLe convention instead parks N'-1 over the loop end
    auto q = build_named_prefix(NamedPrefix::thm_4_16, {{"word", "eLLe"}}, 4);
    const auto& b = q.bonding(2);
    REQUIRE(b(static_cast<Vertex>(q.level(3).size() - 2)) ==
            static_cast<Vertex>(q.level(2).size() - 1));
}

TEST_CASE("example 3 layout") {
    auto p = build_named_prefix(NamedPrefix::example_3, {}, 3);
    // K = 1: level n carries the identity point plus p_i^n loops for i <= n
    CHECK(p.level(2).size() == 1 + 4 + 9);
    CHECK(p.level(3).size() == 1 + 8 + 27 + 125);
    auto bs = basic_sets(p.level(3).rel());
    REQUIRE(bs.size() == 4);
}

TEST_CASE("suspending a prefix preserves the verdict flags") {
    // the pointed trivial prefix suspends to constant loop levels
    auto triv = sys(FiniteSystem(FiniteRelation(1, {{0, 0}})));
    ShimomuraPrefix pointed({triv, triv}, {SystemMap(triv, triv, {0})});
    auto susp = suspend_prefix(pointed, 3);
    CHECK(susp.level(1).rel() == loop(3).rel());
    CHECK(susp.level(2).rel() == loop(3).rel());

    std::mt19937_64 rng(999);
    for (int trial = 0; trial < 10; ++trial) {
        auto p = random_quotient_prefix(rng, 4, 7);
        int fold = 2 + static_cast<int>(rng() % 2);
        auto s = suspend_prefix(p, fold);
        auto v0 = validate_prefix(p);
        auto v1 = validate_prefix(s);
        REQUIRE(v0.bifurcating.size() == v1.bifurcating.size());
        for (std::size_t i = 0; i < v0.bifurcating.size(); ++i) {
            REQUIRE(v0.bifurcating[i].resolved == v1.bifurcating[i].resolved);
            REQUIRE(v0.shimomura[i].resolved == v1.shimomura[i].resolved);
            REQUIRE(v0.invertible[i].resolved == v1.invertible[i].resolved);
        }
        // per windows of each level scale by the fold
        for (int n = 1; n <= p.depth(); ++n) {
            auto base = classify(p.level(n), 12 / fold).per_window;
            auto up = classify(s.level(n), 12).per_window;
            std::vector<int> expect;
            for (int t : base) expect.push_back(t * fold);
            REQUIRE(up == expect);
        }
    }
}

TEST_CASE("a singleton fiber leaves bifurcation unresolved") {
    auto l2 = sys(loop(2));
    ShimomuraPrefix p({l2, l2, l2},
                      {identity_map(l2), identity_map(l2)});
    auto v = validate_prefix(p);
    CHECK(v.pointed == false);
    CHECK(!v.bifurcating[0].resolved);
    CHECK(v.shimomura[0].resolved); // loops are functions
    CHECK(v.invertible[0].resolved);
}

TEST_CASE("check_factoring finds the bonding composite witness") {
    std::vector<std::pair<NamedPrefix, std::map<std::string, std::string>>> cases = {
        {NamedPrefix::thm_4_10, {}},
        {NamedPrefix::thm_4_09, {}},
        {NamedPrefix::thm_4_04, {}},
        {NamedPrefix::example_3, {}},
    };
    for (const auto& [name, params] : cases) {
        CAPTURE(named_prefix_to_string(name));
        auto p = build_named_prefix(name, params, 4);
        // q1 = p_{3,2} itself factors through q2 = p_{m,3}
        SystemMap q1(p.level_ptr(3), p.level_ptr(2), p.composite(3, 2));
        auto out = check_factoring(p, q1, 3, 2, 4);
        REQUIRE(out.status == FactoringOutcome::Status::found);
        REQUIRE(out.q2.has_value());
        REQUIRE(out.q2->factor());
        // the composite q1 o q2 equals p_{m,2}
        auto glued = compose_maps(q1, *out.q2);
        REQUIRE(glued.table() == p.composite(out.m, 2));
    }
}

TEST_CASE("adding machine factoring: every q1 factors") {
    auto p = build_named_prefix(NamedPrefix::thm_4_10, {}, 6);
    EnumCaps caps{48, 10, 50'000'000};
    for (auto [k, n] : std::vector<std::pair<int, int>>{{3, 2}, {4, 2}}) {
        auto out = search_factoring_counterexample(p, k, n, 6, {}, caps);
        REQUIRE(!out.q1.has_value());
        REQUIRE(out.tested > 0);
    }
}

TEST_CASE("example 3 factoring dichotomy") {
    FactoringCaps fcaps;
    EnumCaps ecaps{5000, 200, 400'000'000};

    auto good = build_named_prefix(NamedPrefix::example_3, {}, 4);
    auto none = search_factoring_counterexample(good, 3, 2, 4, fcaps, ecaps);
    CHECK(!none.q1.has_value());
    CHECK(none.tested == 36); // 4 x 9 anchored loop maps

    auto bad = build_named_prefix(NamedPrefix::example_3, {{"K", "2"}}, 4);
    auto found = search_factoring_counterexample(bad, 3, 2, 4, fcaps, ecaps);
    REQUIRE(found.q1.has_value());
    // re-validate the witness: a factor from level 3 onto level 2 with no
    // factoring through any searched deeper level
    REQUIRE(found.q1->factor());
    auto again = check_factoring(bad, *found.q1, 3, 2, 4, fcaps);
    REQUIRE(again.status == FactoringOutcome::Status::absent_within);
    REQUIRE(again.skipped_levels.empty());
}

TEST_CASE("limit hitting on the adding machine") {
    auto p = build_named_prefix(NamedPrefix::thm_4_10, {}, 5);
    // at the loop level n with i = j, presence is exactly at multiples of k_n
    for (int n : {2, 3}) {
        long kn = p.level(n).size();
        auto table = limit_hitting(p, n, 0, 0, 24);
        for (int t = 1; t <= 24; ++t)
            REQUIRE(table.status[static_cast<std::size_t>(t - 1)].present == (t % kn == 0));
    }
    // pointed level: everything present via the unique fixed point fiber
    auto t1 = limit_hitting(p, 1, 0, 0, 10);
    for (const auto& st : t1.status) REQUIRE(st.present);
}

TEST_CASE("limit hitting present sets shrink with depth") {
    for (int d = 3; d <= 8; ++d) {
        auto shallow = constant_word_prefix(SemigroupWord("eLLe"), d);
        auto deeper = constant_word_prefix(SemigroupWord("eLLe"), d + 1);
        auto a = limit_hitting(shallow, 2, 2, 2, 40);
        auto b = limit_hitting(deeper, 2, 2, 2, 40);
        for (int t = 1; t <= 40; ++t) {
            bool pa = a.status[static_cast<std::size_t>(t - 1)].present;
            bool pb = b.status[static_cast<std::size_t>(t - 1)].present;
            if (pb) REQUIRE(pa); // deeper presence implies shallower presence
        }
    }
}

TEST_CASE("represents_in_prefix") {
    auto machine = build_named_prefix(NamedPrefix::thm_4_10, {}, 5);
    // everything factors onto the point
    auto triv = sys(FiniteSystem(FiniteRelation(1, {{0, 0}})));
    auto v0 = represents_in_prefix(triv, machine);
    REQUIRE(v0.status == RepresentVerdict::Status::yes);
    CHECK(v0.level == 1);

    auto v2 = represents_in_prefix(sys(loop(2)), machine);
    REQUIRE(v2.status == RepresentVerdict::Status::yes);
    CHECK(v2.level == 2);
    REQUIRE(v2.witness.has_value());
    CHECK(v2.witness->factor());

    // 4 never divides 2 * 3^k
    auto odd = build_named_prefix(NamedPrefix::thm_4_10, {{"seq", "1,2,6,18,54"}}, 5);
    auto v4 = represents_in_prefix(sys(loop(4)), odd);
    CHECK(v4.status == RepresentVerdict::Status::no_within_caps);
}

TEST_CASE("gamma domination between adding machines") {
    auto factorials = build_named_prefix(NamedPrefix::thm_4_10, {}, 8);
    auto powers = build_named_prefix(NamedPrefix::thm_4_10, {{"seq", "pow2"}}, 4);
    auto rep = gamma_dominates(factorials, powers);
    CHECK(rep.dominates_to_depth);

    // a pure loop of length > 1 is never a factor of a pointed-loop level
    auto pointed = constant_word_prefix(SemigroupWord("eLLe"), 4);
    auto rep2 = gamma_dominates(pointed, powers);
    CHECK(!rep2.dominates_to_depth);
    CHECK(rep2.failing_level == 2);
}
