#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "findyn/constructions.hpp"
#include "findyn/word.hpp"

using namespace findyn;

namespace {

SemigroupWord random_word(std::mt19937_64& rng, int max_len) {
    while (true) {
        int len = 1 + static_cast<int>(rng() % max_len);
        std::string s;
        for (int i = 0; i < len; ++i) s += (rng() % 2) ? 'L' : 'e';
        if (s.find('L') != std::string::npos) return SemigroupWord(s);
    }
}

} // namespace

TEST_CASE("word basics and membership") {
    SemigroupWord w("eLLe");
    CHECK(w.count_e() == 2);
    CHECK(w.count_L() == 2);
    CHECK(w.ell(4) == 10);
    CHECK(w.in_S());
    CHECK(w.in_S_prime());
    CHECK(!SemigroupWord("LL").in_S_prime());
    CHECK(!SemigroupWord("eLe").in_S_prime());
    CHECK(!SemigroupWord("eee").in_S());
    CHECK_THROWS_AS(SemigroupWord("exL"), error);
}

TEST_CASE("composition is substitution") {
    // L is the identity on both sides
    std::mt19937_64 rng(17);
    for (int t = 0; t < 50; ++t) {
        auto w = random_word(rng, 8);
        CHECK(compose_words(w, SemigroupWord("L")).letters() == w.letters());
        CHECK(compose_words(SemigroupWord("L"), w).letters() == w.letters());
    }
    CHECK(compose_words(SemigroupWord("eLLe"), SemigroupWord("LL")).letters() == "eLLeeLLe");

    // associativity on random triples
    for (int t = 0; t < 200; ++t) {
        auto a = random_word(rng, 8), b = random_word(rng, 8), c = random_word(rng, 8);
        REQUIRE(compose_words(compose_words(a, b), c).letters() ==
                compose_words(a, compose_words(b, c)).letters());
    }
}

TEST_CASE("length functions compose contravariantly") {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 200; ++t) {
        auto w1 = random_word(rng, 8), w2 = random_word(rng, 8);
        auto w = compose_words(w1, w2);
        for (long x = 0; x <= 6; ++x) REQUIRE(w.ell(x) == w2.ell(w1.ell(x)));
    }
}

TEST_CASE("run lengths") {
    CHECK(run_lengths(SemigroupWord("eLeLLe")) == std::vector<long>{1, 0});
    CHECK(run_lengths(SemigroupWord("eLLe")) == std::vector<long>{0});
    CHECK(boundary_runs(SemigroupWord("eeLLe")) == std::pair<long, long>{2, 1});

    // in powers of eLeLLe every run length 0..2n-1 appears
    auto w = SemigroupWord("eLeLLe");
    for (int n = 1; n <= 6; ++n) {
        auto runs = run_lengths(power_word(w, n));
        std::set<long> seen(runs.begin(), runs.end());
        for (long r = 0; r <= 2 * n - 1; ++r) REQUIRE(seen.count(r) == 1);
        REQUIRE(*std::max_element(runs.begin(), runs.end()) == 2 * n - 1);
    }
    // powers of eLLe only have even runs 0..2n-2
    auto v = SemigroupWord("eLLe");
    for (int n = 1; n <= 6; ++n) {
        auto runs = run_lengths(power_word(v, n));
        for (long r : runs) REQUIRE(r % 2 == 0);
        std::set<long> seen(runs.begin(), runs.end());
        for (long r = 0; r <= 2 * n - 2; r += 2) REQUIRE(seen.count(r) == 1);
    }
}

TEST_CASE("word maps") {
    // the identity word gives the identity map
    auto id = word_to_map(SemigroupWord("L"), 5);
    for (Vertex v = 0; v < 5; ++v) REQUIRE(id(v) == v);

    // n = 1 collapse: everything to the fixed point
    auto c = word_to_map(SemigroupWord("eLLe"), 1);
    CHECK(c.domain().size() == 4);
    for (Vertex v = 0; v < 4; ++v) REQUIRE(c(v) == 0);

    // direct reading of the recipe at n = 4
    auto m = word_to_map(SemigroupWord("eLLe"), 4);
    REQUIRE(m.table() == std::vector<Vertex>{0, 0, 1, 2, 3, 0, 1, 2, 3, 0});
    CHECK(m.factor());
    CHECK(map_to_word(m).letters() == "eLLe");

    // round trip across S for small n >= 2 (at n = 1 the encoding collapses)
    std::mt19937_64 rng(29);
    for (int t = 0; t < 200; ++t) {
        auto w = random_word(rng, 8);
        long n = 2 + static_cast<long>(rng() % 7);
        auto wm = word_to_map(w, n);
        REQUIRE(wm.factor());
        REQUIRE(map_to_word(wm).letters() == w.letters());
        if (w.in_S_prime()) REQUIRE(check_lift(wm).is_pm);
    }
}

TEST_CASE("word-map composition law") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 200; ++t) {
        auto w1 = random_word(rng, 6), w2 = random_word(rng, 6);
        long n = 1 + static_cast<long>(rng() % 6);
        long m1 = w1.ell(n);
        auto lhs = word_to_map(compose_words(w1, w2), n);
        auto rhs = compose_maps(word_to_map(w1, n), word_to_map(w2, m1));
        REQUIRE(lhs.table() == rhs.table());
    }
}

TEST_CASE("constant word prefixes and their closed forms") {
    auto sizes = [](const char* letters, int depth) {
        auto p = constant_word_prefix(SemigroupWord(letters), depth);
        std::vector<long> out;
        for (int n = 1; n <= depth; ++n) out.push_back(p.level(n).size());
        return out;
    };
    CHECK(sizes("eLLe", 5) == std::vector<long>{1, 4, 10, 22, 46});
    CHECK(sizes("eLeLLe", 4) == std::vector<long>{1, 6, 21, 66});
    CHECK(sizes("eLeLe", 4) == std::vector<long>{1, 5, 13, 29});

    auto p = constant_word_prefix(SemigroupWord("eLLe"), 5);
    auto verdict = validate_prefix(p);
    CHECK(verdict.pointed);
    CHECK(verdict.all_resolved());
    for (int n = 1; n < 5; ++n) REQUIRE(check_lift(p.bonding(n)).is_pm);

    CHECK_THROWS_AS(constant_word_prefix(SemigroupWord("eLe"), 4), error);
}

TEST_CASE("closed forms for the four standard words up to depth 12") {
    auto check_form = [](const char* letters, auto formula) {
        SemigroupWord w(letters);
        long n_val = 1;
        for (int n = 1; n <= 12; ++n) {
            REQUIRE(n_val == formula(n));
            n_val = w.ell(n_val);
        }
    };
    auto p3 = [](int n) { // 3^(n-1)
        long r = 1;
        for (int i = 1; i < n; ++i) r *= 3;
        return r;
    };
    check_form("eLLe", [](int n) { return 3l * (1l << (n - 1)) - 2; });
    check_form("eLeLLe", [&](int n) { return (5 * p3(n) - 3) / 2; });
    check_form("eLLLe", [&](int n) { return 2 * p3(n) - 1; });
    check_form("eLeLe", [](int n) { return (1l << (n + 1)) - 3; });
}

TEST_CASE("hitting tables for the fixed-point level are all present") {
    auto p = constant_word_prefix(SemigroupWord("eLLe"), 5);
    auto t = limit_hitting(p, 2, 0, 0, 12); // vertex 1 fiber contains the fixed point
    for (const auto& st : t.status) REQUIRE(st.present);
}

TEST_CASE("weak mixing obstruction certifies at the calibrated horizon") {
    // at depth d and level n the through-the-fixed-point detours cost at
    // least 2(d-n)+10 steps for eLLe, so the parity certificate holds on
    // [1, 2(d-n)+9] and is refutable beyond it
    auto rep = weak_mixing_obstruction(SemigroupWord("eLLe"), 3, 21, 9);
    CHECK(rep.all_certified);
    auto over = weak_mixing_obstruction(SemigroupWord("eLLe"), 3, 30, 9);
    CHECK(!over.all_certified);
    for (const auto& row : over.rows) REQUIRE(row.first_uncertified_t >= 22);

    // for eLeLe the odd loop length shifts the detour parity by one
    auto rep2 = weak_mixing_obstruction(SemigroupWord("eLeLe"), 3, 23, 9);
    CHECK(rep2.all_certified);
    auto over2 = weak_mixing_obstruction(SemigroupWord("eLeLe"), 3, 24, 9);
    CHECK(!over2.all_certified);

    // the mixing word admits no such certificate even at small horizons
    auto mix = weak_mixing_obstruction(SemigroupWord("eLeLLe"), 2, 24, 9);
    CHECK(!mix.all_certified);
}

TEST_CASE("mixing evidence for the mixing words") {
    auto rep = mixing_evidence(SemigroupWord("eLeLLe"), 2, 40, 8);
    CHECK(rep.all_present);
    CHECK(rep.k_start == 6);

    auto rep2 = mixing_evidence(SemigroupWord("eLLLe"), 2, 40, 8, 2 * 5 + 2);
    CHECK(rep2.all_present);

    // eLLe at one parity stays absent: evidence must fail
    auto bad = mixing_evidence(SemigroupWord("eLLe"), 2, 12, 8);
    CHECK(!bad.all_present);
}
