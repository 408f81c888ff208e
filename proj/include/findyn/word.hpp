#pragma once

#include <string>
#include <vector>

#include "findyn/shimomura.hpp"

namespace findyn {

// A word over {e, L}. S requires at least one L; S' additionally starts and
// ends with e and has at least two L's.
class SemigroupWord {
  public:
    explicit SemigroupWord(std::string letters);

    const std::string& letters() const { return letters_; }
    long count_e() const { return k_; }
    long count_L() const { return cap_k_; }
    long ell(long x) const { return k_ + cap_k_ * x; } // ell_w(x) = k_w + K_w x
    bool in_S() const { return cap_k_ > 0; }
    bool in_S_prime() const;
    bool operator==(const SemigroupWord& o) const { return letters_ == o.letters_; }

  private:
    std::string letters_;
    long k_ = 0, cap_k_ = 0;
};

// w1 * w2: substitute w1 for every L of w2. The word L is the identity.
SemigroupWord compose_words(const SemigroupWord& w1, const SemigroupWord& w2);
SemigroupWord power_word(const SemigroupWord& w, int n);

// Lengths of the e-runs strictly between successive L's, in order of
// occurrence. Runs before the first L and after the last are excluded.
std::vector<long> run_lengths(const SemigroupWord& w);
std::pair<long, long> boundary_runs(const SemigroupWord& w); // leading, trailing

// Raw table of the map pointed_loop(ell_w(n)) ->> pointed_loop(n): each e
// sends a digit to 1, each L sends n digits in order onto [1,n].
std::vector<Vertex> word_map_table(const SemigroupWord& w, long n);

SystemMap word_to_map(const SemigroupWord& w, long n);

// Inverse of word_to_map for n >= 2 (at n = 1 distinct words collapse to the
// same constant map).
SemigroupWord map_to_word(const SystemMap& m);

// Levels pointed_loop(N_n) with N_1 = 1, N_{n+1} = ell_w(N_n), bonded by the
// word map at every level. Needs w in S'.
ShimomuraPrefix constant_word_prefix(const SemigroupWord& w, int depth,
                                     const BuildLimits& limits = {});

struct ObstructionRow {
    Vertex i = 0;
    bool certified = false;       // every t <= horizon absent from one of the two tables
    int first_uncertified_t = 0;  // 0 when certified
};

struct ObstructionReport {
    int level_n = 0;
    int horizon = 0;
    int depth = 0;
    std::vector<ObstructionRow> rows; // one per 2 < i < N_n
    bool all_certified = false;
};

// Thm 4.19(b) schema: for each 2 < i < N_n checks that
// N(U_i,U_i) and N(U_i,U_{i-1}) have no common element in [1,horizon],
// certifying each t by absence at some level of the prefix.
ObstructionReport weak_mixing_obstruction(const SemigroupWord& w, int level_n, int horizon,
                                          int depth);

struct EvidenceRow {
    Vertex i = 0;
    int absent_t = 0; // 0 when every probed t is present to depth
};

struct EvidenceReport {
    int level_n = 0;
    long k_start = 0;
    int window = 0;
    int depth = 0;
    std::vector<EvidenceRow> rows; // one per i in [1, N_n]
    bool all_present = false;
};

// Thm 4.19(a) schema: every t in [k_start, k_start+window] should be present
// to depth in N(U_i,U_i); any certified absence refutes and is reported.
// k_start defaults to N_n when 0.
EvidenceReport mixing_evidence(const SemigroupWord& w, int level_n, int window, int depth,
                               long k_start = 0);

} // namespace findyn
