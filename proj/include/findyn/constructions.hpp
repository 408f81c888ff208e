#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "findyn/system_map.hpp"

namespace findyn {

// An N-L-M dumbbell: two loops joined by a directed path. l == 0 is a wedge.
struct DumbbellShape {
    long n_in = 1;
    long l = 0;
    long m_out = 1;

    long vertex_count() const { return n_in + l + m_out - 1; }
    bool is_wedge() const { return l == 0; }
    void validate() const;
    bool operator==(const DumbbellShape&) const = default;
};

FiniteSystem loop(long n);
FiniteSystem dumbbell(const DumbbellShape& shape);
FiniteSystem wedge(long n, long m);
FiniteSystem pointed_loop(long m);

// Parses "loop:N", "dumbbell:N,L,M", "wedge:N,M", "pointed:M".
FiniteSystem parse_shape(const std::string& text);

// The unique dumbbell-to-dumbbell surjection sending connecting-path vertex i
// to connecting-path vertex j, when the divisibility and slack conditions
// admit one. i and j are 1-based vertex positions.
struct DumbbellMapResult {
    std::optional<SystemMap> map;
    std::string certificate;
};
DumbbellMapResult canonical_dumbbell_map(const DumbbellShape& src, const DumbbellShape& dst,
                                         long i, long j);

// A closed walk through every edge, read as a factor map from a loop.
std::pair<std::shared_ptr<const FiniteSystem>, SystemMap>
loop_cover(std::shared_ptr<const FiniteSystem> s);

struct DumbbellCover {
    std::vector<DumbbellShape> shapes;
    std::shared_ptr<const FiniteSystem> cover; // disjoint union of the dumbbells
    SystemMap onto;                            // factor onto s
};
DumbbellCover dumbbell_cover(std::shared_ptr<const FiniteSystem> s);

// Equal-length loops covering a recurrent system whose edges stay inside
// basic sets. Rejects edges that leave their basic set (such a system is not
// a factor of disjoint loops).
std::pair<std::shared_ptr<const FiniteSystem>, SystemMap>
loop_union_cover(std::shared_ptr<const FiniteSystem> s);

// Positive mixtures of a coprime pair: the closed-form bound K >= M+(yN+1)N
// with 1 = xM - yN, and the exact least threshold found by brute force.
struct MixtureBound {
    long paper_bound = 0;
    long exact_threshold = 0;
    long x = 0, y = 0;
};
MixtureBound mixture_bound(long m, long n);

// Data to map any large wedge onto a mixing system: k = K1 + K2 where the
// system's N-th powers are full from K1 on and a covering loop of length K2
// exists through base.
struct WedgeThreshold {
    long k = 0;
    long power_full_from = 0; // K1
    long cover_length = 0;    // K2
    Vertex base = 0;
    std::vector<Vertex> cover_walk; // closed, length K2, starts and ends at base
};
WedgeThreshold wedge_mixing_threshold(const FiniteSystem& s);
std::pair<std::shared_ptr<const FiniteSystem>, SystemMap>
wedge_factor_from_threshold(std::shared_ptr<const FiniteSystem> s, const WedgeThreshold& t, long n,
                            long m);

// Brute-force probe for the least k such that every wedge with both arms
// >= k maps onto s; needs |edges| <= mask_bits.
long wedge_threshold_probe(const FiniteSystem& s, long cap);

// Iterates (M,N) <- A(M,N) from (1,1) for a positive unimodular matrix and
// returns the (M_k, N_k) pairs; every pair is coprime and both coordinates
// grow from the second step on.
std::vector<std::pair<long, long>> wedge_pair_sequence(long a, long b, long c, long d, int depth);

// For a permutation system with a cycle of length >= m+2, the quotient that
// collapses an orbit segment onto a pointed loop of length m.
std::optional<SystemMap> wedge_representation_of_nonperiodic(std::shared_ptr<const FiniteSystem> s,
                                                             long m);

} // namespace findyn
