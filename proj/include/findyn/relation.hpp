#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "findyn/error.hpp"

namespace findyn {

// Vertices are 0-based internally. Display, JSON and the CLI use the 1-based
// labels of the source material; the shift happens only at the I/O boundary.
using Vertex = std::int32_t;
using Edge = std::pair<Vertex, Vertex>;

// A relation on an indexed finite vertex set: a set of ordered pairs.
// Edges are kept sorted and deduplicated, which doubles as the canonical
// serialization order.
class FiniteRelation {
  public:
    FiniteRelation() = default;
    FiniteRelation(Vertex size, std::vector<Edge> edges, std::vector<std::string> labels = {});

    Vertex size() const { return size_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<std::string>& labels() const { return labels_; }
    bool has_edge(Vertex a, Vertex b) const;
    std::string label(Vertex v) const; // 1-based index when no label table

    bool operator==(const FiniteRelation& o) const { return size_ == o.size_ && edges_ == o.edges_; }
    bool operator!=(const FiniteRelation& o) const { return !(*this == o); }

  private:
    Vertex size_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::string> labels_;
};

// Out/in neighbourhoods in CSR form; targets sorted ascending.
struct Adjacency {
    explicit Adjacency(const FiniteRelation& r);
    std::span<const Vertex> out(Vertex v) const {
        return {out_to.data() + out_off[v], out_to.data() + out_off[v + 1]};
    }
    std::span<const Vertex> in(Vertex v) const {
        return {in_to.data() + in_off[v], in_to.data() + in_off[v + 1]};
    }
    std::vector<std::size_t> out_off, in_off;
    std::vector<Vertex> out_to, in_to;
};

bool is_surjective_relation(const FiniteRelation& r);

// A surjective relation: every vertex has a successor and a predecessor.
class FiniteSystem {
  public:
    explicit FiniteSystem(FiniteRelation rel);

    const FiniteRelation& rel() const { return rel_; }
    Vertex size() const { return rel_.size(); }
    const std::vector<Edge>& edges() const { return rel_.edges(); }
    bool operator==(const FiniteSystem& o) const { return rel_ == o.rel_; }
    bool operator!=(const FiniteSystem& o) const { return !(*this == o); }

  private:
    FiniteRelation rel_;
};

struct BasicSetPeriod {
    std::vector<Vertex> members; // sorted
    long period = 0;             // gcd of directed cycle lengths inside the set
};

struct PropertyReport {
    bool surjective = false;
    bool recurrent = false;
    bool transitive = false;
    bool mixing = false;
    std::optional<long> mixing_exponent; // least N with R^N full, present iff mixing
    long loop_period = 0;                // gcd of directed cycle lengths, 0 if acyclic
    std::vector<int> per_window;         // { n <= horizon : |R^n| nonempty }
    std::vector<BasicSetPeriod> per_eventual;
};

FiniteRelation identity_relation(Vertex n);
FiniteRelation full_relation(Vertex n);

// s o r: pairs (a,c) with some b, (a,b) in r and (b,c) in s.
FiniteRelation compose(const FiniteRelation& r, const FiniteRelation& s);
FiniteRelation inverse(const FiniteRelation& r);
FiniteRelation relation_power(const FiniteRelation& r, long n);
std::vector<Vertex> fixed_set(const FiniteRelation& r);

// Union of all positive powers (transitive closure without the 0th power).
FiniteRelation orbit_closure(const FiniteRelation& r);

// Equivalence classes of mutually reachable vertices that lie on cycles,
// i.e. the cyclic strongly connected pieces. Sorted by least member.
std::vector<std::vector<Vertex>> basic_sets(const FiniteRelation& r);

PropertyReport classify(const FiniteSystem& s, int per_horizon = 32);

// Directed-cycle gcd of an arbitrary relation (0 when acyclic). This is the
// loop_period reported by classify; the colouring-based variant lives with
// factors_onto_loop.
long cycle_gcd(const FiniteRelation& r);

FiniteRelation product(const FiniteRelation& r1, const FiniteRelation& r2);
FiniteRelation disjoint_union(const FiniteRelation& r1, const FiniteRelation& r2);

// N-fold discrete suspension on A x [1,N]; vertex (a,i) has index i*|A|+a
// (0-based layer i). suspension(s,1) == s exactly.
FiniteSystem suspension(const FiniteSystem& s, int n);

// { t in [1,horizon] : some length-t path from u into v }.
std::vector<int> hitting_times(const FiniteSystem& s, const std::vector<Vertex>& u,
                               const std::vector<Vertex>& v, int horizon);

// All edge-consistent vertex words of the given length, lexicographic.
std::vector<std::vector<Vertex>> admissible_words(const FiniteSystem& s, int length,
                                                  std::size_t cap = 1u << 20);

struct ExtensionVerdict {
    bool ok = true;
    std::vector<Vertex> witness; // first word with no cyclic completion
};

// Checks that every admissible word of the window length extends to a cyclic
// admissible word (a closed walk containing it). Holds whenever no edge
// leaves its basic set; a recurrent relation can violate it.
ExtensionVerdict periodic_extension_check(const FiniteSystem& s, int window,
                                          std::size_t cap = 1u << 20);

} // namespace findyn
