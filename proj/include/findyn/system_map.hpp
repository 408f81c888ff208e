#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "findyn/relation.hpp"

namespace findyn {

struct MapCheck {
    bool homomorphism = false;
    std::optional<Edge> witness; // first domain edge with image outside the codomain
    bool surjective = false;
    bool factor = false; // surjective and exact edge image
};

MapCheck check_map_table(const FiniteSystem& dom, const FiniteSystem& cod,
                         const std::vector<Vertex>& table);

// A total vertex function that is a graph homomorphism. Domain and codomain
// are shared immutable systems so maps copy cheaply.
class SystemMap {
  public:
    SystemMap(std::shared_ptr<const FiniteSystem> dom, std::shared_ptr<const FiniteSystem> cod,
              std::vector<Vertex> table);
    SystemMap(FiniteSystem dom, FiniteSystem cod, std::vector<Vertex> table);

    const FiniteSystem& domain() const { return *dom_; }
    const FiniteSystem& codomain() const { return *cod_; }
    std::shared_ptr<const FiniteSystem> domain_ptr() const { return dom_; }
    std::shared_ptr<const FiniteSystem> codomain_ptr() const { return cod_; }
    const std::vector<Vertex>& table() const { return table_; }
    Vertex operator()(Vertex v) const { return table_[v]; }
    bool surjective() const { return surjective_; }
    bool factor() const { return factor_; }

  private:
    std::shared_ptr<const FiniteSystem> dom_, cod_;
    std::vector<Vertex> table_;
    bool surjective_ = false, factor_ = false;
};

// outer o inner : domain(inner) -> codomain(outer)
SystemMap compose_maps(const SystemMap& outer, const SystemMap& inner);
SystemMap identity_map(std::shared_ptr<const FiniteSystem> s);

MapCheck validate_map(const SystemMap& m);

// Quotient by a vertex partition; the returned map is a factor by construction.
std::pair<std::shared_ptr<const FiniteSystem>, SystemMap>
quotient_by_partition(std::shared_ptr<const FiniteSystem> s,
                      const std::vector<std::vector<Vertex>>& blocks);

enum class MapMode { all, surjective, factor };

struct EnumCaps {
    Vertex max_domain = 12;
    Vertex max_codomain = 8;
    std::uint64_t max_nodes = 50'000'000; // backtracking budget
};

// Exhaustive homomorphism enumeration in lexicographic order of image tables.
// The visitor returns false to stop early. Throws a resource error when a cap
// is hit, naming the bound, since completeness is then lost.
void enumerate_maps_visit(const FiniteSystem& dom, const FiniteSystem& cod, MapMode mode,
                          const EnumCaps& caps,
                          const std::function<bool(const std::vector<Vertex>&)>& visit);

std::vector<SystemMap> enumerate_maps(std::shared_ptr<const FiniteSystem> dom,
                                      std::shared_ptr<const FiniteSystem> cod, MapMode mode,
                                      const EnumCaps& caps = {});

struct LiftVerdict {
    bool is_plus = false;
    bool is_pm = false;
    std::vector<std::string> failures; // failed clause with witness, display labels
};

// Directional-lift clauses for a candidate projection pi = m:
//   (i) factor, (ii) pi o phi1 single-valued, (iii) every fiber has >= 2
//   elements; +- additionally needs (iv) pi o phi1^{-1} single-valued.
LiftVerdict check_lift(const SystemMap& m);

// Largest n such that the vertices admit a consistent cyclic n-colouring,
// i.e. the largest loop the system factors onto. Agrees with the directed
// cycle gcd on transitive systems but can be smaller in general.
long loop_period(const FiniteSystem& s);

struct LoopFactorResult {
    std::optional<SystemMap> map;
    std::string certificate; // why no factor exists, when map is absent
};

LoopFactorResult factors_onto_loop(std::shared_ptr<const FiniteSystem> s, long n);

} // namespace findyn
