#include "findyn/relation.hpp"

#include <algorithm>
#include <numeric>

namespace findyn {

namespace {

void sort_unique(std::vector<Edge>& edges) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

// Dense boolean matrix over 64-bit words, for powers and closures of
// desk-scale relations.
struct BitMatrix {
    Vertex n = 0;
    std::size_t words = 0;
    std::vector<std::uint64_t> bits;

    explicit BitMatrix(Vertex n_) : n(n_), words((static_cast<std::size_t>(n_) + 63) / 64) {
        bits.assign(static_cast<std::size_t>(n) * words, 0);
    }
    void set(Vertex a, Vertex b) {
        bits[static_cast<std::size_t>(a) * words + static_cast<std::size_t>(b) / 64] |=
            std::uint64_t{1} << (b % 64);
    }
    bool get(Vertex a, Vertex b) const {
        return (bits[static_cast<std::size_t>(a) * words + static_cast<std::size_t>(b) / 64] >>
                (b % 64)) &
               1u;
    }
    const std::uint64_t* row(Vertex a) const { return bits.data() + static_cast<std::size_t>(a) * words; }
    std::uint64_t* row(Vertex a) { return bits.data() + static_cast<std::size_t>(a) * words; }

    bool full() const {
        for (Vertex a = 0; a < n; ++a) {
            const std::uint64_t* r = row(a);
            for (std::size_t w = 0; w + 1 < words; ++w)
                if (r[w] != ~std::uint64_t{0}) return false;
            if (words) {
                std::uint64_t last = (n % 64) ? ((std::uint64_t{1} << (n % 64)) - 1) : ~std::uint64_t{0};
                if ((r[words - 1] & last) != last) return false;
            }
        }
        return n > 0;
    }
    bool any_diag() const {
        for (Vertex a = 0; a < n; ++a)
            if (get(a, a)) return true;
        return false;
    }
    bool operator==(const BitMatrix& o) const { return bits == o.bits; }
};

BitMatrix to_matrix(const FiniteRelation& r) {
    BitMatrix m(r.size());
    for (auto [a, b] : r.edges()) m.set(a, b);
    return m;
}

FiniteRelation from_matrix(const BitMatrix& m) {
    std::vector<Edge> edges;
    for (Vertex a = 0; a < m.n; ++a)
        for (Vertex b = 0; b < m.n; ++b)
            if (m.get(a, b)) edges.emplace_back(a, b);
    return FiniteRelation(m.n, std::move(edges));
}

// product in the path sense: (a,c) iff some b with x(a,b) and y(b,c)
BitMatrix multiply(const BitMatrix& x, const BitMatrix& y) {
    BitMatrix out(x.n);
    for (Vertex a = 0; a < x.n; ++a) {
        std::uint64_t* dst = out.row(a);
        const std::uint64_t* xr = x.row(a);
        for (Vertex b = 0; b < x.n; ++b) {
            if ((xr[static_cast<std::size_t>(b) / 64] >> (b % 64)) & 1u) {
                const std::uint64_t* yr = y.row(b);
                for (std::size_t w = 0; w < out.words; ++w) dst[w] |= yr[w];
            }
        }
    }
    return out;
}

void unite(BitMatrix& x, const BitMatrix& y) {
    for (std::size_t i = 0; i < x.bits.size(); ++i) x.bits[i] |= y.bits[i];
}

// Iterative Tarjan SCC; components emitted in order of least member at the end.
std::vector<int> scc_ids(const FiniteRelation& r, int& count) {
    const Vertex n = r.size();
    Adjacency adj(r);
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<char> on_stack(n, 0);
    std::vector<Vertex> stack;
    struct Frame {
        Vertex v;
        std::size_t next;
    };
    std::vector<Frame> frames;
    int idx = 0;
    count = 0;
    for (Vertex root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        frames.push_back({root, 0});
        index[root] = low[root] = idx++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!frames.empty()) {
            Frame& f = frames.back();
            auto succ = adj.out(f.v);
            if (f.next < succ.size()) {
                Vertex w = succ[f.next++];
                if (index[w] == -1) {
                    index[w] = low[w] = idx++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
            } else {
                Vertex v = f.v;
                frames.pop_back();
                if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
                if (low[v] == index[v]) {
                    while (true) {
                        Vertex w = stack.back();
                        stack.pop_back();
                        on_stack[w] = 0;
                        comp[w] = count;
                        if (w == v) break;
                    }
                    ++count;
                }
            }
        }
    }
    return comp;
}

long gcd_accumulate(long g, long v) {
    if (v < 0) v = -v;
    return std::gcd(g, v);
}

} // namespace

FiniteRelation::FiniteRelation(Vertex size, std::vector<Edge> edges, std::vector<std::string> labels)
    : size_(size), edges_(std::move(edges)), labels_(std::move(labels)) {
    if (size_ <= 0) fail(errc::argument, "relation needs a positive vertex count");
    for (auto [a, b] : edges_)
        if (a < 0 || a >= size_ || b < 0 || b >= size_)
            fail(errc::argument, "edge endpoint " + std::to_string(a + 1) + "," +
                                     std::to_string(b + 1) + " outside [1," + std::to_string(size_) + "]");
    if (!labels_.empty() && static_cast<Vertex>(labels_.size()) != size_)
        fail(errc::argument, "label table size does not match vertex count");
    sort_unique(edges_);
}

bool FiniteRelation::has_edge(Vertex a, Vertex b) const {
    return std::binary_search(edges_.begin(), edges_.end(), Edge{a, b});
}

std::string FiniteRelation::label(Vertex v) const {
    if (!labels_.empty()) return labels_[v];
    return std::to_string(v + 1);
}

Adjacency::Adjacency(const FiniteRelation& r) {
    const auto n = static_cast<std::size_t>(r.size());
    out_off.assign(n + 1, 0);
    in_off.assign(n + 1, 0);
    for (auto [a, b] : r.edges()) {
        ++out_off[static_cast<std::size_t>(a) + 1];
        ++in_off[static_cast<std::size_t>(b) + 1];
    }
    for (std::size_t i = 0; i < n; ++i) {
        out_off[i + 1] += out_off[i];
        in_off[i + 1] += in_off[i];
    }
    out_to.resize(r.edges().size());
    in_to.resize(r.edges().size());
    std::vector<std::size_t> op(out_off.begin(), out_off.end() - 1), ip(in_off.begin(), in_off.end() - 1);
    for (auto [a, b] : r.edges()) out_to[op[static_cast<std::size_t>(a)]++] = b;
    for (auto [a, b] : r.edges()) in_to[ip[static_cast<std::size_t>(b)]++] = a; // edges sorted by (a,b): in lists sorted too
}

bool is_surjective_relation(const FiniteRelation& r) {
    std::vector<char> has_out(r.size(), 0), has_in(r.size(), 0);
    for (auto [a, b] : r.edges()) {
        has_out[a] = 1;
        has_in[b] = 1;
    }
    for (Vertex v = 0; v < r.size(); ++v)
        if (!has_out[v] || !has_in[v]) return false;
    return true;
}

FiniteSystem::FiniteSystem(FiniteRelation rel) : rel_(std::move(rel)) {
    std::vector<char> has_out(rel_.size(), 0), has_in(rel_.size(), 0);
    for (auto [a, b] : rel_.edges()) {
        has_out[a] = 1;
        has_in[b] = 1;
    }
    for (Vertex v = 0; v < rel_.size(); ++v) {
        if (!has_out[v])
            fail(errc::validation, "not surjective: vertex " + rel_.label(v) + " has no successor");
        if (!has_in[v])
            fail(errc::validation, "not surjective: vertex " + rel_.label(v) + " has no predecessor");
    }
}

FiniteRelation identity_relation(Vertex n) {
    std::vector<Edge> e;
    e.reserve(n);
    for (Vertex v = 0; v < n; ++v) e.emplace_back(v, v);
    return FiniteRelation(n, std::move(e));
}

FiniteRelation full_relation(Vertex n) {
    std::vector<Edge> e;
    e.reserve(static_cast<std::size_t>(n) * n);
    for (Vertex a = 0; a < n; ++a)
        for (Vertex b = 0; b < n; ++b) e.emplace_back(a, b);
    return FiniteRelation(n, std::move(e));
}

FiniteRelation compose(const FiniteRelation& r, const FiniteRelation& s) {
    if (r.size() != s.size())
        fail(errc::dimension, "compose: sizes " + std::to_string(r.size()) + " and " +
                                  std::to_string(s.size()) + " differ");
    Adjacency sa(s);
    std::vector<Edge> out;
    for (auto [a, b] : r.edges())
        for (Vertex c : sa.out(b)) out.emplace_back(a, c);
    sort_unique(out);
    return FiniteRelation(r.size(), std::move(out));
}

FiniteRelation inverse(const FiniteRelation& r) {
    std::vector<Edge> out;
    out.reserve(r.edges().size());
    for (auto [a, b] : r.edges()) out.emplace_back(b, a);
    sort_unique(out);
    return FiniteRelation(r.size(), std::move(out));
}

FiniteRelation relation_power(const FiniteRelation& r, long n) {
    if (n < 0) fail(errc::argument, "relation_power: negative exponent");
    if (n == 0) return identity_relation(r.size());
    BitMatrix acc = to_matrix(r);
    BitMatrix base = acc;
    --n;
    // left-to-right binary exponentiation keeps the multiply count low
    while (n > 0) {
        if (n & 1) acc = multiply(acc, base);
        n >>= 1;
        if (n > 0) base = multiply(base, base);
    }
    return from_matrix(acc);
}

std::vector<Vertex> fixed_set(const FiniteRelation& r) {
    std::vector<Vertex> out;
    for (auto [a, b] : r.edges())
        if (a == b) out.push_back(a);
    return out;
}

FiniteRelation orbit_closure(const FiniteRelation& r) {
    BitMatrix t = to_matrix(r);
    while (true) {
        BitMatrix next = multiply(t, t);
        unite(next, t);
        if (next == t) break;
        t = std::move(next);
    }
    return from_matrix(t);
}

std::vector<std::vector<Vertex>> basic_sets(const FiniteRelation& r) {
    int count = 0;
    std::vector<int> comp = scc_ids(r, count);
    std::vector<std::vector<Vertex>> groups(count);
    for (Vertex v = 0; v < r.size(); ++v) groups[comp[v]].push_back(v);
    std::vector<char> cyclic(count, 0);
    for (auto [a, b] : r.edges())
        if (comp[a] == comp[b]) cyclic[comp[a]] = 1; // intra-SCC edge closes a cycle
    std::vector<std::vector<Vertex>> out;
    for (auto& g : groups) {
        std::sort(g.begin(), g.end());
        if (cyclic[comp[g.front()]]) out.push_back(std::move(g));
    }
    std::sort(out.begin(), out.end());
    return out;
}

long cycle_gcd(const FiniteRelation& r) {
    int count = 0;
    std::vector<int> comp = scc_ids(r, count);
    Adjacency adj(r);
    // per-SCC period: BFS levels, gcd of (level(u)+1-level(v)) over intra edges
    std::vector<long> level(r.size(), -1);
    long g = 0;
    std::vector<char> cyclic(count, 0);
    for (auto [a, b] : r.edges())
        if (comp[a] == comp[b]) cyclic[comp[a]] = 1;
    std::vector<Vertex> queue;
    for (Vertex root = 0; root < r.size(); ++root) {
        if (level[root] != -1 || !cyclic[comp[root]]) continue;
        long sg = 0;
        queue.assign(1, root);
        level[root] = 0;
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            Vertex v = queue[qi];
            for (Vertex w : adj.out(v)) {
                if (comp[w] != comp[v]) continue;
                if (level[w] == -1) {
                    level[w] = level[v] + 1;
                    queue.push_back(w);
                } else {
                    sg = gcd_accumulate(sg, level[v] + 1 - level[w]);
                }
            }
        }
        g = std::gcd(g, sg);
    }
    return g;
}

PropertyReport classify(const FiniteSystem& s, int per_horizon) {
    if (per_horizon < 1) fail(errc::argument, "classify: horizon must be positive");
    const FiniteRelation& r = s.rel();
    const Vertex n = r.size();
    PropertyReport rep;
    rep.surjective = true; // FiniteSystem invariant

    int count = 0;
    std::vector<int> comp = scc_ids(r, count);
    std::vector<char> cyclic(count, 0);
    for (auto [a, b] : r.edges())
        if (comp[a] == comp[b]) cyclic[comp[a]] = 1;
    rep.recurrent = true;
    for (Vertex v = 0; v < n; ++v)
        if (!cyclic[comp[v]]) rep.recurrent = false;
    rep.transitive = (count == 1) && cyclic[0];

    rep.loop_period = cycle_gcd(r);
    for (const auto& bs : basic_sets(r)) {
        FiniteRelation restricted = [&] {
            std::vector<Vertex> pos(n, -1);
            for (std::size_t i = 0; i < bs.size(); ++i) pos[bs[i]] = static_cast<Vertex>(i);
            std::vector<Edge> e;
            for (auto [a, b] : r.edges())
                if (pos[a] >= 0 && pos[b] >= 0) e.emplace_back(pos[a], pos[b]);
            return FiniteRelation(static_cast<Vertex>(bs.size()), std::move(e));
        }();
        rep.per_eventual.push_back({bs, cycle_gcd(restricted)});
    }

    // mixing, two independent routes that must agree
    const long wielandt = static_cast<long>(n - 1) * (n - 1) + 1;
    BitMatrix base = to_matrix(r);
    BitMatrix acc = base;
    std::optional<long> exponent;
    for (long k = 1; k <= wielandt; ++k) {
        if (k > 1) acc = multiply(acc, base);
        if (acc.full()) {
            exponent = k;
            break;
        }
    }
    bool mixing_by_matrix = exponent.has_value();
    bool mixing_by_period = rep.transitive && rep.loop_period == 1;
    if (mixing_by_matrix != mixing_by_period)
        fail(errc::internal, "mixing oracles disagree on a " + std::to_string(n) + "-vertex system");
    rep.mixing = mixing_by_matrix;
    rep.mixing_exponent = exponent;

    BitMatrix pw = base;
    for (int t = 1; t <= per_horizon; ++t) {
        if (t > 1) pw = multiply(pw, base);
        if (pw.any_diag()) rep.per_window.push_back(t);
    }
    return rep;
}

FiniteRelation product(const FiniteRelation& r1, const FiniteRelation& r2) {
    const Vertex n1 = r1.size(), n2 = r2.size();
    std::vector<Edge> e;
    e.reserve(r1.edges().size() * r2.edges().size());
    for (auto [a1, b1] : r1.edges())
        for (auto [a2, b2] : r2.edges())
            e.emplace_back(a1 * n2 + a2, b1 * n2 + b2);
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(n1) * n2);
    for (Vertex a = 0; a < n1; ++a)
        for (Vertex b = 0; b < n2; ++b) labels.push_back("(" + r1.label(a) + "," + r2.label(b) + ")");
    return FiniteRelation(n1 * n2, std::move(e), std::move(labels));
}

FiniteRelation disjoint_union(const FiniteRelation& r1, const FiniteRelation& r2) {
    const Vertex n1 = r1.size();
    std::vector<Edge> e(r1.edges());
    for (auto [a, b] : r2.edges()) e.emplace_back(a + n1, b + n1);
    std::vector<std::string> labels;
    for (Vertex v = 0; v < n1; ++v) labels.push_back("1." + r1.label(v));
    for (Vertex v = 0; v < r2.size(); ++v) labels.push_back("2." + r2.label(v));
    return FiniteRelation(n1 + r2.size(), std::move(e), std::move(labels));
}

FiniteSystem suspension(const FiniteSystem& s, int n) {
    if (n < 1) fail(errc::argument, "suspension: fold count must be positive");
    const Vertex a = s.size();
    std::vector<Edge> e;
    e.reserve(static_cast<std::size_t>(a) * (n - 1) + s.edges().size());
    for (int i = 0; i + 1 < n; ++i)
        for (Vertex v = 0; v < a; ++v) e.emplace_back(i * a + v, (i + 1) * a + v);
    for (auto [x, y] : s.edges()) e.emplace_back((n - 1) * a + x, y);
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(a) * n);
    for (int i = 0; i < n; ++i)
        for (Vertex v = 0; v < a; ++v)
            labels.push_back("(" + s.rel().label(v) + "," + std::to_string(i + 1) + ")");
    return FiniteSystem(FiniteRelation(a * n, std::move(e), std::move(labels)));
}

std::vector<int> hitting_times(const FiniteSystem& s, const std::vector<Vertex>& u,
                               const std::vector<Vertex>& v, int horizon) {
    if (u.empty() || v.empty()) fail(errc::argument, "hitting_times: empty vertex set");
    for (Vertex x : u)
        if (x < 0 || x >= s.size()) fail(errc::argument, "hitting_times: vertex out of range");
    for (Vertex x : v)
        if (x < 0 || x >= s.size()) fail(errc::argument, "hitting_times: vertex out of range");
    Adjacency adj(s.rel());
    std::vector<char> frontier(s.size(), 0), target(s.size(), 0), next;
    for (Vertex x : u) frontier[x] = 1;
    for (Vertex x : v) target[x] = 1;
    std::vector<int> out;
    for (int t = 1; t <= horizon; ++t) {
        next.assign(s.size(), 0);
        for (Vertex x = 0; x < s.size(); ++x)
            if (frontier[x])
                for (Vertex y : adj.out(x)) next[y] = 1;
        frontier.swap(next);
        for (Vertex y = 0; y < s.size(); ++y)
            if (frontier[y] && target[y]) {
                out.push_back(t);
                break;
            }
    }
    return out;
}

std::vector<std::vector<Vertex>> admissible_words(const FiniteSystem& s, int length, std::size_t cap) {
    if (length < 1) fail(errc::argument, "admissible_words: length must be positive");
    Adjacency adj(s.rel());
    std::vector<std::vector<Vertex>> out;
    std::vector<Vertex> word;
    // lexicographic DFS
    struct Level {
        std::span<const Vertex> options;
        std::size_t next;
    };
    for (Vertex start = 0; start < s.size(); ++start) {
        word.assign(1, start);
        std::vector<Level> stack;
        while (true) {
            if (static_cast<int>(word.size()) == length) {
                if (out.size() >= cap)
                    fail(errc::resource, "admissible_words: enumeration cap " + std::to_string(cap) +
                                             " exceeded");
                out.push_back(word);
            } else {
                stack.push_back({adj.out(word.back()), 0});
                word.push_back(-1);
            }
            while (!stack.empty() && stack.back().next >= stack.back().options.size()) {
                stack.pop_back();
                word.pop_back();
            }
            if (stack.empty()) break;
            word.back() = stack.back().options[stack.back().next++];
        }
    }
    return out;
}

ExtensionVerdict periodic_extension_check(const FiniteSystem& s, int window, std::size_t cap) {
    FiniteRelation closure = orbit_closure(s.rel());
    auto words = admissible_words(s, window, cap);
    for (const auto& w : words)
        if (!closure.has_edge(w.back(), w.front())) return {false, w};
    return {true, {}};
}

} // namespace findyn
