#include "findyn/word.hpp"

#include <algorithm>

#include "findyn/constructions.hpp"

namespace findyn {

SemigroupWord::SemigroupWord(std::string letters) : letters_(std::move(letters)) {
    if (letters_.empty()) fail(errc::argument, "empty word");
    for (char c : letters_) {
        if (c == 'e')
            ++k_;
        else if (c == 'L')
            ++cap_k_;
        else
            fail(errc::argument, std::string("word letter must be e or L, got '") + c + "'");
    }
}

bool SemigroupWord::in_S_prime() const {
    return cap_k_ >= 2 && letters_.front() == 'e' && letters_.back() == 'e';
}

SemigroupWord compose_words(const SemigroupWord& w1, const SemigroupWord& w2) {
    std::string out;
    out.reserve(w2.letters().size() + w2.count_L() * w1.letters().size());
    for (char c : w2.letters()) {
        if (c == 'L')
            out += w1.letters();
        else
            out += c;
    }
    return SemigroupWord(std::move(out));
}

SemigroupWord power_word(const SemigroupWord& w, int n) {
    if (n < 1) fail(errc::argument, "word power must be positive");
    SemigroupWord acc = w;
    for (int i = 1; i < n; ++i) acc = compose_words(w, acc);
    return acc;
}

std::vector<long> run_lengths(const SemigroupWord& w) {
    std::vector<long> runs;
    long current = 0;
    bool seen_L = false;
    for (char c : w.letters()) {
        if (c == 'L') {
            if (seen_L) runs.push_back(current);
            seen_L = true;
            current = 0;
        } else {
            ++current;
        }
    }
    return runs;
}

std::pair<long, long> boundary_runs(const SemigroupWord& w) {
    const std::string& s = w.letters();
    long lead = 0, trail = 0;
    for (char c : s) {
        if (c == 'L') break;
        ++lead;
    }
    for (auto it = s.rbegin(); it != s.rend() && *it == 'e'; ++it) ++trail;
    if (w.count_L() == 0) return {lead, 0}; // all-e word: one run, counted once
    return {lead, trail};
}

std::vector<Vertex> word_map_table(const SemigroupWord& w, long n) {
    if (!w.in_S()) fail(errc::argument, "word map needs at least one L");
    if (n < 1) fail(errc::argument, "word map needs a positive loop length");
    std::vector<Vertex> table;
    table.reserve(static_cast<std::size_t>(w.ell(n)));
    for (char c : w.letters()) {
        if (c == 'e') {
            table.push_back(0);
        } else {
            for (long d = 0; d < n; ++d) table.push_back(static_cast<Vertex>(d));
        }
    }
    return table;
}

SystemMap word_to_map(const SemigroupWord& w, long n) {
    return SystemMap(pointed_loop(w.ell(n)), pointed_loop(n), word_map_table(w, n));
}

SemigroupWord map_to_word(const SystemMap& m) {
    const Vertex dn = m.domain().size(), cn = m.codomain().size();
    if (m.domain() != pointed_loop(dn) || m.codomain() != pointed_loop(cn))
        fail(errc::decode, "map_to_word expects a map between pointed loops");
    if (dn < cn) fail(errc::decode, "domain smaller than codomain");
    if (cn < 2) fail(errc::decode, "decoding is ambiguous onto a 1-point loop");
    const auto& t = m.table();
    std::string letters;
    std::size_t pos = 0;
    while (pos < t.size()) {
        if (t[pos] == 0 && (pos + 1 >= t.size() || t[pos + 1] != 1)) {
            letters += 'e';
            ++pos;
            continue;
        }
        if (t[pos] != 0) fail(errc::decode, "table is not a word map: block starts at a non-1 digit");
        for (Vertex d = 0; d < cn; ++d) {
            if (pos >= t.size() || t[pos] != d)
                fail(errc::decode, "table is not a word map: broken L block");
            ++pos;
        }
        letters += 'L';
    }
    SemigroupWord w(letters);
    if (w.ell(cn) != dn) fail(errc::decode, "decoded word length mismatch");
    return w;
}

ShimomuraPrefix constant_word_prefix(const SemigroupWord& w, int depth, const BuildLimits& limits) {
    if (!w.in_S_prime())
        fail(errc::argument, "constant word prefixes need a word in S' (starts and ends with e, "
                             "at least two L's)");
    if (depth < 2) fail(errc::argument, "prefix depth must be at least 2");
    std::vector<long> sizes{1};
    while (static_cast<int>(sizes.size()) < depth) {
        sizes.push_back(w.ell(sizes.back()));
        if (sizes.back() > limits.max_level_vertices)
            fail(errc::resource, "pointed level " + std::to_string(sizes.size()) + " would have " +
                                     std::to_string(sizes.back()) + " vertices, above the cap");
    }
    std::vector<std::shared_ptr<const FiniteSystem>> levels;
    for (long s : sizes) levels.push_back(std::make_shared<const FiniteSystem>(pointed_loop(s)));
    std::vector<SystemMap> bonding;
    for (int n = 1; n < depth; ++n)
        bonding.emplace_back(levels[static_cast<std::size_t>(n)],
                             levels[static_cast<std::size_t>(n - 1)],
                             word_map_table(w, sizes[static_cast<std::size_t>(n - 1)]));
    std::map<std::string, std::string> meta{{"name", "CONSTANT_WORD"},
                                            {"word", w.letters()},
                                            {"depth", std::to_string(depth)}};
    return ShimomuraPrefix(std::move(levels), std::move(bonding), std::move(meta));
}

ObstructionReport weak_mixing_obstruction(const SemigroupWord& w, int level_n, int horizon,
                                          int depth) {
    ShimomuraPrefix p = constant_word_prefix(w, depth);
    if (level_n < 2 || level_n > depth) fail(errc::argument, "level out of range");
    const Vertex nn = p.level(level_n).size();
    ObstructionReport rep;
    rep.level_n = level_n;
    rep.horizon = horizon;
    rep.depth = depth;
    rep.all_certified = true;
    for (Vertex i = 3; i < nn; ++i) { // 1-based: 2 < i < N_n
        HittingTable same = limit_hitting(p, level_n, i - 1, i - 1, horizon);
        HittingTable step = limit_hitting(p, level_n, i - 1, i - 2, horizon);
        ObstructionRow row;
        row.i = i;
        row.certified = true;
        for (int t = 1; t <= horizon; ++t) {
            bool absent = !same.status[static_cast<std::size_t>(t - 1)].present ||
                          !step.status[static_cast<std::size_t>(t - 1)].present;
            if (!absent) {
                row.certified = false;
                row.first_uncertified_t = t;
                break;
            }
        }
        if (!row.certified) rep.all_certified = false;
        rep.rows.push_back(row);
    }
    return rep;
}

EvidenceReport mixing_evidence(const SemigroupWord& w, int level_n, int window, int depth,
                               long k_start) {
    ShimomuraPrefix p = constant_word_prefix(w, depth);
    if (level_n < 2 || level_n > depth) fail(errc::argument, "level out of range");
    const Vertex nn = p.level(level_n).size();
    if (k_start == 0) k_start = nn;
    EvidenceReport rep;
    rep.level_n = level_n;
    rep.k_start = k_start;
    rep.window = window;
    rep.depth = depth;
    rep.all_present = true;
    const int horizon = static_cast<int>(k_start) + window;
    for (Vertex i = 1; i <= nn; ++i) {
        HittingTable table = limit_hitting(p, level_n, i - 1, i - 1, horizon);
        EvidenceRow row;
        row.i = i;
        for (long t = k_start; t <= k_start + window; ++t)
            if (!table.status[static_cast<std::size_t>(t - 1)].present) {
                row.absent_t = static_cast<int>(t);
                rep.all_present = false;
                break;
            }
        rep.rows.push_back(row);
    }
    return rep;
}

} // namespace findyn
