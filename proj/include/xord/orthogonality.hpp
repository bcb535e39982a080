#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "xord/error.hpp"
#include "xord/game.hpp"
#include "xord/moment.hpp"
#include "xord/plain_graph.hpp"

namespace xord {

/// Exclusivity structure of a game: one event per outcome tuple of each maximal
/// clique of the commutation graph, edges between locally orthogonal events,
/// weights counting the winning constraints each event satisfies.
struct OrthogonalityGraph {
    struct Event {
        int clique = 0;
        std::vector<int> outcomes;  // aligned with cliques[clique]
    };
    std::vector<std::vector<int>> cliques;  // sorted vertex lists, sorted lexicographically
    std::vector<Event> events;
    std::vector<std::pair<int, int>> edges;
    std::vector<double> weights;
};

namespace ortho_detail {

inline void bron_kerbosch(const PlainGraph& g, std::uint64_t r, std::uint64_t p, std::uint64_t x,
                          std::vector<std::vector<int>>& out) {
    if (p == 0 && x == 0) {
        std::vector<int> clique;
        for (int v = 0; v < g.vertex_count(); ++v)
            if ((r >> v) & 1ULL) clique.push_back(v);
        out.push_back(std::move(clique));
        return;
    }
    // pivot on the vertex covering most of p
    int pivot = -1, best = -1;
    std::uint64_t both = p | x;
    for (int v = 0; v < g.vertex_count(); ++v)
        if ((both >> v) & 1ULL) {
            int cnt = std::popcount(p & g.neighbors(v));
            if (cnt > best) {
                best = cnt;
                pivot = v;
            }
        }
    std::uint64_t candidates = p & ~g.neighbors(pivot);
    while (candidates) {
        int v = std::countr_zero(candidates);
        candidates &= candidates - 1;
        bron_kerbosch(g, r | (1ULL << v), p & g.neighbors(v), x & g.neighbors(v), out);
        p &= ~(1ULL << v);
        x |= (1ULL << v);
    }
}

}  // namespace ortho_detail

inline std::vector<std::vector<int>> maximal_cliques(const PlainGraph& g) {
    std::vector<std::vector<int>> out;
    std::uint64_t all = g.vertex_count() == 64 ? ~0ULL : ((1ULL << g.vertex_count()) - 1);
    ortho_detail::bron_kerbosch(g, 0, all, 0, out);
    for (auto& c : out) std::sort(c.begin(), c.end());
    std::sort(out.begin(), out.end());
    return out;
}

inline OrthogonalityGraph build_orthogonality_graph(const LabeledGameGraph& g, int max_clique_size = 5,
                                                    int max_events = 100000) {
    const int d = g.outcome_count();
    if (d < 2) throw invalid_argument("orthogonality graph requires d >= 2");
    const PlainGraph comm = effective_commutation_graph(g);

    OrthogonalityGraph og;
    og.cliques = maximal_cliques(comm);

    long total_events = 0;
    for (const auto& c : og.cliques) {
        if (static_cast<int>(c.size()) > max_clique_size)
            throw resource_limit("orthogonality graph: maximal clique larger than the event budget allows");
        long ev = 1;
        for (size_t i = 0; i < c.size(); ++i) ev *= d;
        total_events += ev;
    }
    if (total_events > max_events) throw resource_limit("orthogonality graph: too many events");

    // events: all outcome tuples per clique, lexicographic
    for (size_t ci = 0; ci < og.cliques.size(); ++ci) {
        const int k = static_cast<int>(og.cliques[ci].size());
        std::vector<int> tuple(k, 0);
        while (true) {
            og.events.push_back({static_cast<int>(ci), tuple});
            int pos = k - 1;
            while (pos >= 0 && tuple[pos] == d - 1) tuple[pos--] = 0;
            if (pos < 0) break;
            ++tuple[pos];
        }
    }

    // weights: each colored edge belongs to its lexicographically smallest
    // covering maximal clique; events of that clique satisfying the constraint
    // get one unit each
    og.weights.assign(og.events.size(), 0.0);
    std::map<std::vector<int>, int> clique_index;
    for (size_t ci = 0; ci < og.cliques.size(); ++ci) clique_index[og.cliques[ci]] = static_cast<int>(ci);
    std::vector<size_t> event_base(og.cliques.size() + 1, 0);
    {
        size_t at = 0;
        for (size_t ci = 0; ci < og.cliques.size(); ++ci) {
            event_base[ci] = at;
            size_t ev = 1;
            for (size_t i = 0; i < og.cliques[ci].size(); ++i) ev *= d;
            at += ev;
        }
        event_base[og.cliques.size()] = at;
    }
    for (const auto& e : g.edges()) {
        if (e.label.is_gray()) continue;
        int owner = -1;
        for (size_t ci = 0; ci < og.cliques.size(); ++ci) {
            const auto& c = og.cliques[ci];
            if (std::binary_search(c.begin(), c.end(), e.u) && std::binary_search(c.begin(), c.end(), e.v)) {
                owner = static_cast<int>(ci);
                break;  // cliques are sorted, first hit is lexicographically smallest
            }
        }
        if (owner < 0) throw std::logic_error("colored edge not covered by any maximal clique");
        const auto& c = og.cliques[owner];
        const int pu = static_cast<int>(std::lower_bound(c.begin(), c.end(), e.u) - c.begin());
        const int pv = static_cast<int>(std::lower_bound(c.begin(), c.end(), e.v) - c.begin());
        const auto pi = g.edge_permutation(e);
        for (size_t ev = event_base[owner]; ev < event_base[owner + 1]; ++ev) {
            const auto& t = og.events[ev].outcomes;
            if (pi(t[pu]) == t[pv]) og.weights[ev] += 1.0;
        }
    }

    // exclusivity: events sharing an observable with different outcomes
    for (size_t a = 0; a < og.events.size(); ++a) {
        const auto& ca = og.cliques[og.events[a].clique];
        for (size_t b = a + 1; b < og.events.size(); ++b) {
            const auto& cb = og.cliques[og.events[b].clique];
            bool exclusive = false;
            for (size_t i = 0; i < ca.size() && !exclusive; ++i) {
                auto it = std::lower_bound(cb.begin(), cb.end(), ca[i]);
                if (it != cb.end() && *it == ca[i]) {
                    const int j = static_cast<int>(it - cb.begin());
                    if (og.events[a].outcomes[i] != og.events[b].outcomes[j]) exclusive = true;
                }
            }
            if (exclusive) og.edges.emplace_back(static_cast<int>(a), static_cast<int>(b));
        }
    }
    return og;
}

}  // namespace xord
