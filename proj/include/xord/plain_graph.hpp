#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "xord/error.hpp"

namespace xord {

/// Undirected simple graph on up to 64 vertices, adjacency stored as bit rows.
class PlainGraph {
  public:
    PlainGraph() = default;
    explicit PlainGraph(int n) : n_(n), adj_(n, 0) {
        if (n < 0 || n > 64) throw invalid_argument("PlainGraph supports 0..64 vertices");
    }

    int vertex_count() const { return n_; }

    void add_edge(int u, int v) {
        if (u == v) throw invalid_argument("loop");
        adj_[u] |= (1ULL << v);
        adj_[v] |= (1ULL << u);
    }

    bool has_edge(int u, int v) const { return (adj_[u] >> v) & 1ULL; }
    std::uint64_t neighbors(int u) const { return adj_[u]; }
    int degree(int u) const { return std::popcount(adj_[u]); }

    int edge_count() const {
        int total = 0;
        for (int u = 0; u < n_; ++u) total += degree(u);
        return total / 2;
    }

    std::vector<std::pair<int, int>> edge_list() const {
        std::vector<std::pair<int, int>> out;
        for (int u = 0; u < n_; ++u)
            for (int v = u + 1; v < n_; ++v)
                if (has_edge(u, v)) out.emplace_back(u, v);
        return out;
    }

    bool is_connected() const {
        if (n_ == 0) return true;
        std::uint64_t seen = 1ULL, frontier = 1ULL;
        while (frontier) {
            std::uint64_t next = 0;
            for (int u = 0; u < n_; ++u)
                if ((frontier >> u) & 1ULL) next |= adj_[u];
            frontier = next & ~seen;
            seen |= next;
        }
        return std::popcount(seen) == n_;
    }

    /// Component ids, 0-based, in order of first vertex.
    std::vector<int> components() const {
        std::vector<int> comp(n_, -1);
        int c = 0;
        for (int s = 0; s < n_; ++s) {
            if (comp[s] >= 0) continue;
            std::vector<int> stack{s};
            comp[s] = c;
            while (!stack.empty()) {
                int u = stack.back();
                stack.pop_back();
                std::uint64_t nb = adj_[u];
                while (nb) {
                    int v = std::countr_zero(nb);
                    nb &= nb - 1;
                    if (comp[v] < 0) {
                        comp[v] = c;
                        stack.push_back(v);
                    }
                }
            }
            ++c;
        }
        return comp;
    }

    /// Two-coloring if the graph is bipartite.
    std::optional<std::vector<int>> bipartite_sides() const {
        std::vector<int> side(n_, -1);
        for (int s = 0; s < n_; ++s) {
            if (side[s] >= 0) continue;
            side[s] = 0;
            std::vector<int> stack{s};
            while (!stack.empty()) {
                int u = stack.back();
                stack.pop_back();
                std::uint64_t nb = adj_[u];
                while (nb) {
                    int v = std::countr_zero(nb);
                    nb &= nb - 1;
                    if (side[v] < 0) {
                        side[v] = 1 - side[u];
                        stack.push_back(v);
                    } else if (side[v] == side[u]) {
                        return std::nullopt;
                    }
                }
            }
        }
        return side;
    }

    /// Chordal iff a perfect elimination ordering exists (maximum cardinality search).
    bool is_chordal() const {
        std::vector<int> weight(n_, 0), order;
        std::vector<bool> used(n_, false);
        for (int step = 0; step < n_; ++step) {
            int best = -1;
            for (int u = 0; u < n_; ++u)
                if (!used[u] && (best < 0 || weight[u] > weight[best])) best = u;
            used[best] = true;
            order.push_back(best);
            for (int v = 0; v < n_; ++v)
                if (!used[v] && has_edge(best, v)) ++weight[v];
        }
        std::reverse(order.begin(), order.end());  // perfect elimination candidate
        std::vector<int> pos(n_);
        for (int i = 0; i < n_; ++i) pos[order[i]] = i;
        for (int i = 0; i < n_; ++i) {
            int u = order[i];
            // later neighbors of u must form a clique with the earliest of them
            std::uint64_t later = 0;
            for (int j = i + 1; j < n_; ++j)
                if (has_edge(u, order[j])) later |= (1ULL << order[j]);
            if (!later) continue;
            int first = -1;
            for (int j = i + 1; j < n_; ++j)
                if ((later >> order[j]) & 1ULL) {
                    first = order[j];
                    break;
                }
            std::uint64_t rest = later & ~(1ULL << first);
            if ((rest & ~adj_[first]) != 0) return false;
        }
        return true;
    }

    bool is_complete() const {
        for (int u = 0; u < n_; ++u)
            if (degree(u) != n_ - 1) return false;
        return true;
    }

    PlainGraph relabeled(const std::vector<int>& perm) const {
        // perm[old] = new position
        PlainGraph g(n_);
        for (auto [u, v] : edge_list()) g.add_edge(perm[u], perm[v]);
        return g;
    }

    bool operator==(const PlainGraph& o) const { return n_ == o.n_ && adj_ == o.adj_; }
    bool operator<(const PlainGraph& o) const { return std::tie(n_, adj_) < std::tie(o.n_, o.adj_); }

  private:
    int n_ = 0;
    std::vector<std::uint64_t> adj_;
};

namespace canon_detail {

// Equitable refinement of an ordered partition: cells are split by the multiset
// of neighbor counts into every cell until stable. Cell order is preserved and
// splits keep ascending count order, so the result is isomorphism-invariant.
inline void refine(const PlainGraph& g, std::vector<std::vector<int>>& cells) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t target = 0; target < cells.size(); ++target) {
            std::uint64_t target_mask = 0;
            for (int v : cells[target]) target_mask |= (1ULL << v);
            for (size_t ci = 0; ci < cells.size(); ++ci) {
                if (cells[ci].size() <= 1) continue;
                std::map<int, std::vector<int>> by_count;
                for (int v : cells[ci]) by_count[std::popcount(g.neighbors(v) & target_mask)].push_back(v);
                if (by_count.size() <= 1) continue;
                std::vector<std::vector<int>> replacement;
                for (auto& [cnt, verts] : by_count) replacement.push_back(std::move(verts));
                cells.erase(cells.begin() + ci);
                cells.insert(cells.begin() + ci, replacement.begin(), replacement.end());
                changed = true;
                // restart the scan; cell indices moved
                target = static_cast<size_t>(-1);
                break;
            }
            if (target == static_cast<size_t>(-1)) break;
        }
    }
}

struct SearchState {
    const PlainGraph* g = nullptr;
    std::vector<std::uint64_t> best_encoding;
    std::vector<int> best_perm;  // best_perm[old] = canonical position
    bool have_best = false;
    std::vector<std::vector<int>> automorphisms;  // discovered generators
    long node_budget = 2'000'000;

    std::vector<std::uint64_t> encode(const std::vector<int>& perm) const {
        const int n = g->vertex_count();
        std::vector<std::uint64_t> rows(n, 0);
        for (int u = 0; u < n; ++u) {
            std::uint64_t nb = g->neighbors(u);
            while (nb) {
                int v = std::countr_zero(nb);
                nb &= nb - 1;
                rows[perm[u]] |= (1ULL << perm[v]);
            }
        }
        return rows;
    }

    void search(std::vector<std::vector<int>> cells, std::vector<int>& fixed) {
        if (--node_budget < 0) throw resource_limit("canonical labeling budget exceeded");
        refine(*g, cells);
        int branch_cell = -1;
        for (size_t i = 0; i < cells.size(); ++i)
            if (cells[i].size() > 1 && (branch_cell < 0 || cells[i].size() < cells[branch_cell].size()))
                branch_cell = static_cast<int>(i);
        if (branch_cell < 0) {
            // discrete partition: the cell order is the canonical position order
            std::vector<int> perm(g->vertex_count());
            for (size_t i = 0; i < cells.size(); ++i) perm[cells[i][0]] = static_cast<int>(i);
            auto enc = encode(perm);
            if (!have_best || enc < best_encoding) {
                best_encoding = std::move(enc);
                best_perm = perm;
                have_best = true;
            } else if (enc == best_encoding) {
                // best_perm^{-1} . perm maps the graph onto itself
                std::vector<int> inv_best(perm.size());
                for (size_t v = 0; v < perm.size(); ++v) inv_best[best_perm[v]] = static_cast<int>(v);
                std::vector<int> aut(perm.size());
                for (size_t v = 0; v < perm.size(); ++v) aut[v] = inv_best[perm[v]];
                bool identity = true;
                for (size_t v = 0; v < aut.size(); ++v)
                    if (aut[v] != static_cast<int>(v)) identity = false;
                if (!identity) automorphisms.push_back(std::move(aut));
            }
            return;
        }

        // Orbit pruning: skip branch vertices equivalent, under discovered
        // automorphisms fixing the current prefix, to one already tried.
        std::vector<const std::vector<int>*> stabilizing;
        for (const auto& a : automorphisms) {
            bool fixes = true;
            for (int v : fixed)
                if (a[v] != v) {
                    fixes = false;
                    break;
                }
            if (fixes) stabilizing.push_back(&a);
        }
        std::vector<int> tried;
        for (int v : cells[branch_cell]) {
            bool skip = false;
            if (!stabilizing.empty() && !tried.empty()) {
                // orbit of v under the stabilizing generators, intersected with tried
                std::set<int> orbit{v};
                std::vector<int> queue{v};
                while (!queue.empty() && !skip) {
                    int x = queue.back();
                    queue.pop_back();
                    for (const auto* a : stabilizing) {
                        for (int y : {(*a)[x], inverse_image(*a, x)}) {
                            if (!orbit.count(y)) {
                                orbit.insert(y);
                                queue.push_back(y);
                                if (std::find(tried.begin(), tried.end(), y) != tried.end()) skip = true;
                            }
                        }
                    }
                }
            }
            if (skip) continue;
            tried.push_back(v);
            auto child = cells;
            auto& cell = child[branch_cell];
            cell.erase(std::find(cell.begin(), cell.end(), v));
            child.insert(child.begin() + branch_cell, {v});
            fixed.push_back(v);
            search(std::move(child), fixed);
            fixed.pop_back();
        }
    }

    static int inverse_image(const std::vector<int>& a, int x) {
        for (size_t i = 0; i < a.size(); ++i)
            if (a[i] == x) return static_cast<int>(i);
        return x;
    }
};

}  // namespace canon_detail

struct CanonicalResult {
    std::vector<std::uint64_t> encoding;  // adjacency rows of the canonical copy
    std::vector<int> relabeling;          // relabeling[old] = canonical position
    std::vector<std::vector<int>> automorphism_generators;
};

/// Canonical form by individualization-refinement with discovered-automorphism
/// pruning; encodings of two graphs are equal iff the graphs are isomorphic.
inline CanonicalResult canonical_form(const PlainGraph& g, long node_budget = 2'000'000) {
    canon_detail::SearchState st;
    st.g = &g;
    st.node_budget = node_budget;
    std::vector<std::vector<int>> cells(1);
    for (int v = 0; v < g.vertex_count(); ++v) cells[0].push_back(v);
    std::vector<int> fixed;
    if (g.vertex_count() == 0) return {{}, {}, {}};
    st.search(std::move(cells), fixed);
    return {std::move(st.best_encoding), std::move(st.best_perm), std::move(st.automorphisms)};
}

inline bool isomorphic(const PlainGraph& a, const PlainGraph& b) {
    if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count()) return false;
    return canonical_form(a).encoding == canonical_form(b).encoding;
}

/// The full automorphism group, expanded from generators by closure.
/// Throws ResourceLimit if the group exceeds `max_order`.
inline std::vector<std::vector<int>> automorphism_group(const PlainGraph& g, size_t max_order = 100'000) {
    auto canon = canonical_form(g);
    const int n = g.vertex_count();
    std::vector<int> id(n);
    std::iota(id.begin(), id.end(), 0);
    std::set<std::vector<int>> group{id};
    std::vector<std::vector<int>> frontier{id};
    auto gens = canon.automorphism_generators;
    // The IR search may under-report generators on pruned branches; recover the
    // missed ones by closing over products until stable.
    while (!frontier.empty()) {
        std::vector<std::vector<int>> next;
        for (const auto& f : frontier) {
            for (const auto& gen : gens) {
                std::vector<int> prod(n);
                for (int v = 0; v < n; ++v) prod[v] = gen[f[v]];
                if (group.insert(prod).second) {
                    if (group.size() > max_order) throw resource_limit("automorphism group too large");
                    next.push_back(std::move(prod));
                }
            }
        }
        frontier = std::move(next);
    }
    return {group.begin(), group.end()};
}

}  // namespace xord
