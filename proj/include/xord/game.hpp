#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "xord/error.hpp"
#include "xord/permutation.hpp"

namespace xord {

constexpr int kGray = -1;

/// Edge label: a color index into L_d, or gray (commutation only, no constraint).
struct EdgeLabel {
    int color = kGray;
    bool is_gray() const { return color == kGray; }
    bool operator==(const EdgeLabel&) const = default;
};

struct Edge {
    int u = 0, v = 0;  // normalized u < v
    EdgeLabel label;
};

/// An edge-labeled game graph (G, K): vertices are questions/observables, colored
/// edges carry a winning permutation from L_d, gray edges only force commutation.
/// An optional bipartition (vertices 0..k-1 vs k..n-1) makes it a Bell scenario.
class LabeledGameGraph {
  public:
    LabeledGameGraph(int n, int d, std::optional<int> left_size = std::nullopt)
        : n_(n), d_(d), left_size_(left_size) {
        if (n < 1) throw invalid_argument("game graph needs at least one vertex");
        if (d < 1) throw invalid_argument("game needs d >= 1");
        if (left_size_ && (*left_size_ < 1 || *left_size_ >= n))
            throw invalid_argument("bipartition size out of range");
    }

    int vertex_count() const { return n_; }
    int outcome_count() const { return d_; }
    std::optional<int> bipartition() const { return left_size_; }

    bool crosses_bipartition(int u, int v) const {
        if (!left_size_) return true;
        return (u < *left_size_) != (v < *left_size_);
    }

    void add_edge(int u, int v, EdgeLabel label) {
        if (u < 0 || u >= n_ || v < 0 || v >= n_) throw invalid_argument("edge endpoint out of range");
        if (u == v) throw invalid_argument("loops are not allowed");
        if (u > v) std::swap(u, v);
        if (has_edge(u, v)) throw invalid_argument("duplicate edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
        if (!label.is_gray() && (label.color < 0 || label.color >= d_))
            throw invalid_argument("edge color out of range");
        if (left_size_ && !crosses_bipartition(u, v))
            throw invalid_argument("edge (" + std::to_string(u) + "," + std::to_string(v) +
                                   ") does not cross the declared bipartition");
        edges_.push_back(Edge{u, v, label});
        index_[{u, v}] = static_cast<int>(edges_.size()) - 1;
    }

    bool has_edge(int u, int v) const {
        if (u > v) std::swap(u, v);
        return index_.count({u, v}) > 0;
    }

    const EdgeLabel& label(int u, int v) const {
        if (u > v) std::swap(u, v);
        auto it = index_.find({u, v});
        if (it == index_.end()) throw invalid_argument("no such edge");
        return edges_[it->second].label;
    }

    void set_label(int u, int v, EdgeLabel l) {
        if (u > v) std::swap(u, v);
        auto it = index_.find({u, v});
        if (it == index_.end()) throw invalid_argument("no such edge");
        if (!l.is_gray() && (l.color < 0 || l.color >= d_)) throw invalid_argument("edge color out of range");
        edges_[it->second].label = l;
    }

    const std::vector<Edge>& edges() const { return edges_; }

    std::vector<Edge> colored_edges() const {
        std::vector<Edge> out;
        for (const auto& e : edges_)
            if (!e.label.is_gray()) out.push_back(e);
        return out;
    }

    int colored_edge_count() const {
        int c = 0;
        for (const auto& e : edges_) c += !e.label.is_gray();
        return c;
    }

    bool has_gray_edges() const {
        for (const auto& e : edges_)
            if (e.label.is_gray()) return true;
        return false;
    }

    /// The winning permutation of a colored edge, read identically from both ends (P1).
    Permutation edge_permutation(const Edge& e) const {
        if (e.label.is_gray()) throw invalid_argument("gray edge carries no permutation");
        return perms().perms[e.label.color];
    }

    const PermutationSet& perms() const {
        if (perm_cache_.d != d_) perm_cache_ = d_ >= 2 ? make_ld(d_) : trivial_set();
        return perm_cache_;
    }

    /// The colored subgraph (V, E') as a game on the same vertex set.
    LabeledGameGraph colored_subgraph() const {
        LabeledGameGraph g(n_, d_, left_size_);
        for (const auto& e : edges_)
            if (!e.label.is_gray()) g.add_edge(e.u, e.v, e.label);
        return g;
    }

    bool operator==(const LabeledGameGraph& o) const {
        if (n_ != o.n_ || d_ != o.d_ || left_size_ != o.left_size_) return false;
        auto key = [](const LabeledGameGraph& g) {
            std::vector<std::tuple<int, int, int>> k;
            for (const auto& e : g.edges_) k.emplace_back(e.u, e.v, e.label.color);
            std::sort(k.begin(), k.end());
            return k;
        };
        return key(*this) == key(o);
    }

  private:
    static PermutationSet trivial_set() {
        PermutationSet s;
        s.d = 1;
        s.perms.push_back(Permutation::identity(1));
        return s;
    }

    int n_;
    int d_;
    std::optional<int> left_size_;
    std::vector<Edge> edges_;
    std::map<std::pair<int, int>, int> index_;
    mutable PermutationSet perm_cache_;
};

/// A deterministic vertex assignment f: V -> [d].
struct Assignment {
    std::vector<int> values;
};

struct EvalResult {
    int satisfied = 0;
    int contradictions = 0;
};

/// Counts satisfied and contradicted colored edges; gray edges are ignored.
inline EvalResult evaluate_assignment(const LabeledGameGraph& g, const Assignment& a) {
    if (static_cast<int>(a.values.size()) != g.vertex_count())
        throw invalid_argument("assignment length does not match vertex count");
    for (int v : a.values)
        if (v < 0 || v >= g.outcome_count()) throw invalid_argument("assignment value out of range");
    EvalResult r;
    for (const auto& e : g.edges()) {
        if (e.label.is_gray()) continue;
        const auto pi = g.edge_permutation(e);
        if (pi(a.values[e.u]) == a.values[e.v])
            ++r.satisfied;
        else
            ++r.contradictions;
    }
    return r;
}

/// The winning no-signaling box: on each colored edge P(a, pi(a)) = 1/d, with
/// uniform single-vertex marginals everywhere.
struct SuperQuantumBox {
    double gamma_sq = 0;  // wins every constraint: equals the colored edge count
    // per colored edge, a d*d table P(a,b|u,v) indexed [a*d+b], rows = outcome at u
    std::vector<std::vector<double>> edge_tables;
    std::vector<std::pair<int, int>> edge_order;
    bool marginals_consistent = false;
};

inline SuperQuantumBox super_quantum_value(const LabeledGameGraph& g) {
    if (g.colored_edge_count() == 0) throw invalid_game("game has no colored edges");
    const int d = g.outcome_count();
    SuperQuantumBox box;
    box.gamma_sq = g.colored_edge_count();
    for (const auto& e : g.edges()) {
        if (e.label.is_gray()) continue;
        const auto pi = g.edge_permutation(e);
        std::vector<double> table(d * d, 0.0);
        for (int a = 0; a < d; ++a) table[a * d + pi(a)] = 1.0 / d;
        box.edge_tables.push_back(std::move(table));
        box.edge_order.emplace_back(e.u, e.v);
    }
    // Consistency: the marginal at each vertex must not depend on which edge
    // (context) it is computed from.
    box.marginals_consistent = true;
    std::vector<std::vector<double>> marginal(g.vertex_count());
    for (size_t i = 0; i < box.edge_tables.size(); ++i) {
        auto [u, v] = box.edge_order[i];
        std::vector<double> mu(d, 0.0), mv(d, 0.0);
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                mu[a] += box.edge_tables[i][a * d + b];
                mv[b] += box.edge_tables[i][a * d + b];
            }
        for (int x : {u, v}) {
            const auto& m = (x == u) ? mu : mv;
            if (marginal[x].empty())
                marginal[x] = m;
            else
                for (int a = 0; a < d; ++a)
                    if (std::abs(marginal[x][a] - m[a]) > 1e-12) box.marginals_consistent = false;
        }
    }
    return box;
}

// --- game file format -------------------------------------------------------
//
//   # comment
//   xordgame <d> <n>
//   bipartite <k>          (optional; vertices 0..k-1 left, k..n-1 right)
//   edge <u> <v> <c>       (c = color index, or "gray")

namespace detail {
inline Error parse_fail(int line, const std::string& msg) {
    return parse_error("line " + std::to_string(line) + ": " + msg);
}
}  // namespace detail

inline LabeledGameGraph parse_game(std::istream& in) {
    std::string line;
    int lineno = 0;
    std::optional<LabeledGameGraph> g;
    std::optional<int> pending_left;
    bool saw_edge = false;
    int declared_n = 0, declared_d = 0;
    std::vector<std::tuple<int, int, EdgeLabel, int>> edges;

    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word)) continue;
        if (word == "xordgame") {
            if (declared_n > 0) throw detail::parse_fail(lineno, "duplicate xordgame header");
            if (!(ls >> declared_d >> declared_n)) throw detail::parse_fail(lineno, "expected 'xordgame <d> <n>'");
            if (declared_d < 1) throw detail::parse_fail(lineno, "d must be >= 1");
            if (declared_n < 1) throw detail::parse_fail(lineno, "n must be >= 1");
        } else if (word == "bipartite") {
            if (declared_n == 0) throw detail::parse_fail(lineno, "bipartite before xordgame header");
            if (saw_edge) throw detail::parse_fail(lineno, "bipartite must precede edges");
            int k;
            if (!(ls >> k)) throw detail::parse_fail(lineno, "expected 'bipartite <k>'");
            if (k < 1 || k >= declared_n) throw detail::parse_fail(lineno, "bipartition size out of range");
            pending_left = k;
        } else if (word == "edge") {
            if (declared_n == 0) throw detail::parse_fail(lineno, "edge before xordgame header");
            saw_edge = true;
            int u, v;
            std::string c;
            if (!(ls >> u >> v >> c)) throw detail::parse_fail(lineno, "expected 'edge <u> <v> <color|gray>'");
            EdgeLabel label;
            if (c == "gray") {
                label.color = kGray;
            } else {
                try {
                    size_t pos = 0;
                    label.color = std::stoi(c, &pos);
                    if (pos != c.size()) throw std::invalid_argument("");
                } catch (const std::exception&) {
                    throw detail::parse_fail(lineno, "bad color '" + c + "'");
                }
            }
            edges.emplace_back(u, v, label, lineno);
        } else {
            throw detail::parse_fail(lineno, "unknown directive '" + word + "'");
        }
        std::string extra;
        if (ls >> extra) throw detail::parse_fail(lineno, "trailing tokens");
    }
    if (declared_n == 0) throw parse_error("missing 'xordgame <d> <n>' header");
    g.emplace(declared_n, declared_d, pending_left);
    for (auto& [u, v, label, ln] : edges) {
        try {
            g->add_edge(u, v, label);
        } catch (const Error& e) {
            throw detail::parse_fail(ln, e.what());
        }
    }
    return *g;
}

inline LabeledGameGraph parse_game(const std::string& text) {
    std::istringstream in(text);
    return parse_game(in);
}

inline void write_game(std::ostream& out, const LabeledGameGraph& g) {
    out << "xordgame " << g.outcome_count() << ' ' << g.vertex_count() << '\n';
    if (g.bipartition()) out << "bipartite " << *g.bipartition() << '\n';
    auto edges = g.edges();
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return std::pair(a.u, a.v) < std::pair(b.u, b.v);
    });
    for (const auto& e : edges) {
        out << "edge " << e.u << ' ' << e.v << ' ';
        if (e.label.is_gray())
            out << "gray";
        else
            out << e.label.color;
        out << '\n';
    }
}

inline std::string format_game(const LabeledGameGraph& g) {
    std::ostringstream out;
    write_game(out, g);
    return out.str();
}

}  // namespace xord
