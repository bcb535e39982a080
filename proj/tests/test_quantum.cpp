#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "xord/classical.hpp"
#include "xord/equivalence.hpp"
#include "xord/quantum.hpp"
#include "xord/switching.hpp"

using namespace xord;

namespace {

LabeledGameGraph cycle_game(int n, int d, int color) {
    LabeledGameGraph g(n, d);
    for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n, EdgeLabel{color});
    return g;
}

LabeledGameGraph complete_game(int n, int d, int color) {
    LabeledGameGraph g(n, d);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) g.add_edge(u, v, EdgeLabel{color});
    return g;
}

LabeledGameGraph chsh() {
    LabeledGameGraph g(4, 2, 2);
    g.add_edge(0, 2, EdgeLabel{0});
    g.add_edge(0, 3, EdgeLabel{0});
    g.add_edge(1, 2, EdgeLabel{0});
    g.add_edge(1, 3, EdgeLabel{1});
    return g;
}

// fig 8: anticorrelation triangle A1A2A3 plus a correlated edge A1A4
LabeledGameGraph fig8() {
    LabeledGameGraph g(4, 2);
    g.add_edge(0, 1, EdgeLabel{1});
    g.add_edge(0, 2, EdgeLabel{1});
    g.add_edge(1, 2, EdgeLabel{1});
    g.add_edge(0, 3, EdgeLabel{0});
    return g;
}

double aq(const LabeledGameGraph& g) { return almost_quantum_value(g).value; }

}  // namespace

TEST_CASE("orthogonality graph construction") {
    SECTION("fig 8 has two maximal cliques and 12 events") {
        const auto og = build_orthogonality_graph(fig8());
        REQUIRE(og.cliques.size() == 2);
        REQUIRE(og.cliques[0] == std::vector<int>{0, 1, 2});
        REQUIRE(og.cliques[1] == std::vector<int>{0, 3});
        REQUIRE(og.events.size() == 12);  // 2^3 + 2^2
    }
    SECTION("single colored edge: four events, matching pairs not exclusive") {
        LabeledGameGraph g(2, 2);
        g.add_edge(0, 1, EdgeLabel{1});
        const auto og = build_orthogonality_graph(g);
        REQUIRE(og.events.size() == 4);
        // the only non-edges are between events differing in every slot
        REQUIRE(og.edges.size() == 4);
        int weighted = 0;
        for (double w : og.weights) weighted += (w == 1.0);
        REQUIRE(weighted == 2);  // (0,1) and (1,0) win the anticorrelation game
    }
    SECTION("weight mass per edge is d^(k-1)") {
        std::mt19937 rng(73);
        for (int trial = 0; trial < 20; ++trial) {
            const int d = trial % 2 ? 2 : 3;
            const auto g = oracles::random_game(rng, 5, d, 0.5);
            const auto og = build_orthogonality_graph(g);
            double mass = 0;
            for (double w : og.weights) mass += w;
            double expected = 0;
            for (const auto& e : g.edges()) {
                if (e.label.is_gray()) continue;
                // find the covering clique actually used: smallest containing both ends
                for (const auto& c : og.cliques)
                    if (std::binary_search(c.begin(), c.end(), e.u) &&
                        std::binary_search(c.begin(), c.end(), e.v)) {
                        expected += std::pow(d, static_cast<int>(c.size()) - 1);
                        break;
                    }
            }
            REQUIRE_THAT(mass, Catch::Matchers::WithinAbs(expected, 1e-9));
        }
    }
    SECTION("deterministic assignments pick out weight = satisfied count") {
        std::mt19937 rng(79);
        for (int trial = 0; trial < 25; ++trial) {
            const int d = trial % 2 ? 2 : 3;
            const auto g = oracles::random_game(rng, 5, d, 0.5);
            const auto og = build_orthogonality_graph(g);
            std::uniform_int_distribution<int> val(0, d - 1);
            Assignment f{std::vector<int>(5)};
            for (auto& v : f.values) v = val(rng);
            // the events consistent with f (one per clique) are independent and
            // their weight totals the satisfied edge count
            double total = 0;
            for (size_t ev = 0; ev < og.events.size(); ++ev) {
                const auto& e = og.events[ev];
                bool consistent = true;
                for (size_t i = 0; i < e.outcomes.size(); ++i)
                    if (f.values[og.cliques[e.clique][i]] != e.outcomes[i]) consistent = false;
                if (consistent) total += og.weights[ev];
            }
            REQUIRE_THAT(total, Catch::Matchers::WithinAbs(evaluate_assignment(g, f).satisfied, 1e-9));
        }
    }
}

TEST_CASE("weighted independence number equals the classical value") {
    std::mt19937 rng(83);
    for (int trial = 0; trial < 25; ++trial) {
        const int d = trial % 2 ? 2 : 3;
        const auto g = oracles::random_game(rng, trial % 2 ? 5 : 4, d, 0.55);
        const auto og = build_orthogonality_graph(g);
        if (og.events.size() > 64) continue;
        std::vector<std::uint64_t> adj(og.events.size(), 0);
        for (auto [a, b] : og.edges) {
            adj[a] |= 1ULL << b;
            adj[b] |= 1ULL << a;
        }
        const double alpha = oracles::max_weight_independent_set(adj, og.weights);
        REQUIRE_THAT(alpha, Catch::Matchers::WithinAbs(classical_value(g).gamma_c, 1e-9));
    }
}

TEST_CASE("moment model structure") {
    SECTION("word count matches the spec formula") {
        const auto g = chsh();
        const MomentModel model(g);
        REQUIRE(model.dimension() == 1 + 4 * 2 + 4 * 4);  // 25
        LabeledGameGraph k33(6, 3, 3);
        for (int u = 0; u < 3; ++u)
            for (int v = 3; v < 6; ++v) k33.add_edge(u, v, EdgeLabel{0});
        REQUIRE(MomentModel(k33).dimension() == 100);
    }
    SECTION("classical witness embeds as a feasible rank-one moment matrix") {
        std::mt19937 rng(89);
        for (int trial = 0; trial < 15; ++trial) {
            const int d = trial % 2 ? 2 : 3;
            const auto g = oracles::random_game(rng, 4, d, 0.6);
            const MomentModel model(g);
            const MomentObjective obj(model, g);
            const auto witness = classical_value(g);
            const auto u = model.embed_assignment(witness.witness);
            const auto m = model.matrix_at(u);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
            REQUIRE(es.eigenvalues().minCoeff() >= -1e-9);
            double value = obj.constant;
            for (size_t j = 0; j < u.size(); ++j) value += obj.coeffs[j] * u[j];
            REQUIRE_THAT(value, Catch::Matchers::WithinAbs(witness.gamma_c, 1e-9));
        }
    }
}

TEST_CASE("almost quantum value of the paper instances") {
    SECTION("CHSH reaches the Tsirelson point") {
        const auto r = almost_quantum_value(chsh());
        REQUIRE(r.status == SdpStatus::Optimal);
        REQUIRE_THAT(r.value, Catch::Matchers::WithinAbs(2 + std::sqrt(2.0), 1e-3));
        // independent oracle: explicit two-qubit strategies on an angle grid
        const double oracle = oracles::chsh_grid_search();
        REQUIRE(oracle >= 2 + std::sqrt(2.0) - 1e-2);
        REQUIRE(r.value >= oracle - 1e-3);
    }
    SECTION("C5 dashed: 2 sqrt 5") {
        const auto r = almost_quantum_value(cycle_game(5, 2, 1));
        REQUIRE_THAT(r.value, Catch::Matchers::WithinAbs(2 * std::sqrt(5.0), 1e-3));
    }
    SECTION("K5 dashed: 6.25") {
        const auto r = almost_quantum_value(complete_game(5, 2, 1));
        REQUIRE_THAT(r.value, Catch::Matchers::WithinAbs(6.25, 1e-3));
    }
    SECTION("all-identity labels collapse every bound to |E|") {
        const auto g = cycle_game(4, 2, 0);
        REQUIRE_THAT(aq(g), Catch::Matchers::WithinAbs(4.0, 1e-5));
        REQUIRE_THAT(theta_upper_bound(g).value, Catch::Matchers::WithinAbs(4.0, 1e-5));
    }
}

TEST_CASE("ordering chain gamma_C <= gamma_aq <= |E'| and theta bounds") {
    std::mt19937 rng(97);
    for (int trial = 0; trial < 20; ++trial) {
        const int d = trial % 2 ? 2 : 3;
        const auto g = oracles::random_game(rng, 5, d, 0.5);
        const double gamma_c = classical_value(g).gamma_c;
        const double gamma_aq = aq(g);
        const double edges = g.colored_edge_count();
        REQUIRE(gamma_aq >= gamma_c - 1e-6);
        REQUIRE(gamma_aq <= edges + 1e-6);
        const auto th = theta_upper_bound(g);
        REQUIRE(th.value >= gamma_c - 1e-6);
        REQUIRE(th.value <= edges + 1e-6);
    }
}

TEST_CASE("switching invariance of the SDP bounds") {
    std::mt19937 rng(101);
    for (int trial = 0; trial < 8; ++trial) {
        const int d = trial % 2 ? 2 : 3;
        const auto g = oracles::random_game(rng, 4, d, 0.6);
        std::uniform_int_distribution<int> shift(0, d - 1);
        std::vector<int> shifts(4);
        for (auto& s : shifts) s = shift(rng);
        std::vector<int> perm{0, 1, 2, 3};
        std::shuffle(perm.begin(), perm.end(), rng);
        const auto h = apply_vertex_map(apply_switch_vector(g, shifts), perm);
        REQUIRE_THAT(aq(h), Catch::Matchers::WithinAbs(aq(g), 1e-5));
        REQUIRE_THAT(theta_upper_bound(h).value,
                     Catch::Matchers::WithinAbs(theta_upper_bound(g).value, 1e-5));
    }
}

TEST_CASE("gray edges only tighten the relaxation") {
    std::mt19937 rng(103);
    for (int trial = 0; trial < 10; ++trial) {
        const auto g = oracles::random_game(rng, 5, 2, 0.5, /*allow_gray=*/true);
        if (!g.has_gray_edges()) continue;
        const double with_gray = aq(g);
        const double without = aq(g.colored_subgraph());
        REQUIRE(with_gray <= without + 1e-5);
    }
}

TEST_CASE("chained inequality: gray closure affects the quantum side only") {
    // C6 cycle colored inside K_{3,3}; the remaining cross pairs are gray
    LabeledGameGraph chained(6, 2, 3);
    // bipartition {0,1,2 | 3,4,5}; cycle 0-3-1-4-2-5-0
    const int cyc[6] = {0, 3, 1, 4, 2, 5};
    for (int i = 0; i < 6; ++i) {
        int u = cyc[i], v = cyc[(i + 1) % 6];
        chained.add_edge(u, v, EdgeLabel{i == 5 ? 1 : 0});
    }
    chained.add_edge(0, 4, EdgeLabel{kGray});
    chained.add_edge(1, 5, EdgeLabel{kGray});
    chained.add_edge(2, 3, EdgeLabel{kGray});
    const auto cl = classical_value(chained);
    REQUIRE(cl.gamma_c == 5);
    const double q = aq(chained);
    // Braunstein-Caves chained inequality with 3 settings: quantum value 6 cos^2(pi/6)... known > classical
    REQUIRE(q > 5.0 + 1e-3);
    REQUIRE(q < 6.0 - 1e-6);  // no pseudo-telepathy
}

TEST_CASE("pseudo-telepathy screen") {
    SECTION("classically winnable game") {
        const auto rep = pseudo_telepathy_screen(cycle_game(4, 2, 0));
        REQUIRE(rep.beta_c == 0);
        REQUIRE(rep.verdict == "classically winnable");
    }
    SECTION("CHSH certified numerically") {
        const auto rep = pseudo_telepathy_screen(chsh());
        REQUIRE(rep.beta_c == 1);
        REQUIRE(rep.gamma_aq.has_value());
        REQUIRE(*rep.gamma_aq < 4.0 - 1e-6);
        REQUIRE(rep.verdict == "no pseudo-telepathy, certified numerically");
        REQUIRE(rep.theorem_applicable);
    }
    SECTION("non-prime d still screens, with the theorem flagged off") {
        LabeledGameGraph g(2, 4);
        g.add_edge(0, 1, EdgeLabel{1});
        const auto rep = pseudo_telepathy_screen(g);
        REQUIRE_FALSE(rep.d_prime);
    }
}
