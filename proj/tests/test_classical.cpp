#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "xord/classical.hpp"

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

}  // namespace

TEST_CASE("classical_value on the paper's flagship instances") {
    SECTION("C5 all dashed") {
        const auto r = classical_value(cycle_game(5, 2, 1));
        REQUIRE(r.beta_c == 1);
        REQUIRE(r.gamma_c == 4);
        REQUIRE(evaluate_assignment(cycle_game(5, 2, 1), r.witness).contradictions == 1);
    }
    SECTION("K5 all dashed") {
        const auto r = classical_value(complete_game(5, 2, 1));
        REQUIRE(r.beta_c == 4);
        REQUIRE(r.gamma_c == 6);
    }
    SECTION("bipartite dashed graphs are satisfiable") {
        LabeledGameGraph g(6, 2, 3);
        for (int u = 0; u < 3; ++u)
            for (int v = 3; v < 6; ++v) g.add_edge(u, v, EdgeLabel{1});
        REQUIRE(classical_value(g).beta_c == 0);
    }
}

TEST_CASE("classical_value matches brute force on random games") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 60; ++trial) {
        const auto g = oracles::random_game(rng, 6, trial % 2 ? 2 : 3);
        const auto r = classical_value(g);
        REQUIRE(r.beta_c == oracles::brute_force_beta(g));
        REQUIRE(evaluate_assignment(g, r.witness).contradictions == r.beta_c);
    }
}

TEST_CASE("gray edges do not affect the classical value") {
    std::mt19937 rng(9);
    for (int trial = 0; trial < 30; ++trial) {
        const auto g = oracles::random_game(rng, 6, 2, 0.5, /*allow_gray=*/true);
        REQUIRE(classical_value(g).beta_c == classical_value(g.colored_subgraph()).beta_c);
    }
}

TEST_CASE("partial-game value chain") {
    // gamma_C(G,K) - |E - E'| <= gamma_C(G,K') for any total extension K of K'
    std::mt19937 rng(13);
    for (int trial = 0; trial < 30; ++trial) {
        const auto partial = oracles::random_game(rng, 6, 3, 0.6, /*allow_gray=*/true);
        LabeledGameGraph total(6, 3);
        int gray = 0;
        std::uniform_int_distribution<int> color(0, 2);
        for (const auto& e : partial.edges()) {
            if (e.label.is_gray()) {
                ++gray;
                total.add_edge(e.u, e.v, EdgeLabel{color(rng)});
            } else {
                total.add_edge(e.u, e.v, e.label);
            }
        }
        const int gamma_total = classical_value(total).gamma_c;
        const int gamma_partial = classical_value(partial).gamma_c;
        REQUIRE(gamma_total - gray <= gamma_partial);
    }
}

TEST_CASE("cycle_perm composition and fixed points") {
    SECTION("identity-labeled cycle is good") {
        const auto g = cycle_game(4, 2, 0);  // pi_0 = id for d=2
        const auto [perm, fp] = cycle_perm(g, {0, 1, 2, 3});
        REQUIRE(perm.is_identity());
        REQUIRE(fp == 2);
    }
    SECTION("even power of one involution is good") {
        LabeledGameGraph ident(4, 3);
        for (int i = 0; i < 4; ++i) ident.add_edge(i, (i + 1) % 4, EdgeLabel{1});
        const auto [perm, fp] = cycle_perm(ident, {0, 1, 2, 3});
        REQUIRE(perm.is_identity());
        REQUIRE(fp == 3);
    }
    SECTION("odd dashed triangle is bad") {
        LabeledGameGraph g(3, 2);
        g.add_edge(0, 1, EdgeLabel{1});
        g.add_edge(1, 2, EdgeLabel{0});
        g.add_edge(0, 2, EdgeLabel{0});
        const auto [perm, fp] = cycle_perm(g, {0, 1, 2});
        REQUIRE(perm.table() == std::vector<int>{1, 0});
        REQUIRE(fp == 0);
    }
    SECTION("C5 in a single L_3 color is ugly") {
        const auto g = cycle_game(5, 3, 0);
        const auto [perm, fp] = cycle_perm(g, {0, 1, 2, 3, 4});
        REQUIRE(perm == g.perms().perms[0]);  // odd power of an involution
        REQUIRE(fp == 1);
        REQUIRE(oracles::brute_force_consistent_count(g) == 1);
    }
    SECTION("rejects a non-cycle") {
        const auto g = cycle_game(4, 2, 1);
        REQUIRE_THROWS_AS(cycle_perm(g, {0, 1, 2}), Error);     // chord missing
        REQUIRE_THROWS_AS(cycle_perm(g, {0, 1}), Error);        // too short
    }
}

TEST_CASE("cycle fixed points equal isolated-cycle assignment counts") {
    std::mt19937 rng(17);
    std::uniform_int_distribution<int> len(3, 7);
    for (int d : {2, 3}) {
        std::uniform_int_distribution<int> color(0, d - 1);
        for (int trial = 0; trial < 100; ++trial) {
            const int t = len(rng);
            std::vector<int> colors(t);
            for (auto& c : colors) c = color(rng);
            LabeledGameGraph g(t, d);
            for (int i = 0; i < t; ++i) g.add_edge(i, (i + 1) % t, EdgeLabel{colors[i]});
            std::vector<int> verts(t);
            std::iota(verts.begin(), verts.end(), 0);
            const auto [perm, fp] = cycle_perm(g, verts);
            REQUIRE(fp == oracles::cycle_assignment_count(d, colors));
            REQUIRE(fp == static_cast<int>(oracles::brute_force_consistent_count(g)));
        }
    }
}

TEST_CASE("classify_cycles") {
    SECTION("trees have no cycles and beta_c 0") {
        LabeledGameGraph g(5, 3);
        for (int i = 1; i < 5; ++i) g.add_edge(0, i, EdgeLabel{i % 3});
        const auto rep = classify_cycles(g);
        REQUIRE(rep.cycles.empty());
        REQUIRE(classical_value(g).beta_c == 0);
    }
    SECTION("complete bipartite L_d labelings have no ugly cycles") {
        std::mt19937 rng(21);
        for (int d : {2, 3}) {
            std::uniform_int_distribution<int> color(0, d - 1);
            for (int trial = 0; trial < 25; ++trial) {
                LabeledGameGraph g(6, d, 3);
                for (int u = 0; u < 3; ++u)
                    for (int v = 3; v < 6; ++v) g.add_edge(u, v, EdgeLabel{color(rng)});
                const auto rep = classify_cycles(g);
                REQUIRE(rep.xi_ugly == 0);
                REQUIRE(rep.bipartite_zero_or_d);
            }
        }
    }
    SECTION("4-cycles over L_3, good and bad") {
        // identity composition: colors (0,0,0,0) -> good
        LabeledGameGraph good(4, 3);
        for (int i = 0; i < 4; ++i) good.add_edge(i, (i + 1) % 4, EdgeLabel{0});
        const auto grep = classify_cycles(good);
        REQUIRE(grep.xi_good == 1);
        // shifted composition: colors (0,0,0,1) -> fixed-point-free product
        LabeledGameGraph bad(4, 3);
        for (int i = 0; i < 3; ++i) bad.add_edge(i, i + 1, EdgeLabel{0});
        bad.add_edge(3, 0, EdgeLabel{1});
        const auto brep = classify_cycles(bad);
        REQUIRE(brep.xi_bad == 1);
        REQUIRE(oracles::brute_force_consistent_count(bad) == 0);
    }
}

TEST_CASE("contradiction bounds on known instances") {
    SECTION("bad triangle alone") {
        LabeledGameGraph g(3, 2);
        g.add_edge(0, 1, EdgeLabel{1});
        g.add_edge(1, 2, EdgeLabel{0});
        g.add_edge(0, 2, EdgeLabel{0});
        REQUIRE(contradiction_bounds(g) == std::pair<int, int>{1, 1});
        REQUIRE(classical_value(g).beta_c == 1);
    }
    SECTION("single ugly C5") {
        const auto g = cycle_game(5, 3, 0);
        REQUIRE(contradiction_bounds(g) == std::pair<int, int>{0, 0});
        REQUIRE(classical_value(g).beta_c == 0);
    }
}

TEST_CASE("shared-edge bad cycles break the xi lower bound") {
    // Two bad triangles glued on a dashed edge: removing the shared edge kills
    // both, so beta_c = 1 while xi_bad = 2. Documents the known failure mode of
    // the cycle-count window; the acceptance suite reports it as a finding.
    LabeledGameGraph g(4, 2);
    g.add_edge(0, 1, EdgeLabel{1});
    g.add_edge(0, 2, EdgeLabel{0});
    g.add_edge(1, 2, EdgeLabel{0});
    g.add_edge(0, 3, EdgeLabel{0});
    g.add_edge(1, 3, EdgeLabel{0});
    const auto rep = classify_cycles(g);
    REQUIRE(rep.xi_bad == 2);
    REQUIRE(rep.xi_ugly == 0);
    REQUIRE(rep.xi_good == 1);
    REQUIRE(classical_value(g).beta_c == 1);  // strictly below xi_bad
}

TEST_CASE("edge bipartization") {
    SECTION("C5 needs one removal") { REQUIRE(edge_bipartization(cycle_game(5, 2, 1)).beta2 == 1); }
    SECTION("K5 needs four") {
        const auto r = edge_bipartization(complete_game(5, 2, 1));
        REQUIRE(r.beta2 == 4);
        REQUIRE(r.removed.size() == 4);
        REQUIRE(classical_value(complete_game(5, 2, 1)).beta_c == 4);
    }
    SECTION("bipartite graphs need none") {
        LabeledGameGraph g(6, 2, 3);
        for (int u = 0; u < 3; ++u)
            for (int v = 3; v < 6; ++v) g.add_edge(u, v, EdgeLabel{1});
        REQUIRE(edge_bipartization(g).beta2 == 0);
    }
    SECTION("matches beta_c for dashed-only games") {
        std::mt19937 rng(31);
        for (int trial = 0; trial < 40; ++trial) {
            std::uniform_int_distribution<int> nd(3, 8);
            const int n = nd(rng);
            LabeledGameGraph g(n, 2);
            std::uniform_real_distribution<double> coin(0, 1);
            int edges = 0;
            for (int u = 0; u < n; ++u)
                for (int v = u + 1; v < n; ++v)
                    if (coin(rng) < 0.5) {
                        g.add_edge(u, v, EdgeLabel{1});
                        ++edges;
                    }
            if (edges == 0) continue;
            REQUIRE(edge_bipartization(g).beta2 == classical_value(g).beta_c);
        }
    }
    SECTION("d=3 single-color bound can be strict") {
        // bipartization says 1 for C5, but pi in L_3 has a fixed point: beta_c = 0
        const auto g = cycle_game(5, 3, 0);
        PlainGraph u(5);
        for (const auto& e : g.edges()) u.add_edge(e.u, e.v);
        REQUIRE(edge_bipartization_number(u).beta2 == 1);
        REQUIRE(classical_value(g).beta_c == 0);
    }
    SECTION("rejects games outside the dashed class") {
        REQUIRE_THROWS_AS(edge_bipartization(cycle_game(5, 2, 0)), Error);
        REQUIRE_THROWS_AS(edge_bipartization(cycle_game(5, 3, 0)), Error);
    }
}

TEST_CASE("beta_c within cycle bounds when the window holds") {
    // cactus-style instances (every edge on at most one cycle) where the
    // Observation-2 window is exact
    std::mt19937 rng(37);
    std::uniform_int_distribution<int> len(3, 5);
    for (int d : {2, 3}) {
        std::uniform_int_distribution<int> color(0, d - 1);
        for (int trial = 0; trial < 40; ++trial) {
            const int t = len(rng);
            LabeledGameGraph g(t, d);
            for (int i = 0; i < t; ++i) g.add_edge(i, (i + 1) % t, EdgeLabel{color(rng)});
            const auto [lo, hi] = contradiction_bounds(g);
            const int beta = classical_value(g).beta_c;
            REQUIRE(lo <= beta);
            REQUIRE(beta <= hi);
        }
    }
}
