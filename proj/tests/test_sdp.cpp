#include <catch2/catch_amalgamated.hpp>
#include <sstream>

#include "oracles.hpp"
#include "xord/sdp.hpp"

using namespace xord;

namespace {

SdpProblem theta_of_cycle(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
    return theta_sdp(edges, std::vector<double>(n, 1.0));
}

}  // namespace

TEST_CASE("toy problem: maximize trace at trace one") {
    SdpProblem p;
    p.dim = 3;
    p.objective = Eigen::MatrixXd::Identity(3, 3);
    SdpConstraint c;
    for (int i = 0; i < 3; ++i) c.entries.push_back({i, i, 1.0});
    c.rhs = 1.0;
    p.constraints.push_back(c);
    const auto sol = solve_sdp(p);
    REQUIRE(sol.status == SdpStatus::Optimal);
    REQUIRE_THAT(sol.primal_value, Catch::Matchers::WithinAbs(1.0, 1e-6));
    REQUIRE_THAT(sol.dual_value, Catch::Matchers::WithinAbs(1.0, 1e-6));
}

TEST_CASE("theta of the complete and empty graphs") {
    SECTION("empty graph on m vertices: theta = m") {
        for (int m : {1, 2, 5, 9}) {
            const auto sol = solve_sdp(theta_sdp({}, std::vector<double>(m, 1.0)));
            REQUIRE(sol.status == SdpStatus::Optimal);
            REQUIRE_THAT(sol.dual_value, Catch::Matchers::WithinAbs(m, 1e-6));
        }
    }
    SECTION("complete graph: theta = 1") {
        for (int m : {2, 4, 7}) {
            std::vector<std::pair<int, int>> edges;
            for (int u = 0; u < m; ++u)
                for (int v = u + 1; v < m; ++v) edges.emplace_back(u, v);
            const auto sol = solve_sdp(theta_sdp(edges, std::vector<double>(m, 1.0)));
            REQUIRE(sol.status == SdpStatus::Optimal);
            REQUIRE_THAT(sol.dual_value, Catch::Matchers::WithinAbs(1.0, 1e-6));
        }
    }
}

TEST_CASE("theta of C5 is sqrt 5, bracketed by the pentagon representation") {
    const double pentagon = oracles::pentagon_representation_value();
    REQUIRE(pentagon > 0);  // representation verified orthogonal inside the oracle
    REQUIRE_THAT(pentagon, Catch::Matchers::WithinAbs(std::sqrt(5.0), 1e-9));
    const auto sol = solve_sdp(theta_of_cycle(5));
    REQUIRE(sol.status == SdpStatus::Optimal);
    REQUIRE_THAT(sol.dual_value, Catch::Matchers::WithinAbs(std::sqrt(5.0), 1e-5));
    REQUIRE(sol.dual_value >= pentagon - 1e-5);  // feasible point cannot beat the optimum
}

TEST_CASE("weak duality holds at the reported solution") {
    std::mt19937 rng(67);
    for (int trial = 0; trial < 10; ++trial) {
        std::uniform_int_distribution<int> md(3, 8);
        const int m = md(rng);
        std::vector<std::pair<int, int>> edges;
        std::uniform_real_distribution<double> coin(0, 1);
        for (int u = 0; u < m; ++u)
            for (int v = u + 1; v < m; ++v)
                if (coin(rng) < 0.4) edges.emplace_back(u, v);
        std::vector<double> w(m);
        for (auto& x : w) x = coin(rng) * 2;
        const auto sol = solve_sdp(theta_sdp(edges, w));
        REQUIRE(sol.dual_value >= sol.primal_value - 1e-9 * (1 + std::abs(sol.primal_value)));
    }
}

TEST_CASE("theta monotonicity") {
    std::mt19937 rng(71);
    SECTION("adding an edge never increases theta") {
        for (int trial = 0; trial < 8; ++trial) {
            const int m = 6;
            std::vector<std::pair<int, int>> edges;
            std::uniform_real_distribution<double> coin(0, 1);
            for (int u = 0; u < m; ++u)
                for (int v = u + 1; v < m; ++v)
                    if (coin(rng) < 0.3) edges.emplace_back(u, v);
            // find a non-edge to add
            std::vector<std::pair<int, int>> candidates;
            for (int u = 0; u < m; ++u)
                for (int v = u + 1; v < m; ++v)
                    if (std::find(edges.begin(), edges.end(), std::pair{u, v}) == edges.end())
                        candidates.emplace_back(u, v);
            if (candidates.empty()) continue;
            const auto base = solve_sdp(theta_sdp(edges, std::vector<double>(m, 1.0)));
            edges.push_back(candidates.front());
            const auto more = solve_sdp(theta_sdp(edges, std::vector<double>(m, 1.0)));
            REQUIRE(more.dual_value <= base.dual_value + 1e-6);
        }
    }
    SECTION("adding weight never decreases theta") {
        const auto base = solve_sdp(theta_of_cycle(5));
        auto p = theta_of_cycle(5);
        std::vector<double> w(5, 1.0);
        w[2] = 2.0;
        std::vector<std::pair<int, int>> edges;
        for (int i = 0; i < 5; ++i) edges.emplace_back(i, (i + 1) % 5);
        const auto heavier = solve_sdp(theta_sdp(edges, w));
        REQUIRE(heavier.dual_value >= base.dual_value - 1e-6);
    }
}

TEST_CASE("solver reproducibility") {
    const auto a = solve_sdp(theta_of_cycle(7));
    const auto b = solve_sdp(theta_of_cycle(7));
    REQUIRE(a.dual_value == b.dual_value);
    REQUIRE(a.primal_value == b.primal_value);
    REQUIRE(a.iterations == b.iterations);
}

TEST_CASE("solution certificates") {
    const auto sol = solve_sdp(theta_of_cycle(5));
    REQUIRE(sol.gap <= 1e-7);
    REQUIRE(sol.primal_residual <= 1e-6);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sol.X, Eigen::EigenvaluesOnly);
    REQUIRE(es.eigenvalues().minCoeff() >= -1e-8);
}

TEST_CASE("redundant constraints are dropped, inconsistent ones are infeasible") {
    SECTION("duplicate constraint is reported dropped") {
        SdpProblem p;
        p.dim = 2;
        p.objective = Eigen::MatrixXd::Identity(2, 2);
        SdpConstraint c;
        c.entries.push_back({0, 0, 1.0});
        c.entries.push_back({1, 1, 1.0});
        c.rhs = 1.0;
        p.constraints.push_back(c);
        p.constraints.push_back(c);
        const auto sol = solve_sdp(p);
        REQUIRE(sol.status == SdpStatus::Optimal);
        REQUIRE(sol.dropped_constraints == std::vector<int>{1});
        REQUIRE_THAT(sol.primal_value, Catch::Matchers::WithinAbs(1.0, 1e-6));
    }
    SECTION("contradictory duplicate is infeasible") {
        SdpProblem p;
        p.dim = 2;
        p.objective = Eigen::MatrixXd::Identity(2, 2);
        SdpConstraint c;
        c.entries.push_back({0, 0, 1.0});
        c.rhs = 1.0;
        p.constraints.push_back(c);
        c.rhs = 2.0;
        p.constraints.push_back(c);
        REQUIRE(solve_sdp(p).status == SdpStatus::Infeasible);
    }
}

TEST_CASE("sdp dump lists every datum in coordinate form") {
    auto p = theta_of_cycle(3);
    std::ostringstream os;
    dump_sdp(os, p);
    const auto text = os.str();
    REQUIRE(text.find("sdp dim 3 constraints 4") == 0);
    REQUIRE(text.find("C 0 1 1") != std::string::npos);
    REQUIRE(text.find("b 0 1") != std::string::npos);
}

TEST_CASE("negative weights are rejected") {
    REQUIRE_THROWS_AS(theta_sdp({}, std::vector<double>{1.0, -0.5}), Error);
}
