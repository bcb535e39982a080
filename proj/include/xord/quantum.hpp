#pragma once

#include <optional>
#include <string>
#include <vector>

#include "xord/classical.hpp"
#include "xord/game.hpp"
#include "xord/moment.hpp"
#include "xord/orthogonality.hpp"
#include "xord/sdp.hpp"

namespace xord {

struct BoundReport {
    double value = 0;   // certified from the safe side for an upper bound
    double other = 0;   // the opposite side of the duality bracket
    double gap = 0;
    SdpStatus status = SdpStatus::MaxIterations;
    int iterations = 0;
    int dim = 0;
};

/// theta_w of the orthogonality graph: an upper bound on the quantum value.
/// Zero-weight events cannot contribute and are projected out exactly.
inline BoundReport theta_upper_bound(const LabeledGameGraph& g, const SdpOptions& opts = {}) {
    const auto og = build_orthogonality_graph(g);
    std::vector<int> keep(og.events.size(), -1);
    std::vector<double> weights;
    for (size_t v = 0; v < og.events.size(); ++v)
        if (og.weights[v] > 0) {
            keep[v] = static_cast<int>(weights.size());
            weights.push_back(og.weights[v]);
        }
    std::vector<std::pair<int, int>> edges;
    for (auto [a, b] : og.edges)
        if (keep[a] >= 0 && keep[b] >= 0) edges.emplace_back(keep[a], keep[b]);
    if (static_cast<int>(weights.size()) > 200) throw resource_limit("theta: support exceeds the SDP budget");
    if (weights.empty()) throw invalid_game("theta: no winning events (no colored edges)");

    const auto problem = theta_sdp(edges, weights);
    const auto sol = solve_sdp(problem, opts);
    if (sol.status == SdpStatus::Infeasible) throw solver_failure("theta SDP reported infeasible");
    BoundReport rep;
    rep.value = sol.dual_value;  // certified upper side of the bracket
    rep.other = sol.primal_value;
    rep.gap = sol.gap;
    rep.status = sol.status;
    rep.iterations = sol.iterations;
    rep.dim = problem.dim;
    return rep;
}

/// gamma_{3/2}: the level-1+AB moment relaxation of the quantum value,
/// reported from the upper (primal-certificate) side of the bracket.
inline BoundReport almost_quantum_value(const LabeledGameGraph& g, const SdpOptions& opts = {}) {
    if (g.colored_edge_count() == 0) throw invalid_game("almost_quantum_value: no colored edges");
    const MomentModel model(g);
    const MomentObjective obj(model, g);
    const auto problem = model.lmi_problem(obj.coeffs);
    const auto sol = solve_sdp(problem, opts);
    if (sol.status == SdpStatus::Infeasible) throw solver_failure("moment SDP reported infeasible");
    BoundReport rep;
    // LMI optimum = c0 - min b'y; the solver primal underestimates that minimum
    rep.value = obj.constant - sol.primal_value;
    rep.other = obj.constant - sol.dual_value;
    rep.gap = sol.gap;
    rep.status = sol.status;
    rep.iterations = sol.iterations;
    rep.dim = problem.dim;
    return rep;
}

/// SDP data of the theta or moment problem, for external cross-checks.
inline SdpProblem build_sdp_problem(const LabeledGameGraph& g, const std::string& kind) {
    if (kind == "theta") {
        const auto og = build_orthogonality_graph(g);
        std::vector<int> keep(og.events.size(), -1);
        std::vector<double> weights;
        for (size_t v = 0; v < og.events.size(); ++v)
            if (og.weights[v] > 0) {
                keep[v] = static_cast<int>(weights.size());
                weights.push_back(og.weights[v]);
            }
        std::vector<std::pair<int, int>> edges;
        for (auto [a, b] : og.edges)
            if (keep[a] >= 0 && keep[b] >= 0) edges.emplace_back(keep[a], keep[b]);
        return theta_sdp(edges, weights);
    }
    if (kind == "aq") {
        const MomentModel model(g);
        const MomentObjective obj(model, g);
        return model.lmi_problem(obj.coeffs);
    }
    throw invalid_argument("unknown SDP kind '" + kind + "'");
}

struct PseudoTelepathyReport {
    int beta_c = 0;
    std::optional<double> gamma_aq;  // absent when beta_c = 0
    std::string verdict;
    bool theorem_applicable = false;  // two-party game with prime d
    bool d_prime = false;
};

namespace quantum_detail {
inline bool is_prime(int d) {
    if (d < 2) return false;
    for (int f = 2; f * f <= d; ++f)
        if (d % f == 0) return false;
    return true;
}
}  // namespace quantum_detail

/// Numerical screen for pseudo-telepathy: a game with beta_C > 0 whose
/// gamma_{3/2} stays below the edge count cannot be won perfectly by quantum
/// strategies, since gamma_Q <= gamma_{3/2}.
inline PseudoTelepathyReport pseudo_telepathy_screen(const LabeledGameGraph& g, const SdpOptions& opts = {}) {
    PseudoTelepathyReport rep;
    rep.d_prime = quantum_detail::is_prime(g.outcome_count());
    rep.theorem_applicable = rep.d_prime && g.bipartition().has_value();
    rep.beta_c = classical_value(g).beta_c;
    if (rep.beta_c == 0) {
        rep.verdict = "classically winnable";
        return rep;
    }
    const auto aq = almost_quantum_value(g, opts);
    rep.gamma_aq = aq.value;
    const double edge_count = g.colored_edge_count();
    if (aq.value < edge_count - 1e-6)
        rep.verdict = "no pseudo-telepathy, certified numerically";
    else
        rep.verdict = "no pseudo-telepathy by theorem (numerics inconclusive)";
    return rep;
}

}  // namespace xord
