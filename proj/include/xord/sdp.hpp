#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "xord/error.hpp"

namespace xord {

/// One symmetric constraint matrix in coordinate form: entries (i, j, v) with
/// i <= j stand for A[i][j] = A[j][i] = v.
struct SymTriplet {
    int i = 0, j = 0;
    double value = 0;
};

struct SdpConstraint {
    std::vector<SymTriplet> entries;
    double rhs = 0;
};

/// maximize <C, X>  s.t.  <A_k, X> = b_k,  X >= 0 (psd), X symmetric dim x dim.
struct SdpProblem {
    int dim = 0;
    Eigen::MatrixXd objective;  // C
    std::vector<SdpConstraint> constraints;
};

enum class SdpStatus { Optimal, MaxIterations, Infeasible };

struct SdpSolution {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    double primal_value = 0;  // <C, X>
    double dual_value = 0;    // b' y  (>= primal for a maximization at optimum)
    double gap = 0;           // |primal - dual| / (1 + |primal|)
    double primal_residual = 0;
    double dual_residual = 0;
    SdpStatus status = SdpStatus::MaxIterations;
    int iterations = 0;
    std::vector<int> dropped_constraints;  // removed as linearly dependent
};

struct SdpOptions {
    double gap_tol = 1e-7;
    double feas_tol = 1e-8;
    int max_iterations = 200;
    bool verbose = false;
};

namespace sdp_detail {

inline Eigen::MatrixXd to_dense(int dim, const std::vector<SymTriplet>& entries) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
    for (const auto& t : entries) {
        m(t.i, t.j) += t.value;
        if (t.i != t.j) m(t.j, t.i) += t.value;
    }
    return m;
}

inline void accumulate(Eigen::MatrixXd& m, const std::vector<SymTriplet>& entries, double coeff) {
    for (const auto& t : entries) {
        m(t.i, t.j) += coeff * t.value;
        if (t.i != t.j) m(t.j, t.i) += coeff * t.value;
    }
}

inline double inner(const std::vector<SymTriplet>& a, const Eigen::MatrixXd& m) {
    double s = 0;
    for (const auto& t : a) s += t.value * (t.i == t.j ? m(t.i, t.i) : 2.0 * m(t.i, t.j));
    return s;
}

// W * A * W for coordinate A, accumulated from symmetric rank-2 outer products.
inline void scaled_congruence(const Eigen::MatrixXd& w, const std::vector<SymTriplet>& a, Eigen::MatrixXd& out) {
    out.setZero();
    for (const auto& t : a) {
        if (t.i == t.j) {
            out.noalias() += t.value * (w.col(t.i) * w.col(t.i).transpose());
        } else {
            out.noalias() += t.value * (w.col(t.i) * w.col(t.j).transpose());
            out.noalias() += t.value * (w.col(t.j) * w.col(t.i).transpose());
        }
    }
}

// Largest alpha in (0, 1] with M + alpha*D psd, via the minimum eigenvalue of
// L^{-1} D L^{-T}.
inline double max_step(const Eigen::MatrixXd& m, const Eigen::MatrixXd& d) {
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) return 0.0;
    Eigen::MatrixXd l = llt.matrixL();
    Eigen::MatrixXd s = l.triangularView<Eigen::Lower>().solve(d);
    s = l.triangularView<Eigen::Lower>().solve(s.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (s + s.transpose()), Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues().minCoeff();
    if (lmin >= -1e-14) return 1.0;
    return std::min(1.0, -1.0 / lmin);
}

inline Eigen::MatrixXd sym_sqrt(const Eigen::MatrixXd& m, bool inverse = false) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    Eigen::VectorXd vals = es.eigenvalues().cwiseMax(1e-300);
    Eigen::VectorXd root = vals.cwiseSqrt();
    if (inverse) root = root.cwiseInverse();
    return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

// Drops linearly dependent constraint rows by incremental pivoted Cholesky on
// the Gram matrix; inconsistent dependent rows mean an infeasible system.
struct Preprocessed {
    std::vector<int> kept;
    bool inconsistent = false;
};

inline Preprocessed drop_dependent(const SdpProblem& p) {
    const int m = static_cast<int>(p.constraints.size());
    // Gram matrix through a per-position index: G_kl = <A_k, A_l> summed over
    // entries that share a matrix cell.
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(m, m);
    std::map<std::pair<int, int>, std::vector<std::pair<int, double>>> cells;
    for (int k = 0; k < m; ++k)
        for (const auto& t : p.constraints[k].entries) cells[{t.i, t.j}].emplace_back(k, t.value);
    for (const auto& [pos, list] : cells) {
        const double wgt = pos.first == pos.second ? 1.0 : 2.0;
        for (const auto& [k, vk] : list)
            for (const auto& [l, vl] : list) gram(k, l) += wgt * vk * vl;
    }

    Preprocessed out;
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(m, m);  // rows indexed by kept order
    Eigen::VectorXd kept_rhs(m);
    const double tol = 1e-10 * std::max(1.0, gram.diagonal().maxCoeff());
    for (int k = 0; k < m; ++k) {
        const int r = static_cast<int>(out.kept.size());
        Eigen::VectorXd g(r);
        for (int i = 0; i < r; ++i) g(i) = gram(out.kept[i], k);
        Eigen::VectorXd c(r);
        for (int i = 0; i < r; ++i) {
            double s = g(i);
            for (int j = 0; j < i; ++j) s -= l(i, j) * c(j);
            c(i) = s / l(i, i);
        }
        const double res = gram(k, k) - c.squaredNorm();
        if (res > tol) {
            for (int i = 0; i < r; ++i) l(r, i) = c(i);
            l(r, r) = std::sqrt(res);
            kept_rhs(r) = p.constraints[k].rhs;
            out.kept.push_back(k);
        } else {
            // dependent: A_k = sum w_i A_kept[i]; rhs must agree
            Eigen::VectorXd w(r);
            for (int i = r - 1; i >= 0; --i) {
                double s = c(i);
                for (int j = i + 1; j < r; ++j) s -= l(j, i) * w(j);
                w(i) = s / l(i, i);
            }
            double implied = 0;
            for (int i = 0; i < r; ++i) implied += w(i) * kept_rhs(i);
            if (std::abs(implied - p.constraints[k].rhs) > 1e-7 * std::max(1.0, std::abs(implied)))
                out.inconsistent = true;
        }
    }
    return out;
}

}  // namespace sdp_detail

/// Primal-dual path-following interior point solver with Nesterov-Todd scaling,
/// adaptive Mehrotra centering and a dense Cholesky-factored Schur complement.
/// Deterministic: fixed initialization, no randomness.
inline SdpSolution solve_sdp(const SdpProblem& problem, const SdpOptions& opts = {}) {
    using Eigen::MatrixXd;
    using Eigen::VectorXd;
    const int n = problem.dim;
    if (n < 1 || n > 220) throw invalid_argument("solve_sdp: dim out of supported range");

    SdpSolution sol;

    // keep an independent subset of constraints
    SdpProblem p;
    p.dim = n;
    p.objective = 0.5 * (problem.objective + problem.objective.transpose());
    std::vector<int> kept;
    {
        auto pre = sdp_detail::drop_dependent(problem);
        if (pre.inconsistent) {
            sol.status = SdpStatus::Infeasible;
            return sol;
        }
        kept = pre.kept;
        for (int k : pre.kept) p.constraints.push_back(problem.constraints[k]);
        for (int k = 0; k < static_cast<int>(problem.constraints.size()); ++k)
            if (std::find(kept.begin(), kept.end(), k) == kept.end()) sol.dropped_constraints.push_back(k);
    }
    const int m = static_cast<int>(p.constraints.size());

    VectorXd b(m);
    for (int k = 0; k < m; ++k) b(k) = p.constraints[k].rhs;

    // deterministic scaled start
    double data_scale = std::max(1.0, p.objective.cwiseAbs().maxCoeff());
    double b_scale = m > 0 ? std::max(1.0, b.cwiseAbs().maxCoeff()) : 1.0;
    MatrixXd X = MatrixXd::Identity(n, n) * std::max(1.0, b_scale);
    MatrixXd Z = MatrixXd::Identity(n, n) * std::max(1.0, data_scale);
    VectorXd y = VectorXd::Zero(m);

    MatrixXd rd(n, n), rc(n, n), w(n, n), waw(n, n);

    auto record = [&](SdpStatus status, int iters) {
        sol.X = X;
        sol.y = VectorXd::Zero(problem.constraints.size());
        for (int k = 0; k < m; ++k) sol.y(kept[k]) = y(k);
        sol.primal_value = (p.objective.array() * X.array()).sum();
        sol.dual_value = b.dot(y);
        sol.gap = std::abs(sol.primal_value - sol.dual_value) / (1.0 + std::abs(sol.primal_value));
        double pres = 0;
        for (int k = 0; k < m; ++k)
            pres = std::max(pres, std::abs(b(k) - sdp_detail::inner(p.constraints[k].entries, X)));
        sol.primal_residual = pres;
        MatrixXd rdm = -p.objective - Z;
        for (int k = 0; k < m; ++k) sdp_detail::accumulate(rdm, p.constraints[k].entries, y(k));
        sol.dual_residual = rdm.cwiseAbs().maxCoeff();
        sol.status = status;
        sol.iterations = iters;
    };

    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        // residuals
        VectorXd rp(m);
        for (int k = 0; k < m; ++k) rp(k) = b(k) - sdp_detail::inner(p.constraints[k].entries, X);
        rd = p.objective + Z;
        for (int k = 0; k < m; ++k) sdp_detail::accumulate(rd, p.constraints[k].entries, -y(k));
        // rd = C + Z - sum y_k A_k ; dual feasibility wants rd = 0
        const double mu = (X.array() * Z.array()).sum() / n;
        const double pobj = (p.objective.array() * X.array()).sum();
        const double dobj = b.dot(y);
        const double rel_gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj));
        const double pres = m > 0 ? rp.cwiseAbs().maxCoeff() : 0.0;
        const double dres = rd.cwiseAbs().maxCoeff();
        if (opts.verbose) {
            std::ostringstream line;
            line << "iter " << iter << " gap " << rel_gap << " pres " << pres << " dres " << dres << " mu " << mu;
            // callers wanting the trace can wire a sink; kept silent by default
        }
        if (rel_gap <= opts.gap_tol && pres <= opts.feas_tol * b_scale * 10 && dres <= opts.feas_tol * data_scale * 100) {
            record(SdpStatus::Optimal, iter);
            return sol;
        }
        if (!std::isfinite(mu) || mu > 1e30) break;

        // NT scaling point: W Z W = X
        {
            MatrixXd zh = sdp_detail::sym_sqrt(Z);
            MatrixXd zhi = sdp_detail::sym_sqrt(Z, true);
            MatrixXd t = zh * X * zh;
            MatrixXd th = sdp_detail::sym_sqrt(0.5 * (t + t.transpose()));
            w = zhi * th * zhi;
            w = 0.5 * (w + w.transpose());
        }

        // Schur complement M_kl = <A_k, W A_l W>, one scaled constraint at a time
        MatrixXd schur(m, m);
        for (int l = 0; l < m; ++l) {
            sdp_detail::scaled_congruence(w, p.constraints[l].entries, waw);
            waw = 0.5 * (waw + waw.transpose()).eval();
            for (int k = 0; k <= l; ++k)
                schur(k, l) = schur(l, k) = sdp_detail::inner(p.constraints[k].entries, waw);
        }
        Eigen::LDLT<MatrixXd> schur_fac(schur);
        if (schur_fac.info() != Eigen::Success) break;

        MatrixXd z_inv = sdp_detail::sym_sqrt(Z, true);
        z_inv = z_inv * z_inv;

        auto solve_direction = [&](double sigma, MatrixXd* dx, VectorXd* dy, MatrixXd* dz) {
            rc = sigma * mu * z_inv - X;
            VectorXd rhs(m);
            const MatrixXd wrdw = w * rd * w;
            for (int k = 0; k < m; ++k)
                rhs(k) = sdp_detail::inner(p.constraints[k].entries, rc) +
                         sdp_detail::inner(p.constraints[k].entries, wrdw) - rp(k);
            *dy = schur_fac.solve(rhs);
            *dz = -rd;
            for (int k = 0; k < m; ++k) sdp_detail::accumulate(*dz, p.constraints[k].entries, (*dy)(k));
            *dx = rc - w * (*dz) * w;
            *dx = 0.5 * (*dx + dx->transpose()).eval();
        };

        // predictor for the Mehrotra centering weight
        MatrixXd dx_aff(n, n), dz_aff(n, n);
        VectorXd dy_aff(m);
        solve_direction(0.0, &dx_aff, &dy_aff, &dz_aff);
        double ap = sdp_detail::max_step(X, dx_aff);
        double ad = sdp_detail::max_step(Z, dz_aff);
        const double mu_aff =
            ((X + 0.98 * ap * dx_aff).array() * (Z + 0.98 * ad * dz_aff).array()).sum() / n;
        double sigma = std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3.0);
        sigma = std::clamp(sigma, 1e-10, 1.0);

        // corrector
        MatrixXd dx(n, n), dz(n, n);
        VectorXd dy(m);
        solve_direction(sigma, &dx, &dy, &dz);
        ap = 0.98 * sdp_detail::max_step(X, dx);
        ad = 0.98 * sdp_detail::max_step(Z, dz);
        if (ap < 1e-10 && ad < 1e-10) break;

        X += ap * dx;
        Z += ad * dz;
        y += ad * dy;
        X = 0.5 * (X + X.transpose()).eval();
        Z = 0.5 * (Z + Z.transpose()).eval();
        sol.iterations = iter + 1;
    }

    record(SdpStatus::MaxIterations, sol.iterations);
    // a stalled solve that is already tight counts as solved
    if (sol.gap <= opts.gap_tol * 10 && sol.primal_residual <= opts.feas_tol * b_scale * 100)
        sol.status = SdpStatus::Optimal;
    return sol;
}

// --- Lovasz theta -------------------------------------------------------------

/// Weighted Lovasz theta in standard primal form:
///   maximize  <sqrt(w) sqrt(w)', X>   s.t.  tr X = 1,  X_uv = 0 on edges,  X psd.
/// Equivalent to the orthonormal-representation program
///   max sum_v w_v |<psi|u_v>|^2  over representations of the graph.
inline SdpProblem theta_sdp(const std::vector<std::pair<int, int>>& edges, const std::vector<double>& weights) {
    const int n = static_cast<int>(weights.size());
    for (double w : weights)
        if (w < 0) throw invalid_argument("theta_sdp: negative weight");
    SdpProblem p;
    p.dim = n;
    p.objective = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) p.objective(i, j) = std::sqrt(weights[i] * weights[j]);
    SdpConstraint trace;
    for (int i = 0; i < n; ++i) trace.entries.push_back({i, i, 1.0});
    trace.rhs = 1.0;
    p.constraints.push_back(std::move(trace));
    for (auto [u, v] : edges) {
        if (u == v) throw invalid_argument("theta_sdp: loop");
        SdpConstraint c;
        c.entries.push_back({std::min(u, v), std::max(u, v), 1.0});
        c.rhs = 0.0;
        p.constraints.push_back(std::move(c));
    }
    return p;
}

/// Debug dump: objective and constraints in coordinate form, one entry per line.
inline void dump_sdp(std::ostream& out, const SdpProblem& p) {
    out << "sdp dim " << p.dim << " constraints " << p.constraints.size() << '\n';
    for (int i = 0; i < p.dim; ++i)
        for (int j = i; j < p.dim; ++j)
            if (p.objective(i, j) != 0.0) out << "C " << i << ' ' << j << ' ' << p.objective(i, j) << '\n';
    for (size_t k = 0; k < p.constraints.size(); ++k) {
        for (const auto& t : p.constraints[k].entries)
            out << "A " << k << ' ' << t.i << ' ' << t.j << ' ' << t.value << '\n';
        out << "b " << k << ' ' << p.constraints[k].rhs << '\n';
    }
}

}  // namespace xord
