#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "xord/error.hpp"
#include "xord/game.hpp"
#include "xord/plain_graph.hpp"
#include "xord/sdp.hpp"

namespace xord {

/// Commutation structure of a game: colored and gray edges, plus every
/// cross-party pair implied by a bipartition (all of one party's observables
/// commute with all of the other's).
inline PlainGraph effective_commutation_graph(const LabeledGameGraph& g) {
    PlainGraph c(g.vertex_count());
    for (const auto& e : g.edges()) c.add_edge(e.u, e.v);
    if (g.bipartition()) {
        const int k = *g.bipartition();
        for (int u = 0; u < k; ++u)
            for (int v = k; v < g.vertex_count(); ++v)
                if (!c.has_edge(u, v)) c.add_edge(u, v);
    }
    return c;
}

namespace moment_detail {

// A word is a product of projector symbols, each encoded vertex*d + outcome.
using Word = std::vector<int>;

struct Reduced {
    bool zero = false;
    Word word;
};

inline bool shorter_lex_less(const Word& a, const Word& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

/// Canonical form of a projector word under: idempotence PP = P, orthogonality
/// P P' = 0 at the same vertex, and commutation of symbols at adjacent
/// vertices. Explores the swap closure, recursing whenever a deletion applies;
/// the minimum (by length, then lex) representative is canonical.
class WordReducer {
  public:
    WordReducer(int d, const PlainGraph& comm) : d_(d), comm_(&comm) {}

    Reduced canon(const Word& w) {
        if (w.size() <= 1) return {false, w};
        auto it = memo_.find(w);
        if (it != memo_.end()) return it->second;

        Reduced best;
        bool have = false;
        std::set<Word> seen;
        std::vector<Word> stack{w};
        while (!stack.empty()) {
            Word s = std::move(stack.back());
            stack.pop_back();
            if (!seen.insert(s).second) continue;
            bool shortened = false;
            for (size_t i = 0; i + 1 < s.size(); ++i) {
                const int xu = s[i] / d_, xv = s[i + 1] / d_;
                if (xu == xv) {
                    if (s[i] == s[i + 1]) {
                        Word t = s;
                        t.erase(t.begin() + i + 1);
                        Reduced sub = canon(t);
                        if (sub.zero) return memo_[w] = {true, {}};
                        if (!have || shorter_lex_less(sub.word, best.word)) {
                            best = sub;
                            have = true;
                        }
                        shortened = true;
                    } else {
                        return memo_[w] = {true, {}};
                    }
                } else if (comm_->has_edge(xu, xv)) {
                    Word t = s;
                    std::swap(t[i], t[i + 1]);
                    if (!seen.count(t)) stack.push_back(std::move(t));
                }
            }
            if (!shortened && (!have || shorter_lex_less(s, best.word))) {
                best = {false, s};
                have = true;
            }
        }
        return memo_[w] = best;
    }

    /// Class key: a word and its reverse carry the same (real) moment.
    Reduced class_key(const Word& w) {
        Reduced r1 = canon(w);
        if (r1.zero) return r1;
        Word rev(w.rbegin(), w.rend());
        Reduced r2 = canon(rev);
        if (r2.zero) return r2;  // cannot happen if r1 is nonzero, kept for safety
        return shorter_lex_less(r1.word, r2.word) ? r1 : r2;
    }

  private:
    int d_;
    const PlainGraph* comm_;
    std::map<Word, Reduced> memo_;
};

// affine expression over free moment classes
struct LinExpr {
    std::map<int, double> terms;
    double constant = 0;

    void add(const LinExpr& o, double coeff) {
        for (auto [id, c] : o.terms) {
            terms[id] += coeff * c;
            if (std::abs(terms[id]) < 1e-12) terms.erase(id);
        }
        constant += coeff * o.constant;
    }
};

}  // namespace moment_detail

/// The level-1+AB moment model of a game: the word index, the identified
/// moment classes, completeness relations eliminated, and the resulting
/// linear-matrix-inequality data  M(u) = M0 + sum_j u_j B_j.
class MomentModel {
  public:
    using Word = moment_detail::Word;

    explicit MomentModel(const LabeledGameGraph& g) : n_(g.vertex_count()), d_(g.outcome_count()) {
        if (d_ < 2) throw invalid_argument("moment model requires d >= 2");
        comm_ = effective_commutation_graph(g);

        // words: identity, every (x,a), and (x,a)(y,b) per commutation edge
        words_.push_back({});
        for (int x = 0; x < n_; ++x)
            for (int a = 0; a < d_; ++a) words_.push_back({sym(x, a)});
        for (auto [x, y] : comm_.edge_list())
            for (int a = 0; a < d_; ++a)
                for (int b = 0; b < d_; ++b) words_.push_back({sym(x, a), sym(y, b)});
        const size_t dim = words_.size();
        if (dim > 220) throw resource_limit("moment matrix dimension over budget");

        moment_detail::WordReducer reducer(d_, comm_);

        // identify entries with moment classes
        entry_class_.assign(dim * dim, -1);
        for (size_t r = 0; r < dim; ++r) {
            for (size_t c = r; c < dim; ++c) {
                Word prod(words_[r].rbegin(), words_[r].rend());
                prod.insert(prod.end(), words_[c].begin(), words_[c].end());
                auto key = reducer.class_key(prod);
                entry_class_[r * dim + c] = key.zero ? -2 : class_id(key.word);
            }
        }

        // completeness: for every class word and position, sum over outcomes of
        // the sibling words equals the word with the symbol removed
        std::set<std::vector<std::pair<int, double>>> constraint_set;
        std::vector<std::pair<std::vector<std::pair<int, double>>, double>> constraints;
        size_t scanned = 0;
        while (scanned < class_words_.size()) {
            const Word w = class_words_[scanned++];
            for (size_t pos = 0; pos < w.size(); ++pos) {
                std::map<int, double> lhs;
                double rhs_const = 0;
                const int x = w[pos] / d_;
                for (int a = 0; a < d_; ++a) {
                    Word sib = w;
                    sib[pos] = sym(x, a);
                    auto key = reducer.class_key(sib);
                    if (key.zero) continue;
                    lhs[class_id(key.word)] += 1.0;
                }
                Word rest = w;
                rest.erase(rest.begin() + pos);
                auto rest_key = reducer.class_key(rest);
                if (rest_key.zero) {
                    // sum of siblings vanishes
                } else if (rest_key.word.empty()) {
                    rhs_const = 1.0;
                } else {
                    lhs[class_id(rest_key.word)] -= 1.0;
                }
                std::vector<std::pair<int, double>> row(lhs.begin(), lhs.end());
                if (row.empty()) continue;
                if (constraint_set.insert(row).second) constraints.emplace_back(std::move(row), rhs_const);
            }
        }

        // eliminate: every class becomes an affine expression over free classes
        const int num_classes = static_cast<int>(class_words_.size());
        expr_.assign(num_classes, std::nullopt);
        for (auto& [row, rhs] : constraints) {
            moment_detail::LinExpr acc;
            acc.constant = -rhs;
            for (auto [id, coeff] : row) {
                if (expr_[id])
                    acc.add(*expr_[id], coeff);
                else {
                    acc.terms[id] += coeff;
                    if (std::abs(acc.terms[id]) < 1e-12) acc.terms.erase(id);
                }
            }
            // acc == 0 must hold; solve for the largest remaining coefficient
            if (acc.terms.empty()) {
                if (std::abs(acc.constant) > 1e-9)
                    throw std::logic_error("moment completeness constraints are inconsistent");
                continue;
            }
            auto pivot = acc.terms.begin();
            for (auto it = acc.terms.begin(); it != acc.terms.end(); ++it)
                if (std::abs(it->second) > std::abs(pivot->second)) pivot = it;
            const int pid = pivot->first;
            const double pc = pivot->second;
            moment_detail::LinExpr e;
            e.constant = -acc.constant / pc;
            for (auto [id, c] : acc.terms)
                if (id != pid) e.terms[id] = -c / pc;
            // substitute into previously stored expressions
            for (auto& stored : expr_) {
                if (!stored) continue;
                auto it = stored->terms.find(pid);
                if (it == stored->terms.end()) continue;
                const double c = it->second;
                stored->terms.erase(it);
                stored->add(e, c);
            }
            expr_[pid] = std::move(e);
        }

        // empty word pins the unit moment
        {
            auto it = class_index_.find(Word{});
            if (it != class_index_.end() && !expr_[it->second]) {
                moment_detail::LinExpr one;
                one.constant = 1.0;
                // substitute everywhere
                for (auto& stored : expr_) {
                    if (!stored) continue;
                    auto t = stored->terms.find(it->second);
                    if (t == stored->terms.end()) continue;
                    stored->constant += t->second * 1.0;
                    stored->terms.erase(t);
                }
                expr_[it->second] = std::move(one);
            }
        }

        // assign SDP variables to surviving free classes that touch the matrix
        std::map<int, int> var_of_class;
        auto var_for = [&](int cid) {
            auto it = var_of_class.find(cid);
            if (it != var_of_class.end()) return it->second;
            int v = static_cast<int>(var_words_.size());
            var_of_class[cid] = v;
            var_words_.push_back(class_words_[cid]);
            return v;
        };

        m0_ = Eigen::MatrixXd::Zero(static_cast<int>(dim), static_cast<int>(dim));
        std::map<int, std::vector<SymTriplet>> triplets;
        for (size_t r = 0; r < dim; ++r)
            for (size_t c = r; c < dim; ++c) {
                const int cid = entry_class_[r * dim + c];
                if (cid == -2) continue;  // structurally zero entry
                const auto e = resolve(cid);
                m0_(r, c) += e.constant;
                if (r != c) m0_(c, r) += e.constant;
                for (auto [id, coeff] : e.terms)
                    triplets[var_for(id)].push_back({static_cast<int>(r), static_cast<int>(c), coeff});
            }
        var_triplets_.resize(var_words_.size());
        for (auto& [v, t] : triplets) var_triplets_[v] = std::move(t);
    }

    int dimension() const { return static_cast<int>(words_.size()); }
    int variable_count() const { return static_cast<int>(var_words_.size()); }
    int outcome_count() const { return d_; }
    const std::vector<Word>& words() const { return words_; }
    const PlainGraph& commutation() const { return comm_; }

    /// Affine value of the moment of `w` over the free variables.
    moment_detail::LinExpr word_expr(const Word& w) const {
        moment_detail::WordReducer reducer(d_, comm_);
        auto key = reducer.class_key(w);
        if (key.zero) return {};
        auto it = class_index_.find(key.word);
        if (it == class_index_.end()) throw invalid_argument("word is outside the generated moment classes");
        auto full = resolve(it->second);
        // resolve() yields class-id terms; remap to variable ids
        moment_detail::LinExpr out;
        out.constant = full.constant;
        for (auto [cid, coeff] : full.terms) {
            int var = -1;
            for (size_t v = 0; v < var_words_.size(); ++v)
                if (class_words_[cid] == var_words_[v]) {
                    var = static_cast<int>(v);
                    break;
                }
            if (var < 0) throw std::logic_error("free class missing a variable");
            out.terms[var] += coeff;
        }
        return out;
    }

    /// The LMI in solver standard form: solving it yields the LMI optimum
    /// max c'u + c0 as (c0 - dual value).
    SdpProblem lmi_problem(const std::vector<double>& objective_coeffs) const {
        SdpProblem p;
        p.dim = dimension();
        p.objective = -m0_;
        for (size_t v = 0; v < var_triplets_.size(); ++v) {
            SdpConstraint c;
            c.entries = var_triplets_[v];
            c.rhs = -objective_coeffs[v];
            p.constraints.push_back(std::move(c));
        }
        return p;
    }

    /// All moments evaluated on a deterministic assignment (rank-one embedding).
    std::vector<double> embed_assignment(const Assignment& f) const {
        std::vector<double> u(var_words_.size(), 0.0);
        for (size_t v = 0; v < var_words_.size(); ++v) {
            double val = 1.0;
            for (int s : var_words_[v]) val *= (f.values[s / d_] == (s % d_)) ? 1.0 : 0.0;
            u[v] = val;
        }
        return u;
    }

    /// The moment matrix at a concrete variable vector.
    Eigen::MatrixXd matrix_at(const std::vector<double>& u) const {
        Eigen::MatrixXd m = m0_;
        for (size_t v = 0; v < var_triplets_.size(); ++v)
            for (const auto& t : var_triplets_[v]) {
                m(t.i, t.j) += u[v] * t.value;
                if (t.i != t.j) m(t.j, t.i) += u[v] * t.value;
            }
        return m;
    }

    static int encode_symbol(int vertex, int outcome, int d) { return vertex * d + outcome; }

  private:
    int sym(int x, int a) const { return x * d_ + a; }

    int class_id(const Word& w) {
        auto it = class_index_.find(w);
        if (it != class_index_.end()) return it->second;
        int id = static_cast<int>(class_words_.size());
        class_index_[w] = id;
        class_words_.push_back(w);
        return id;
    }

    moment_detail::LinExpr resolve(int cid) const {
        if (expr_[cid]) return *expr_[cid];
        moment_detail::LinExpr e;
        e.terms[cid] = 1.0;
        return e;
    }

    int n_, d_;
    PlainGraph comm_;
    std::vector<Word> words_;
    std::vector<int> entry_class_;  // -2 marks a structurally zero entry
    std::map<Word, int> class_index_;
    std::vector<Word> class_words_;
    std::vector<std::optional<moment_detail::LinExpr>> expr_;
    std::vector<Word> var_words_;
    std::vector<std::vector<SymTriplet>> var_triplets_;
    Eigen::MatrixXd m0_;

    friend struct MomentObjective;
};

/// Objective vector for "win every colored edge": sum over edges and outcomes
/// of the moment of (x,a)(y,pi(a)).
struct MomentObjective {
    std::vector<double> coeffs;
    double constant = 0;

    MomentObjective(const MomentModel& model, const LabeledGameGraph& g) {
        coeffs.assign(model.variable_count(), 0.0);
        const int d = g.outcome_count();
        for (const auto& e : g.edges()) {
            if (e.label.is_gray()) continue;
            const auto pi = g.edge_permutation(e);
            for (int a = 0; a < d; ++a) {
                MomentModel::Word w{MomentModel::encode_symbol(e.u, a, d),
                                    MomentModel::encode_symbol(e.v, pi(a), d)};
                auto expr = model.word_expr(w);
                constant += expr.constant;
                for (auto [v, c] : expr.terms) coeffs[v] += c;
            }
        }
    }
};

}  // namespace xord
