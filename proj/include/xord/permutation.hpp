#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "xord/error.hpp"

namespace xord {

/// A permutation of {0,...,d-1}, stored as its value table.
class Permutation {
  public:
    Permutation() = default;

    explicit Permutation(std::vector<int> map) : map_(std::move(map)) {
        std::vector<bool> seen(map_.size(), false);
        for (int v : map_) {
            if (v < 0 || v >= static_cast<int>(map_.size()) || seen[v])
                throw invalid_argument("permutation table is not a bijection");
            seen[v] = true;
        }
    }

    static Permutation identity(int d) {
        std::vector<int> m(d);
        std::iota(m.begin(), m.end(), 0);
        return Permutation(std::move(m));
    }

    int degree() const { return static_cast<int>(map_.size()); }
    int operator()(int a) const { return map_[a]; }
    const std::vector<int>& table() const { return map_; }

    Permutation inverse() const {
        std::vector<int> inv(map_.size());
        for (int a = 0; a < degree(); ++a) inv[map_[a]] = a;
        return Permutation(std::move(inv));
    }

    /// (*this) after `rhs`: result(a) = this(rhs(a)).
    Permutation after(const Permutation& rhs) const {
        if (degree() != rhs.degree()) throw invalid_argument("composing permutations of different degree");
        std::vector<int> m(map_.size());
        for (int a = 0; a < degree(); ++a) m[a] = map_[rhs(a)];
        return Permutation(std::move(m));
    }

    bool is_involution() const {
        for (int a = 0; a < degree(); ++a)
            if (map_[map_[a]] != a) return false;
        return true;
    }

    int fixed_point_count() const {
        int c = 0;
        for (int a = 0; a < degree(); ++a) c += (map_[a] == a);
        return c;
    }

    bool is_identity() const {
        for (int a = 0; a < degree(); ++a)
            if (map_[a] != a) return false;
        return true;
    }

    bool operator==(const Permutation& o) const { return map_ == o.map_; }
    bool operator<(const Permutation& o) const { return map_ < o.map_; }

    std::string cycle_string() const {
        std::string out;
        std::vector<bool> done(map_.size(), false);
        for (int a = 0; a < degree(); ++a) {
            if (done[a] || map_[a] == a) continue;
            out += '(';
            int b = a;
            while (!done[b]) {
                done[b] = true;
                out += std::to_string(b);
                b = map_[b];
            }
            out += ')';
        }
        return out.empty() ? "id" : out;
    }

  private:
    std::vector<int> map_;
};

/// An ordered set of d permutations of [d]; index i names the i-th winning constraint.
struct PermutationSet {
    int d = 0;
    std::vector<Permutation> perms;
};

/// The canonical winning set: perms[i](a) = (i - a) mod d. Every element is an involution.
inline PermutationSet make_ld(int d) {
    if (d < 2) throw invalid_argument("make_ld: need d >= 2, got " + std::to_string(d));
    PermutationSet s;
    s.d = d;
    s.perms.reserve(d);
    for (int i = 0; i < d; ++i) {
        std::vector<int> m(d);
        for (int a = 0; a < d; ++a) m[a] = ((i - a) % d + d) % d;
        s.perms.emplace_back(std::move(m));
    }
    return s;
}

/// The switching set L_d': shifts sigma_i(x) = (i + x) mod d.
inline PermutationSet make_ld_prime(int d) {
    if (d < 1) throw invalid_argument("make_ld_prime: need d >= 1");
    PermutationSet s;
    s.d = d;
    for (int i = 0; i < d; ++i) {
        std::vector<int> m(d);
        for (int a = 0; a < d; ++a) m[a] = (i + a) % d;
        s.perms.emplace_back(std::move(m));
    }
    return s;
}

struct P1P2Report {
    bool ok = false;
    std::string violation;  // empty when ok; otherwise names the property and a witness
};

/// P1: every permutation is its own inverse. P2: each ordered pair (a, pi_i(a))
/// occurs exactly once across the set.
inline P1P2Report verify_p1p2(const PermutationSet& set) {
    P1P2Report rep;
    const int d = set.d;
    if (static_cast<int>(set.perms.size()) != d) {
        rep.violation = "set has " + std::to_string(set.perms.size()) + " permutations, expected " + std::to_string(d);
        return rep;
    }
    for (int i = 0; i < d; ++i) {
        if (set.perms[i].degree() != d) {
            rep.violation = "permutation " + std::to_string(i) + " does not act on [d]";
            return rep;
        }
        if (!set.perms[i].is_involution()) {
            rep.violation = "P1 violated: permutation " + std::to_string(i) + " = " + set.perms[i].cycle_string() +
                            " is not an involution";
            return rep;
        }
    }
    std::vector<int> hits(d * d, 0);
    for (int i = 0; i < d; ++i)
        for (int a = 0; a < d; ++a) {
            int b = set.perms[i](a);
            if (++hits[a * d + b] > 1) {
                rep.violation = "P2 violated: pair (" + std::to_string(a) + "," + std::to_string(b) +
                                ") appears more than once";
                return rep;
            }
        }
    // d*d slots, d*d hits, none twice => all exactly once
    rep.ok = true;
    return rep;
}

struct P1P2Census {
    std::int64_t m_formula = 0;     // closed-form count of one-fixed-point involutions
    std::int64_t m_bruteforce = 0;  // exhaustive count over S_d
    bool all_sets_are_relabelings = false;      // set-level: every valid d-set is a relabeled L_d
    bool all_elements_are_relabelings = false;  // element-level: every candidate appears in some relabeled L_d
    std::int64_t set_count = 0;       // number of d-sets satisfying P1+P2
    std::int64_t relabeling_count = 0;  // distinct relabeled images of L_d
};

namespace detail {

inline void enumerate_permutations(int d, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> p(d);
    std::iota(p.begin(), p.end(), 0);
    do {
        fn(p);
    } while (std::next_permutation(p.begin(), p.end()));
}

inline std::int64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Applies a relabeling P to pi: a -> P(pi(P^{-1}(a))).
inline Permutation relabel(const Permutation& pi, const Permutation& P) {
    return P.after(pi).after(P.inverse());
}

}  // namespace detail

/// Counts involutions on [d] with exactly one fixed point against the closed-form
/// M_d, and checks that every d-set satisfying P1+P2 is a simultaneous relabeling
/// of L_d. Odd d only; the even case has no such characterization.
inline P1P2Census count_p1p2_structures(int d) {
    if (d < 3 || d % 2 == 0) throw unsupported("count_p1p2_structures: requires odd d >= 3");
    if (d > 7) throw resource_limit("count_p1p2_structures: d > 7 exceeds the enumeration budget");

    P1P2Census census;

    // M_d = d / ((d-1)/2)! * prod_{j=0}^{(d-3)/2} C(d-2j-1, 2)
    {
        double val = d;
        for (int j = 1; j <= (d - 1) / 2; ++j) val /= j;
        for (int j = 0; j <= (d - 3) / 2; ++j) val *= static_cast<double>(detail::binomial(d - 2 * j - 1, 2));
        census.m_formula = static_cast<std::int64_t>(val + 0.5);
    }

    // Exhaustive scan of S_d for involutions with exactly one fixed point.
    std::vector<Permutation> candidates;
    detail::enumerate_permutations(d, [&](const std::vector<int>& tab) {
        Permutation p{std::vector<int>(tab)};
        if (p.is_involution() && p.fixed_point_count() == 1) candidates.push_back(p);
    });
    census.m_bruteforce = static_cast<std::int64_t>(candidates.size());

    // Every valid set has d distinct fixed points, so group candidates by fixed point
    // and pick one per group, pruning on P2 (no ordered pair reused).
    std::vector<std::vector<Permutation>> by_fp(d);
    for (const auto& p : candidates) {
        for (int a = 0; a < d; ++a)
            if (p(a) == a) {
                by_fp[a].push_back(p);
                break;
            }
    }

    std::vector<std::vector<Permutation>> valid_sets;
    std::vector<const Permutation*> chosen;
    std::vector<bool> pair_used(d * d, false);
    auto search = [&](auto&& self, int fp) -> void {
        if (fp == d) {
            std::vector<Permutation> set;
            for (auto* p : chosen) set.push_back(*p);
            valid_sets.push_back(std::move(set));
            return;
        }
        for (const auto& p : by_fp[fp]) {
            bool ok = true;
            for (int a = 0; a < d && ok; ++a)
                if (pair_used[a * d + p(a)]) ok = false;
            if (!ok) continue;
            for (int a = 0; a < d; ++a) pair_used[a * d + p(a)] = true;
            chosen.push_back(&p);
            self(self, fp + 1);
            chosen.pop_back();
            for (int a = 0; a < d; ++a) pair_used[a * d + p(a)] = false;
        }
    };
    search(search, 0);
    census.set_count = static_cast<std::int64_t>(valid_sets.size());

    // Relabelings of L_d, as unordered sets of permutations.
    const PermutationSet ld = make_ld(d);
    auto sorted_tables = [&](const std::vector<Permutation>& ps) {
        std::vector<std::vector<int>> t;
        for (const auto& p : ps) t.push_back(p.table());
        std::sort(t.begin(), t.end());
        return t;
    };
    std::set<std::vector<std::vector<int>>> relabelings;
    detail::enumerate_permutations(d, [&](const std::vector<int>& tab) {
        Permutation P{std::vector<int>(tab)};
        std::vector<Permutation> image;
        for (const auto& pi : ld.perms) image.push_back(detail::relabel(pi, P));
        relabelings.insert(sorted_tables(image));
    });

    census.relabeling_count = static_cast<std::int64_t>(relabelings.size());

    census.all_sets_are_relabelings = true;
    for (const auto& set : valid_sets) {
        if (!relabelings.count(sorted_tables(set))) {
            census.all_sets_are_relabelings = false;
            break;
        }
    }

    // element-level reading of the counting argument: every one-fixed-point
    // involution occurs inside some relabeled copy
    std::set<std::vector<int>> covered;
    for (const auto& img : relabelings)
        for (const auto& tab : img) covered.insert(tab);
    census.all_elements_are_relabelings = true;
    for (const auto& p : candidates)
        if (!covered.count(p.table())) census.all_elements_are_relabelings = false;

    return census;
}

}  // namespace xord
