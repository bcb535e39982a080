#pragma once

#include <algorithm>
#include <fstream>
#include <future>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "xord/classical.hpp"
#include "xord/equivalence.hpp"
#include "xord/error.hpp"
#include "xord/game.hpp"
#include "xord/graph_enum.hpp"
#include "xord/quantum.hpp"

namespace xord {

enum class LabelingMode { SingleColor, AllLd, WithGray };

struct SurveySpec {
    std::vector<int> n_values;
    int d = 2;
    GraphFilter filter;
    LabelingMode mode = LabelingMode::SingleColor;
    int single_color = 1;  // the anticorrelation color by default
    bool values_classical = true;
    bool values_aq = true;
    bool values_theta = false;
    long instance_budget = 2000;
    bool force = false;
    int jobs = 1;
};

struct SurveyRow {
    std::string canonical_id;
    int n = 0;
    int edges = 0;
    bool bipartite_graph = false;
    std::optional<int> beta_c, gamma_c;
    std::optional<double> gamma_aq, theta;
    std::vector<std::string> flags;
    std::string error;
};

struct SurveySummary {
    long instances = 0;
    long nonclassical = 0;           // gamma_aq > gamma_c + 1e-4
    long theta_certified = 0;        // theta == gamma_c within 1e-5
    long complete_certified = 0;     // complete graph: quantum = classical by rule
    long failures = 0;
    std::map<double, long> gap_histogram;  // gap rounded to 1e-4
};

/// One labeled game per equivalence class of the requested labeling family of
/// `graph`, keyed and ordered by the canonical orbit encoding.
inline std::vector<LabeledGameGraph> enum_labelings(const PlainGraph& graph, int d, LabelingMode mode,
                                                    int single_color = 1, long budget = 8 << 20) {
    const auto edges = graph.edge_list();
    const int m = static_cast<int>(edges.size());
    std::vector<LabeledGameGraph> out;
    auto make_game = [&](const std::vector<int>& colors) {
        LabeledGameGraph g(graph.vertex_count(), d);
        for (int i = 0; i < m; ++i)
            g.add_edge(edges[i].first, edges[i].second,
                       EdgeLabel{colors[i] == d ? kGray : colors[i]});
        return g;
    };

    if (mode == LabelingMode::SingleColor) {
        if (single_color < 0 || single_color >= d) throw invalid_argument("single_color out of range");
        out.push_back(make_game(std::vector<int>(m, single_color)));
        return out;
    }

    const int radix = (mode == LabelingMode::WithGray) ? d + 1 : d;
    double total = 1;
    for (int i = 0; i < m; ++i) {
        total *= radix;
        if (total > static_cast<double>(budget)) throw resource_limit("enum_labelings: labeling family too large");
    }
    std::map<std::vector<std::uint8_t>, LabeledGameGraph> reps;
    std::vector<int> colors(m, 0);
    const long count = static_cast<long>(total);
    for (long t = 0; t < count; ++t) {
        long rem = t;
        for (int i = 0; i < m; ++i) {
            colors[i] = static_cast<int>(rem % radix);
            rem /= radix;
        }
        bool any_colored = false;
        for (int c : colors) any_colored |= (c != d);
        if (!any_colored) continue;
        auto g = make_game(colors);
        auto key = game_canonical_form(g);
        reps.emplace(std::move(key), std::move(g));
    }
    for (auto& [k, g] : reps) out.push_back(std::move(g));
    return out;
}

namespace survey_detail {

inline std::string format_double(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

inline std::string row_to_tsv(const SurveyRow& r) {
    std::ostringstream os;
    os << r.canonical_id << '\t' << r.n << '\t' << r.edges << '\t' << (r.bipartite_graph ? 1 : 0) << '\t';
    os << (r.beta_c ? std::to_string(*r.beta_c) : "-") << '\t';
    os << (r.gamma_c ? std::to_string(*r.gamma_c) : "-") << '\t';
    os << (r.gamma_aq ? format_double(*r.gamma_aq) : "-") << '\t';
    os << (r.theta ? format_double(*r.theta) : "-") << '\t';
    if (r.flags.empty() && r.error.empty()) {
        os << '-';
    } else {
        std::string joined;
        for (const auto& f : r.flags) joined += (joined.empty() ? "" : ",") + f;
        if (!r.error.empty()) joined += (joined.empty() ? "" : ",") + ("error:" + r.error);
        os << joined;
    }
    return os.str();
}

inline std::optional<SurveyRow> row_from_tsv(const std::string& line) {
    if (line.empty() || line[0] == '#') return std::nullopt;
    std::vector<std::string> cols;
    std::string cur;
    for (char ch : line) {
        if (ch == '\t') {
            cols.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    cols.push_back(cur);
    if (cols.size() != 9) return std::nullopt;
    SurveyRow r;
    r.canonical_id = cols[0];
    r.n = std::stoi(cols[1]);
    r.edges = std::stoi(cols[2]);
    r.bipartite_graph = cols[3] == "1";
    if (cols[4] != "-") r.beta_c = std::stoi(cols[4]);
    if (cols[5] != "-") r.gamma_c = std::stoi(cols[5]);
    if (cols[6] != "-") r.gamma_aq = std::stod(cols[6]);
    if (cols[7] != "-") r.theta = std::stod(cols[7]);
    if (cols[8] != "-") {
        std::istringstream fs(cols[8]);
        std::string f;
        while (std::getline(fs, f, ','))
            if (f.rfind("error:", 0) == 0)
                r.error = f.substr(6);
            else
                r.flags.push_back(f);
    }
    return r;
}

}  // namespace survey_detail

/// Computes the value set for one instance. Failures land in row.error and do
/// not abort the survey.
inline SurveyRow survey_instance(const LabeledGameGraph& g, const SurveySpec& spec) {
    SurveyRow row;
    row.canonical_id = to_hex(game_canonical_form(g));
    row.n = g.vertex_count();
    row.edges = g.colored_edge_count();
    PlainGraph u(g.vertex_count());
    for (const auto& e : g.edges()) u.add_edge(e.u, e.v);
    row.bipartite_graph = u.bipartite_sides().has_value();
    if (u.is_chordal()) row.flags.push_back("chordal");
    const bool complete = u.is_complete();
    try {
        if (spec.values_classical || spec.values_aq) {
            const auto cl = classical_value(g);
            row.beta_c = cl.beta_c;
            row.gamma_c = cl.gamma_c;
        }
        if (spec.values_aq) {
            const auto aq = almost_quantum_value(g);
            row.gamma_aq = aq.value;
            if (aq.status != SdpStatus::Optimal) row.flags.push_back("aq-nonconverged");
            if (row.gamma_c && *row.gamma_aq > *row.gamma_c + 1e-4) row.flags.push_back("nonclassical");
        }
        if (spec.values_theta) {
            const auto th = theta_upper_bound(g);
            row.theta = th.value;
            if (row.gamma_c && std::abs(*row.theta - *row.gamma_c) <= 1e-5) row.flags.push_back("theta-eq");
        }
        if (complete) row.flags.push_back("complete-cq-equal");
    } catch (const Error& e) {
        row.error = e.what();
    }
    return row;
}

/// Runs the survey: enumerates graphs and labeling representatives, computes
/// values with a bounded worker window, appends rows to `out_path` in canonical
/// id order, resumes past rows already present.
inline SurveySummary run_survey(const SurveySpec& spec, const std::string& out_path,
                                const std::optional<std::string>& resume_path, std::ostream& log) {
    // instance list
    std::vector<LabeledGameGraph> instances;
    for (int n : spec.n_values) {
        const auto graphs = enum_graphs(n, spec.filter);
        for (const auto& graph : graphs) {
            auto labelings = enum_labelings(graph, spec.d, spec.mode, spec.single_color);
            for (auto& g : labelings) instances.push_back(std::move(g));
        }
    }
    std::vector<std::pair<std::string, const LabeledGameGraph*>> ordered;
    ordered.reserve(instances.size());
    for (const auto& g : instances) ordered.emplace_back(to_hex(game_canonical_form(g)), &g);
    std::sort(ordered.begin(), ordered.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    ordered.erase(std::unique(ordered.begin(), ordered.end(),
                              [](const auto& a, const auto& b) { return a.first == b.first; }),
                  ordered.end());

    long sdp_count = spec.values_aq ? static_cast<long>(ordered.size()) : 0;
    log << "survey: " << ordered.size() << " instances, " << sdp_count << " SDP solves, budget "
        << spec.instance_budget << "\n";
    if (static_cast<long>(ordered.size()) > spec.instance_budget && !spec.force)
        throw resource_limit("survey would run " + std::to_string(ordered.size()) +
                             " instances, over the budget; pass --force to override");

    // resume
    std::map<std::string, SurveyRow> done;
    if (resume_path) {
        std::ifstream in(*resume_path);
        std::string line;
        while (std::getline(in, line))
            if (auto row = survey_detail::row_from_tsv(line)) done[row->canonical_id] = *row;
    }

    std::ofstream out(out_path, std::ios::app);
    if (!out) throw invalid_argument("cannot open output file " + out_path);
    if (done.empty()) out << "#canonical_id\tn\tedges\tbipartite\tbeta_c\tgamma_c\tgamma_aq\ttheta\tflags\n";

    SurveySummary summary;
    const int window = std::max(1, spec.jobs);
    std::vector<std::pair<size_t, std::future<SurveyRow>>> inflight;
    size_t next = 0, emit = 0;
    std::vector<std::optional<SurveyRow>> results(ordered.size());

    auto account = [&](const SurveyRow& row, bool fresh) {
        ++summary.instances;
        if (!row.error.empty()) ++summary.failures;
        if (row.gamma_aq && row.gamma_c) {
            const double gap = *row.gamma_aq - *row.gamma_c;
            if (gap > 1e-4) {
                ++summary.nonclassical;
                summary.gap_histogram[std::round(gap * 1e4) / 1e4]++;
            }
        }
        if (row.theta && row.gamma_c && std::abs(*row.theta - *row.gamma_c) <= 1e-5) ++summary.theta_certified;
        for (const auto& f : row.flags)
            if (f == "complete-cq-equal") ++summary.complete_certified;
        if (fresh) out << survey_detail::row_to_tsv(row) << "\n" << std::flush;
    };

    while (emit < ordered.size()) {
        while (next < ordered.size() && inflight.size() < static_cast<size_t>(window)) {
            const auto& [id, game] = ordered[next];
            auto it = done.find(id);
            if (it != done.end()) {
                results[next] = it->second;
            } else {
                inflight.emplace_back(next, std::async(std::launch::async,
                                                       [game, &spec] { return survey_instance(*game, spec); }));
            }
            ++next;
        }
        if (!inflight.empty()) {
            auto& [idx, fut] = inflight.front();
            results[idx] = fut.get();
            inflight.erase(inflight.begin());
        }
        while (emit < ordered.size() && results[emit]) {
            account(*results[emit], !done.count(ordered[emit].first));
            ++emit;
        }
    }
    return summary;
}

}  // namespace xord
