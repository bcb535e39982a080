// Command-line front end: parse XOR-d game files, run the analyses, emit
// text/tsv/json reports. Exit codes: 0 ok, 2 input error, 3 resource limit,
// 4 solver did not converge.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "xord/classical.hpp"
#include "xord/equivalence.hpp"
#include "xord/game.hpp"
#include "xord/graph_enum.hpp"
#include "xord/kg.hpp"
#include "xord/permutation.hpp"
#include "xord/quantum.hpp"
#include "xord/survey.hpp"
#include "xord/switching.hpp"

using json = nlohmann::json;

namespace {

int g_precision = 6;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", g_precision, v);
    return buf;
}

// numeric payload shared between text and json output
double fmt_value(double v) { return std::stod(fmt(v)); }

xord::LabeledGameGraph load_game(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw xord::parse_error("cannot open " + path);
    return xord::parse_game(in);
}

json game_json(const xord::LabeledGameGraph& g) {
    json edges = json::array();
    for (const auto& e : g.edges()) {
        json rec = {e.u, e.v};
        rec.push_back(e.label.is_gray() ? json("gray") : json(e.label.color));
        edges.push_back(rec);
    }
    json out = {{"d", g.outcome_count()}, {"n", g.vertex_count()}, {"edges", edges}};
    if (g.bipartition()) out["bipartite"] = *g.bipartition();
    return out;
}

struct Report {
    json game;
    json values = json::object();
    json solver = json::object();
    json verdicts = json::array();
};

void emit(const Report& r, const std::string& format, const std::string& text) {
    if (format == "json") {
        json out = {{"game", r.game}, {"values", r.values}, {"solver", r.solver}, {"verdicts", r.verdicts}};
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << text;
    }
}

std::string tsv_line(const std::vector<std::pair<std::string, std::string>>& cols) {
    std::string header, row;
    for (const auto& [k, v] : cols) {
        header += (header.empty() ? "#" : "\t") + k;
        row += (row.empty() ? "" : "\t") + v;
    }
    return header + "\n" + row + "\n";
}

int cmd_perms(int d) {
    const auto set = xord::make_ld(d);
    for (int i = 0; i < d; ++i) {
        std::cout << "pi_" << i << " = " << set.perms[i].cycle_string() << "  map:";
        for (int a = 0; a < d; ++a) std::cout << ' ' << set.perms[i](a);
        std::cout << "\n";
    }
    const auto rep = xord::verify_p1p2(set);
    std::cout << (rep.ok ? "P1: ok, P2: ok" : rep.violation) << "\n";
    return rep.ok ? 0 : 1;
}

int cmd_classical(const std::string& path, const std::string& format) {
    const auto g = load_game(path);
    const auto r = xord::classical_value(g);
    Report rep;
    rep.game = game_json(g);
    rep.values = {{"beta_c", r.beta_c}, {"gamma_c", r.gamma_c}, {"omega_c", fmt_value(r.omega_c)}};
    std::ostringstream text;
    text << "beta_c=" << r.beta_c << " gamma_c=" << r.gamma_c << " omega_c=" << fmt(r.omega_c) << "\n";
    text << "witness=";
    for (size_t i = 0; i < r.witness.values.size(); ++i) text << (i ? "," : "") << r.witness.values[i];
    text << "\n";
    if (format == "tsv") {
        std::cout << tsv_line({{"beta_c", std::to_string(r.beta_c)},
                               {"gamma_c", std::to_string(r.gamma_c)},
                               {"omega_c", fmt(r.omega_c)}});
        return 0;
    }
    emit(rep, format, text.str());
    return 0;
}

int cmd_cycles(const std::string& path, const std::string& format) {
    const auto g = load_game(path);
    const auto rep = xord::classify_cycles(g);
    const auto [lo, hi] = xord::contradiction_bounds(rep);
    std::ostringstream text;
    text << "#cycle\tlength\tcomposed\tfixed_points\tclass\n";
    for (size_t i = 0; i < rep.cycles.size(); ++i) {
        const auto& c = rep.cycles[i];
        text << i << '\t' << c.vertices.size() << '\t' << c.composed.cycle_string() << '\t' << c.fixed_points
             << '\t'
             << (c.fixed_points == g.outcome_count() ? "good" : (c.fixed_points == 0 ? "bad" : "ugly"))
             << "\n";
    }
    text << "xi_good=" << rep.xi_good << " xi_bad=" << rep.xi_bad << " xi_ugly=" << rep.xi_ugly << "\n";
    text << "beta_c_bounds=[" << lo << "," << hi << "]\n";
    Report jrep;
    jrep.game = game_json(g);
    jrep.values = {{"xi_good", rep.xi_good},
                   {"xi_bad", rep.xi_bad},
                   {"xi_ugly", rep.xi_ugly},
                   {"beta_c_lower", lo},
                   {"beta_c_upper", hi}};
    emit(jrep, format == "tsv" ? "text" : format, text.str());
    return 0;
}

int cmd_bipartize(const std::string& path, const std::string& format) {
    const auto g = load_game(path);
    const auto r = xord::edge_bipartization(g);
    std::ostringstream text;
    text << "beta2=" << r.beta2 << "\nremoved=";
    for (size_t i = 0; i < r.removed.size(); ++i)
        text << (i ? " " : "") << r.removed[i].first << "-" << r.removed[i].second;
    text << "\n";
    Report rep;
    rep.game = game_json(g);
    rep.values = {{"beta2", r.beta2}};
    emit(rep, format == "tsv" ? "text" : format, text.str());
    return 0;
}

int cmd_kg(const std::string& path) {
    const auto g = load_game(path);
    const auto kg = xord::build_kg(g);
    // emit as a d=1 game file: plain graph, colors dropped
    xord::LabeledGameGraph out(kg.cover.vertex_count(), 1);
    for (auto [u, v] : kg.cover.edge_list()) out.add_edge(u, v, xord::EdgeLabel{0});
    xord::write_game(std::cout, out);
    return 0;
}

int cmd_canon(const std::string& path) {
    const auto g = load_game(path);
    std::cout << xord::to_hex(xord::game_canonical_form(g)) << "\n";
    return 0;
}

int cmd_equiv(const std::string& path1, const std::string& path2) {
    const auto g1 = load_game(path1);
    const auto g2 = load_game(path2);
    const bool eq = xord::equivalent(g1, g2);
    std::cout << (eq ? "equivalent" : "not equivalent") << "\n";
    if (eq) {
        if (auto w = xord::find_equivalence_witness(g1, g2)) {
            std::cout << "vertex_map=";
            for (size_t i = 0; i < w->vertex_map.size(); ++i) std::cout << (i ? "," : "") << w->vertex_map[i];
            std::cout << "\nswitches=";
            bool first = true;
            for (size_t v = 0; v < w->shifts.size(); ++v)
                if (w->shifts[v] != 0) {
                    std::cout << (first ? "" : " ") << "s(" << v << ",sigma_" << w->shifts[v] << ")";
                    first = false;
                }
            if (first) std::cout << "none";
            std::cout << "\n";
        } else {
            std::cout << "witness=not found within budget\n";
        }
    }
    return 0;
}

int solver_exit(xord::SdpStatus status) { return status == xord::SdpStatus::Optimal ? 0 : 4; }

int cmd_bound(const std::string& path, const std::string& format, const std::string& kind,
              const std::string& dump_path) {
    const auto g = load_game(path);
    if (!dump_path.empty()) {
        std::ofstream dump(dump_path);
        xord::dump_sdp(dump, xord::build_sdp_problem(g, kind));
    }
    const auto r = kind == "theta" ? xord::theta_upper_bound(g) : xord::almost_quantum_value(g);
    const std::string name = kind == "theta" ? "theta" : "gamma_aq";
    std::ostringstream text;
    text << name << "=" << fmt(r.value) << " gap=" << fmt(r.gap);
    if (r.status != xord::SdpStatus::Optimal) text << " status=max-iterations";
    text << "\n";
    if (format == "tsv") {
        std::cout << tsv_line({{name, fmt(r.value)}, {"gap", fmt(r.gap)}});
        return solver_exit(r.status);
    }
    Report rep;
    rep.game = game_json(g);
    rep.values[name] = fmt_value(r.value);
    rep.solver = {{"gap", r.gap},
                  {"iters", r.iterations},
                  {"status", r.status == xord::SdpStatus::Optimal ? "optimal" : "max-iterations"}};
    emit(rep, format, text.str());
    return solver_exit(r.status);
}

int cmd_screen(const std::string& path, const std::string& format) {
    const auto g = load_game(path);
    const auto r = xord::pseudo_telepathy_screen(g);
    std::ostringstream text;
    if (!r.d_prime) text << "warning: d is not prime; the no-pseudo-telepathy theorem does not apply\n";
    text << "beta_c=" << r.beta_c;
    if (r.gamma_aq) text << " gamma_aq=" << fmt(*r.gamma_aq);
    text << "\nverdict: " << r.verdict << "\n";
    Report rep;
    rep.game = game_json(g);
    rep.values["beta_c"] = r.beta_c;
    if (r.gamma_aq) rep.values["gamma_aq"] = fmt_value(*r.gamma_aq);
    rep.verdicts.push_back(r.verdict);
    emit(rep, format == "tsv" ? "text" : format, text.str());
    return 0;
}

int cmd_sdp_dump(const std::string& path, const std::string& kind, const std::string& out_path) {
    const auto g = load_game(path);
    const auto p = xord::build_sdp_problem(g, kind);
    if (out_path.empty()) {
        xord::dump_sdp(std::cout, p);
    } else {
        std::ofstream out(out_path);
        xord::dump_sdp(out, p);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"XOR-d game graphs: classical, almost-quantum and theta values, "
                 "equivalence and surveys"};
    app.require_subcommand(1);
    app.add_option("--precision", g_precision, "significant digits in printed numbers")
        ->capture_default_str();

    std::string file, file2, format = "text", dump_path, kind = "aq", out_path;

    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", format, "text, tsv or json")->capture_default_str();
    };

    auto* perms = app.add_subcommand("perms", "print L_d and verify P1/P2");
    int perms_d = 3;
    perms->add_option("d", perms_d, "outcome count")->required();

    auto* classical = app.add_subcommand("classical", "exact classical value");
    classical->add_option("file", file)->required();
    add_format(classical);

    auto* cycles = app.add_subcommand("cycles", "enumerate and classify simple cycles");
    cycles->add_option("file", file)->required();
    add_format(cycles);

    auto* bipartize = app.add_subcommand("bipartize", "edge bipartization number");
    bipartize->add_option("file", file)->required();
    add_format(bipartize);

    auto* kg = app.add_subcommand("kg", "emit the KG cover graph");
    kg->add_option("file", file)->required();

    auto* canon = app.add_subcommand("canon", "canonical orbit encoding, hex");
    canon->add_option("file", file)->required();

    auto* equiv = app.add_subcommand("equiv", "test two games for equivalence");
    equiv->add_option("file1", file)->required();
    equiv->add_option("file2", file2)->required();

    auto* theta = app.add_subcommand("theta", "weighted Lovasz theta upper bound");
    theta->add_option("file", file)->required();
    theta->add_option("--dump-sdp", dump_path, "write the SDP in coordinate form");
    add_format(theta);

    auto* aq = app.add_subcommand("aq", "almost-quantum value (level 1+AB)");
    aq->add_option("file", file)->required();
    aq->add_option("--dump-sdp", dump_path, "write the SDP in coordinate form");
    add_format(aq);

    auto* screen = app.add_subcommand("screen", "pseudo-telepathy screen");
    screen->add_option("file", file)->required();
    add_format(screen);

    auto* sdp_dump = app.add_subcommand("sdp-dump", "dump the theta or aq SDP");
    sdp_dump->add_option("file", file)->required();
    sdp_dump->add_option("--kind", kind, "theta or aq")->capture_default_str();
    sdp_dump->add_option("--out", out_path, "output path (default stdout)");

    auto* survey = app.add_subcommand("survey", "bulk survey over graphs and labelings");
    std::vector<int> survey_n{6};
    int survey_d = 2, survey_color = 1, survey_jobs = 2, survey_mindeg = 2;
    long survey_budget = 2000;
    std::string survey_mode = "single-color", survey_values = "classical,aq", survey_out = "results.tsv";
    std::string survey_resume;
    bool survey_force = false, survey_bip = false, survey_cbip = false, survey_disconnected = false;
    survey->add_option("--n", survey_n, "vertex counts")->capture_default_str();
    survey->add_option("--d", survey_d, "outcome count")->capture_default_str();
    survey->add_option("--mode", survey_mode, "single-color, all or gray")->capture_default_str();
    survey->add_option("--color", survey_color, "color for single-color mode")->capture_default_str();
    survey->add_option("--values", survey_values, "comma list of classical,aq,theta")->capture_default_str();
    survey->add_option("--out", survey_out, "output TSV")->capture_default_str();
    survey->add_option("--resume", survey_resume, "resume from an existing TSV");
    survey->add_option("--jobs", survey_jobs, "parallel workers")->capture_default_str();
    survey->add_option("--budget", survey_budget, "instance budget")->capture_default_str();
    survey->add_option("--min-degree", survey_mindeg, "minimum vertex degree")->capture_default_str();
    survey->add_flag("--force", survey_force, "run past the instance budget");
    survey->add_flag("--bipartite", survey_bip, "restrict to bipartite graphs");
    survey->add_flag("--complete-bipartite", survey_cbip, "restrict to complete bipartite graphs");
    survey->add_flag("--allow-disconnected", survey_disconnected, "drop the connectivity filter");

    CLI11_PARSE(app, argc, argv);

    try {
        if (perms->parsed()) return cmd_perms(perms_d);
        if (classical->parsed()) return cmd_classical(file, format);
        if (cycles->parsed()) return cmd_cycles(file, format);
        if (bipartize->parsed()) return cmd_bipartize(file, format);
        if (kg->parsed()) return cmd_kg(file);
        if (canon->parsed()) return cmd_canon(file);
        if (equiv->parsed()) return cmd_equiv(file, file2);
        if (theta->parsed()) return cmd_bound(file, format, "theta", dump_path);
        if (aq->parsed()) return cmd_bound(file, format, "aq", dump_path);
        if (screen->parsed()) return cmd_screen(file, format);
        if (sdp_dump->parsed()) return cmd_sdp_dump(file, kind, out_path);
        if (survey->parsed()) {
            xord::SurveySpec spec;
            spec.n_values = survey_n;
            spec.d = survey_d;
            spec.filter.connected = !survey_disconnected;
            spec.filter.min_degree = survey_mindeg;
            if (survey_bip) spec.filter.bipartite = true;
            spec.filter.complete_bipartite_only = survey_cbip;
            if (survey_mode == "single-color")
                spec.mode = xord::LabelingMode::SingleColor;
            else if (survey_mode == "all")
                spec.mode = xord::LabelingMode::AllLd;
            else if (survey_mode == "gray")
                spec.mode = xord::LabelingMode::WithGray;
            else
                throw xord::invalid_argument("unknown mode " + survey_mode);
            spec.single_color = survey_color;
            spec.values_classical = survey_values.find("classical") != std::string::npos;
            spec.values_aq = survey_values.find("aq") != std::string::npos;
            spec.values_theta = survey_values.find("theta") != std::string::npos;
            spec.instance_budget = survey_budget;
            spec.force = survey_force;
            spec.jobs = survey_jobs;
            const auto summary = xord::run_survey(
                spec, survey_out, survey_resume.empty() ? std::nullopt : std::optional(survey_resume),
                std::cerr);
            std::cout << "instances=" << summary.instances << " nonclassical=" << summary.nonclassical
                      << " theta_certified=" << summary.theta_certified
                      << " complete_certified=" << summary.complete_certified
                      << " failures=" << summary.failures << "\n";
            std::cout << "gap_histogram:";
            for (const auto& [gap, count] : summary.gap_histogram) std::cout << ' ' << gap << "x" << count;
            std::cout << "\n";
            return summary.failures == 0 ? 0 : 4;
        }
    } catch (const xord::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.kind()) {
            case xord::ErrorKind::ResourceLimit:
                return 3;
            case xord::ErrorKind::SolverFailure:
                return 4;
            default:
                return 2;
        }
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
