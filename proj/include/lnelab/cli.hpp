#ifndef LNELAB_CLI_HPP
#define LNELAB_CLI_HPP

#include <iostream>

#include <CLI11.hpp>

#include "lnelab/fixtures.hpp"
#include "lnelab/io.hpp"

namespace lnelab::cli {

namespace detail {

struct Options {
    std::string set_path;
    std::string rho_path;
    std::string fixture;
    std::string out_dir = "out";
    double r0 = 0.4;
    int steps = 4;
    double h_rel = 0.02;
    double germ_h_rel = 0.0;
    std::size_t landmarks = 256;
    double eta_rel = 0.1;
    std::uint64_t seed = 42;
    unsigned threads = 0;
    bool require_lipschitz_rho = false;

    // per-command extras
    double r = 0.2;
    double r_min = 0.0, r_max = 0.0, h = 0.0;
    std::string scales_text;
    std::size_t pairs = 20000;
    std::string start_text;
    double target = 0.1;
    double step_rel = 0.02;
    std::string report_in;
    std::string export_dir;
};

struct Problem {
    SemialgebraicSet set;
    RadiusFunction rho;
    SweepConfig config;
    std::string name;
};

inline nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::input, "cannot open: " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::input, path + ": " + e.what());
    }
}

// Fixture config first, then explicit flags on top.
inline Problem load_problem(const Options& opt, const CLI::App* sub) {
    Problem problem{SemialgebraicSet(1, {"x"}, {{SignCondition{Polynomial::variable(1, 0), Relation::eq0}}}),
                    RadiusFunction::euclidean(), SweepConfig{}, ""};
    if (!opt.fixture.empty()) {
        Fixture fixture = load_fixture(opt.fixture);
        problem.set = std::move(fixture.set);
        problem.rho = std::move(fixture.rho);
        problem.config = fixture.config;
        problem.name = fixture.name;
    } else if (!opt.set_path.empty()) {
        problem.set = set_from_json(load_json_file(opt.set_path));
        problem.name = std::filesystem::path(opt.set_path).stem().string();
    } else {
        throw Error(ErrorKind::input, "provide --set <file> or --fixture <name>");
    }
    if (!opt.rho_path.empty())
        problem.rho = radius_from_json(load_json_file(opt.rho_path), problem.set.variables());

    auto set_if = [&](const char* flag, auto assign) {
        if (sub && sub->count(flag) > 0) assign();
    };
    set_if("--r0", [&] { problem.config.r0 = opt.r0; });
    set_if("--steps", [&] { problem.config.steps = opt.steps; });
    set_if("--h-rel", [&] { problem.config.h_rel = opt.h_rel; });
    set_if("--germ-h-rel", [&] { problem.config.germ_h_rel = opt.germ_h_rel; });
    set_if("--landmarks", [&] { problem.config.landmarks = opt.landmarks; });
    set_if("--eta-rel", [&] { problem.config.eta_rel = opt.eta_rel; });
    set_if("--seed", [&] { problem.config.seed = opt.seed; });
    problem.config.threads = opt.threads;
    problem.config.require_lipschitz_rho = opt.require_lipschitz_rho;
    if (problem.config.require_lipschitz_rho && !problem.rho.declared_lipschitz())
        throw Error(ErrorKind::input,
                    "rho is declared non-Lipschitz and --require-lipschitz-rho is set");
    return problem;
}

inline Vec parse_number_list(const std::string& text, const char* what) {
    Vec out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw Error(ErrorKind::input, std::string(what) + ": bad number '" + item + "'");
        }
    }
    if (out.empty()) throw Error(ErrorKind::input, std::string(what) + ": empty list");
    return out;
}

inline void add_problem_flags(CLI::App* sub, Options& opt) {
    sub->add_option("--set", opt.set_path, "set-definition JSON document");
    sub->add_option("--rho", opt.rho_path, "radius-function JSON document (overrides the fixture's)");
    sub->add_option("--fixture", opt.fixture, "built-in fixture name (see `fixtures`)");
    sub->add_option("--out", opt.out_dir, "output directory")->capture_default_str();
    sub->add_option("--r0", opt.r0, "largest sweep radius")->capture_default_str();
    sub->add_option("--steps", opt.steps, "number of swept radii r0*2^-k")->capture_default_str();
    sub->add_option("--h-rel", opt.h_rel, "mesh spacing relative to the radius")->capture_default_str();
    sub->add_option("--germ-h-rel", opt.germ_h_rel, "mesh spacing for germ annuli (0 = same as --h-rel)");
    sub->add_option("--landmarks", opt.landmarks, "shortest-path sources per estimate")->capture_default_str();
    sub->add_option("--eta-rel", opt.eta_rel, "pair cutoff relative to the radius")->capture_default_str();
    sub->add_option("--seed", opt.seed, "random seed")->capture_default_str();
    sub->add_option("--threads", opt.threads, "worker threads (0 = hardware)");
    sub->add_flag("--require-lipschitz-rho", opt.require_lipschitz_rho,
                  "refuse radius functions declared non-Lipschitz");
}

inline int run_parse(const Options& opt, const CLI::App* sub) {
    Problem problem = load_problem(opt, sub);
    nlohmann::json echo;
    echo["set"] = set_to_json(problem.set);
    echo["rho"] = radius_to_json(problem.rho);
    std::cout << echo.dump(2) << "\n";
    return 0;
}

inline int run_sample_cmd(Options& opt, const CLI::App* sub) {
    Problem problem = load_problem(opt, sub);
    double r_max = opt.r_max > 0 ? opt.r_max : problem.config.r0;
    double r_min = opt.r_min > 0 ? opt.r_min : r_max / 8.0;
    double h = opt.h > 0 ? opt.h : problem.config.h_rel * r_max;
    SampleCloud cloud = sample_set(problem.set, {r_min, r_max}, h, problem.config.seed);
    MeshGraph graph = build_graph(cloud, 3.0, problem.set);
    std::filesystem::path out(opt.out_dir);
    io::write_text_file(out / "cloud.csv", io::cloud_csv(cloud));
    io::write_text_file(out / "graph.csv", io::graph_csv(graph));
    std::cout << "sampled " << cloud.points.size() << " points, " << graph.edges.size()
              << " edges into " << (out / "cloud.csv").string() << "\n";
    return 0;
}

inline int run_lne_cmd(Options& opt, const CLI::App* sub) {
    Problem problem = load_problem(opt, sub);
    Vec scales;
    if (!opt.scales_text.empty()) {
        scales = parse_number_list(opt.scales_text, "--scales");
    } else {
        for (int k = 0; k < problem.config.germ_scales; ++k)
            scales.push_back(problem.config.r0 * std::ldexp(1.0, -k));
    }
    double germ_h = problem.config.germ_h_rel > 0 ? problem.config.germ_h_rel : problem.config.h_rel;
    auto germs = germ_lne_estimate(problem.set, scales, germ_h, problem.config.landmarks,
                                   problem.config.seed, problem.config.threads);
    std::vector<LneEstimate> estimates;
    for (const auto& g : germs) {
        estimates.push_back(g.estimate);
        std::cout << "scale " << format_double(g.scale) << ": K_germ = " << format_double(g.K) << "\n";
    }
    io::write_text_file(std::filesystem::path(opt.out_dir) / "lne.csv", io::estimates_csv(estimates));
    return 0;
}

inline int run_link_cmd(Options& opt, const CLI::App* sub) {
    Problem problem = load_problem(opt, sub);
    LinkSlice slice = extract_link(problem.set, problem.rho, opt.r, problem.config.h_rel,
                                   problem.config.seed);
    auto estimates = link_lne_constant(slice, problem.config.eta_rel, problem.config.landmarks,
                                       problem.config.threads);
    std::filesystem::path out(opt.out_dir);
    std::string tag = "slice_r" + format_double(opt.r);
    io::write_text_file(out / "slices" / (tag + ".csv"), io::slice_csv(slice, estimates));
    io::write_text_file(out / "plots" / (tag + ".svg"), io::slice_scatter_svg(slice));
    std::cout << "r = " << format_double(opt.r) << ": " << slice.components.size()
              << " component(s), separation_ratio = " << format_double(separation_ratio(slice))
              << "\n";
    for (std::size_t c = 0; c < estimates.size(); ++c)
        std::cout << "  component " << c << ": K = " << format_double(estimates[c].constant)
                  << " over " << slice.components[c].size() << " points\n";
    if (slice.low_confidence)
        std::cout << "  warning: >5% radial root-finding failures; slice is low-confidence\n";
    return 0;
}

inline int run_sweep_cmd(Options& opt, const CLI::App* sub) {
    Problem problem = load_problem(opt, sub);
    std::filesystem::path out(opt.out_dir);
    int slice_index = 0;
    auto observer = [&](const LinkSlice& slice, const std::vector<LneEstimate>& estimates) {
        std::string tag = "slice_" + std::to_string(slice_index++) + "_r" + format_double(slice.r);
        io::write_text_file(out / "slices" / (tag + ".csv"), io::slice_csv(slice, estimates));
        io::write_text_file(out / "plots" / (tag + ".svg"), io::slice_scatter_svg(slice));
    };
    SweepReport report = run_sweep(problem.set, problem.rho, problem.config, {}, observer);
    io::write_text_file(out / "report.csv", io::report_csv(report));
    io::write_text_file(out / "report.json", io::report_to_json(report).dump(2) + "\n");
    io::write_text_file(out / "plots" / "k_growth.svg", io::k_growth_svg(report));
    std::string reasons;
    for (const auto& reason : report.reasons) {
        if (!reasons.empty()) reasons += "; ";
        reasons += reason;
    }
    std::cout << "VERDICT: " << verdict_to_string(report.verdict) << " (" << reasons << ")\n";
    if (report.cross.anomaly) std::cout << "CROSS-VALIDATION ANOMALY: " << report.cross.note << "\n";
    return 0;
}

inline int run_transport_cmd(Options& opt, const CLI::App* sub) {
    Problem problem = load_problem(opt, sub);
    double r_max = problem.config.r0;
    SampleCloud cloud = sample_set(problem.set, {r_max / 8.0, r_max}, problem.config.h_rel * r_max,
                                   problem.config.seed);
    double worst_identity = 0.0;
    for (const auto& p : cloud.points) {
        double lhs = norm_inf(transport_phi(problem.rho, p));
        double rhs = problem.rho.eval(p);
        worst_identity = std::max(worst_identity, std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300));
    }
    DistortionReport report = transport_distortion(cloud, problem.rho, opt.pairs, problem.config.seed);
    std::ostringstream csv;
    csv << "bin,log_ratio_lo,log_ratio_hi,count\n";
    for (std::size_t b = 0; b < report.histogram.size(); ++b) {
        double width = (report.log_hi - report.log_lo) / 20.0;
        csv << b << "," << format_double(report.log_lo + width * static_cast<double>(b)) << ","
            << format_double(report.log_lo + width * static_cast<double>(b + 1)) << ","
            << report.histogram[b] << "\n";
    }
    io::write_text_file(std::filesystem::path(opt.out_dir) / "transport.csv", csv.str());
    std::cout << "identity max relative residual: " << format_double(worst_identity) << "\n"
              << "distortion over " << report.pairs_used << " pairs: ["
              << format_double(report.min_ratio) << ", " << format_double(report.max_ratio) << "]\n";
    return 0;
}

inline int run_flow_cmd(Options& opt, const CLI::App* sub) {
    Problem problem = load_problem(opt, sub);
    Vec start = parse_number_list(opt.start_text, "--start");
    FlowPath path = descend_flow(problem.set, problem.rho, start, opt.target, opt.step_rel);
    io::write_text_file(std::filesystem::path(opt.out_dir) / "flow.csv", io::flow_csv(path));
    std::cout << "flow reached rho = " << format_double(path.rho_values.back()) << " in "
              << path.vertices.size() - 1 << " steps, length " << format_double(path.arc_length)
              << ", C = " << format_double(path.constant_C) << "\n";
    return 0;
}

inline int run_report_cmd(const Options& opt) {
    std::string in = opt.report_in.empty()
                         ? (std::filesystem::path(opt.out_dir) / "report.json").string()
                         : opt.report_in;
    nlohmann::json doc = load_json_file(in);
    std::string reasons;
    if (doc.contains("reasons"))
        for (const auto& reason : doc["reasons"]) {
            if (!reasons.empty()) reasons += "; ";
            reasons += reason.get<std::string>();
        }
    std::cout << "VERDICT: " << doc.value("verdict", "INCONCLUSIVE") << " (" << reasons << ")\n";
    if (doc.contains("per_radius")) {
        std::cout << "r, components, max_K, separation_ratio\n";
        for (const auto& row : doc["per_radius"]) {
            double max_k = 1.0;
            for (const auto& k : row["per_component_K"]) max_k = std::max(max_k, k.get<double>());
            std::cout << format_double(row["r"].get<double>()) << ", " << row["components"] << ", "
                      << format_double(max_k) << ", "
                      << (row["separation_ratio"].is_null()
                              ? "inf"
                              : format_double(row["separation_ratio"].get<double>()))
                      << "\n";
        }
    }
    return 0;
}

inline int run_fixtures_cmd(const Options& opt) {
    if (!opt.export_dir.empty()) {
        std::filesystem::path dir(opt.export_dir);
        for (const auto& name : fixture_names()) {
            Fixture fixture = load_fixture(name);
            nlohmann::json doc = fixture.document;
            nlohmann::json sidecar;
            sidecar["expected_verdict"] = fixture.document.value("expected_verdict", "");
            sidecar["expectations"] = fixture.document.contains("expectations")
                                          ? fixture.document["expectations"]
                                          : nlohmann::json::array();
            io::write_text_file(dir / (name + ".json"), doc.dump(2) + "\n");
            io::write_text_file(dir / (name + ".expectations.json"), sidecar.dump(2) + "\n");
        }
        std::cout << "exported " << fixture_names().size() << " fixtures to " << opt.export_dir << "\n";
        return 0;
    }
    for (const auto& name : fixture_names()) {
        Fixture fixture = load_fixture(name);
        std::cout << name;
        if (!fixture.expected_verdict.empty()) std::cout << " [" << fixture.expected_verdict << "]";
        std::cout << "\n    " << fixture.description << "\n";
    }
    return 0;
}

}  // namespace detail

// Batch front door. Exit codes: 0 success, 2 input/usage errors, 1 runtime
// failures. Never throws out of main-adjacent code.
inline int run(int argc, const char* const* argv) {
    detail::Options opt;
    CLI::App app{"lne-lab: decides whether a semialgebraic germ at the origin is Lipschitz "
                 "normally embedded, by sweeping link LNE constants across shrinking radii"};
    app.require_subcommand(1);

    auto* parse_cmd = app.add_subcommand("parse", "parse and validate set/radius documents");
    detail::add_problem_flags(parse_cmd, opt);
    auto* sample_cmd = app.add_subcommand("sample", "sample a point cloud and proximity graph");
    detail::add_problem_flags(sample_cmd, opt);
    sample_cmd->add_option("--rmin", opt.r_min, "annulus inner radius");
    sample_cmd->add_option("--rmax", opt.r_max, "annulus outer radius");
    sample_cmd->add_option("--spacing", opt.h, "absolute target spacing (default h_rel * rmax)");
    auto* lne_cmd = app.add_subcommand("lne", "direct germ-level LNE estimates across scales");
    detail::add_problem_flags(lne_cmd, opt);
    lne_cmd->add_option("--scales", opt.scales_text, "comma-separated annulus scales");
    auto* link_cmd = app.add_subcommand("link", "extract one r-link and estimate per-component K");
    detail::add_problem_flags(link_cmd, opt);
    link_cmd->add_option("--r", opt.r, "link radius")->capture_default_str();
    auto* sweep_cmd = app.add_subcommand("sweep", "full sweep: links, germ track, verdict");
    detail::add_problem_flags(sweep_cmd, opt);
    auto* transport_cmd = app.add_subcommand("transport", "transport-map identity and distortion check");
    detail::add_problem_flags(transport_cmd, opt);
    transport_cmd->add_option("--pairs", opt.pairs, "sampled point pairs")->capture_default_str();
    auto* flow_cmd = app.add_subcommand("flow", "descending flow from a start point to a target level");
    detail::add_problem_flags(flow_cmd, opt);
    flow_cmd->add_option("--start", opt.start_text, "comma-separated start coordinates")->required();
    flow_cmd->add_option("--target", opt.target, "target rho level")->capture_default_str();
    flow_cmd->add_option("--step-rel", opt.step_rel, "level drop per step, relative")->capture_default_str();
    auto* report_cmd = app.add_subcommand("report", "re-print a stored report.json");
    report_cmd->add_option("--in", opt.report_in, "report.json path (default <out>/report.json)");
    report_cmd->add_option("--out", opt.out_dir, "output directory")->capture_default_str();
    auto* fixtures_cmd = app.add_subcommand("fixtures", "list or export the built-in fixtures");
    fixtures_cmd->add_option("--export", opt.export_dir, "write fixture documents to this directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (parse_cmd->parsed()) return detail::run_parse(opt, parse_cmd);
        if (sample_cmd->parsed()) return detail::run_sample_cmd(opt, sample_cmd);
        if (lne_cmd->parsed()) return detail::run_lne_cmd(opt, lne_cmd);
        if (link_cmd->parsed()) return detail::run_link_cmd(opt, link_cmd);
        if (sweep_cmd->parsed()) return detail::run_sweep_cmd(opt, sweep_cmd);
        if (transport_cmd->parsed()) return detail::run_transport_cmd(opt, transport_cmd);
        if (flow_cmd->parsed()) return detail::run_flow_cmd(opt, flow_cmd);
        if (report_cmd->parsed()) return detail::run_report_cmd(opt);
        if (fixtures_cmd->parsed()) return detail::run_fixtures_cmd(opt);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == ErrorKind::input ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace lnelab::cli

#endif  // LNELAB_CLI_HPP
