#ifndef LNELAB_IO_HPP
#define LNELAB_IO_HPP

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "lnelab/criterion.hpp"

namespace lnelab {

namespace io {

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::input, "cannot open for writing: " + path.string());
    out << content;
}

// header: idx,x1..xn,region,norm
inline std::string cloud_csv(const SampleCloud& cloud) {
    std::ostringstream out;
    const std::size_t dim = cloud.points.empty() ? 0 : cloud.points.front().size();
    out << "idx";
    for (std::size_t d = 0; d < dim; ++d) out << ",x" << (d + 1);
    out << ",region,norm\n";
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
        out << i;
        for (double c : cloud.points[i]) out << "," << format_double(c);
        out << "," << cloud.region_tag[i] << "," << format_double(norm2(cloud.points[i])) << "\n";
    }
    return out.str();
}

// header: i,j,weight
inline std::string graph_csv(const MeshGraph& graph) {
    std::ostringstream out;
    out << "i,j,weight\n";
    for (const auto& e : graph.edges)
        out << e.i << "," << e.j << "," << format_double(e.weight) << "\n";
    return out.str();
}

// header: K,eta,landmarks,witness_i,witness_j,d_inn,d_out
inline std::string estimates_csv(const std::vector<LneEstimate>& estimates) {
    std::ostringstream out;
    out << "K,eta,landmarks,witness_i,witness_j,d_inn,d_out\n";
    for (const auto& est : estimates) {
        out << format_double(est.constant) << "," << format_double(est.eta) << "," << est.landmarks
            << "," << est.witness_source << "," << est.witness_target << ","
            << format_double(est.witness_inner) << "," << format_double(est.witness_outer) << "\n";
    }
    return out.str();
}

// header: r,component,K,separation_ratio,points,edges  (one row per component)
inline std::string slice_csv(const LinkSlice& slice, const std::vector<LneEstimate>& estimates) {
    std::ostringstream out;
    out << "r,component,K,separation_ratio,points,edges\n";
    double sep = separation_ratio(slice);
    for (std::size_t c = 0; c < slice.components.size(); ++c) {
        std::size_t comp_edges = 0;
        std::vector<char> in_comp(slice.graph.vertex_count(), 0);
        for (int v : slice.components[c]) in_comp[static_cast<std::size_t>(v)] = 1;
        for (const auto& e : slice.graph.edges)
            if (in_comp[static_cast<std::size_t>(e.i)] && in_comp[static_cast<std::size_t>(e.j)])
                ++comp_edges;
        out << format_double(slice.r) << "," << c << ","
            << format_double(c < estimates.size() ? estimates[c].constant : 1.0) << ","
            << format_double(sep) << "," << slice.components[c].size() << "," << comp_edges << "\n";
    }
    return out.str();
}

// header: k,x1..xn,rho,cumlen
inline std::string flow_csv(const FlowPath& path) {
    std::ostringstream out;
    const std::size_t dim = path.vertices.empty() ? 0 : path.vertices.front().size();
    out << "k";
    for (std::size_t d = 0; d < dim; ++d) out << ",x" << (d + 1);
    out << ",rho,cumlen\n";
    for (std::size_t k = 0; k < path.vertices.size(); ++k) {
        out << k;
        for (double c : path.vertices[k]) out << "," << format_double(c);
        out << "," << format_double(path.rho_values[k]) << ","
            << format_double(path.cumulative_length[k]) << "\n";
    }
    return out.str();
}

// header: r,components,max_K,separation_ratio,points,edges  (one row per radius)
inline std::string report_csv(const SweepReport& report) {
    std::ostringstream out;
    out << "r,components,max_K,separation_ratio,points,edges\n";
    for (const auto& row : report.per_radius) {
        out << format_double(row.r) << "," << row.component_count << ","
            << format_double(row.max_K()) << "," << format_double(row.separation_ratio) << ","
            << row.points << "," << row.edges << "\n";
    }
    return out.str();
}

inline nlohmann::json report_to_json(const SweepReport& report) {
    nlohmann::json doc;
    doc["verdict"] = verdict_to_string(report.verdict);
    doc["growth_exponent"] = std::isnan(report.growth_exponent)
                                 ? nlohmann::json(nullptr)
                                 : nlohmann::json(report.growth_exponent);
    doc["separation_trend"] = std::isnan(report.separation_trend)
                                  ? nlohmann::json(nullptr)
                                  : nlohmann::json(report.separation_trend);
    doc["reasons"] = report.reasons;
    doc["rho"] = radius_to_json(report.rho);
    doc["radii"] = report.radii;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : report.per_radius) {
        nlohmann::json j;
        j["r"] = row.r;
        j["components"] = row.component_count;
        j["per_component_K"] = row.per_component_K;
        j["separation_ratio"] =
            row.separation_ratio == kInf ? nlohmann::json(nullptr) : nlohmann::json(row.separation_ratio);
        j["points"] = row.points;
        j["edges"] = row.edges;
        j["low_confidence"] = row.low_confidence;
        rows.push_back(std::move(j));
    }
    doc["per_radius"] = rows;
    nlohmann::json germ = nlohmann::json::array();
    for (const auto& g : report.germ_estimates) {
        nlohmann::json j;
        j["annulus_scale"] = g.scale;
        j["K_germ"] = g.K == kInf ? nlohmann::json(nullptr) : nlohmann::json(g.K);
        germ.push_back(std::move(j));
    }
    doc["germ_estimates"] = germ;
    doc["cross_validation"] = {
        {"link_track", verdict_to_string(report.cross.link_track)},
        {"germ_track", verdict_to_string(report.cross.germ_track)},
        {"applicable", report.cross.applicable},
        {"anomaly", report.cross.anomaly},
        {"note", report.cross.note},
    };
    if (report.rho_witness.checked > 0) {
        doc["rho_witness"] = {
            {"c1", report.rho_witness.c1},
            {"c2", report.rho_witness.c2},
            {"checked", report.rho_witness.checked},
            {"violations", report.rho_witness.violations},
        };
    }
    return doc;
}

// --- Self-contained SVG plots ----------------------------------------------

namespace detail {

inline std::string svg_header(int w, int h, const std::string& title) {
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\" viewBox=\"0 0 " << w << " " << h << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"12\" y=\"20\" font-family=\"monospace\" font-size=\"13\">" << title
        << "</text>\n";
    return out.str();
}

}  // namespace detail

// Scatter of the slice projected onto its best-fit plane (top two principal
// directions), so 3-D links render sensibly.
inline std::string slice_scatter_svg(const LinkSlice& slice) {
    const int w = 480, h = 480, margin = 40;
    const auto& pts = slice.cloud.points;
    if (pts.empty()) return detail::svg_header(w, h, "empty slice") + "</svg>\n";
    const std::size_t dim = pts.front().size();

    Eigen::VectorXd mean = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
    for (const auto& p : pts)
        for (std::size_t d = 0; d < dim; ++d) mean(static_cast<Eigen::Index>(d)) += p[d];
    mean /= static_cast<double>(pts.size());
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (const auto& p : pts) {
        Eigen::VectorXd v(static_cast<Eigen::Index>(dim));
        for (std::size_t d = 0; d < dim; ++d) v(static_cast<Eigen::Index>(d)) = p[d] - mean(static_cast<Eigen::Index>(d));
        cov += v * v.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    Eigen::VectorXd e1 = eig.eigenvectors().col(static_cast<Eigen::Index>(dim) - 1);
    Eigen::VectorXd e2 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
    if (dim >= 2) e2 = eig.eigenvectors().col(static_cast<Eigen::Index>(dim) - 2);

    std::vector<std::pair<double, double>> uv;
    double ulo = kInf, uhi = -kInf, vlo = kInf, vhi = -kInf;
    for (const auto& p : pts) {
        double u = 0, v = 0;
        for (std::size_t d = 0; d < dim; ++d) {
            double c = p[d] - mean(static_cast<Eigen::Index>(d));
            u += c * e1(static_cast<Eigen::Index>(d));
            v += c * e2(static_cast<Eigen::Index>(d));
        }
        uv.push_back({u, v});
        ulo = std::min(ulo, u); uhi = std::max(uhi, u);
        vlo = std::min(vlo, v); vhi = std::max(vhi, v);
    }
    double span = std::max(std::max(uhi - ulo, vhi - vlo), 1e-12);
    auto sx = [&](double u) { return margin + (u - ulo) / span * (w - 2 * margin); };
    auto sy = [&](double v) { return h - margin - (v - vlo) / span * (h - 2 * margin); };

    std::ostringstream out;
    out << detail::svg_header(w, h, "link slice r = " + format_double(slice.r) + " (" +
                                        std::to_string(slice.components.size()) + " component(s))");
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    std::vector<int> comp_of(pts.size(), 0);
    for (std::size_t c = 0; c < slice.components.size(); ++c)
        for (int v : slice.components[c]) comp_of[static_cast<std::size_t>(v)] = static_cast<int>(c);
    for (std::size_t i = 0; i < uv.size(); ++i) {
        out << "<circle cx=\"" << sx(uv[i].first) << "\" cy=\"" << sy(uv[i].second)
            << "\" r=\"2\" fill=\"" << palette[comp_of[i] % 8] << "\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

// log-log curve of max component K against r, plus the fitted slope line.
inline std::string k_growth_svg(const SweepReport& report) {
    const int w = 480, h = 360, margin = 50;
    std::ostringstream out;
    out << detail::svg_header(
        w, h,
        "link K vs r (log-log), slope " +
            (std::isnan(report.growth_exponent) ? std::string("n/a")
                                                : format_double(report.growth_exponent)));
    if (report.per_radius.size() >= 2) {
        double xlo = kInf, xhi = -kInf, ylo = kInf, yhi = -kInf;
        std::vector<std::pair<double, double>> pts;
        for (const auto& row : report.per_radius) {
            double x = std::log10(row.r), y = std::log10(std::max(row.max_K(), 1e-12));
            pts.push_back({x, y});
            xlo = std::min(xlo, x); xhi = std::max(xhi, x);
            ylo = std::min(ylo, y); yhi = std::max(yhi, y);
        }
        double xs = std::max(xhi - xlo, 1e-9), ys = std::max(yhi - ylo, 1e-9);
        auto px = [&](double x) { return margin + (x - xlo) / xs * (w - 2 * margin); };
        auto py = [&](double y) { return h - margin - (y - ylo) / ys * (h - 2 * margin); };
        out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
        for (auto& [x, y] : pts) out << px(x) << "," << py(y) << " ";
        out << "\"/>\n";
        for (auto& [x, y] : pts)
            out << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"#d62728\"/>\n";
        out << "<text x=\"" << margin << "\" y=\"" << h - 12
            << "\" font-family=\"monospace\" font-size=\"11\">log10 r from " << format_double(xlo)
            << " to " << format_double(xhi) << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace io

}  // namespace lnelab

#endif  // LNELAB_IO_HPP
