#ifndef LNELAB_CRITERION_HPP
#define LNELAB_CRITERION_HPP

#include <string>
#include <vector>

#include "lnelab/link.hpp"
#include "lnelab/maps.hpp"

namespace lnelab {

enum class Verdict { LNE, NOT_LNE, INCONCLUSIVE };

inline std::string verdict_to_string(Verdict v) {
    switch (v) {
        case Verdict::LNE: return "LNE";
        case Verdict::NOT_LNE: return "NOT_LNE";
        case Verdict::INCONCLUSIVE: return "INCONCLUSIVE";
    }
    return "INCONCLUSIVE";
}

// Decision thresholds, pinned once; a numerical method cannot decide the germ
// property, so everything outside these bands lands on INCONCLUSIVE.
struct Thresholds {
    double divergence_slope = 0.25;    // |log-log slope| that counts as a power law
    double germ_growth_factor = 1.3;   // K growth per scale halving, twice in a row
    double link_variation = 0.15;      // flat link K across the sweep
    double separation_variation = 0.25;
    double germ_variation = 0.15;
    double monotone_slack = 0.02;      // tolerated wiggle in monotonicity checks
};

struct PerRadius {
    double r = 0.0;
    std::size_t component_count = 0;
    std::vector<double> per_component_K;
    double separation_ratio = kInf;
    std::size_t points = 0;
    std::size_t edges = 0;
    bool low_confidence = false;

    double max_K() const {
        double m = 1.0;
        for (double k : per_component_K) m = std::max(m, k);
        return m;
    }
};

struct GermEstimate {
    double scale = 0.0;
    double K = kInf;
    LneEstimate estimate;
};

struct CrossValidation {
    Verdict link_track = Verdict::INCONCLUSIVE;
    Verdict germ_track = Verdict::INCONCLUSIVE;
    bool applicable = true;  // false when rho is declared non-Lipschitz
    bool anomaly = false;
    std::string note;
};

struct SweepReport {
    RadiusFunction rho = RadiusFunction::euclidean();
    Vec radii;
    std::vector<PerRadius> per_radius;
    std::vector<GermEstimate> germ_estimates;
    double growth_exponent = std::numeric_limits<double>::quiet_NaN();
    double separation_trend = std::numeric_limits<double>::quiet_NaN();
    Verdict verdict = Verdict::INCONCLUSIVE;
    std::vector<std::string> reasons;
    CrossValidation cross;
    RadiusWitness rho_witness;
};

struct SweepConfig {
    double r0 = 0.4;
    int steps = 4;  // number of swept radii r0 * 2^-k
    double h_rel = 0.02;
    double germ_h_rel = 0.0;  // 0 = same as h_rel
    std::size_t landmarks = 256;
    double eta_rel = 0.1;
    std::uint64_t seed = 42;
    unsigned threads = 0;
    int germ_scales = 3;
    bool require_lipschitz_rho = false;
};

namespace detail {

inline double least_squares_slope(const Vec& xs, const Vec& ys) {
    if (xs.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double num = 0, den = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        num += (xs[i] - mx) * (ys[i] - my);
        den += (xs[i] - mx) * (xs[i] - mx);
    }
    return den > 0 ? num / den : std::numeric_limits<double>::quiet_NaN();
}

inline double variation(const Vec& values) {
    if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
    double lo = kInf, hi = -kInf;
    for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!(lo > 0) || lo == kInf || hi == kInf) return kInf;
    return (hi - lo) / lo;
}

// Monotone over the last `window` entries, up to relative slack.
inline bool monotone_tail(const Vec& values, std::size_t window, bool increasing, double slack) {
    if (values.size() < window) return false;
    for (std::size_t i = values.size() - window; i + 1 < values.size(); ++i) {
        if (increasing && values[i + 1] < values[i] * (1.0 - slack)) return false;
        if (!increasing && values[i + 1] > values[i] * (1.0 + slack)) return false;
    }
    return true;
}

struct Snprintf {
    static std::string slope(double v) {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "%+.1f", v);
        return std::string(buf);
    }
    static std::string factor(double v) {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "%.2f", v);
        return std::string(buf);
    }
};

}  // namespace detail

using SliceObserver = std::function<void(const LinkSlice&, const std::vector<LneEstimate>&)>;

// Runs extract_link / components / link_lne_constant / separation_ratio at
// each radius r0 * 2^-k and fits the growth and separation slopes. Slope fits
// use only the smallest two thirds of the radii: "r sufficiently small" has
// no computable threshold, stabilization at the small end is its proxy.
inline SweepReport sweep_links(const SemialgebraicSet& set, const RadiusFunction& rho,
                               const SweepConfig& config, const SliceObserver& observer = nullptr) {
    if (config.steps < 4)
        throw Error(ErrorKind::input, "sweep_links: need at least 4 radii for a slope fit");
    SweepReport report;
    report.rho = rho;
    for (int k = 0; k < config.steps; ++k) report.radii.push_back(config.r0 * std::ldexp(1.0, -k));

    for (double r : report.radii) {
        LinkSlice slice;
        try {
            slice = extract_link(set, rho, r, config.h_rel, config.seed);
        } catch (const Error& e) {
            throw Error(ErrorKind::numeric,
                        "sweep aborted: empty link at r = " + format_double(r) +
                            " (" + e.what() + "); raise the resolution or shrink r0");
        }
        auto estimates = link_lne_constant(slice, config.eta_rel, config.landmarks, config.threads);
        if (observer) observer(slice, estimates);
        PerRadius row;
        row.r = r;
        row.component_count = slice.components.size();
        for (const auto& est : estimates) row.per_component_K.push_back(est.constant);
        row.separation_ratio = separation_ratio(slice);
        row.points = slice.cloud.points.size();
        row.edges = slice.graph.edges.size();
        row.low_confidence = slice.low_confidence;
        report.per_radius.push_back(std::move(row));

        RadiusWitness w = check_radius_on_points(rho, slice.cloud.points);
        report.rho_witness.c1 = std::min(report.rho_witness.c1, w.c1);
        report.rho_witness.c2 = std::max(report.rho_witness.c2, w.c2);
        report.rho_witness.checked += w.checked;
        report.rho_witness.violations += w.violations;
    }

    const std::size_t n = report.radii.size();
    const std::size_t fit_count = (2 * n + 2) / 3;  // ceil(2n/3), smallest radii
    Vec log_r, log_k, sep_log_r, sep_log;
    for (std::size_t i = n - fit_count; i < n; ++i) {
        double max_k = report.per_radius[i].max_K();
        log_r.push_back(std::log(report.radii[i]));
        log_k.push_back(std::log(max_k));
        double sep = report.per_radius[i].separation_ratio;
        if (sep < kInf && sep > 0) {
            sep_log_r.push_back(std::log(report.radii[i]));
            sep_log.push_back(std::log(sep));
        }
    }
    report.growth_exponent = detail::least_squares_slope(log_r, log_k);
    report.separation_trend = detail::least_squares_slope(sep_log_r, sep_log);
    return report;
}

// Direct germ-level estimate: sample X in the annulus (s/8, s), attach the
// origin as an apex vertex, and estimate the LNE constant per scale.
inline std::vector<GermEstimate> germ_lne_estimate(const SemialgebraicSet& set,
                                                   const Vec& scales, double h_rel,
                                                   std::size_t landmarks, std::uint64_t seed,
                                                   unsigned threads = 0) {
    if (scales.size() < 2)
        throw Error(ErrorKind::input, "germ_lne_estimate: need at least 2 scales");
    for (std::size_t i = 0; i + 1 < scales.size(); ++i)
        if (!(scales[i] > scales[i + 1]))
            throw Error(ErrorKind::input, "germ_lne_estimate: scales must be decreasing");

    std::vector<GermEstimate> out;
    for (double s : scales) {
        GermEstimate g;
        g.scale = s;
        double h = s * h_rel;
        SampleCloud cloud = sample_set(set, {s / 8.0, s}, h, seed);
        MeshGraph graph = build_graph(cloud, 3.0, set);
        double eta = std::max(4.0 * h, 0.01 * (s - s / 8.0));
        try {
            MeshGraph with_apex = attach_apex(graph, 1.5 * s / 8.0);
            g.estimate = lne_constant(with_apex, eta, landmarks, seed, threads);
        } catch (const Error&) {
            // No apex route: estimate on the bare annulus graph; disconnected
            // pairs then surface as +inf.
            g.estimate = lne_constant(graph, eta, landmarks, seed, threads);
        }
        g.K = g.estimate.constant;
        out.push_back(std::move(g));
    }
    return out;
}

namespace detail {

inline Verdict link_track_verdict(const SweepReport& report, const Thresholds& th,
                                  std::vector<std::string>* reasons) {
    const std::size_t n = report.per_radius.size();
    Vec max_k, separations;
    bool any_finite_sep = false, all_finite_sep = true;
    for (const auto& row : report.per_radius) {
        max_k.push_back(row.max_K());
        separations.push_back(row.separation_ratio);
        if (row.separation_ratio < kInf)
            any_finite_sep = true;
        else
            all_finite_sep = false;
    }

    bool growth = !std::isnan(report.growth_exponent) &&
                  report.growth_exponent <= -th.divergence_slope &&
                  monotone_tail(max_k, std::min<std::size_t>(3, n), true, th.monotone_slack);
    bool separation_vanishing = false;
    if (any_finite_sep && !std::isnan(report.separation_trend)) {
        Vec finite;
        for (double s : separations)
            if (s < kInf) finite.push_back(s);
        separation_vanishing = report.separation_trend >= th.divergence_slope &&
                               finite.size() >= 2 && finite.back() < finite.front() &&
                               monotone_tail(finite, std::min<std::size_t>(3, finite.size()), false,
                                             th.monotone_slack);
    }

    if (growth && reasons)
        reasons->push_back("link K grows like r^(" + Snprintf::slope(report.growth_exponent) + ")");
    if (separation_vanishing && reasons)
        reasons->push_back("separation ratio -> 0 (slope " +
                           Snprintf::slope(report.separation_trend) + ")");
    if (growth || separation_vanishing) return Verdict::NOT_LNE;

    bool k_flat = variation(max_k) < th.link_variation;
    bool separation_bounded = !any_finite_sep;  // single component everywhere
    if (any_finite_sep && all_finite_sep) {
        Vec finite;
        for (double s : separations) finite.push_back(s);
        separation_bounded = variation(finite) < th.separation_variation;
    }
    if (k_flat && separation_bounded) {
        if (reasons) {
            reasons->push_back("link K stable across the sweep");
            reasons->push_back(any_finite_sep ? "separation ratio bounded below"
                                              : "single link component at every radius");
        }
        return Verdict::LNE;
    }
    if (reasons) {
        if (!k_flat) reasons->push_back("link K neither flat nor a clean power law");
        if (!separation_bounded) reasons->push_back("separation ratio not resolved as bounded or vanishing");
    }
    return Verdict::INCONCLUSIVE;
}

inline Verdict germ_track_verdict(const SweepReport& report, const Thresholds& th,
                                  std::vector<std::string>* reasons) {
    if (report.germ_estimates.size() < 2) return Verdict::INCONCLUSIVE;
    Vec ks;
    bool any_inf = false;
    for (const auto& g : report.germ_estimates) {
        ks.push_back(g.K);
        if (g.K == kInf) any_inf = true;
    }
    if (any_inf) {
        if (reasons) reasons->push_back("germ annulus disconnected with no apex route (K = inf)");
        return Verdict::NOT_LNE;
    }
    int growing_streak = 0, best_streak = 0;
    double worst_factor = kInf;
    for (std::size_t i = 0; i + 1 < ks.size(); ++i) {
        double factor = ks[i + 1] / ks[i];
        worst_factor = std::min(worst_factor, factor);
        if (factor >= th.germ_growth_factor) {
            ++growing_streak;
            best_streak = std::max(best_streak, growing_streak);
        } else {
            growing_streak = 0;
        }
    }
    if (best_streak >= 2) {
        double mean_factor = std::pow(ks.back() / ks.front(),
                                      1.0 / static_cast<double>(ks.size() - 1));
        if (reasons)
            reasons->push_back("germ K diverging (x" + Snprintf::factor(mean_factor) +
                               " per scale halving)");
        return Verdict::NOT_LNE;
    }
    if (variation(ks) < th.germ_variation) {
        if (reasons) reasons->push_back("germ K stable across scales");
        return Verdict::LNE;
    }
    if (reasons) reasons->push_back("germ K neither stable nor cleanly diverging");
    return Verdict::INCONCLUSIVE;
}

}  // namespace detail

// Combined verdict. With a non-Lipschitz rho the link evidence is reported
// but quarantined: the criterion's hypotheses do not cover it, so only the
// germ track may decide.
inline std::pair<Verdict, std::vector<std::string>> verdict(const SweepReport& report,
                                                            const Thresholds& th = {}) {
    std::vector<std::string> reasons;
    if (!report.rho.declared_lipschitz()) {
        std::vector<std::string> germ_reasons;
        Verdict g = detail::germ_track_verdict(report, th, &germ_reasons);
        reasons.push_back("rho declared non-Lipschitz: link-track divergence reported but not used");
        reasons.insert(reasons.end(), germ_reasons.begin(), germ_reasons.end());
        return {g, reasons};
    }

    std::vector<std::string> link_reasons, germ_reasons;
    Verdict l = detail::link_track_verdict(report, th, &link_reasons);
    Verdict g = detail::germ_track_verdict(report, th, &germ_reasons);

    if (l == Verdict::NOT_LNE || g == Verdict::NOT_LNE) {
        if (l == Verdict::NOT_LNE) reasons.insert(reasons.end(), link_reasons.begin(), link_reasons.end());
        if (g == Verdict::NOT_LNE) reasons.insert(reasons.end(), germ_reasons.begin(), germ_reasons.end());
        return {Verdict::NOT_LNE, reasons};
    }
    if (l == Verdict::LNE && g == Verdict::LNE) {
        reasons.insert(reasons.end(), link_reasons.begin(), link_reasons.end());
        reasons.insert(reasons.end(), germ_reasons.begin(), germ_reasons.end());
        return {Verdict::LNE, reasons};
    }
    reasons.insert(reasons.end(), link_reasons.begin(), link_reasons.end());
    reasons.insert(reasons.end(), germ_reasons.begin(), germ_reasons.end());
    return {Verdict::INCONCLUSIVE, reasons};
}

// Theorem-oracle consistency: the link track ((ii)+(iii) evidence) and the
// germ track ((i) evidence) must agree whenever the hypotheses hold; a hard
// contradiction is a numerical-resolution anomaly worth flagging loudly.
inline CrossValidation cross_validate(const SweepReport& report, const Thresholds& th = {}) {
    CrossValidation cv;
    cv.link_track = detail::link_track_verdict(report, th, nullptr);
    cv.germ_track = detail::germ_track_verdict(report, th, nullptr);
    cv.applicable = report.rho.declared_lipschitz();
    if (!cv.applicable) {
        cv.anomaly = false;
        cv.note = "not applicable: rho declared non-Lipschitz, equivalence hypotheses not met";
        return cv;
    }
    bool hard_conflict = (cv.link_track == Verdict::LNE && cv.germ_track == Verdict::NOT_LNE) ||
                         (cv.link_track == Verdict::NOT_LNE && cv.germ_track == Verdict::LNE);
    cv.anomaly = hard_conflict;
    if (hard_conflict) {
        cv.note = "anomaly: link track says " + verdict_to_string(cv.link_track) +
                  " but germ track says " + verdict_to_string(cv.germ_track) +
                  "; treat as a numerical-resolution artifact and refine h_rel";
    } else {
        cv.note = "consistent: link track " + verdict_to_string(cv.link_track) + ", germ track " +
                  verdict_to_string(cv.germ_track);
    }
    return cv;
}

// Full pipeline: link sweep, germ estimates, verdict, cross-check.
inline SweepReport run_sweep(const SemialgebraicSet& set, const RadiusFunction& rho,
                             const SweepConfig& config, const Thresholds& th = {},
                             const SliceObserver& observer = nullptr) {
    if (config.require_lipschitz_rho && !rho.declared_lipschitz())
        throw Error(ErrorKind::input,
                    "rho is declared non-Lipschitz and --require-lipschitz-rho is set");
    SweepReport report = sweep_links(set, rho, config, observer);
    Vec scales;
    for (int k = 0; k < config.germ_scales; ++k) scales.push_back(config.r0 * std::ldexp(1.0, -k));
    double germ_h = config.germ_h_rel > 0 ? config.germ_h_rel : config.h_rel;
    report.germ_estimates =
        germ_lne_estimate(set, scales, germ_h, config.landmarks, config.seed, config.threads);
    auto [v, reasons] = verdict(report, th);
    report.verdict = v;
    report.reasons = std::move(reasons);
    report.cross = cross_validate(report, th);
    return report;
}

}  // namespace lnelab

#endif  // LNELAB_CRITERION_HPP
