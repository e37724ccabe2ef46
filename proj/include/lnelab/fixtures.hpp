#ifndef LNELAB_FIXTURES_HPP
#define LNELAB_FIXTURES_HPP

#include <string>
#include <vector>

#include "lnelab/criterion.hpp"

namespace lnelab {

// One annotated expectation. `kind` is "rel" (tolerance as a fraction of the
// value) or "abs". Provenance: "exact" for closed-form facts, "analytic" for
// values derived from a formula with an independent check, "reported" for
// values taken from the source material of the benchmark.
struct Expectation {
    std::string quantity;
    double value = 0.0;
    double tolerance = 0.0;
    std::string kind = "rel";
    std::string provenance = "analytic";

    bool matches(double observed) const {
        double tol = kind == "rel" ? tolerance * std::abs(value) : tolerance;
        return std::abs(observed - value) <= tol;
    }
};

struct Fixture {
    std::string name;
    std::string description;
    SemialgebraicSet set;
    RadiusFunction rho;
    SweepConfig config;
    std::string expected_verdict;  // empty when the fixture is exploratory
    std::vector<Expectation> expectations;
    nlohmann::json document;
};

namespace detail {

inline const std::vector<std::pair<std::string, const char*>>& fixture_documents() {
    static const std::vector<std::pair<std::string, const char*>> docs = {
        {"counterexample_z2", R"json({
  "name": "counterexample_z2",
  "description": "Two ruled sheets z = +-t*x over 0 <= x <= t, glued along the t-axis; the coordinate-t links are V shapes whose LNE constant grows like 1/r.",
  "set": {
    "ambient_dim": 3,
    "variables": ["t", "x", "z"],
    "regions": [
      { "conjuncts": [
        {"poly": "z^2 - t^2*x^2", "rel": "=0"},
        {"poly": "x", "rel": ">=0"},
        {"poly": "t - x", "rel": ">=0"}
      ] }
    ]
  },
  "rho": {"kind": "coordinate", "variable": "t"},
  "config": {"r0": 0.4, "steps": 4, "h_rel": 0.02, "landmarks": 256, "eta_rel": 0.1, "seed": 42},
  "expected_verdict": "NOT_LNE",
  "expectations": [
    {"quantity": "link_growth_exponent", "value": -1.0, "tolerance": 0.2, "kind": "abs", "provenance": "reported"},
    {"quantity": "link_K_at_r=0.4", "value": 2.6925824035672520, "tolerance": 0.10, "kind": "rel", "provenance": "analytic"},
    {"quantity": "link_K_at_r=0.2", "value": 5.0990195135927845, "tolerance": 0.10, "kind": "rel", "provenance": "analytic"},
    {"quantity": "link_K_at_r=0.1", "value": 10.049875621120890, "tolerance": 0.10, "kind": "rel", "provenance": "analytic"},
    {"quantity": "link_K_at_r=0.05", "value": 20.024984394500787, "tolerance": 0.10, "kind": "rel", "provenance": "analytic"}
  ],
  "flow": {"rho": {"kind": "coordinate", "variable": "t"}, "start": [0.4, 0.2, 0.08], "target": 0.2, "step_rel": 0.02, "max_C": 2.0}
})json"},
        {"cusp_remark", R"json({
  "name": "cusp_remark",
  "description": "Planar horn x2^2 <= x1^3/2 with the non-Lipschitz radius x1 - (x2^2)^(1/3); its links are cusp curves y^2 = (x - r)^3 whose LNE constant diverges under mesh refinement.",
  "set": {
    "ambient_dim": 2,
    "variables": ["x_1", "x_2"],
    "regions": [
      { "conjuncts": [
        {"poly": "x_1^3 - 2*x_2^2", "rel": ">=0"}
      ] }
    ]
  },
  "rho": {"kind": "composite", "expr": "x_1 - (x_2^2)^(1/3)", "declared_lipschitz": false},
  "config": {"r0": 0.4, "steps": 4, "h_rel": 0.02, "landmarks": 256, "eta_rel": 0.1, "seed": 42},
  "expected_verdict": "LNE",
  "expectations": [
    {"quantity": "link_K_refinement_factor_at_r=0.1", "value": 2.0, "tolerance": 0.5, "kind": "abs", "provenance": "reported"}
  ]
})json"},
        {"parusinski_t", R"json({
  "name": "parusinski_t",
  "description": "Fixed-exponent slice |y| = x^2 on 0 <= x <= 1 (the t = 1 member of the family |y| = x^(t+1)); two branches tangent to the x-axis. Exploratory fixture.",
  "set": {
    "ambient_dim": 2,
    "variables": ["x", "y"],
    "regions": [
      { "conjuncts": [
        {"poly": "y^2 - x^4", "rel": "=0"},
        {"poly": "x", "rel": ">=0"},
        {"poly": "1 - x", "rel": ">=0"}
      ] }
    ]
  },
  "rho": {"kind": "euclidean"},
  "config": {"r0": 0.4, "steps": 4, "h_rel": 0.02, "germ_h_rel": 0.005, "landmarks": 256, "eta_rel": 0.1, "seed": 42},
  "expected_verdict": "NOT_LNE",
  "expectations": [
    {"quantity": "separation_trend", "value": 1.0, "tolerance": 0.35, "kind": "abs", "provenance": "analytic"}
  ],
  "alternate_slices": {
    "t=1/2": "y^2 - x^3",
    "t=3/2": "y^2 - x^5"
  }
})json"},
        {"halfline", R"json({
  "name": "halfline",
  "description": "The nonnegative x-axis in the plane; convex, so inner and outer metrics coincide.",
  "set": {
    "ambient_dim": 2,
    "variables": ["x_1", "x_2"],
    "regions": [
      { "conjuncts": [
        {"poly": "x_2", "rel": "=0"},
        {"poly": "x_1", "rel": ">=0"}
      ] }
    ]
  },
  "rho": {"kind": "euclidean"},
  "config": {"r0": 0.4, "steps": 4, "h_rel": 0.02, "landmarks": 256, "eta_rel": 0.1, "seed": 42},
  "expected_verdict": "LNE",
  "expectations": [
    {"quantity": "germ_K", "value": 1.0, "tolerance": 0.03, "kind": "rel", "provenance": "exact"}
  ],
  "flow": {"rho": {"kind": "euclidean"}, "start": [1.0, 0.0], "target": 0.5, "step_rel": 0.02, "expected_C": 1.0, "tolerance": 0.02}
})json"},
        {"two_halflines_90", R"json({
  "name": "two_halflines_90",
  "description": "Two perpendicular half-lines meeting at the origin; the extremal inner/outer ratio is 1/sin(pi/4) = sqrt(2) at equal radii.",
  "set": {
    "ambient_dim": 2,
    "variables": ["x_1", "x_2"],
    "regions": [
      { "conjuncts": [ {"poly": "x_2", "rel": "=0"}, {"poly": "x_1", "rel": ">=0"} ] },
      { "conjuncts": [ {"poly": "x_1", "rel": "=0"}, {"poly": "x_2", "rel": ">=0"} ] }
    ]
  },
  "rho": {"kind": "euclidean"},
  "config": {"r0": 0.4, "steps": 4, "h_rel": 0.02, "landmarks": 256, "eta_rel": 0.1, "seed": 42},
  "expected_verdict": "LNE",
  "expectations": [
    {"quantity": "germ_K", "value": 1.4142135623730951, "tolerance": 0.07, "kind": "rel", "provenance": "analytic"},
    {"quantity": "separation_ratio", "value": 1.4142135623730951, "tolerance": 0.05, "kind": "rel", "provenance": "analytic"}
  ]
})json"},
        {"convex_cone", R"json({
  "name": "convex_cone",
  "description": "The planar cone x2 >= |x1|; convex, links are quarter-circle arcs with a scale-free arc/chord ratio.",
  "set": {
    "ambient_dim": 2,
    "variables": ["x_1", "x_2"],
    "regions": [
      { "conjuncts": [
        {"poly": "x_2^2 - x_1^2", "rel": ">=0"},
        {"poly": "x_2", "rel": ">=0"}
      ] }
    ]
  },
  "rho": {"kind": "euclidean"},
  "config": {"r0": 0.4, "steps": 4, "h_rel": 0.02, "landmarks": 256, "eta_rel": 0.1, "seed": 42},
  "expected_verdict": "LNE",
  "expectations": [
    {"quantity": "germ_K", "value": 1.1107207345395915, "tolerance": 0.10, "kind": "rel", "provenance": "analytic"},
    {"quantity": "link_K", "value": 1.1107207345395915, "tolerance": 0.10, "kind": "rel", "provenance": "analytic"}
  ]
})json"},
        {"tangent_parabolas", R"json({
  "name": "tangent_parabolas",
  "description": "The parabola x2 = x1^2 together with the half-parabola x2 = -x1^2 (x1 >= 0); the branches are tangent at the origin so the link components approach each other like 2r.",
  "set": {
    "ambient_dim": 2,
    "variables": ["x_1", "x_2"],
    "regions": [
      { "conjuncts": [ {"poly": "x_2 - x_1^2", "rel": "=0"} ] },
      { "conjuncts": [ {"poly": "x_2 + x_1^2", "rel": "=0"}, {"poly": "x_1", "rel": ">=0"} ] }
    ]
  },
  "rho": {"kind": "euclidean"},
  "config": {"r0": 0.4, "steps": 4, "h_rel": 0.01, "germ_h_rel": 0.005, "landmarks": 256, "eta_rel": 0.1, "seed": 42},
  "expected_verdict": "NOT_LNE",
  "expectations": [
    {"quantity": "separation_trend", "value": 1.0, "tolerance": 0.3, "kind": "abs", "provenance": "analytic"}
  ]
})json"},
        {"circle_cone", R"json({
  "name": "circle_cone",
  "description": "The round half-cone x3^2 = x1^2 + x2^2, x3 >= 0; links are circles, where antipodal points realize the semicircle-to-diameter ratio pi/2.",
  "set": {
    "ambient_dim": 3,
    "variables": ["x_1", "x_2", "x_3"],
    "regions": [
      { "conjuncts": [
        {"poly": "x_3^2 - x_1^2 - x_2^2", "rel": "=0"},
        {"poly": "x_3", "rel": ">=0"}
      ] }
    ]
  },
  "rho": {"kind": "euclidean"},
  "config": {"r0": 0.4, "steps": 4, "h_rel": 0.02, "landmarks": 256, "eta_rel": 0.1, "seed": 42},
  "expected_verdict": "LNE",
  "expectations": [
    {"quantity": "link_K", "value": 1.5707963267948966, "tolerance": 0.10, "kind": "rel", "provenance": "analytic"}
  ],
  "flow": {"rho": {"kind": "coordinate", "variable": "x_3"}, "start": [1.0, 0.0, 1.0], "target": 0.5, "step_rel": 0.02, "expected_C": 1.4142135623730951, "tolerance": 0.03}
})json"},
    };
    return docs;
}

inline SweepConfig config_from_json(const nlohmann::json& doc) {
    SweepConfig config;
    if (!doc.is_object()) return config;
    if (doc.contains("r0")) config.r0 = doc["r0"].get<double>();
    if (doc.contains("steps")) config.steps = doc["steps"].get<int>();
    if (doc.contains("h_rel")) config.h_rel = doc["h_rel"].get<double>();
    if (doc.contains("germ_h_rel")) config.germ_h_rel = doc["germ_h_rel"].get<double>();
    if (doc.contains("landmarks")) config.landmarks = doc["landmarks"].get<std::size_t>();
    if (doc.contains("eta_rel")) config.eta_rel = doc["eta_rel"].get<double>();
    if (doc.contains("seed")) config.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("germ_scales")) config.germ_scales = doc["germ_scales"].get<int>();
    return config;
}

}  // namespace detail

inline std::vector<std::string> fixture_names() {
    std::vector<std::string> names;
    for (const auto& [name, text] : detail::fixture_documents()) names.push_back(name);
    return names;
}

inline Fixture load_fixture(const std::string& name) {
    for (const auto& [fixture_name, text] : detail::fixture_documents()) {
        if (fixture_name != name) continue;
        nlohmann::json doc = nlohmann::json::parse(text);
        SemialgebraicSet set = set_from_json(doc["set"]);
        RadiusFunction rho = radius_from_json(doc["rho"], set.variables());
        Fixture fixture{name,
                        doc.value("description", ""),
                        std::move(set),
                        std::move(rho),
                        detail::config_from_json(doc.contains("config") ? doc["config"] : nlohmann::json()),
                        doc.value("expected_verdict", ""),
                        {},
                        doc};
        if (doc.contains("expectations")) {
            for (const auto& e : doc["expectations"]) {
                Expectation x;
                x.quantity = e.value("quantity", "");
                x.value = e.value("value", 0.0);
                x.tolerance = e.value("tolerance", 0.0);
                x.kind = e.value("kind", "rel");
                x.provenance = e.value("provenance", "analytic");
                fixture.expectations.push_back(std::move(x));
            }
        }
        return fixture;
    }
    throw Error(ErrorKind::input, "unknown fixture '" + name + "' (see `lne-lab fixtures`)");
}

}  // namespace lnelab

#endif  // LNELAB_FIXTURES_HPP
