#ifndef LNELAB_SEMIALGEBRAIC_HPP
#define LNELAB_SEMIALGEBRAIC_HPP

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lnelab/polynomial.hpp"

namespace lnelab {

enum class Relation { eq0, ge0, gt0, le0, lt0 };

inline std::string relation_to_string(Relation r) {
    switch (r) {
        case Relation::eq0: return "=0";
        case Relation::ge0: return ">=0";
        case Relation::gt0: return ">0";
        case Relation::le0: return "<=0";
        case Relation::lt0: return "<0";
    }
    return "=0";
}

inline Relation relation_from_string(const std::string& s) {
    if (s == "=0" || s == "==0") return Relation::eq0;
    if (s == ">=0") return Relation::ge0;
    if (s == ">0") return Relation::gt0;
    if (s == "<=0") return Relation::le0;
    if (s == "<0") return Relation::lt0;
    throw Error(ErrorKind::input, "unknown relation '" + s + "' (use =0, >=0, >0, <=0, <0)");
}

struct SignCondition {
    Polynomial poly;
    Relation relation;
};

// One conjunctive cell: all conditions must hold simultaneously.
using Region = std::vector<SignCondition>;

enum class Membership { inside, boundary_band, outside };

struct MembershipResult {
    Membership label;
    // Worst normalized margin across the best region; >= 0 means inside.
    double margin;
    int region = -1;
};

// Finite union of sign-condition regions. Values are immutable after
// construction; concurrent reads are safe.
class SemialgebraicSet {
public:
    SemialgebraicSet(std::size_t ambient_dim, std::vector<std::string> variables,
                     std::vector<Region> regions)
        : dim_(ambient_dim), variables_(std::move(variables)), regions_(std::move(regions)) {
        if (dim_ == 0) throw Error(ErrorKind::input, "SemialgebraicSet: ambient_dim must be positive");
        if (regions_.empty()) throw Error(ErrorKind::input, "SemialgebraicSet: at least one region required");
        if (variables_.size() != dim_)
            throw Error(ErrorKind::input, "SemialgebraicSet: variable list length mismatch");
        for (const auto& region : regions_) {
            if (region.empty())
                throw Error(ErrorKind::input, "SemialgebraicSet: empty region");
            for (const auto& cond : region)
                if (cond.poly.ambient_dim() != dim_)
                    throw Error(ErrorKind::input, "SemialgebraicSet: polynomial dimension mismatch");
        }
    }

    std::size_t ambient_dim() const { return dim_; }
    const std::vector<std::string>& variables() const { return variables_; }
    const std::vector<Region>& regions() const { return regions_; }

    // Normalized margin of one condition: nonnegative iff the condition passes
    // at relative tolerance tol. Equalities use |p| <= tol*scale, inequalities
    // the analogous one-sided band.
    static double condition_margin(const SignCondition& cond, const Vec& x, double tol) {
        double value = cond.poly.eval(x);
        double scale = cond.poly.term_scale(x);
        double v = value / scale;
        switch (cond.relation) {
            case Relation::eq0: return tol - std::abs(v);
            case Relation::ge0:
            case Relation::gt0: return v + tol;
            case Relation::le0:
            case Relation::lt0: return tol - v;
        }
        return -kInf;
    }

    static double region_margin(const Region& region, const Vec& x, double tol) {
        double worst = kInf;
        for (const auto& cond : region) worst = std::min(worst, condition_margin(cond, x, tol));
        return worst;
    }

    MembershipResult membership(const Vec& x, double tol) const {
        check_dim(x, dim_, "membership");
        if (!(tol > 0)) throw Error(ErrorKind::input, "membership: tol must be positive");
        double best = -kInf;
        int best_region = -1;
        for (std::size_t k = 0; k < regions_.size(); ++k) {
            double m = region_margin(regions_[k], x, tol);
            if (m > best) {
                best = m;
                best_region = static_cast<int>(k);
            }
        }
        Membership label = Membership::outside;
        if (best >= 0)
            label = Membership::inside;
        else if (best >= -3.0 * tol)
            label = Membership::boundary_band;
        return {label, best, best_region};
    }

    bool region_passes(std::size_t region_index, const Vec& x, double tol) const {
        return region_margin(regions_.at(region_index), x, tol) >= 0;
    }

    // First-order distance proxy to one region: max over conditions of
    // |violation| / |gradient|. Zero when the point satisfies the region.
    double region_distance_estimate(std::size_t region_index, const Vec& x) const {
        const double grad_floor = 1e-12;
        double worst = 0.0;
        for (const auto& cond : regions_.at(region_index)) {
            double value = cond.poly.eval(x);
            double viol = 0.0;
            switch (cond.relation) {
                case Relation::eq0: viol = std::abs(value); break;
                case Relation::ge0:
                case Relation::gt0: viol = std::max(0.0, -value); break;
                case Relation::le0:
                case Relation::lt0: viol = std::max(0.0, value); break;
            }
            if (viol == 0.0) continue;
            double g = norm2(cond.poly.gradient(x));
            worst = std::max(worst, viol / std::max(g, grad_floor));
        }
        return worst;
    }

    // Geometric band test used for edge midpoints: the point must sit within
    // distance `band` of some region, by the first-order estimate.
    bool within_band(const Vec& x, double band) const {
        for (std::size_t k = 0; k < regions_.size(); ++k)
            if (region_distance_estimate(k, x) <= band) return true;
        return false;
    }

    bool region_within_band(std::size_t region_index, const Vec& x, double band) const {
        return region_distance_estimate(region_index, x) <= band;
    }

private:
    std::size_t dim_;
    std::vector<std::string> variables_;
    std::vector<Region> regions_;
};

// --- Set-definition document (JSON) ---------------------------------------
//
// { "ambient_dim": n, "variables": [...],
//   "regions": [ { "conjuncts": [ {"poly": "<expr>", "rel": "=0"} ] } ] }

inline SemialgebraicSet set_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw Error(ErrorKind::input, "set document: object expected");
    if (!doc.contains("ambient_dim") || !doc["ambient_dim"].is_number_integer())
        throw Error(ErrorKind::input, "set document: integer 'ambient_dim' required");
    long long dim = doc["ambient_dim"].get<long long>();
    if (dim <= 0) throw Error(ErrorKind::input, "set document: ambient_dim must be positive");
    if (!doc.contains("variables") || !doc["variables"].is_array())
        throw Error(ErrorKind::input, "set document: 'variables' array required");
    std::vector<std::string> variables;
    for (const auto& v : doc["variables"]) {
        if (!v.is_string()) throw Error(ErrorKind::input, "set document: variable names must be strings");
        variables.push_back(v.get<std::string>());
    }
    if (!doc.contains("regions") || !doc["regions"].is_array() || doc["regions"].empty())
        throw Error(ErrorKind::input, "set document: non-empty 'regions' array required");
    std::vector<Region> regions;
    for (const auto& rj : doc["regions"]) {
        if (!rj.contains("conjuncts") || !rj["conjuncts"].is_array() || rj["conjuncts"].empty())
            throw Error(ErrorKind::input, "set document: region needs a non-empty 'conjuncts' array");
        Region region;
        for (const auto& cj : rj["conjuncts"]) {
            if (!cj.contains("poly") || !cj["poly"].is_string() || !cj.contains("rel") ||
                !cj["rel"].is_string())
                throw Error(ErrorKind::input, "set document: conjunct needs string 'poly' and 'rel'");
            region.push_back(SignCondition{parse_polynomial(cj["poly"].get<std::string>(), variables),
                                           relation_from_string(cj["rel"].get<std::string>())});
        }
        regions.push_back(std::move(region));
    }
    return SemialgebraicSet(static_cast<std::size_t>(dim), std::move(variables), std::move(regions));
}

inline nlohmann::json set_to_json(const SemialgebraicSet& set) {
    nlohmann::json doc;
    doc["ambient_dim"] = set.ambient_dim();
    doc["variables"] = set.variables();
    nlohmann::json regions = nlohmann::json::array();
    for (const auto& region : set.regions()) {
        nlohmann::json conjuncts = nlohmann::json::array();
        for (const auto& cond : region) {
            conjuncts.push_back({{"poly", cond.poly.to_string(set.variables())},
                                 {"rel", relation_to_string(cond.relation)}});
        }
        regions.push_back({{"conjuncts", conjuncts}});
    }
    doc["regions"] = regions;
    return doc;
}

}  // namespace lnelab

#endif  // LNELAB_SEMIALGEBRAIC_HPP
