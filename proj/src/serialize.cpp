#include "mstlens/serialize.hpp"

namespace mstlens {

namespace {

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json five_json(const FiveNumber& f) {
    return Json{{"min", f.min}, {"q1", f.q1}, {"median", f.median}, {"q3", f.q3}, {"max", f.max}};
}

Json id_list(const std::vector<VertexId>& rows, const std::vector<std::string>& row_ids) {
    Json out = Json::array();
    for (auto r : rows) out.push_back(row_ids.at(r));
    return out;
}

const char* case_name(NullCase c) {
    switch (c) {
    case NullCase::I: return "I";
    case NullCase::II: return "II";
    case NullCase::III: return "III";
    case NullCase::IV: return "IV";
    }
    return "?";
}

} // namespace

Json matrix_json(const Matrix& m) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        out.push_back(std::move(row));
    }
    return out;
}

Json edges_json(const WeightedTree& tree, const std::vector<std::string>& row_ids) {
    Json out = Json::array();
    for (const auto& e : tree.edges())
        out.push_back(Json{{"u", row_ids.at(e.u)}, {"v", row_ids.at(e.v)}, {"weight", e.weight}});
    return out;
}

Json test_result_json(const TestResult& result) {
    return Json{{"observed", result.observed}, {"null_mean", result.null_mean}, {"null_sd", result.null_sd},
                {"p_value", result.p_value},   {"replicates", result.replicates}, {"seed", result.seed}};
}

Json crossing_json(const CrossingStatistic& stat, const std::vector<std::string>& row_ids) {
    Json mediators = Json::array();
    for (const auto& m : stat.mediators)
        mediators.push_back(Json{{"vertex", row_ids.at(m.vertex)},
                                 {"to_group1", m.to_group1},
                                 {"to_group2", m.to_group2},
                                 {"contribution", m.contribution}});
    return Json{{"total", stat.total},
                {"direct_edges", stat.direct_edges},
                {"mediator_contribution", stat.mediator_contribution},
                {"mediators", std::move(mediators)}};
}

Json projection_json(const ProjectionResult& result) {
    const auto& cfg = result.config;
    return Json{{"coords", matrix_json(result.coords)},
                {"path_coords", matrix_json(result.path_coords)},
                {"variance_retained", result.variance_retained},
                {"canonical_correlations", result.canonical_correlations},
                {"lambda", result.lambda},
                {"degree", result.degree},
                {"config",
                 Json{{"pca_dims", cfg.pca_dims},
                      {"degree", cfg.degree},
                      {"lambda", optional_number(cfg.lambda)},
                      {"bandwidth", optional_number(cfg.bandwidth)},
                      {"folds", cfg.folds}}},
                {"warnings", result.warnings}};
}

Json surface_json(const DensitySurface& surface) {
    return Json{{"xs", surface.xs},
                {"ys", surface.ys},
                {"values", matrix_json(surface.values)},
                {"bandwidth", surface.bandwidth},
                {"modes", mode_count(surface)}};
}

Json heatmap_json(const HeatmapSpec& spec, const std::vector<std::string>& row_ids) {
    return Json{{"features", spec.features},
                {"feature_order", spec.feature_order},
                {"rows", id_list(spec.rows, row_ids)},
                {"row_group", spec.row_group},
                {"matrix", matrix_json(spec.matrix)},
                {"mean1", spec.mean1},
                {"mean2", spec.mean2}};
}

Json meta_json(const MetaSummary& summary) {
    Json categorical = Json::array();
    for (const auto& c : summary.categorical)
        categorical.push_back(Json{{"column", c.column}, {"group1", c.group1}, {"group2", c.group2}});
    Json numeric = Json::array();
    for (const auto& c : summary.numeric)
        numeric.push_back(Json{{"column", c.column}, {"group1", five_json(c.group1)}, {"group2", five_json(c.group2)}});
    return Json{{"categorical", std::move(categorical)}, {"numeric", std::move(numeric)}};
}

Json selection_json(const GroupSelection& sel, const std::vector<std::string>& row_ids) {
    return Json{{"group1", id_list(sel.group1, row_ids)},
                {"group2", id_list(sel.group2, row_ids)},
                {"path", id_list(sel.path, row_ids)}};
}

Json rf_json(const RFResult& result) {
    return Json{{"distance", result.distance}, {"shared", result.shared}, {"sym_diff", result.sym_diff}};
}

Json density_json(const MinimalCrossing& result) {
    return Json{{"case", case_name(result.which)},
                {"breakpoints", result.density.breakpoints},
                {"values", result.density.values},
                {"min_integral", result.min_integral},
                {"feasible", result.feasible}};
}

} // namespace mstlens
