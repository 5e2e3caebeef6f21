#pragma once

#include "mstlens/extras.hpp"
#include "mstlens/mst.hpp"
#include "mstlens/mst_test.hpp"
#include "mstlens/null_theory.hpp"
#include "mstlens/projection.hpp"
#include "mstlens/rf.hpp"
#include "mstlens/tree.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace mstlens {

using Json = nlohmann::json;

Json matrix_json(const Matrix& m);
Json edges_json(const WeightedTree& tree, const std::vector<std::string>& row_ids);

/// Exactly observed, null_mean, null_sd, p_value, replicates, seed.
Json test_result_json(const TestResult& result);
Json crossing_json(const CrossingStatistic& stat, const std::vector<std::string>& row_ids);
Json projection_json(const ProjectionResult& result);
Json surface_json(const DensitySurface& surface);
Json heatmap_json(const HeatmapSpec& spec, const std::vector<std::string>& row_ids);
Json meta_json(const MetaSummary& summary);
Json selection_json(const GroupSelection& sel, const std::vector<std::string>& row_ids);
Json rf_json(const RFResult& result);
Json density_json(const MinimalCrossing& result);

} // namespace mstlens
