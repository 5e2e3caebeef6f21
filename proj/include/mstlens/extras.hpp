#pragma once

#include "mstlens/core.hpp"
#include "mstlens/mst.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mstlens {

/// Group-comparison heatmap: selected rows (group 1 block, then group 2 block) against
/// features ordered by descending |mean1 - mean2|, ties by original feature index.
struct HeatmapSpec {
    std::vector<std::size_t> feature_order;   // indices into the dataset's features
    std::vector<std::string> features;        // names, in order
    std::vector<VertexId> rows;
    std::vector<int> row_group;               // 1 or 2 per row
    Matrix matrix;                            // rows.size() x features.size(), raw values
    std::vector<double> mean1;                // per ordered feature
    std::vector<double> mean2;
};

/// `sub_rows` must be a subset of the selected rows and keep both groups non-empty;
/// `sub_features` are feature indices. Ordering is recomputed on the subset.
HeatmapSpec heatmap_spec(const Dataset& data, const GroupSelection& sel,
                         const std::optional<std::vector<VertexId>>& sub_rows = std::nullopt,
                         const std::optional<std::vector<std::size_t>>& sub_features = std::nullopt);

struct FiveNumber {
    double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
};

/// Tukey five-number summary (hinges are medians of the lower and upper halves, the median
/// included in both halves when the count is odd). Requires a non-empty input.
FiveNumber five_number(std::vector<double> values);

struct MetaSummary {
    struct Categorical {
        std::string column;
        std::map<std::string, double> group1;
        std::map<std::string, double> group2;
    };
    struct Numeric {
        std::string column;
        FiveNumber group1;
        FiveNumber group2;
    };
    std::vector<Categorical> categorical;
    std::vector<Numeric> numeric;
};

MetaSummary meta_summary(const MetaTable& meta, const GroupSelection& sel);

} // namespace mstlens
