#include "mstlens/extras.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace mstlens {

HeatmapSpec heatmap_spec(const Dataset& data, const GroupSelection& sel,
                         const std::optional<std::vector<VertexId>>& sub_rows,
                         const std::optional<std::vector<std::size_t>>& sub_features) {
    if (sel.group1.empty() || sel.group2.empty()) throw InputError("heatmap needs two non-empty groups");
    std::vector<VertexId> rows1 = sel.group1;
    std::vector<VertexId> rows2 = sel.group2;
    for (auto v : rows1)
        if (v >= data.n()) throw InputError("group row out of range");
    for (auto v : rows2)
        if (v >= data.n()) throw InputError("group row out of range");

    if (sub_rows) {
        const std::unordered_set<VertexId> keep(sub_rows->begin(), sub_rows->end());
        const std::unordered_set<VertexId> in1(rows1.begin(), rows1.end());
        const std::unordered_set<VertexId> in2(rows2.begin(), rows2.end());
        for (auto v : keep)
            if (!in1.contains(v) && !in2.contains(v))
                throw InputError("sub-heatmap row " + std::to_string(v) + " is not in either group");
        std::erase_if(rows1, [&](VertexId v) { return !keep.contains(v); });
        std::erase_if(rows2, [&](VertexId v) { return !keep.contains(v); });
        if (rows1.empty() || rows2.empty()) throw InputError("sub-heatmap leaves a group empty");
    }

    std::vector<std::size_t> features(data.p());
    std::iota(features.begin(), features.end(), 0);
    if (sub_features) {
        if (sub_features->empty()) throw InputError("sub-heatmap feature subset is empty");
        for (auto f : *sub_features)
            if (f >= data.p()) throw InputError("feature index out of range");
        features = *sub_features;
        std::sort(features.begin(), features.end());
        features.erase(std::unique(features.begin(), features.end()), features.end());
    }

    const Matrix& x = data.values();
    auto column_mean = [&](const std::vector<VertexId>& rows, std::size_t f) {
        double s = 0.0;
        for (auto r : rows) s += x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(f));
        return s / static_cast<double>(rows.size());
    };
    std::vector<double> m1, m2;
    for (auto f : features) {
        m1.push_back(column_mean(rows1, f));
        m2.push_back(column_mean(rows2, f));
    }
    std::vector<std::size_t> order(features.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(m1[a] - m2[a]) > std::abs(m1[b] - m2[b]);
    });

    HeatmapSpec spec;
    for (auto i : order) {
        spec.feature_order.push_back(features[i]);
        spec.features.push_back(data.features()[features[i]]);
        spec.mean1.push_back(m1[i]);
        spec.mean2.push_back(m2[i]);
    }
    spec.rows = rows1;
    spec.rows.insert(spec.rows.end(), rows2.begin(), rows2.end());
    spec.row_group.assign(rows1.size(), 1);
    spec.row_group.resize(spec.rows.size(), 2);
    spec.matrix.resize(static_cast<Eigen::Index>(spec.rows.size()), static_cast<Eigen::Index>(order.size()));
    for (std::size_t r = 0; r < spec.rows.size(); ++r)
        for (std::size_t c = 0; c < spec.feature_order.size(); ++c)
            spec.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                x(static_cast<Eigen::Index>(spec.rows[r]), static_cast<Eigen::Index>(spec.feature_order[c]));
    return spec;
}

namespace {

double sorted_median(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
    const std::size_t count = hi - lo;
    const std::size_t mid = lo + count / 2;
    return count % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

} // namespace

FiveNumber five_number(std::vector<double> values) {
    if (values.empty()) throw InputError("five-number summary of an empty sample");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    FiveNumber out;
    out.min = values.front();
    out.max = values.back();
    out.median = sorted_median(values, 0, n);
    const std::size_t half = (n + 1) / 2;   // includes the median when n is odd
    out.q1 = sorted_median(values, 0, half);
    out.q3 = sorted_median(values, n - half, n);
    return out;
}

MetaSummary meta_summary(const MetaTable& meta, const GroupSelection& sel) {
    if (sel.group1.empty() || sel.group2.empty()) throw InputError("meta summary needs two non-empty groups");
    for (auto v : sel.group1)
        if (v >= meta.n()) throw InputError("group row out of range for the meta table");
    for (auto v : sel.group2)
        if (v >= meta.n()) throw InputError("group row out of range for the meta table");

    MetaSummary summary;
    for (const auto& column : meta.columns()) {
        if (column.numeric) {
            auto gather = [&](const std::vector<VertexId>& rows) {
                std::vector<double> out;
                for (auto r : rows) out.push_back(column.values[r]);
                return five_number(std::move(out));
            };
            summary.numeric.push_back({column.name, gather(sel.group1), gather(sel.group2)});
        } else {
            auto tabulate = [&](const std::vector<VertexId>& rows) {
                std::map<std::string, double> counts;
                for (auto r : rows) counts[column.text[r]] += 1.0;
                for (auto& [level, count] : counts) count /= static_cast<double>(rows.size());
                return counts;
            };
            summary.categorical.push_back({column.name, tabulate(sel.group1), tabulate(sel.group2)});
        }
    }
    return summary;
}

} // namespace mstlens
