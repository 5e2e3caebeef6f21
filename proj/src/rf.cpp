#include "mstlens/rf.hpp"
#include "mstlens/parallel.hpp"
#include "mstlens/random.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace mstlens {

Bipartition::Bipartition(std::vector<bool> side) : mask_(std::move(side)) {
    if (!mask_.empty() && mask_.front()) mask_.flip();
}

std::vector<std::size_t> Bipartition::side_with_first() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < mask_.size(); ++i)
        if (!mask_[i]) out.push_back(i);
    return out;
}

std::vector<std::size_t> Bipartition::side_without_first() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < mask_.size(); ++i)
        if (mask_[i]) out.push_back(i);
    return out;
}

std::set<Bipartition> medoid_bipartitions(const WeightedTree& tree, const MedoidSet& medoids) {
    const std::size_t k = medoids.k();
    std::unordered_map<VertexId, std::size_t> label_of;
    for (std::size_t i = 0; i < k; ++i) {
        if (!tree.contains(medoids.vertices[i]))
            throw InputError("medoid of '" + medoids.labels.at(i) + "' is not in the tree");
        label_of.emplace(medoids.vertices[i], i);
    }
    std::set<Bipartition> out;
    if (tree.size() < 2) return out;

    // Iterative DFS from the smallest vertex; the labels below each non-root vertex form one
    // side of the split made by the edge to its parent.
    const VertexId root = tree.vertices().front();
    std::unordered_map<VertexId, VertexId> parent{{root, root}};
    std::vector<VertexId> order;
    std::vector<VertexId> stack{root};
    while (!stack.empty()) {
        const VertexId v = stack.back();
        stack.pop_back();
        order.push_back(v);
        for (const auto& nb : tree.neighbors(v))
            if (parent.emplace(nb.id, v).second) stack.push_back(nb.id);
    }
    std::unordered_map<VertexId, std::vector<bool>> below;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const VertexId v = *it;
        auto& mask = below[v];
        mask.resize(k, false);
        if (auto lab = label_of.find(v); lab != label_of.end()) mask[lab->second] = true;
        for (const auto& nb : tree.neighbors(v)) {
            if (nb.id == parent.at(v)) continue;
            const auto& child = below.at(nb.id);
            for (std::size_t i = 0; i < k; ++i)
                if (child[i]) mask[i] = true;
        }
        if (v != root) out.emplace(mask);
    }
    return out;
}

RFResult rf_distance(const WeightedTree& t1, const MedoidSet& m1, const WeightedTree& t2, const MedoidSet& m2) {
    if (m1.labels != m2.labels) throw InputError("medoid sets must cover the same labels in the same order");
    const auto p1 = medoid_bipartitions(t1, m1);
    const auto p2 = medoid_bipartitions(t2, m2);
    std::size_t shared = 0;
    for (const auto& b : p1) shared += p2.count(b);
    RFResult result;
    result.shared = shared;
    result.sym_diff = (p1.size() - shared) + (p2.size() - shared);
    if (shared == 0)
        throw DegenerateError("Robinson-Foulds distance undefined: the trees share no medoid bipartition");
    result.distance = static_cast<double>(result.sym_diff) / (2.0 * static_cast<double>(shared));
    return result;
}

MedoidTree simplified_medoid_tree(const WeightedTree& mst, const Matrix& points, const Clustering& clustering) {
    MedoidTree out;
    out.medoids = medoids(points, clustering);
    out.tree = simplify_medoid_subtree(medoid_subtree(mst, out.medoids), out.medoids);
    return out;
}

MedoidTree simplified_medoid_tree(const Matrix& points, const Clustering& clustering) {
    return simplified_medoid_tree(build_mst(points), points, clustering);
}

double default_noise_sd(const Matrix& points) {
    const auto n = points.rows();
    std::vector<double> distances;
    distances.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double d = (points.row(i) - points.row(j)).norm();
            if (d > 0) distances.push_back(d);
        }
    if (distances.empty()) throw DegenerateError("all points coincide; no scale for the noise");
    auto mid = distances.begin() + static_cast<std::ptrdiff_t>(distances.size() / 2);
    std::nth_element(distances.begin(), mid, distances.end());
    double median = *mid;
    if (distances.size() % 2 == 0) {
        const double lower = *std::max_element(distances.begin(), mid);
        median = 0.5 * (median + lower);
    }
    return 0.5 * median / std::sqrt(static_cast<double>(points.cols()));
}

StabilityResult stability_experiment(const Matrix& points, const Clustering& clustering,
                                     std::optional<double> noise_sd, std::size_t reps, std::uint64_t seed) {
    if (reps < 1) throw InputError("stability experiment needs reps >= 1");
    StabilityResult result;
    result.noise_sd = noise_sd ? *noise_sd : default_noise_sd(points);
    if (!(result.noise_sd >= 0.0)) throw InputError("noise sd must be non-negative");

    const WeightedTree mst = build_mst(points);
    const MedoidTree original = simplified_medoid_tree(mst, points, clustering);

    result.noise_distances.assign(reps, 0.0);
    result.permutation_distances.assign(reps, 0.0);

    parallel_for(reps, [&](std::size_t r) {
        Rng rng = make_rng(seed, 1, r);
        std::normal_distribution<double> noise(0.0, result.noise_sd);
        Matrix noisy = points;
        for (Eigen::Index j = 0; j < noisy.cols(); ++j)
            for (Eigen::Index i = 0; i < noisy.rows(); ++i) noisy(i, j) += noise(rng);
        const MedoidTree replicate = simplified_medoid_tree(noisy, clustering);
        result.noise_distances[r] = rf_distance(original.tree, original.medoids, replicate.tree, replicate.medoids).distance;
    });

    parallel_for(reps, [&](std::size_t r) {
        Rng rng = make_rng(seed, 2, r);
        std::vector<std::string> labels = clustering.labels();
        std::shuffle(labels.begin(), labels.end(), rng);
        // Keep class numbering identical to the original so medoid sets align by label.
        std::vector<std::string> names = clustering.classes();
        std::vector<std::size_t> codes(labels.size());
        for (std::size_t i = 0; i < labels.size(); ++i) codes[i] = clustering.class_index(labels[i]);
        MedoidSet permuted;
        permuted.labels = names;
        std::vector<std::vector<VertexId>> members(names.size());
        for (std::size_t i = 0; i < codes.size(); ++i) members[codes[i]].push_back(i);
        for (const auto& group : members) permuted.vertices.push_back(medoid_of(points, group));
        const WeightedTree tree = simplify_medoid_subtree(medoid_subtree(mst, permuted), permuted);
        result.permutation_distances[r] = rf_distance(original.tree, original.medoids, tree, permuted).distance;
    });
    return result;
}

} // namespace mstlens
