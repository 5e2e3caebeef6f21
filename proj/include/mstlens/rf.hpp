#pragma once

#include "mstlens/core.hpp"
#include "mstlens/mst.hpp"
#include "mstlens/tree.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

namespace mstlens {

/// Split of the medoid labels induced by deleting one tree edge. Stored canonically as the
/// membership mask of the side that does NOT contain label 0, so {A, B} == {B, A}.
class Bipartition {
public:
    /// `side[i]` marks labels on one side; the other side is the complement.
    explicit Bipartition(std::vector<bool> side);

    const std::vector<bool>& mask() const noexcept { return mask_; }
    std::vector<std::size_t> side_with_first() const;
    std::vector<std::size_t> side_without_first() const;

    friend auto operator<=>(const Bipartition&, const Bipartition&) = default;

private:
    std::vector<bool> mask_;
};

/// Set (not multiset) of label splits over every edge of `tree`.
std::set<Bipartition> medoid_bipartitions(const WeightedTree& tree, const MedoidSet& medoids);

struct RFResult {
    double distance = 0.0;
    std::size_t shared = 0;
    std::size_t sym_diff = 0;
};

/// |P1 sym-diff P2| / (2 |P1 intersect P2|). Medoid sets must cover the same labels in the same
/// order. Throws DegenerateError when the trees share no split.
RFResult rf_distance(const WeightedTree& t1, const MedoidSet& m1, const WeightedTree& t2, const MedoidSet& m2);

/// Simplified medoid subtree of the MST of `points` under `clustering`.
struct MedoidTree {
    MedoidSet medoids;
    WeightedTree tree;
};
MedoidTree simplified_medoid_tree(const Matrix& points, const Clustering& clustering);
MedoidTree simplified_medoid_tree(const WeightedTree& mst, const Matrix& points, const Clustering& clustering);

struct StabilityResult {
    double noise_sd = 0.0;
    std::vector<double> noise_distances;
    std::vector<double> permutation_distances;
};

/// 0.5 * median nonzero pairwise distance / sqrt(p).
double default_noise_sd(const Matrix& points);

/// Noise arm: add N(0, noise_sd^2) to every entry, rebuild MST, medoids and simplified
/// medoid subtree. Permutation arm: shuffle labels over the original MST. Both record the
/// RF distance to the original simplified medoid subtree; `reps` replicates each.
StabilityResult stability_experiment(const Matrix& points, const Clustering& clustering,
                                     std::optional<double> noise_sd, std::size_t reps, std::uint64_t seed);

} // namespace mstlens
