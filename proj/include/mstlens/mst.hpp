#pragma once

#include "mstlens/core.hpp"
#include "mstlens/tree.hpp"
#include "mstlens/types.hpp"

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace mstlens {

/// Euclidean minimum spanning tree over the rows of `points` (dense Prim, O(n^2 p)).
///
/// Equal distances are ordered by (min endpoint, max endpoint), which makes the tree unique.
/// Throws InputError for fewer than two rows and DegenerateError for duplicate rows.
WeightedTree build_mst(const Matrix& points);
WeightedTree build_mst(const Dataset& data);

/// Unique simple path from `a` to `b`, both inclusive.
std::vector<VertexId> tree_path(const WeightedTree& tree, VertexId a, VertexId b);

/// Medoid of each class, indexed by class code.
struct MedoidSet {
    std::vector<std::string> labels;
    std::vector<VertexId> vertices;

    std::size_t k() const noexcept { return vertices.size(); }
};

/// Member minimizing the summed Euclidean distance to the other members; ties go to the
/// lowest row index.
VertexId medoid_of(const Matrix& points, std::span<const VertexId> members);
MedoidSet medoids(const Matrix& points, const Clustering& clustering);

/// Smallest subtree containing every vertex in `keep` (leaf pruning).
WeightedTree minimal_subtree(const WeightedTree& tree, std::span<const VertexId> keep);

WeightedTree medoid_subtree(const WeightedTree& tree, const MedoidSet& medoids);

/// Collapses every degree-two non-medoid vertex into a single edge carrying the summed
/// weight, until none remain.
WeightedTree simplify_medoid_subtree(const WeightedTree& subtree, const MedoidSet& medoids);

struct GroupSelection {
    std::vector<VertexId> group1;   // sorted, unique
    std::vector<VertexId> group2;   // sorted, unique
    std::vector<VertexId> path;     // tree path from a group1 vertex to a group2 vertex
};

/// Builds a selection, sorting both groups and attaching the tree path from `from` to `to`.
/// Throws InputError when the groups are empty, overlap, or the endpoints are misplaced.
GroupSelection make_selection(const WeightedTree& tree, std::vector<VertexId> group1,
                              std::vector<VertexId> group2, VertexId from, VertexId to);

/// Checks the GroupSelection invariants against `tree`. `require_path` skips the path
/// checks when false (the crossing statistic does not use it).
void validate_selection(const WeightedTree& tree, const GroupSelection& sel, bool require_path = true);

struct GroupSubtree {
    WeightedTree tree;
    /// Representative id -> all original non-group vertices merged into it (only merges of
    /// two or more vertices are listed).
    std::map<VertexId, std::vector<VertexId>> merged;
};

/// Minimal subtree over both groups, with degree-two non-group vertices collapsed and then
/// every connected run of non-group vertices contracted into one mediator vertex, named by
/// its smallest member id.
GroupSubtree simplify_group_subtree(const WeightedTree& tree, const GroupSelection& sel);

struct MediatorDetail {
    VertexId vertex = 0;
    std::size_t to_group1 = 0;
    std::size_t to_group2 = 0;
    std::size_t contribution = 0;
};

struct CrossingStatistic {
    std::size_t total = 0;
    std::size_t direct_edges = 0;
    std::size_t mediator_contribution = 0;
    std::vector<MediatorDetail> mediators;
};

/// Direct group1-group2 edges of the simplified group subtree, plus, for each non-group
/// vertex adjacent to both groups, max(edges to group1, edges to group2).
CrossingStatistic crossing_count(const WeightedTree& tree, const GroupSelection& sel);

} // namespace mstlens
