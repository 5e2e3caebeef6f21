#pragma once

#include "mstlens/types.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mstlens {

struct Edge {
    VertexId u = 0;
    VertexId v = 0;
    double weight = 0.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
    VertexId id = 0;
    double weight = 0.0;
};

/// An undirected tree with positive edge weights over a sparse set of vertex ids.
///
/// Construction validates that the edge set is connected, acyclic and spans exactly the
/// given vertices. Edges are stored normalized (u < v) and sorted, so two trees with the
/// same structure compare equal regardless of input order.
class WeightedTree {
public:
    WeightedTree() = default;
    WeightedTree(std::vector<VertexId> vertices, std::vector<Edge> edges);

    const std::vector<VertexId>& vertices() const noexcept { return vertices_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    std::size_t size() const noexcept { return vertices_.size(); }
    bool empty() const noexcept { return vertices_.empty(); }

    bool contains(VertexId v) const noexcept { return index_.contains(v); }
    std::span<const Neighbor> neighbors(VertexId v) const;
    std::size_t degree(VertexId v) const { return neighbors(v).size(); }
    double total_weight() const noexcept;

    friend bool operator==(const WeightedTree& a, const WeightedTree& b) {
        return a.vertices_ == b.vertices_ && a.edges_ == b.edges_;
    }

private:
    std::vector<VertexId> vertices_;
    std::vector<Edge> edges_;
    std::unordered_map<VertexId, std::size_t> index_;
    std::vector<std::vector<Neighbor>> adjacency_;
};

/// One `u,v,weight` line per edge, vertices written as row ids.
std::string write_edge_list(const WeightedTree& tree, const std::vector<std::string>& row_ids);

/// Inverse of write_edge_list. Vertices are resolved through `row_ids`. Blank lines are
/// skipped; an empty list yields an empty tree.
WeightedTree read_edge_list(std::string_view text, const std::vector<std::string>& row_ids);

} // namespace mstlens
