#include "mstlens/tree.hpp"
#include "mstlens/csv.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

namespace mstlens {

WeightedTree::WeightedTree(std::vector<VertexId> vertices, std::vector<Edge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
    std::sort(vertices_.begin(), vertices_.end());
    if (std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end())
        throw InputError("tree has duplicate vertex ids");
    if (vertices_.empty()) {
        if (!edges_.empty()) throw InputError("tree with edges but no vertices");
        return;
    }
    if (edges_.size() + 1 != vertices_.size())
        throw InputError("a tree on " + std::to_string(vertices_.size()) + " vertices needs " +
                         std::to_string(vertices_.size() - 1) + " edges, got " + std::to_string(edges_.size()));

    index_.reserve(vertices_.size());
    for (std::size_t i = 0; i < vertices_.size(); ++i) index_.emplace(vertices_[i], i);
    adjacency_.assign(vertices_.size(), {});

    for (auto& e : edges_) {
        if (e.u == e.v) throw InputError("tree edge is a self-loop");
        if (!(e.weight > 0.0) || !std::isfinite(e.weight)) throw InputError("tree edge weights must be positive and finite");
        if (!contains(e.u) || !contains(e.v)) throw InputError("tree edge references an unknown vertex");
        if (e.u > e.v) std::swap(e.u, e.v);
        adjacency_[index_.at(e.u)].push_back({e.v, e.weight});
        adjacency_[index_.at(e.v)].push_back({e.u, e.weight});
    }
    std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    for (auto& list : adjacency_)
        std::sort(list.begin(), list.end(), [](const Neighbor& a, const Neighbor& b) { return a.id < b.id; });

    // |E| = |V| - 1 plus connectivity implies acyclic.
    std::vector<char> seen(vertices_.size(), 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        for (const auto& nb : adjacency_[i]) {
            const std::size_t j = index_.at(nb.id);
            if (!seen[j]) {
                seen[j] = 1;
                ++reached;
                stack.push_back(j);
            }
        }
    }
    if (reached != vertices_.size()) throw InputError("tree edges do not connect all vertices");
}

std::span<const Neighbor> WeightedTree::neighbors(VertexId v) const {
    auto it = index_.find(v);
    if (it == index_.end()) throw InputError("vertex " + std::to_string(v) + " is not in the tree");
    return adjacency_[it->second];
}

double WeightedTree::total_weight() const noexcept {
    double total = 0.0;
    for (const auto& e : edges_) total += e.weight;
    return total;
}

std::string write_edge_list(const WeightedTree& tree, const std::vector<std::string>& row_ids) {
    std::ostringstream out;
    for (const auto& e : tree.edges()) {
        if (e.u >= row_ids.size() || e.v >= row_ids.size()) throw InputError("edge vertex has no row id");
        out << csv::quote_if_needed(row_ids[e.u]) << ',' << csv::quote_if_needed(row_ids[e.v]) << ','
            << csv::format_number(e.weight) << '\n';
    }
    return out.str();
}

WeightedTree read_edge_list(std::string_view text, const std::vector<std::string>& row_ids) {
    std::unordered_map<std::string, VertexId> lookup;
    for (std::size_t i = 0; i < row_ids.size(); ++i) lookup.emplace(row_ids[i], i);

    std::vector<Edge> edges;
    std::vector<VertexId> vertices;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        auto table = csv::parse("u,v,weight\n" + line, "edge list");
        if (table.rows.size() != 1) throw InputError("edge list line " + std::to_string(line_no) + ": expected u,v,weight");
        const auto& cells = table.rows.front();
        auto resolve = [&](const std::string& id) {
            auto it = lookup.find(id);
            if (it == lookup.end()) throw InputError("edge list line " + std::to_string(line_no) + ": unknown row id '" + id + "'");
            return it->second;
        };
        auto weight = csv::parse_number(cells[2]);
        if (!weight) throw InputError("edge list line " + std::to_string(line_no) + ": bad weight '" + cells[2] + "'");
        Edge e{resolve(cells[0]), resolve(cells[1]), *weight};
        vertices.push_back(e.u);
        vertices.push_back(e.v);
        edges.push_back(e);
    }
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    return WeightedTree(std::move(vertices), std::move(edges));
}

} // namespace mstlens
