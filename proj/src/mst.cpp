#include "mstlens/mst.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace mstlens {

namespace {

/// Strict total order on candidate edges: weight, then (min endpoint, max endpoint).
bool lighter(double w1, VertexId a1, VertexId b1, double w2, VertexId a2, VertexId b2) {
    if (w1 != w2) return w1 < w2;
    const auto lo1 = std::min(a1, b1), hi1 = std::max(a1, b1);
    const auto lo2 = std::min(a2, b2), hi2 = std::max(a2, b2);
    return lo1 != lo2 ? lo1 < lo2 : hi1 < hi2;
}

/// Mutable adjacency used by the simplification passes. Ordered maps keep every pass
/// deterministic.
using Adjacency = std::map<VertexId, std::map<VertexId, double>>;

Adjacency to_adjacency(const WeightedTree& tree) {
    Adjacency adj;
    for (auto v : tree.vertices()) adj[v];
    for (const auto& e : tree.edges()) {
        adj[e.u][e.v] = e.weight;
        adj[e.v][e.u] = e.weight;
    }
    return adj;
}

WeightedTree from_adjacency(const Adjacency& adj) {
    std::vector<VertexId> vertices;
    std::vector<Edge> edges;
    for (const auto& [v, nbrs] : adj) {
        vertices.push_back(v);
        for (const auto& [u, w] : nbrs)
            if (v < u) edges.push_back({v, u, w});
    }
    return WeightedTree(std::move(vertices), std::move(edges));
}

/// Replaces every degree-two vertex not in `keep` (a - v - b) with an edge a - b of weight
/// d(v, a) + d(v, b). Collapsing never changes the degree of other vertices, so a single
/// sweep reaches the fixed point.
void collapse_degree_two(Adjacency& adj, const std::unordered_set<VertexId>& keep) {
    std::vector<VertexId> candidates;
    for (const auto& [v, nbrs] : adj)
        if (nbrs.size() == 2 && !keep.contains(v)) candidates.push_back(v);
    for (auto v : candidates) {
        auto& nbrs = adj.at(v);
        auto it = nbrs.begin();
        const auto [a, wa] = *it++;
        const auto [b, wb] = *it;
        adj.at(a).erase(v);
        adj.at(b).erase(v);
        adj.at(a)[b] = wa + wb;
        adj.at(b)[a] = wa + wb;
        adj.erase(v);
    }
}

std::unordered_set<VertexId> as_set(std::span<const VertexId> ids) {
    return std::unordered_set<VertexId>(ids.begin(), ids.end());
}

void sort_unique(std::vector<VertexId>& ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
}

} // namespace

WeightedTree build_mst(const Matrix& points) {
    const auto n = static_cast<std::size_t>(points.rows());
    if (n < 2) throw InputError("an MST needs at least 2 points");
    if (!points.allFinite()) throw InputError("points contain non-finite values");
    const RowMatrix x = points;
    const auto p = static_cast<std::size_t>(x.cols());

    constexpr auto none = std::numeric_limits<VertexId>::max();
    std::vector<double> best(n, std::numeric_limits<double>::infinity());
    std::vector<VertexId> parent(n, none);
    std::vector<char> in_tree(n, 0);
    std::vector<Edge> edges;
    edges.reserve(n - 1);

    VertexId current = 0;
    in_tree[0] = 1;
    for (std::size_t step = 1; step < n; ++step) {
        const double* cu = x.data() + current * p;
        for (VertexId v = 0; v < n; ++v) {
            if (in_tree[v]) continue;
            const double* cv = x.data() + v * p;
            double sq = 0.0;
            for (std::size_t j = 0; j < p; ++j) {
                const double d = cu[j] - cv[j];
                sq += d * d;
            }
            if (sq == 0.0)
                throw DegenerateError("duplicate points: rows " + std::to_string(std::min(current, v)) + " and " +
                                      std::to_string(std::max(current, v)) + " coincide");
            const double dist = std::sqrt(sq);
            if (parent[v] == none || lighter(dist, current, v, best[v], parent[v], v)) {
                best[v] = dist;
                parent[v] = current;
            }
        }
        VertexId next = none;
        for (VertexId v = 0; v < n; ++v) {
            if (in_tree[v]) continue;
            if (next == none || lighter(best[v], parent[v], v, best[next], parent[next], next)) next = v;
        }
        in_tree[next] = 1;
        edges.push_back({parent[next], next, best[next]});
        current = next;
    }

    std::vector<VertexId> vertices(n);
    for (std::size_t i = 0; i < n; ++i) vertices[i] = i;
    return WeightedTree(std::move(vertices), std::move(edges));
}

WeightedTree build_mst(const Dataset& data) { return build_mst(data.values()); }

std::vector<VertexId> tree_path(const WeightedTree& tree, VertexId a, VertexId b) {
    if (!tree.contains(a)) throw InputError("path endpoint " + std::to_string(a) + " is not in the tree");
    if (!tree.contains(b)) throw InputError("path endpoint " + std::to_string(b) + " is not in the tree");
    if (a == b) return {a};

    std::unordered_map<VertexId, VertexId> parent;
    parent.emplace(a, a);
    std::deque<VertexId> queue{a};
    while (!queue.empty() && !parent.contains(b)) {
        const VertexId v = queue.front();
        queue.pop_front();
        for (const auto& nb : tree.neighbors(v)) {
            if (parent.emplace(nb.id, v).second) queue.push_back(nb.id);
        }
    }
    std::vector<VertexId> path{b};
    while (path.back() != a) path.push_back(parent.at(path.back()));
    std::reverse(path.begin(), path.end());
    return path;
}

VertexId medoid_of(const Matrix& points, std::span<const VertexId> members) {
    if (members.empty()) throw InputError("medoid of an empty set");
    if (members.size() == 1) return members.front();
    const std::size_t m = members.size();
    std::vector<double> sums(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const auto ri = points.row(static_cast<Eigen::Index>(members[i]));
        for (std::size_t j = i + 1; j < m; ++j) {
            const double d = (ri - points.row(static_cast<Eigen::Index>(members[j]))).norm();
            sums[i] += d;
            sums[j] += d;
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < m; ++i) {
        if (sums[i] < sums[best] || (sums[i] == sums[best] && members[i] < members[best])) best = i;
    }
    return members[best];
}

MedoidSet medoids(const Matrix& points, const Clustering& clustering) {
    if (clustering.n() != static_cast<std::size_t>(points.rows()))
        throw InputError("clustering and points have different row counts");
    MedoidSet out;
    out.labels = clustering.classes();
    std::vector<std::vector<VertexId>> members(clustering.k());
    for (std::size_t i = 0; i < clustering.n(); ++i) members[clustering.codes()[i]].push_back(i);
    for (const auto& group : members) out.vertices.push_back(medoid_of(points, group));
    return out;
}

WeightedTree minimal_subtree(const WeightedTree& tree, std::span<const VertexId> keep) {
    if (keep.empty()) throw InputError("minimal subtree of an empty vertex set");
    const auto keep_set = as_set(keep);
    for (auto v : keep_set)
        if (!tree.contains(v)) throw InputError("vertex " + std::to_string(v) + " is not in the tree");

    std::unordered_map<VertexId, std::size_t> degree;
    std::unordered_set<VertexId> removed;
    std::deque<VertexId> leaves;
    for (auto v : tree.vertices()) {
        degree[v] = tree.degree(v);
        if (degree[v] <= 1 && !keep_set.contains(v)) leaves.push_back(v);
    }
    while (!leaves.empty()) {
        const VertexId v = leaves.front();
        leaves.pop_front();
        if (removed.contains(v)) continue;
        removed.insert(v);
        for (const auto& nb : tree.neighbors(v)) {
            if (removed.contains(nb.id)) continue;
            if (--degree[nb.id] == 1 && !keep_set.contains(nb.id)) leaves.push_back(nb.id);
        }
    }

    std::vector<VertexId> vertices;
    for (auto v : tree.vertices())
        if (!removed.contains(v)) vertices.push_back(v);
    std::vector<Edge> edges;
    for (const auto& e : tree.edges())
        if (!removed.contains(e.u) && !removed.contains(e.v)) edges.push_back(e);
    return WeightedTree(std::move(vertices), std::move(edges));
}

WeightedTree medoid_subtree(const WeightedTree& tree, const MedoidSet& medoids) {
    return minimal_subtree(tree, medoids.vertices);
}

WeightedTree simplify_medoid_subtree(const WeightedTree& subtree, const MedoidSet& medoids) {
    for (auto m : medoids.vertices)
        if (!subtree.contains(m)) throw InputError("medoid " + std::to_string(m) + " is not in the subtree");
    Adjacency adj = to_adjacency(subtree);
    collapse_degree_two(adj, as_set(medoids.vertices));
    return from_adjacency(adj);
}

void validate_selection(const WeightedTree& tree, const GroupSelection& sel, bool require_path) {
    if (sel.group1.empty() || sel.group2.empty()) throw InputError("both groups must be non-empty");
    const auto g1 = as_set(sel.group1);
    for (auto v : sel.group1)
        if (!tree.contains(v)) throw InputError("group 1 vertex " + std::to_string(v) + " is not in the tree");
    for (auto v : sel.group2) {
        if (!tree.contains(v)) throw InputError("group 2 vertex " + std::to_string(v) + " is not in the tree");
        if (g1.contains(v)) throw InputError("groups overlap at vertex " + std::to_string(v));
    }
    if (!require_path) return;
    if (sel.path.empty()) throw InputError("selection has no path");
    if (!g1.contains(sel.path.front())) throw InputError("path must start in group 1");
    if (!as_set(sel.group2).contains(sel.path.back())) throw InputError("path must end in group 2");
    if (tree_path(tree, sel.path.front(), sel.path.back()) != sel.path)
        throw InputError("path is not the tree path between its endpoints");
}

GroupSelection make_selection(const WeightedTree& tree, std::vector<VertexId> group1,
                              std::vector<VertexId> group2, VertexId from, VertexId to) {
    sort_unique(group1);
    sort_unique(group2);
    GroupSelection sel{std::move(group1), std::move(group2), {}};
    validate_selection(tree, sel, false);
    sel.path = tree_path(tree, from, to);
    validate_selection(tree, sel, true);
    return sel;
}

GroupSubtree simplify_group_subtree(const WeightedTree& tree, const GroupSelection& sel) {
    validate_selection(tree, sel, false);
    std::vector<VertexId> both = sel.group1;
    both.insert(both.end(), sel.group2.begin(), sel.group2.end());
    const auto group = as_set(both);

    Adjacency adj = to_adjacency(minimal_subtree(tree, both));
    collapse_degree_two(adj, group);

    // Contract each connected run of non-group vertices into its smallest member.
    GroupSubtree out;
    std::unordered_set<VertexId> visited;
    std::vector<VertexId> order;
    for (const auto& [v, nbrs] : adj) order.push_back(v);
    for (auto start : order) {
        if (group.contains(start) || visited.contains(start) || !adj.contains(start)) continue;
        std::vector<VertexId> component;
        std::vector<VertexId> stack{start};
        visited.insert(start);
        while (!stack.empty()) {
            const VertexId v = stack.back();
            stack.pop_back();
            component.push_back(v);
            for (const auto& [u, w] : adj.at(v)) {
                if (!group.contains(u) && visited.insert(u).second) stack.push_back(u);
            }
        }
        if (component.size() < 2) continue;
        std::sort(component.begin(), component.end());
        const VertexId rep = component.front();
        const std::unordered_set<VertexId> members(component.begin(), component.end());
        std::map<VertexId, double> outside;
        for (auto v : component)
            for (const auto& [u, w] : adj.at(v))
                if (!members.contains(u)) outside.emplace(u, w);
        for (auto v : component) {
            for (const auto& [u, w] : adj.at(v))
                if (!members.contains(u)) adj.at(u).erase(v);
            adj.erase(v);
        }
        auto& rep_nbrs = adj[rep];
        for (const auto& [u, w] : outside) {
            rep_nbrs[u] = w;
            adj.at(u)[rep] = w;
        }
        out.merged.emplace(rep, std::move(component));
    }
    out.tree = from_adjacency(adj);
    return out;
}

CrossingStatistic crossing_count(const WeightedTree& tree, const GroupSelection& sel) {
    const GroupSubtree simplified = simplify_group_subtree(tree, sel);
    const auto g1 = as_set(sel.group1);
    const auto g2 = as_set(sel.group2);

    CrossingStatistic stat;
    for (const auto& e : simplified.tree.edges()) {
        if ((g1.contains(e.u) && g2.contains(e.v)) || (g2.contains(e.u) && g1.contains(e.v))) ++stat.direct_edges;
    }
    for (auto w : simplified.tree.vertices()) {
        if (g1.contains(w) || g2.contains(w)) continue;
        MediatorDetail detail{w, 0, 0, 0};
        for (const auto& nb : simplified.tree.neighbors(w)) {
            if (g1.contains(nb.id)) ++detail.to_group1;
            if (g2.contains(nb.id)) ++detail.to_group2;
        }
        if (detail.to_group1 > 0 && detail.to_group2 > 0) {
            detail.contribution = std::max(detail.to_group1, detail.to_group2);
            stat.mediator_contribution += detail.contribution;
            stat.mediators.push_back(detail);
        }
    }
    stat.total = stat.direct_edges + stat.mediator_contribution;
    return stat;
}

} // namespace mstlens
