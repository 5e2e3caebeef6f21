#pragma once

// Independent reference implementations used only by the tests. They are deliberately
// naive: exhaustive, brute-force or closed-form where the library is clever.

#include "mstlens/mst.hpp"
#include "mstlens/null_theory.hpp"
#include "mstlens/random.hpp"
#include "mstlens/rf.hpp"
#include "mstlens/tree.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

namespace oracle {

using mstlens::Matrix;
using mstlens::VertexId;

inline double dist(const Matrix& x, Eigen::Index i, Eigen::Index j) {
    double sq = 0.0;
    for (Eigen::Index k = 0; k < x.cols(); ++k) {
        const double d = x(i, k) - x(j, k);
        sq += d * d;
    }
    return std::sqrt(sq);
}

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    }
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[a] = b;
        return true;
    }
};

/// Minimum total weight over every spanning tree of the complete graph (n <= 8).
inline double exhaustive_mst_weight(const Matrix& x) {
    const auto n = static_cast<std::size_t>(x.rows());
    std::vector<std::pair<std::size_t, std::size_t>> all;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) all.emplace_back(i, j);
    const std::size_t m = all.size(), k = n - 1;
    std::vector<std::size_t> pick(k);
    std::iota(pick.begin(), pick.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    while (true) {
        UnionFind uf(n);
        bool tree = true;
        double w = 0.0;
        for (auto e : pick) {
            if (!uf.unite(all[e].first, all[e].second)) {
                tree = false;
                break;
            }
            w += dist(x, static_cast<Eigen::Index>(all[e].first), static_cast<Eigen::Index>(all[e].second));
        }
        if (tree) best = std::min(best, w);
        // next k-combination of [0, m)
        std::size_t i = k;
        while (i > 0 && pick[i - 1] == m - k + i - 1) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
    return best;
}

/// Vertices reachable from `start` without using edge (cut_u, cut_v).
inline std::set<VertexId> side_without_edge(const mstlens::WeightedTree& tree, VertexId start, VertexId cut_u,
                                            VertexId cut_v) {
    std::set<VertexId> seen{start};
    std::vector<VertexId> stack{start};
    while (!stack.empty()) {
        const auto v = stack.back();
        stack.pop_back();
        for (const auto& e : tree.edges()) {
            if ((e.u == cut_u && e.v == cut_v) || (e.u == cut_v && e.v == cut_u)) continue;
            VertexId w;
            if (e.u == v) w = e.v;
            else if (e.v == v) w = e.u;
            else continue;
            if (seen.insert(w).second) stack.push_back(w);
        }
    }
    return seen;
}

/// Label splits by deleting each edge and flood-filling; canonical side excludes label 0.
inline std::set<std::vector<bool>> bipartitions(const mstlens::WeightedTree& tree, const mstlens::MedoidSet& m) {
    std::set<std::vector<bool>> out;
    for (const auto& e : tree.edges()) {
        const auto side = side_without_edge(tree, e.u, e.u, e.v);
        std::vector<bool> mask(m.k());
        for (std::size_t c = 0; c < m.k(); ++c) mask[c] = side.contains(m.vertices[c]);
        if (mask[0]) mask.flip();
        out.insert(mask);
    }
    return out;
}

struct Rf {
    std::size_t shared = 0, sym_diff = 0;
    double distance = 0.0;
};

inline Rf rf(const mstlens::WeightedTree& t1, const mstlens::MedoidSet& m1, const mstlens::WeightedTree& t2,
             const mstlens::MedoidSet& m2) {
    const auto p1 = bipartitions(t1, m1);
    const auto p2 = bipartitions(t2, m2);
    Rf out;
    for (const auto& s : p1) (p2.contains(s) ? out.shared : out.sym_diff)++;
    for (const auto& s : p2)
        if (!p1.contains(s)) out.sym_diff++;
    out.distance = static_cast<double>(out.sym_diff) / (2.0 * static_cast<double>(out.shared));
    return out;
}

/// Path by repeated BFS parent pointers over the raw edge list.
inline std::vector<VertexId> bfs_path(const mstlens::WeightedTree& tree, VertexId a, VertexId b) {
    std::map<VertexId, VertexId> parent{{a, a}};
    std::vector<VertexId> frontier{a};
    while (!frontier.empty() && !parent.contains(b)) {
        std::vector<VertexId> next;
        for (auto v : frontier)
            for (const auto& e : tree.edges()) {
                VertexId w;
                if (e.u == v) w = e.v;
                else if (e.v == v) w = e.u;
                else continue;
                if (parent.emplace(w, v).second) next.push_back(w);
            }
        frontier = std::move(next);
    }
    std::vector<VertexId> path{b};
    while (path.back() != a) path.push_back(parent.at(path.back()));
    std::reverse(path.begin(), path.end());
    return path;
}

inline VertexId brute_medoid(const Matrix& x, const std::vector<VertexId>& members) {
    VertexId best = members.front();
    double best_sum = std::numeric_limits<double>::infinity();
    for (auto i : members) {
        double s = 0.0;
        for (auto j : members) s += dist(x, static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (s < best_sum || (s == best_sum && i < best)) {
            best_sum = s;
            best = i;
        }
    }
    return best;
}

/// Random tree over vertex ids 0..n-1: vertex i attaches to a uniformly chosen earlier vertex.
inline mstlens::WeightedTree random_tree(std::size_t n, mstlens::Rng& rng) {
    std::vector<VertexId> vertices(n);
    std::iota(vertices.begin(), vertices.end(), 0);
    std::vector<VertexId> order = vertices;
    std::shuffle(order.begin(), order.end(), rng);
    std::uniform_real_distribution<double> weight(0.1, 2.0);
    std::vector<mstlens::Edge> edges;
    for (std::size_t i = 1; i < n; ++i) {
        std::uniform_int_distribution<std::size_t> pick(0, i - 1);
        edges.push_back({order[i], order[pick(rng)], weight(rng)});
    }
    return mstlens::WeightedTree(vertices, edges);
}

/// Minimal objective over unimodal densities on [-1, 1] with mode c and mass `a` left of
/// 0, via Khinchine: every such density is a mixture of uniforms U[s, t] with s <= c <= t.
/// Endpoints are restricted to a `bins`-cell grid plus {c, 0, +-eps}; the mass constraint
/// and total mass leave at most two active components, so the optimum lies on the lower
/// convex hull of (left mass, objective) over all admissible uniforms.
/// Returns nullopt when no mixture meets the mass constraint (empty family).
inline std::optional<double> grid_min_integral(const mstlens::NullTheoryProblem& p, std::size_t bins = 200) {
    const double a = p.n1 / (p.n1 + p.n2);
    std::vector<double> knots;
    for (std::size_t i = 0; i <= bins; ++i) knots.push_back(-1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(bins));
    knots.insert(knots.end(), {p.c, 0.0, -p.eps, p.eps});
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

    auto overlap = [](double s, double t, double lo, double hi) { return std::max(0.0, std::min(t, hi) - std::max(s, lo)); };
    std::vector<std::pair<double, double>> pts;   // (left mass, objective)
    for (double s : knots) {
        if (s > p.c) break;
        for (double t : knots) {
            if (t < p.c || t <= s) continue;
            const double w = t - s;
            pts.emplace_back(overlap(s, t, -1.0, 0.0) / w, overlap(s, t, -p.eps, p.eps) / w);
        }
    }
    std::sort(pts.begin(), pts.end());
    std::vector<std::pair<double, double>> hull;
    auto cross = [](auto o, auto u, auto v) {
        return (u.first - o.first) * (v.second - o.second) - (u.second - o.second) * (v.first - o.first);
    };
    for (const auto& q : pts) {
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), q) <= 0) hull.pop_back();
        hull.push_back(q);
    }
    const double tol = 1e-12;
    if (a < hull.front().first - tol || a > hull.back().first + tol) return std::nullopt;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : pts)
        if (std::abs(q.first - a) <= tol) best = std::min(best, q.second);
    for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
        const auto [x0, y0] = hull[i];
        const auto [x1, y1] = hull[i + 1];
        if (a >= x0 - tol && a <= x1 + tol && x1 > x0) best = std::min(best, y0 + (y1 - y0) * (a - x0) / (x1 - x0));
    }
    return best;
}

/// One-sided Mann-Whitney U test of "x tends to be smaller than y", normal approximation
/// with tie correction and continuity correction. Returns the p-value.
inline double mann_whitney_less(const std::vector<double>& x, const std::vector<double>& y) {
    const double n1 = static_cast<double>(x.size()), n2 = static_cast<double>(y.size());
    std::vector<std::pair<double, int>> all;
    for (double v : x) all.emplace_back(v, 0);
    for (double v : y) all.emplace_back(v, 1);
    std::sort(all.begin(), all.end());
    std::vector<double> rank(all.size());
    double tie_term = 0.0;
    for (std::size_t i = 0; i < all.size();) {
        std::size_t j = i;
        while (j < all.size() && all[j].first == all[i].first) ++j;
        const double r = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k) rank[k] = r;
        const double t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        i = j;
    }
    double r1 = 0.0;
    for (std::size_t i = 0; i < all.size(); ++i)
        if (all[i].second == 0) r1 += rank[i];
    const double u1 = r1 - n1 * (n1 + 1) / 2.0;
    const double n = n1 + n2;
    const double mean = n1 * n2 / 2.0;
    const double var = n1 * n2 / 12.0 * ((n + 1) - tie_term / (n * (n - 1)));
    const double z = (u1 - mean + 0.5) / std::sqrt(var);
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

/// Orthogonal Procrustes disparity after centering and scaling both to unit Frobenius norm
/// (same convention as scipy.spatial.procrustes).
inline double procrustes_disparity(const Matrix& reference, const Matrix& candidate) {
    Matrix a = reference.rowwise() - reference.colwise().mean();
    Matrix b = candidate.rowwise() - candidate.colwise().mean();
    a /= a.norm();
    b /= b.norm();
    Eigen::JacobiSVD<Matrix> svd(a.transpose() * b, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double s = svd.singularValues().sum();
    return 1.0 - s * s;
}

} // namespace oracle
