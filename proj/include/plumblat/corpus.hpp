#pragma once

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "plumblat/graph.hpp"
#include "plumblat/types.hpp"

namespace plumblat {

inline Graph make_graph(const std::vector<Int>& eulers,
                        const std::vector<std::pair<int, int>>& edges) {
    Graph g;
    for (size_t i = 0; i < eulers.size(); ++i)
        g.vertices.push_back({"v" + std::to_string(i), eulers[i], 0});
    for (auto [a, b] : edges) g.edges.push_back({a, b});
    g.rebuild_adjacency();
    auto problems = validate_graph(g);
    if (!problems.empty()) throw Error("invalid built-in graph: " + problems.front());
    return g;
}

inline Graph chain_graph(int n, Int euler = -2) {
    std::vector<Int> e(n, euler);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
    return make_graph(e, edges);
}

inline Graph graph_a1() { return chain_graph(1); }
inline Graph graph_a2() { return chain_graph(2); }
inline Graph graph_a4() { return chain_graph(4); }
inline Graph graph_d4() { return make_graph({-2, -2, -2, -2}, {{0, 1}, {0, 2}, {0, 3}}); }
inline Graph graph_e6() {
    return make_graph({-2, -2, -2, -2, -2, -2}, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {2, 5}});
}
inline Graph graph_e7() {
    return make_graph({-2, -2, -2, -2, -2, -2, -2},
                      {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {2, 6}});
}
inline Graph graph_e8() {
    return make_graph({-2, -2, -2, -2, -2, -2, -2, -2},
                      {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {2, 7}});
}
inline Graph graph_minus3() { return make_graph({-3}, {}); }
inline Graph graph_star237() {
    return make_graph({-1, -2, -3, -7}, {{0, 1}, {0, 2}, {0, 3}});
}

inline std::vector<std::pair<std::string, Graph>> corpus_graphs() {
    return {{"a1", graph_a1()},         {"a2", graph_a2()}, {"a4", graph_a4()},
            {"d4", graph_d4()},         {"e6", graph_e6()}, {"e7", graph_e7()},
            {"e8", graph_e8()},         {"minus3", graph_minus3()},
            {"star237", graph_star237()}};
}

// random negative-definite tree: eulers at most -(degree+1) keep the form definite
inline Graph random_tree(unsigned long long seed, int max_vertices = 7) {
    std::mt19937_64 rng(seed);
    int n = 1 + static_cast<int>(rng() % static_cast<unsigned long long>(max_vertices));
    std::vector<std::pair<int, int>> edges;
    std::vector<int> degree(n, 0);
    for (int v = 1; v < n; ++v) {
        int parent = static_cast<int>(rng() % static_cast<unsigned long long>(v));
        edges.push_back({parent, v});
        ++degree[parent];
        ++degree[v];
    }
    std::vector<Int> eulers(n);
    for (int v = 0; v < n; ++v)
        eulers[v] = -(degree[v] + 1 + static_cast<Int>(rng() % 3));
    return make_graph(eulers, edges);
}

}  // namespace plumblat
