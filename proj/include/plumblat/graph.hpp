#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "plumblat/types.hpp"

namespace plumblat {

struct Vertex {
    std::string id;
    Int euler = 0;
    Int genus = 0;
};

// decorated plumbing graph; vertex order = file order and fixes all matrix indexing
struct Graph {
    std::vector<Vertex> vertices;
    std::vector<std::pair<int, int>> edges;
    std::vector<std::vector<int>> adj;

    int n() const { return static_cast<int>(vertices.size()); }

    int index_of(const std::string& id) const {
        for (int v = 0; v < n(); ++v)
            if (vertices[v].id == id) return v;
        throw Error("unknown vertex id '" + id + "'");
    }

    bool has_id(const std::string& id) const {
        for (const auto& v : vertices)
            if (v.id == id) return true;
        return false;
    }

    void rebuild_adjacency() {
        adj.assign(vertices.size(), {});
        for (auto [a, b] : edges) {
            adj[a].push_back(b);
            adj[b].push_back(a);
        }
    }

    bool connected() const {
        if (vertices.empty()) return false;
        std::vector<char> seen(vertices.size(), 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int count = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int w : adj[u])
                if (!seen[w]) {
                    seen[w] = 1;
                    ++count;
                    stack.push_back(w);
                }
        }
        return count == n();
    }
};

// structural checks that do not need the intersection form; returns all problems found
inline std::vector<std::string> validate_graph(const Graph& g) {
    std::vector<std::string> errs;
    if (g.vertices.empty()) errs.push_back("graph has no vertices");
    std::set<std::string> ids;
    for (int v = 0; v < g.n(); ++v) {
        const auto& vx = g.vertices[v];
        if (vx.id.empty()) errs.push_back("vertex " + std::to_string(v) + ": empty id");
        if (!ids.insert(vx.id).second)
            errs.push_back("duplicate vertex id '" + vx.id + "'");
        if (vx.genus != 0)
            errs.push_back("vertex '" + vx.id + "': genus " + std::to_string(vx.genus) +
                           " unsupported (only genus 0)");
        if (vx.euler >= 0)
            errs.push_back("vertex '" + vx.id + "': euler number " + std::to_string(vx.euler) +
                           " must be negative");
    }
    std::set<std::pair<int, int>> es;
    for (auto [a, b] : g.edges) {
        if (a == b) {
            errs.push_back("self-loop at vertex '" + g.vertices[a].id + "'");
            continue;
        }
        auto key = std::minmax(a, b);
        if (!es.insert(key).second)
            errs.push_back("duplicate edge " + g.vertices[a].id + "-" + g.vertices[b].id);
    }
    if (!g.vertices.empty() && !g.connected()) errs.push_back("graph is not connected");
    if (static_cast<int>(es.size()) != g.n() - 1 && g.connected())
        errs.push_back("graph has a cycle (expected a tree)");
    return errs;
}

// parse "plumbing/1" JSON; throws Error with the offending location on malformed input
inline Graph parse_graph(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("graph JSON parse error: ") + e.what());
    }
    if (!j.is_object()) throw Error("graph JSON: top level must be an object");
    if (!j.contains("format") || j["format"] != "plumbing/1")
        throw Error("graph JSON: missing or unsupported 'format' (want \"plumbing/1\")");
    if (!j.contains("vertices") || !j["vertices"].is_array())
        throw Error("graph JSON: 'vertices' must be an array");

    Graph g;
    int vi = 0;
    for (const auto& jv : j["vertices"]) {
        std::string where = "vertex " + std::to_string(vi);
        if (!jv.is_object()) throw Error("graph JSON: " + where + " must be an object");
        if (!jv.contains("id") || !jv["id"].is_string())
            throw Error("graph JSON: " + where + ": missing string 'id'");
        if (!jv.contains("euler") || !jv["euler"].is_number_integer())
            throw Error("graph JSON: " + where + ": missing integer 'euler'");
        Vertex v;
        v.id = jv["id"].get<std::string>();
        v.euler = jv["euler"].get<Int>();
        if (jv.contains("genus")) {
            if (!jv["genus"].is_number_integer())
                throw Error("graph JSON: " + where + ": 'genus' must be an integer");
            v.genus = jv["genus"].get<Int>();
        }
        g.vertices.push_back(v);
        ++vi;
    }
    if (j.contains("edges")) {
        if (!j["edges"].is_array()) throw Error("graph JSON: 'edges' must be an array");
        int ei = 0;
        for (const auto& je : j["edges"]) {
            std::string where = "edge " + std::to_string(ei);
            if (!je.is_array() || je.size() != 2 || !je[0].is_string() || !je[1].is_string())
                throw Error("graph JSON: " + where + " must be a pair of vertex ids");
            std::string a = je[0].get<std::string>(), b = je[1].get<std::string>();
            if (!g.has_id(a)) throw Error("graph JSON: " + where + ": unknown vertex '" + a + "'");
            if (!g.has_id(b)) throw Error("graph JSON: " + where + ": unknown vertex '" + b + "'");
            g.edges.emplace_back(g.index_of(a), g.index_of(b));
            ++ei;
        }
    }
    g.rebuild_adjacency();
    auto errs = validate_graph(g);
    if (!errs.empty()) {
        std::string msg = "invalid plumbing graph:";
        for (const auto& e : errs) msg += "\n  " + e;
        throw Error(msg);
    }
    return g;
}

}  // namespace plumblat
