#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "plumblat/graph.hpp"
#include "plumblat/lattice.hpp"
#include "plumblat/oracle.hpp"
#include "plumblat/types.hpp"

namespace plumblat {

using ojson = nlohmann::ordered_json;

inline std::string load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline std::string fnv1a64(const std::string& data) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string("fnv1a64:") + buf;
}

inline ojson graph_to_json(const Graph& g) {
    ojson j;
    j["format"] = "plumbing/1";
    j["vertices"] = ojson::array();
    for (const auto& v : g.vertices) {
        ojson jv;
        jv["id"] = v.id;
        jv["euler"] = v.euler;
        jv["genus"] = v.genus;
        j["vertices"].push_back(jv);
    }
    j["edges"] = ojson::array();
    for (const auto& e : g.edges)
        j["edges"].push_back({g.vertices[e.first].id, g.vertices[e.second].id});
    return j;
}

// "v0:2,v1:-1" -> per-vertex values; missing vertices are zero
inline std::map<std::string, std::string> parse_coeff_list(const std::string& text) {
    std::map<std::string, std::string> out;
    if (text.empty()) return out;
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ',')) {
        auto pos = item.find(':');
        if (pos == std::string::npos || pos == 0 || pos + 1 == item.size())
            throw Error("bad coefficient entry '" + item + "' (expected id:value)");
        std::string id = item.substr(0, pos);
        if (out.count(id)) throw Error("duplicate coefficient for vertex '" + id + "'");
        out[id] = item.substr(pos + 1);
    }
    return out;
}

inline IVec parse_int_coeffs(const Graph& g, const std::string& text) {
    auto m = parse_coeff_list(text);
    IVec out(g.n(), 0);
    for (const auto& [id, val] : m) {
        int v = g.index_of(id);
        try {
            size_t used = 0;
            out[v] = std::stoll(val, &used);
            if (used != val.size()) throw std::invalid_argument(val);
        } catch (const std::exception&) {
            throw Error("bad integer coefficient '" + val + "' for vertex '" + id + "'");
        }
    }
    return out;
}

inline QVec parse_rat_coeffs(const Graph& g, const std::string& text) {
    auto m = parse_coeff_list(text);
    QVec out(g.n(), Rat(0));
    for (const auto& [id, val] : m) {
        out[g.index_of(id)] = rat_from_string(val);
    }
    return out;
}

inline std::vector<int> parse_vertex_list(const Graph& g, const std::string& text) {
    std::vector<int> out;
    if (text.empty()) return out;
    std::istringstream is(text);
    std::string id;
    while (std::getline(is, id, ',')) out.push_back(g.index_of(id));
    return out;
}

inline std::vector<std::vector<int>> parse_tower_json(const ojson& j, const Graph& g) {
    if (!j.is_object() || !j.contains("format") || j["format"] != "tower/1")
        throw Error("tower file must declare format tower/1");
    if (!j.contains("layers") || !j["layers"].is_array())
        throw Error("tower file needs a layers array");
    std::vector<std::vector<int>> layers;
    for (const auto& jl : j["layers"]) {
        std::vector<int> layer;
        for (const auto& jid : jl) layer.push_back(g.index_of(jid.get<std::string>()));
        layers.push_back(layer);
    }
    return layers;
}

inline std::map<std::string, Int> parse_h1table_json(const ojson& j, const Graph& g) {
    if (!j.is_object() || !j.contains("format") || j["format"] != "h1table/1")
        throw Error("table file must declare format h1table/1");
    if (!j.contains("entries") || !j["entries"].is_array())
        throw Error("table file needs an entries array");
    std::map<std::string, Int> out;
    auto coeffs = [&](const ojson& jm) {
        IVec x(g.n(), 0);
        for (auto it = jm.begin(); it != jm.end(); ++it)
            x[g.index_of(it.key())] = it.value().get<Int>();
        return x;
    };
    for (const auto& je : j["entries"]) {
        if (!je.contains("cycle") || !je.contains("twist_estar") || !je.contains("h1"))
            throw Error("table entry needs cycle, twist_estar, h1");
        out[TableOracle::key(coeffs(je["cycle"]), coeffs(je["twist_estar"]))] =
            je["h1"].get<Int>();
    }
    return out;
}

inline ojson qvec_to_json(const Graph& g, const QVec& x) {
    ojson j = ojson::object();
    for (int v = 0; v < g.n(); ++v) j[g.vertices[v].id] = rat_to_string(x[v]);
    return j;
}

inline ojson ivec_to_json(const Graph& g, const IVec& x) {
    ojson j = ojson::object();
    for (int v = 0; v < g.n(); ++v) j[g.vertices[v].id] = x[v];
    return j;
}

}  // namespace plumblat
