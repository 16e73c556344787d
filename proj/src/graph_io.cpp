#include "csh/graph_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "json_out.hpp"

namespace csh {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file \"" + path + "\"");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

double require_number(const nlohmann::json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || !j[key].is_number())
        throw std::runtime_error(where + ": missing or non-numeric field \"" + key + "\"");
    return j[key].get<double>();
}

std::string require_string(const nlohmann::json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || !j[key].is_string())
        throw std::runtime_error(where + ": missing or non-string field \"" + key + "\"");
    return j[key].get<std::string>();
}

}  // namespace

WeightedGraph load_graph(const std::string& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("graph file \"" + path + "\": " + e.what());
    }
    try {
        if (!doc.is_object() || !doc.contains("vertices") || !doc["vertices"].is_array())
            throw std::runtime_error("expected an object with a \"vertices\" array");
        if (!doc.contains("edges") || !doc["edges"].is_array())
            throw std::runtime_error("expected an object with an \"edges\" array");

        std::vector<VertexSpec> vertices;
        std::size_t i = 0;
        for (const auto& v : doc["vertices"]) {
            const std::string where = "vertices[" + std::to_string(i++) + "]";
            if (!v.is_object()) throw std::runtime_error(where + ": expected an object");
            vertices.push_back({require_string(v, "id", where), require_number(v, "mu", where)});
        }
        std::vector<EdgeSpec> edges;
        i = 0;
        for (const auto& e : doc["edges"]) {
            const std::string where = "edges[" + std::to_string(i++) + "]";
            if (!e.is_object()) throw std::runtime_error(where + ": expected an object");
            edges.push_back({require_string(e, "u", where), require_string(e, "v", where),
                             require_number(e, "w", where)});
        }
        return WeightedGraph(std::move(vertices), std::move(edges));
    } catch (const std::exception& e) {
        throw std::runtime_error("graph file \"" + path + "\": " + e.what());
    }
}

void save_graph(const WeightedGraph& g, const std::string& path) {
    std::string out;
    out += "{\n  \"vertices\": [\n";
    const auto& vs = g.vertex_specs();
    for (std::size_t i = 0; i < vs.size(); ++i) {
        out += "    {\"id\": " + detail::json_quote(vs[i].id) +
               ", \"mu\": " + detail::num17(vs[i].mu) + "}";
        out += (i + 1 < vs.size()) ? ",\n" : "\n";
    }
    out += "  ],\n  \"edges\": [\n";
    const auto& es = g.edge_specs();
    for (std::size_t i = 0; i < es.size(); ++i) {
        out += "    {\"u\": " + detail::json_quote(es[i].u) + ", \"v\": " + detail::json_quote(es[i].v) +
               ", \"w\": " + detail::num17(es[i].w) + "}";
        out += (i + 1 < es.size()) ? ",\n" : "\n";
    }
    out += "  ]\n}\n";

    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write file \"" + path + "\"");
    f << out;
}

std::string file_hash_hex(const std::string& path) {
    const std::string bytes = read_file(path);
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace csh
