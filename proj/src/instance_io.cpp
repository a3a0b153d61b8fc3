#include "yamabe/instance_io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace yamabe {

namespace {

nlohmann::json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("parse error in " + path + ": " + e.what());
    }
    return doc;
}

std::vector<double> real_array(const nlohmann::json& doc, const char* key,
                               const std::string& path) {
    if (!doc.contains(key) || !doc[key].is_array())
        throw std::runtime_error(path + ": missing or non-array field \"" + key + "\"");
    std::vector<double> out;
    out.reserve(doc[key].size());
    for (const auto& v : doc[key]) {
        if (!v.is_number()) throw std::runtime_error(path + ": non-numeric entry in \"" + key + "\"");
        out.push_back(v.get<double>());
    }
    return out;
}

double real_field(const nlohmann::json& doc, const char* key, const std::string& path) {
    if (!doc.contains(key) || !doc[key].is_number())
        throw std::runtime_error(path + ": missing or non-numeric field \"" + key + "\"");
    return doc[key].get<double>();
}

}  // namespace

ProblemInstance read_instance(const std::string& path) {
    nlohmann::json doc = parse_file(path);
    if (!doc.is_object()) throw std::runtime_error(path + ": top-level value must be an object");

    double p = real_field(doc, "p", path);
    double alpha = real_field(doc, "alpha", path);
    std::vector<double> mu = real_array(doc, "mu", path);
    std::vector<double> h = real_array(doc, "h", path);
    std::vector<double> f = real_array(doc, "f", path);

    if (!doc.contains("edges") || !doc["edges"].is_array())
        throw std::runtime_error(path + ": missing or non-array field \"edges\"");
    std::vector<Edge> edges;
    for (const auto& row : doc["edges"]) {
        if (!row.is_array() || row.size() != 3 || !row[0].is_number_integer() ||
            !row[1].is_number_integer() || !row[2].is_number())
            throw std::runtime_error(path + ": each edge must be [i, j, omega]");
        edges.push_back({row[0].get<int>(), row[1].get<int>(), row[2].get<double>()});
    }

    const int n = static_cast<int>(mu.size());
    WeightedGraph graph(n, std::move(mu), std::move(edges));
    return ProblemInstance(std::move(graph), std::move(h), std::move(f), p, alpha);
}

void write_instance(const ProblemInstance& inst, const std::string& path) {
    nlohmann::ordered_json doc;
    doc["p"] = inst.p;
    doc["alpha"] = inst.alpha;
    doc["mu"] = inst.graph.vertex_measure();
    doc["h"] = inst.h;
    doc["f"] = inst.f;
    auto edges = nlohmann::ordered_json::array();
    for (const auto& e : inst.graph.edges())  // already sorted by (i, j)
        edges.push_back({e.i, e.j, e.omega});
    doc["edges"] = std::move(edges);

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << doc.dump(2) << '\n';
}

Solution read_solution(const std::string& path) {
    nlohmann::json doc = parse_file(path);
    if (!doc.is_object()) throw std::runtime_error(path + ": top-level value must be an object");
    Solution sol;
    sol.phi = real_array(doc, "phi", path);
    sol.lambda = real_field(doc, "lambda", path);
    return sol;
}

void write_solution(const Solution& sol, const std::string& path) {
    nlohmann::ordered_json doc;
    doc["phi"] = sol.phi;
    doc["lambda"] = sol.lambda;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << doc.dump(2) << '\n';
}

}  // namespace yamabe
