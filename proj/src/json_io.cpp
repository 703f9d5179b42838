#include "fairflow/json_io.hpp"

#include <fstream>

#include "fairflow/errors.hpp"
#include "fairflow/util.hpp"

namespace fairflow {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "fairflow_v1";

json rat_to_json(const Rat& r) {
    if (rat_fits_double(r)) return to_double(r);
    return rat_to_string(r);
}

Rat rat_from_json(const json& j, const std::string& what) {
    if (j.is_number()) return rat_from_double(j.get<double>());
    if (j.is_string()) {
        try {
            return rat_from_string(j.get<std::string>());
        } catch (const std::exception& e) {
            throw ParseError(what + ": " + e.what());
        }
    }
    throw ParseError(what + ": expected a number or a 'p/q' string");
}

const json& need(const json& j, const char* key, const std::string& ctx) {
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(ctx + ": missing field '" + key + "'");
    return *it;
}

json latency_to_json(const LatencyFn& l) {
    json p;
    switch (l.kind()) {
        case LatencyKind::Constant:
            p = {{"value", rat_to_json(l.params()[0])}};
            break;
        case LatencyKind::Affine:
            p = {{"a", rat_to_json(l.params()[0])}, {"b", rat_to_json(l.params()[1])}};
            break;
        case LatencyKind::Polynomial: {
            json coeffs = json::array();
            for (const auto& c : l.params()) coeffs.push_back(rat_to_json(c));
            p = {{"coeffs", coeffs}};
            break;
        }
        case LatencyKind::MM1:
            p = {{"capacity", rat_to_json(l.params()[0])}};
            break;
    }
    return {{"kind", to_string(l.kind())}, {"params", p}};
}

LatencyFn latency_from_json(const json& j, const std::string& ctx) {
    const std::string kind = need(j, "kind", ctx).get<std::string>();
    const json& p = need(j, "params", ctx);
    try {
        if (kind == "constant") return LatencyFn::constant(rat_from_json(need(p, "value", ctx), ctx));
        if (kind == "affine")
            return LatencyFn::affine(rat_from_json(need(p, "a", ctx), ctx),
                                     rat_from_json(need(p, "b", ctx), ctx));
        if (kind == "polynomial") {
            const json& cj = need(p, "coeffs", ctx);
            if (!cj.is_array()) throw ParseError(ctx + ": coeffs must be an array");
            std::vector<Rat> coeffs;
            for (const auto& c : cj) coeffs.push_back(rat_from_json(c, ctx));
            return LatencyFn::polynomial(std::move(coeffs));
        }
        if (kind == "mm1") return LatencyFn::mm1(rat_from_json(need(p, "capacity", ctx), ctx));
    } catch (const DomainError& e) {
        throw ParseError(ctx + ": " + e.what());
    }
    throw ParseError(ctx + ": unknown latency kind '" + kind +
                     "' (expected constant|affine|polynomial|mm1)");
}

void check_version(const json& j, const std::string& ctx) {
    const std::string v = need(j, "version", ctx).get<std::string>();
    if (v != kVersion)
        throw ParseError(ctx + ": unsupported version '" + v + "' (expected " + kVersion + ")");
}

json parse_file(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw ParseError("cannot open '" + file + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError("'" + file + "': " + e.what());
    }
}

void write_file(const json& j, const std::string& file) {
    std::ofstream out(file);
    if (!out) throw ParseError("cannot write '" + file + "'");
    out << j.dump(2) << "\n";
}

}  // namespace

json instance_to_json(const Instance& inst) {
    json edges = json::array();
    for (const Edge& e : inst.edges())
        edges.push_back({{"from", e.from}, {"to", e.to}, {"latency", latency_to_json(e.latency)}});
    json comms = json::array();
    for (const Commodity& c : inst.commodities())
        comms.push_back(
            {{"source", c.source}, {"sink", c.sink}, {"demand", rat_to_json(c.demand)}});
    return {{"version", kVersion},
            {"nodes", inst.num_nodes()},
            {"edges", edges},
            {"commodities", comms}};
}

Instance instance_from_json(const json& j) {
    const std::string ctx = "instance";
    check_version(j, ctx);
    const int nodes = need(j, "nodes", ctx).get<int>();
    const json& ej = need(j, "edges", ctx);
    if (!ej.is_array()) throw ParseError(ctx + ": edges must be an array");
    std::vector<Edge> edges;
    int idx = 0;
    for (const auto& e : ej) {
        const std::string ectx = "edge " + std::to_string(idx++);
        edges.push_back(Edge{need(e, "from", ectx).get<int>(), need(e, "to", ectx).get<int>(),
                             latency_from_json(need(e, "latency", ectx), ectx)});
    }
    const json& cj = need(j, "commodities", ctx);
    if (!cj.is_array()) throw ParseError(ctx + ": commodities must be an array");
    std::vector<Commodity> comms;
    idx = 0;
    for (const auto& c : cj) {
        const std::string cctx = "commodity " + std::to_string(idx++);
        comms.push_back(Commodity{need(c, "source", cctx).get<int>(),
                                  need(c, "sink", cctx).get<int>(),
                                  rat_from_json(need(c, "demand", cctx), cctx)});
    }
    try {
        return Instance(nodes, std::move(edges), std::move(comms));
    } catch (const Error& e) {
        throw ParseError(std::string("instance: ") + e.what());
    }
}

json edge_flow_to_json(const Instance& inst, const EdgeFlow& f) {
    json loads = json::array();
    for (int k = 0; k < inst.num_commodities(); ++k)
        for (int e = 0; e < inst.num_edges(); ++e)
            if (f.load[k][e] != 0.0)
                loads.push_back({{"commodity", k}, {"edge", e}, {"value", f.load[k][e]}});
    return {{"version", kVersion}, {"type", "edge_flow"}, {"loads", loads}};
}

EdgeFlow edge_flow_from_json(const Instance& inst, const json& j) {
    const std::string ctx = "edge_flow";
    check_version(j, ctx);
    if (need(j, "type", ctx).get<std::string>() != "edge_flow")
        throw ParseError(ctx + ": wrong type field");
    EdgeFlow f = EdgeFlow::zero(inst);
    for (const auto& l : need(j, "loads", ctx)) {
        const int k = need(l, "commodity", ctx).get<int>();
        const int e = need(l, "edge", ctx).get<int>();
        if (k < 0 || k >= inst.num_commodities() || e < 0 || e >= inst.num_edges())
            throw ParseError(ctx + ": load entry out of range");
        f.load[k][e] = need(l, "value", ctx).get<double>();
    }
    return f;
}

json path_flow_to_json(const Instance& inst, const PathFlow& f) {
    json paths = json::array();
    for (int k = 0; k < inst.num_commodities(); ++k)
        for (const auto& [p, v] : f.flow[k])
            paths.push_back({{"commodity", k}, {"edges", p}, {"flow", v}});
    return {{"version", kVersion}, {"type", "path_flow"}, {"paths", paths}};
}

PathFlow path_flow_from_json(const Instance& inst, const json& j) {
    const std::string ctx = "path_flow";
    check_version(j, ctx);
    if (need(j, "type", ctx).get<std::string>() != "path_flow")
        throw ParseError(ctx + ": wrong type field");
    PathFlow f = PathFlow::zero(inst);
    for (const auto& l : need(j, "paths", ctx)) {
        const int k = need(l, "commodity", ctx).get<int>();
        if (k < 0 || k >= inst.num_commodities())
            throw ParseError(ctx + ": path entry commodity out of range");
        Path p = need(l, "edges", ctx).get<Path>();
        f.flow[k][p] += need(l, "flow", ctx).get<double>();
    }
    return f;
}

Instance load_instance(const std::string& file) { return instance_from_json(parse_file(file)); }

void save_instance(const Instance& inst, const std::string& file) {
    write_file(instance_to_json(inst), file);
}

EdgeFlow load_edge_flow(const Instance& inst, const std::string& file) {
    return edge_flow_from_json(inst, parse_file(file));
}

void save_edge_flow(const Instance& inst, const EdgeFlow& f, const std::string& file) {
    write_file(edge_flow_to_json(inst, f), file);
}

PathFlow load_path_flow(const Instance& inst, const std::string& file) {
    return path_flow_from_json(inst, parse_file(file));
}

void save_path_flow(const Instance& inst, const PathFlow& f, const std::string& file) {
    write_file(path_flow_to_json(inst, f), file);
}

std::string instance_digest(const Instance& inst) {
    return fnv1a_hex(instance_to_json(inst).dump());
}

}  // namespace fairflow
