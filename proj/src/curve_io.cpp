#include "writhe_lab/curve_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace writhe_lab {

namespace {

using nlohmann::json;

Vec3 parse_vec(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() ||
        !j[2].is_number()) {
        throw IoError(std::string(what) + " must be an array of three numbers");
    }
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

CurveSystem StoredSystem::curves() const {
    std::vector<PolygonalCurve> comps;
    comps.reserve(components.size());
    for (const auto& c : components) comps.emplace_back(c.vertices);
    return CurveSystem(std::move(comps));
}

StoredSystem parse_curves(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw IoError(std::string("curve file parse error: ") + e.what(),
                      static_cast<long>(e.byte));
    }
    if (!doc.is_object() || doc.value("format", "") != "writhe-lab-curves") {
        throw IoError("not a writhe-lab-curves document");
    }
    if (doc.value("version", 0) != 1) {
        throw IoError("unsupported curve file version");
    }
    if (!doc.contains("components") || !doc["components"].is_array()) {
        throw IoError("curve file has no components array");
    }
    StoredSystem out;
    for (const auto& jc : doc["components"]) {
        StoredComponent comp;
        if (jc.contains("closed") && !jc["closed"].get<bool>()) {
            throw IoError("open components are not supported");
        }
        if (!jc.contains("vertices") || !jc["vertices"].is_array()) {
            throw IoError("component has no vertices array");
        }
        for (const auto& jv : jc["vertices"]) comp.vertices.push_back(parse_vec(jv, "vertex"));
        if (jc.contains("framing")) {
            std::vector<Vec3> framing;
            for (const auto& jv : jc["framing"]) framing.push_back(parse_vec(jv, "framing vector"));
            if (framing.size() != comp.vertices.size()) {
                throw IoError("framing length does not match vertex count");
            }
            comp.framing = std::move(framing);
        }
        if (jc.contains("flux")) comp.flux = jc["flux"].get<double>();
        out.components.push_back(std::move(comp));
    }
    return out;
}

StoredSystem read_curve_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open curve file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_curves(buf.str());
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

void append_vec_array(std::string& out, const std::vector<Vec3>& vecs,
                      const char* indent) {
    for (std::size_t i = 0; i < vecs.size(); ++i) {
        out += indent;
        out += "[";
        out += format_double(vecs[i].x);
        out += ", ";
        out += format_double(vecs[i].y);
        out += ", ";
        out += format_double(vecs[i].z);
        out += i + 1 == vecs.size() ? "]\n" : "],\n";
    }
}

}  // namespace

std::string format_curves(const StoredSystem& system) {
    // Hand-rolled writer: the format is small and the 17-digit serialization
    // of coordinates is part of the file contract.
    std::string out;
    out += "{\n  \"format\": \"writhe-lab-curves\",\n  \"version\": 1,\n  \"components\": [\n";
    for (std::size_t c = 0; c < system.components.size(); ++c) {
        const StoredComponent& comp = system.components[c];
        out += "    {\n      \"closed\": true,\n";
        if (comp.flux) {
            out += "      \"flux\": ";
            out += format_double(*comp.flux);
            out += ",\n";
        }
        out += "      \"vertices\": [\n";
        append_vec_array(out, comp.vertices, "        ");
        out += "      ]";
        if (comp.framing) {
            out += ",\n      \"framing\": [\n";
            append_vec_array(out, *comp.framing, "        ");
            out += "      ]\n";
        } else {
            out += "\n";
        }
        out += c + 1 == system.components.size() ? "    }\n" : "    },\n";
    }
    out += "  ]\n}\n";
    return out;
}

void write_curve_file(const std::string& path, const StoredSystem& system) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path);
    out << format_curves(system);
    if (!out) throw IoError("failed writing output file: " + path);
}

std::string format_helicity_report(const HelicityReport& r, int indent) {
    json j;
    j["writhe"] = r.writhe;
    j["total_torsion"] = r.total_torsion;
    j["intrinsic_twist"] = r.intrinsic_twist;
    j["twist"] = r.twist;
    j["self_linking"] = r.self_linking;
    j["flux"] = r.flux;
    j["centerline_helicity"] = r.centerline_helicity;
    j["intrinsic_twist_helicity"] = r.intrinsic_twist_helicity;
    j["helicity"] = r.helicity;
    return j.dump(indent);
}

std::string format_ledger(const ReconnectionLedger& l, int indent) {
    json j;
    j["wr_before"] = l.wr_before;
    j["wr_after"] = l.wr_after;
    j["lk_before"] = l.lk_before;
    j["tw_before_a"] = l.tw_before_a;
    j["tw_before_b"] = l.tw_before_b;
    j["tw_after"] = l.tw_after;
    j["t_before"] = l.t_before;
    j["t_after"] = l.t_after;
    j["n_before"] = l.n_before;
    j["n_after"] = l.n_after;
    j["delta_tw"] = l.delta_tw;
    j["delta_n"] = l.delta_n;
    j["delta_h"] = l.delta_h;
    j["h_before"] = l.h_before;
    j["h_after"] = l.h_after;
    return j.dump(indent);
}

std::string format_projection_report(const ProjectionReport& r, int indent) {
    json j;
    j["direction"] = {r.direction.x, r.direction.y, r.direction.z};
    j["directional_writhe"] = r.directional_writhe;
    j["degenerate"] = r.degenerate;
    json xs = json::array();
    for (const auto& c : r.crossings) {
        json jc;
        jc["edge_a"] = c.edge_a;
        jc["edge_b"] = c.edge_b;
        jc["sign"] = c.sign;
        jc["param_a"] = c.param_a;
        jc["param_b"] = c.param_b;
        jc["over"] = c.over;
        xs.push_back(jc);
    }
    j["crossings"] = xs;
    return j.dump(indent);
}

}  // namespace writhe_lab
