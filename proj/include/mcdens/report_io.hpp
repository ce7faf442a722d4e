#pragma once

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mcdens/geometry.hpp"
#include "mcdens/instances.hpp"

namespace mcdens {

/// Reals in reports carry 17 significant digits (round-trip exact).
inline std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// RFC-4180 CSV field quoting (only when needed).
inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

inline std::string csv_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += csv_field(fields[i]);
    }
    out += "\r\n";
    return out;
}

/// Minimal deterministic JSON emitter: preserves insertion order and writes
/// reals via format_real. (nlohmann::json is used for parsing configs; its
/// writer picks shortest-round-trip reals, not the fixed 17-digit form.)
class JsonWriter {
public:
    JsonWriter& begin_object() { return token("{", true); }
    JsonWriter& end_object() { return close("}"); }
    JsonWriter& begin_array() { return token("[", true); }
    JsonWriter& end_array() { return close("]"); }

    JsonWriter& key(const std::string& k) {
        comma();
        out_ << '"' << escape(k) << "\":";
        fresh_ = true;
        return *this;
    }

    JsonWriter& value(double v) { return raw(format_real(v)); }
    JsonWriter& value(int v) { return raw(std::to_string(v)); }
    JsonWriter& value(std::int64_t v) { return raw(std::to_string(v)); }
    JsonWriter& value(std::uint64_t v) { return raw(std::to_string(v)); }
    JsonWriter& value(bool v) { return raw(v ? "true" : "false"); }
    JsonWriter& value(const std::string& v) { return raw('"' + escape(v) + '"'); }
    JsonWriter& value(const char* v) { return value(std::string(v)); }
    JsonWriter& null() { return raw("null"); }

    std::string str() const { return out_.str(); }

private:
    static std::string escape(const std::string& s) {
        std::string out;
        for (char c : s) {
            switch (c) {
                case '"': out += "\\\""; break;
                case '\\': out += "\\\\"; break;
                case '\n': out += "\\n"; break;
                default: out += c;
            }
        }
        return out;
    }

    void comma() {
        if (!fresh_) out_ << ',';
        fresh_ = false;
    }

    JsonWriter& raw(const std::string& s) {
        comma();
        out_ << s;
        return *this;
    }

    JsonWriter& token(const char* t, bool open) {
        comma();
        out_ << t;
        fresh_ = open;
        return *this;
    }

    JsonWriter& close(const char* t) {
        out_ << t;
        fresh_ = false;
        return *this;
    }

    std::ostringstream out_;
    bool fresh_ = true;
};

// ---------------------------------------------------------------------------
// Instance serialization.
// ---------------------------------------------------------------------------

inline std::string instance_to_json(const FcHardInstance& inst) {
    JsonWriter w;
    w.begin_object();
    w.key("family_id").value(inst.family_id);
    w.key("d").value(1);
    w.key("C").value(inst.C);
    w.key("m").value(inst.m);
    w.key("I").begin_array();
    for (int j : inst.cells) w.value(j);
    w.end_array();
    w.key("eps").begin_array();
    for (int s : inst.signs) w.value(s);
    w.end_array();
    w.key("truth").value(inst.truth.value());
    w.key("truth_ci").value(inst.truth_ci);
    w.end_object();
    return w.str();
}

inline std::string instance_to_json(const ProblemInstance& inst, const Packing& packing,
                                    int d, double alpha, int center_index, int sign) {
    JsonWriter w;
    w.begin_object();
    w.key("family_id").value(inst.family_id);
    w.key("d").value(d);
    w.key("alpha").value(alpha);
    w.key("packing_centers").begin_array();
    for (const Point& c : packing.centers) {
        w.begin_array();
        for (double v : c) w.value(v);
        w.end_array();
    }
    w.end_array();
    w.key("packing_radius").value(packing.radius);
    w.key("center_index").value(center_index);
    w.key("sign").value(sign);
    w.key("truth").value(inst.truth.value());
    w.key("truth_ci").value(inst.truth_ci);
    w.end_object();
    return w.str();
}

inline FcHardInstance fc_instance_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (j.at("family_id").get<std::string>() != "fc-hard")
        throw std::invalid_argument("fc_instance_from_json: wrong family");
    std::vector<int> cells = j.at("I").get<std::vector<int>>();
    std::vector<int> signs = j.at("eps").get<std::vector<int>>();
    return make_fc_instance(j.at("m").get<int>() / 2, j.at("C").get<double>(),
                            std::move(cells), std::move(signs));
}

inline ProblemInstance fad_instance_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    Packing packing;
    packing.radius = j.at("packing_radius").get<double>();
    for (const auto& c : j.at("packing_centers"))
        packing.centers.push_back(c.get<Point>());
    return make_fad_instance(j.at("d").get<int>(), j.at("alpha").get<double>(), packing,
                             j.at("center_index").get<int>(), j.at("sign").get<int>());
}

}  // namespace mcdens
