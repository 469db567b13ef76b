#include "flagflow/report.hpp"

#include <cmath>
#include <cstdio>

namespace flagflow {

std::size_t RunReport::failed() const {
    std::size_t n = 0;
    for (const auto& c : checks) n += c.pass ? 0 : 1;
    return n;
}

namespace {

std::string format_double(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void dump(const Json& value, std::string& out) {
    switch (value.type()) {
        case Json::value_t::object: {
            out += '{';
            bool first = true;
            for (const auto& [key, item] : value.items()) {
                if (!first) out += ',';
                first = false;
                out += Json(key).dump();
                out += ':';
                dump(item, out);
            }
            out += '}';
            break;
        }
        case Json::value_t::array: {
            out += '[';
            bool first = true;
            for (const auto& item : value) {
                if (!first) out += ',';
                first = false;
                dump(item, out);
            }
            out += ']';
            break;
        }
        case Json::value_t::number_float:
            out += format_double(value.get<double>());
            break;
        default:
            out += value.dump();
    }
}

Json check_to_json(const Check& c) {
    Json j;
    j["check"] = c.name;
    j["params"] = c.params;
    j["max_deviation"] = c.max_deviation;
    j["tolerance"] = c.tolerance;
    j["pass"] = c.pass;
    j["notes"] = c.notes;
    for (const auto& [key, item] : c.metrics.items()) j[key] = item;
    return j;
}

std::string csv_field(const std::string& raw) {
    if (raw.find_first_of(",\"\n") == std::string::npos) return raw;
    std::string out = "\"";
    for (char ch : raw) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

}  // namespace

std::string dump_json(const Json& value) {
    std::string out;
    dump(value, out);
    return out;
}

std::string to_json(const RunReport& report) {
    Json doc;
    doc["command"] = report.command;
    doc["config"] = report.config;
    doc["pass"] = report.failed() == 0;
    doc["failed"] = report.failed();
    Json checks = Json::array();
    for (const auto& c : report.checks) checks.push_back(check_to_json(c));
    doc["checks"] = std::move(checks);
    doc["details"] = report.details;
    return dump_json(doc) + "\n";
}

std::string to_csv(const RunReport& report) {
    std::string out = "check,params,max_deviation,tolerance,pass,notes,metrics\n";
    for (const auto& c : report.checks) {
        out += csv_field(c.name) + ',' + csv_field(dump_json(c.params)) + ',' + format_double(c.max_deviation) + ',' +
               format_double(c.tolerance) + ',' + (c.pass ? "true" : "false") + ',' + csv_field(c.notes) + ',' +
               csv_field(dump_json(c.metrics)) + '\n';
    }
    return out;
}

}  // namespace flagflow
