#pragma once

// Machine-readable run reports: one JSON document per run, or CSV with one row per check.
// Floating-point values are written with 17 significant digits.

#include "json.hpp"

#include <string>
#include <vector>

namespace flagflow {

using Json = nlohmann::ordered_json;

struct Check {
    std::string name;
    Json params = Json::object();
    double max_deviation = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string notes;
    Json metrics = Json::object();  ///< extra measured quantities, emitted as flat keys
};

struct RunReport {
    std::string command;
    Json config = Json::object();
    std::vector<Check> checks;
    Json details = Json::object();

    std::size_t failed() const;
};

/// Compact JSON with %.17g floats; non-finite numbers become null.
std::string dump_json(const Json& value);

std::string to_json(const RunReport& report);

/// Header: check,params,max_deviation,tolerance,pass,notes,metrics
std::string to_csv(const RunReport& report);

}  // namespace flagflow
