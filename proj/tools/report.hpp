#pragma once

#include <complex>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "padicsum/arith.hpp"

namespace padicsum::cli {

using Json = nlohmann::ordered_json;

enum class Format { Json, Csv, Plain };

Format parse_format(const std::string& text);

// One run's output. Every command fills all three renderings so the format
// switch never changes what was computed.
struct Report {
    std::string command;
    Json config = Json::object();
    Json result = Json::object();
    std::vector<std::string> csv_header;
    std::vector<std::vector<std::string>> csv_rows;
    std::vector<std::string> plain;
    bool check_failed = false;

    void emit(std::ostream& out, Format format) const;
};

std::string fmt(double v);  // shortest round-trip decimal
Json complex_json(std::complex<double> z);
Json rational_json(const Rational& q);

}  // namespace padicsum::cli
