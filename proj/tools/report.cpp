#include "report.hpp"

#include <charconv>
#include <cmath>

#include "padicsum/error.hpp"

namespace padicsum::cli {

Format parse_format(const std::string& text) {
    if (text == "json") return Format::Json;
    if (text == "csv") return Format::Csv;
    if (text == "plain") return Format::Plain;
    throw UsageError("unknown format '" + text + "' (expected json, csv or plain)");
}

std::string fmt(double v) {
    if (v == 0.0) return "0";  // folds -0
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

Json complex_json(std::complex<double> z) {
    Json j;
    j["re"] = z.real() == 0.0 ? 0.0 : z.real();
    j["im"] = z.imag() == 0.0 ? 0.0 : z.imag();
    j["abs"] = std::abs(z);
    return j;
}

Json rational_json(const Rational& q) {
    return to_string(q);
}

namespace {

Json schema() {
    Json s;
    s["exact"] = "integers are JSON integers; rationals are \"num/den\" strings";
    s["float_format"] = "IEEE-754 double, shortest round-trip decimal";
    Json tol;
    tol["exp_sum"] = 1e-9;
    tol["subsums"] = 1e-9;
    tol["reconstruction"] = 1e-9;
    tol["gauss_magnitude"] = 1e-9;
    tol["weil_bound"] = 1e-9;
    tol["lct_fit"] = "least-squares estimate; compare with residual";
    s["float_tolerance"] = std::move(tol);
    return s;
}

std::string config_line(const Json& config) {
    std::string line;
    for (auto it = config.begin(); it != config.end(); ++it) {
        if (!line.empty()) line += ' ';
        line += it.key() + "=" + (it->is_string() ? it->get<std::string>() : it->dump());
    }
    return line;
}

}  // namespace

void Report::emit(std::ostream& out, Format format) const {
    switch (format) {
        case Format::Json: {
            Json doc;
            doc["command"] = command;
            doc["config"] = config;
            doc["schema"] = schema();
            doc["result"] = result;
            doc["status"] = check_failed ? "check_failed" : "ok";
            out << doc.dump(2) << '\n';
            break;
        }
        case Format::Csv: {
            out << "# padicsum " << command << ' ' << config_line(config) << '\n';
            for (std::size_t i = 0; i < csv_header.size(); ++i) out << (i ? "," : "") << csv_header[i];
            out << '\n';
            for (const auto& row : csv_rows) {
                for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
                out << '\n';
            }
            break;
        }
        case Format::Plain: {
            out << "padicsum " << command << '\n' << "config: " << config_line(config) << '\n';
            for (const auto& line : plain) out << line << '\n';
            out << "status: " << (check_failed ? "check failed" : "ok") << '\n';
            break;
        }
    }
}

}  // namespace padicsum::cli
