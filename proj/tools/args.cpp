#include "args.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "padicsum/error.hpp"

namespace padicsum::cli {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

template <class T>
T parse_number(const std::string& text, const char* what) {
    T value{};
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, value);
    if (res.ec != std::errc() || res.ptr != end) throw UsageError(std::string("bad ") + what + " '" + text + "'");
    return value;
}

template <class T>
std::vector<T> parse_ranges(const std::string& text, const char* what, bool primes_only) {
    std::vector<T> out;
    for (const auto& item : split(text, ',')) {
        const auto dots = item.find("..");
        if (dots == std::string::npos) {
            out.push_back(parse_number<T>(item, what));
            continue;
        }
        const T lo = parse_number<T>(item.substr(0, dots), what);
        const T hi = parse_number<T>(item.substr(dots + 2), what);
        if (lo > hi) throw UsageError(std::string("empty ") + what + " range '" + item + "'");
        if (hi - lo > 1'000'000) throw UsageError(std::string(what) + " range too long: '" + item + "'");
        for (T v = lo; v <= hi; ++v)
            if (!primes_only || is_prime(v)) out.push_back(v);
    }
    if (out.empty()) throw UsageError(std::string("no ") + what + " values in '" + text + "'");
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

std::vector<std::uint64_t> parse_primes(const std::string& text) {
    auto ps = parse_ranges<std::uint64_t>(text, "prime", true);
    for (auto p : ps)
        if (!is_prime(p)) throw UsageError(std::to_string(p) + " is not prime");
    return ps;
}

std::vector<unsigned> parse_levels(const std::string& text) {
    auto ms = parse_ranges<unsigned>(text, "level", false);
    if (ms.front() == 0) throw UsageError("levels must be >= 1");
    return ms;
}

std::vector<std::int64_t> parse_point(const std::string& text) {
    std::vector<std::int64_t> y;
    for (const auto& item : split(text, ',')) y.push_back(parse_number<std::int64_t>(item, "coordinate"));
    return y;
}

std::vector<Integer> parse_integers(const std::string& text) {
    std::vector<Integer> out;
    for (const auto& item : split(text, ',')) {
        const bool neg = item[0] == '-' || item[0] == '+';
        if (item.size() == std::size_t(neg) ||
            !std::all_of(item.begin() + neg, item.end(), [](char c) { return c >= '0' && c <= '9'; }))
            throw UsageError("bad integer '" + item + "'");
        out.emplace_back(item);
    }
    return out;
}

CharLabel parse_char_label(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 2) throw UsageError("character must be 'order:index', got '" + text + "'");
    CharLabel label{parse_number<unsigned>(parts[0], "character order"), parse_number<unsigned>(parts[1], "character index")};
    if (label.order == 0 || label.index >= label.order) throw UsageError("bad character label '" + text + "'");
    return label;
}

std::vector<Candidate> parse_candidates(const std::string& text) {
    std::vector<Candidate> out;
    for (const auto& item : split(text, ',')) {
        const auto parts = split(item, ':');
        if (parts.size() != 2) throw UsageError("candidate must be 'lambda:beta', got '" + item + "'");
        out.push_back({to_double(parse_rational(parts[0])), parse_number<unsigned>(parts[1], "beta")});
    }
    if (out.empty()) throw UsageError("no candidates given");
    return out;
}

Polynomial read_polynomial(const std::string& text, std::size_t& nvars) {
    if (nvars != 0) return parse_polynomial(text, nvars);
    constexpr std::size_t kWide = 64;
    const Polynomial wide = parse_polynomial(text, kWide);
    std::size_t used = 1;
    for (std::size_t i = 0; i < kWide; ++i)
        if (wide.degree_in(i) > 0) used = i + 1;
    nvars = used;
    return parse_polynomial(text, nvars);
}

std::vector<std::string> expand_config(const std::vector<std::string>& argv,
                                       const std::set<std::string>& subcommands) {
    std::string path;
    for (std::size_t i = 1; i < argv.size(); ++i) {
        if (argv[i] == "--config" && i + 1 < argv.size()) path = argv[i + 1];
        else if (argv[i].rfind("--config=", 0) == 0) path = argv[i].substr(9);
    }
    if (path.empty()) return argv;

    std::ifstream in(path);
    if (!in) throw DataError("<config>", "cannot open '" + path + "'");
    nlohmann::ordered_json doc;
    try {
        doc = nlohmann::ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw DataError("<config>", e.what());
    }
    if (!doc.is_object()) throw DataError("<config>", "expected a JSON object");

    std::vector<std::string> out = argv;
    auto sub = std::find_if(out.begin() + 1, out.end(), [&](const std::string& a) { return subcommands.count(a); });
    if (sub == out.end()) {
        if (!doc.contains("command") || !doc["command"].is_string())
            throw DataError("command", "no subcommand on the command line or in the config");
        sub = out.insert(out.begin() + 1, doc["command"].get<std::string>());
    }

    std::vector<std::string> extra;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        std::string key = it.key();
        if (key == "command" || key == "config") continue;
        if (key == "polynomial") key = "poly";
        std::replace(key.begin(), key.end(), '_', '-');
        const std::string flag = "--" + key;
        const auto& v = *it;
        if (v.is_boolean()) {
            if (v.get<bool>()) extra.push_back(flag);
            continue;
        }
        std::string text;
        if (v.is_string()) {
            text = v.get<std::string>();
        } else if (v.is_number()) {
            text = v.dump();
        } else if (v.is_array()) {
            for (const auto& e : v) {
                if (!e.is_string() && !e.is_number()) throw DataError(it.key(), "array entries must be scalars");
                if (!text.empty()) text += ',';
                text += e.is_string() ? e.get<std::string>() : e.dump();
            }
        } else {
            throw DataError(it.key(), "unsupported value type");
        }
        extra.push_back(flag + "=" + text);
    }
    out.insert(sub + 1, extra.begin(), extra.end());
    return out;
}

}  // namespace padicsum::cli
