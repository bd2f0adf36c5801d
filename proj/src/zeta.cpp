#include "padicsum/zeta.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>

#include <json.hpp>

#include "padicsum/error.hpp"

namespace padicsum {

namespace {

using Json = nlohmann::ordered_json;

std::string label_text(CharLabel l) {
    return "(" + std::to_string(l.order) + "," + std::to_string(l.index) + ")";
}

Rational inverse_power(std::uint64_t p, std::uint64_t e) {
    return Rational(Integer(1), boost::multiprecision::pow(Integer(p), static_cast<unsigned>(e)));
}

// --- JSON helpers -------------------------------------------------------

const Json& field(const Json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) throw DataError(path, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) throw DataError(path + "." + key, "missing");
    return *it;
}

unsigned read_unsigned(const Json& v, const std::string& path) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0 || v.get<std::int64_t>() > 1'000'000'000) {
        throw DataError(path, "expected a non-negative integer");
    }
    return v.get<unsigned>();
}

Integer read_integer(const Json& v, const std::string& path) {
    if (v.is_number_integer()) return Integer(v.get<std::int64_t>());
    if (v.is_string()) {
        const auto& s = v.get_ref<const std::string&>();
        const bool ok = !s.empty() && std::all_of(s.begin() + (s[0] == '-' ? 1 : 0), s.end(),
                                                  [](char c) { return c >= '0' && c <= '9'; }) &&
                        s != "-";
        if (!ok) throw DataError(path, "malformed integer '" + s + "'");
        return Integer(s);
    }
    throw DataError(path, "expected an integer");
}

Json write_integer(const Integer& v) {
    if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max()) {
        return Json(v.convert_to<std::int64_t>());
    }
    return Json(v.str());
}

// --- lattice enumeration ------------------------------------------------

// sum over (a_i) >= 0 with sum N_i (a_i + 1) == k (or <= k) of p^{-sum nu_i (a_i + 1)}
Rational lattice_sum(const std::vector<const Component*>& comps, std::uint64_t p, unsigned k, bool cumulative) {
    Rational total = 0;
    std::function<void(std::size_t, unsigned, std::uint64_t)> rec = [&](std::size_t i, unsigned used,
                                                                         std::uint64_t weight) {
        if (i == comps.size()) {
            if (used == k || (cumulative && used <= k)) total += inverse_power(p, weight);
            return;
        }
        const Component& c = *comps[i];
        for (unsigned mult = 1; used + c.N * mult <= k; ++mult) rec(i + 1, used + c.N * mult, weight + c.nu * mult);
    };
    rec(0, 0, 0);
    return total;
}

using Poly = std::vector<Rational>;

Poly multiply(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

}  // namespace

// --- ResolutionData -------------------------------------------------------

void ResolutionData::validate() const {
    if (n == 0) throw DataError("n", "must be positive");
    if (components.empty()) throw DataError("components", "at least one component is required");
    std::set<unsigned> ids;
    for (std::size_t i = 0; i < components.size(); ++i) {
        const auto& c = components[i];
        const std::string path = "components[" + std::to_string(i) + "]";
        if (c.N == 0) throw DataError(path + ".N", "must be >= 1");
        if (c.nu == 0) throw DataError(path + ".nu", "must be >= 1");
        if (!ids.insert(c.id).second) throw DataError(path + ".id", "duplicate id " + std::to_string(c.id));
    }
    std::set<std::vector<unsigned>> seen;
    for (std::size_t s = 0; s < strata.size(); ++s) {
        const auto& st = strata[s];
        const std::string path = "strata[" + std::to_string(s) + "]";
        for (std::size_t k = 0; k < st.ids.size(); ++k) {
            if (!ids.count(st.ids[k])) {
                throw DataError(path + ".I[" + std::to_string(k) + "]", "unknown component id " + std::to_string(st.ids[k]));
            }
            if (k > 0 && st.ids[k] <= st.ids[k - 1]) throw DataError(path + ".I", "ids must be strictly ascending");
        }
        if (!seen.insert(st.ids).second) throw DataError(path + ".I", "duplicate stratum");
        std::set<CharLabel> labels;
        for (std::size_t k = 0; k < st.counts.size(); ++k) {
            const auto& c = st.counts[k];
            const std::string cpath = path + ".counts[" + std::to_string(k) + "]";
            const CharLabel l = c.label;
            const bool trivial = l.order == 1 && l.index == 0;
            const bool primitive = l.order > 1 && l.index > 0 && l.index < l.order && std::gcd(l.index, l.order) == 1;
            if (!trivial && !primitive) {
                throw DataError(cpath, "character label " + label_text(l) +
                                           " must be (1,0) or have an index coprime to its order");
            }
            if (!labels.insert(l).second) throw DataError(cpath, "duplicate character label " + label_text(l));
        }
    }
}

void ResolutionData::validate_at(std::uint64_t p) const {
    validate();
    for (std::size_t s = 0; s < strata.size(); ++s) {
        const auto& st = strata[s];
        for (std::size_t k = 0; k < st.counts.size(); ++k) {
            const auto& c = st.counts[k];
            const std::string cpath = "strata[" + std::to_string(s) + "].counts[" + std::to_string(k) + "]";
            const Integer v = c.at(p);
            if (c.label.is_trivial() && v < 0) {
                throw DataError(cpath, "trivial-character count is negative (" + v.str() + ") at p = " + std::to_string(p));
            }
            if (v == 0) continue;
            for (unsigned id : st.ids) {
                if (component(id).N % c.label.order != 0) {
                    throw DataError(cpath, "nonzero count for order " + std::to_string(c.label.order) +
                                               " but N of component " + std::to_string(id) + " is not divisible by it");
                }
            }
            if (st.ids.size() > n) {
                throw DataError("strata[" + std::to_string(s) + "].I", "more than n components meet in a nonzero stratum");
            }
        }
    }
}

const Component& ResolutionData::component(unsigned id) const {
    for (const auto& c : components) {
        if (c.id == id) return c;
    }
    throw DataError("components", "unknown component id " + std::to_string(id));
}

Integer ResolutionData::count(const Stratum& s, CharLabel label, std::uint64_t p) const {
    for (const auto& c : s.counts) {
        if (c.label == label) return c.at(p);
    }
    return 0;
}

bool ResolutionData::supplies(CharLabel label) const {
    for (const auto& s : strata) {
        for (const auto& c : s.counts) {
            if (c.label == label) return true;
        }
    }
    return false;
}

ResolutionData read_resolution(std::istream& in) {
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw DataError("<document>", std::string("invalid JSON: ") + e.what());
    }
    ResolutionData data;
    data.n = read_unsigned(field(doc, "n", "$"), "n");
    const Json& comps = field(doc, "components", "$");
    if (!comps.is_array()) throw DataError("components", "expected an array");
    for (std::size_t i = 0; i < comps.size(); ++i) {
        const std::string path = "components[" + std::to_string(i) + "]";
        const Json& c = comps[i];
        Component comp;
        comp.id = read_unsigned(field(c, "id", path), path + ".id");
        comp.N = read_unsigned(field(c, "N", path), path + ".N");
        comp.nu = read_unsigned(field(c, "nu", path), path + ".nu");
        if (c.contains("meets_origin")) {
            if (!c["meets_origin"].is_boolean()) throw DataError(path + ".meets_origin", "expected a boolean");
            comp.meets_origin = c["meets_origin"].get<bool>();
        }
        data.components.push_back(comp);
    }
    const Json& strata = field(doc, "strata", "$");
    if (!strata.is_array()) throw DataError("strata", "expected an array");
    for (std::size_t s = 0; s < strata.size(); ++s) {
        const std::string path = "strata[" + std::to_string(s) + "]";
        const Json& st = strata[s];
        Stratum stratum;
        const Json& ids = field(st, "I", path);
        if (!ids.is_array()) throw DataError(path + ".I", "expected an array");
        for (std::size_t k = 0; k < ids.size(); ++k) {
            stratum.ids.push_back(read_unsigned(ids[k], path + ".I[" + std::to_string(k) + "]"));
        }
        const Json& counts = field(st, "counts", path);
        if (!counts.is_array()) throw DataError(path + ".counts", "expected an array");
        for (std::size_t k = 0; k < counts.size(); ++k) {
            const std::string cpath = path + ".counts[" + std::to_string(k) + "]";
            const Json& c = counts[k];
            StratumCount sc;
            sc.label.order = read_unsigned(field(c, "order", cpath), cpath + ".order");
            sc.label.index = read_unsigned(field(c, "index", cpath), cpath + ".index");
            const bool has_value = c.contains("value");
            const bool has_affine = c.contains("affine");
            if (has_value == has_affine) throw DataError(cpath, "exactly one of 'value' or 'affine' is required");
            if (has_value) {
                sc.value = read_integer(c["value"], cpath + ".value");
            } else {
                const Json& aff = c["affine"];
                sc.a = read_integer(field(aff, "a", cpath + ".affine"), cpath + ".affine.a");
                sc.b = read_integer(field(aff, "b", cpath + ".affine"), cpath + ".affine.b");
            }
            stratum.counts.push_back(std::move(sc));
        }
        data.strata.push_back(std::move(stratum));
    }
    const Json& label = field(doc, "phi_label", "$");
    if (!label.is_string()) throw DataError("phi_label", "expected a string");
    data.phi_label = label.get<std::string>();
    const Json& good = field(doc, "good_reduction_regime", "$");
    if (!good.is_boolean()) throw DataError("good_reduction_regime", "expected a boolean");
    data.good_reduction_regime = good.get<bool>();
    data.validate();
    return data;
}

ResolutionData load_resolution(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open resolution data file '" + path + "'");
    return read_resolution(in);
}

void write_resolution(std::ostream& out, const ResolutionData& data) {
    Json doc;
    doc["n"] = data.n;
    Json comps = Json::array();
    for (const auto& c : data.components) {
        Json j;
        j["id"] = c.id;
        j["N"] = c.N;
        j["nu"] = c.nu;
        if (c.meets_origin) j["meets_origin"] = *c.meets_origin;
        comps.push_back(std::move(j));
    }
    doc["components"] = std::move(comps);
    Json strata = Json::array();
    for (const auto& s : data.strata) {
        Json j;
        j["I"] = s.ids;
        Json counts = Json::array();
        for (const auto& c : s.counts) {
            Json cj;
            cj["order"] = c.label.order;
            cj["index"] = c.label.index;
            if (c.value) {
                cj["value"] = write_integer(*c.value);
            } else {
                cj["affine"] = Json{{"a", write_integer(c.a)}, {"b", write_integer(c.b)}};
            }
            counts.push_back(std::move(cj));
        }
        j["counts"] = std::move(counts);
        strata.push_back(std::move(j));
    }
    doc["strata"] = std::move(strata);
    doc["phi_label"] = data.phi_label;
    doc["good_reduction_regime"] = data.good_reduction_regime;
    out << doc.dump(2) << '\n';
}

// --- rational functions ---------------------------------------------------

Rational RationalFunctionT::evaluate(const Rational& t) const {
    Rational num = 0;
    Rational power = 1;
    for (const auto& c : numerator) {
        num += c * power;
        power *= t;
    }
    Rational den = 1;
    for (const auto& f : denominator) den *= 1 - f.a * rational_pow(t, f.N);
    if (den == 0) throw UsageError("rational function evaluated at a pole");
    return num / den;
}

unsigned RationalFunctionT::numerator_degree() const {
    for (std::size_t k = numerator.size(); k-- > 0;) {
        if (numerator[k] != 0) return static_cast<unsigned>(k);
    }
    return 0;
}

unsigned RationalFunctionT::denominator_degree() const {
    unsigned d = 0;
    for (const auto& f : denominator) d += f.N;
    return d;
}

RationalFunctionT denef_zeta(const ResolutionData& data, std::uint64_t p, CharLabel chi) {
    data.validate_at(p);
    if (!is_prime(p)) throw UsageError("p = " + std::to_string(p) + " is not prime");
    if ((p - 1) % chi.order != 0) {
        throw UsageError("no character of order " + std::to_string(chi.order) + " mod " + std::to_string(p));
    }
    using Key = std::pair<unsigned, unsigned>;  // (N, nu)
    struct Contribution {
        Rational scale;
        unsigned shift;
        std::map<Key, unsigned> factors;
    };
    std::vector<Contribution> parts;
    std::map<Key, unsigned> common;
    for (const auto& s : data.strata) {
        const Integer c = data.count(s, chi, p);
        if (c == 0) continue;
        Contribution part{Rational(c) * rational_pow(Rational(p - 1), static_cast<unsigned>(s.ids.size())) *
                              inverse_power(p, data.n),
                          0,
                          {}};
        for (unsigned id : s.ids) {
            const Component& comp = data.component(id);
            part.scale *= inverse_power(p, comp.nu);
            part.shift += comp.N;
            ++part.factors[{comp.N, comp.nu}];
        }
        for (const auto& [key, mult] : part.factors) common[key] = std::max(common[key], mult);
        parts.push_back(std::move(part));
    }

    RationalFunctionT rf;
    for (const auto& [key, mult] : common) {
        for (unsigned r = 0; r < mult; ++r) rf.denominator.push_back({key.first, key.second, inverse_power(p, key.second)});
    }
    for (const auto& part : parts) {
        Poly term(part.shift + 1, Rational(0));
        term[part.shift] = part.scale;
        for (const auto& [key, mult] : common) {
            const auto it = part.factors.find(key);
            const unsigned missing = mult - (it == part.factors.end() ? 0 : it->second);
            Poly factor(key.first + 1, Rational(0));
            factor[0] = 1;
            factor[key.first] = -inverse_power(p, key.second);
            for (unsigned r = 0; r < missing; ++r) term = multiply(term, factor);
        }
        if (rf.numerator.size() < term.size()) rf.numerator.resize(term.size(), Rational(0));
        for (std::size_t k = 0; k < term.size(); ++k) rf.numerator[k] += term[k];
    }
    while (!rf.numerator.empty() && rf.numerator.back() == 0) rf.numerator.pop_back();
    return rf;
}

namespace {

// Taylor coefficients of rf up to t^k.
Poly series(const RationalFunctionT& rf, unsigned k) {
    Poly inv(k + 1, Rational(0));
    inv[0] = 1;
    for (const auto& f : rf.denominator) {
        if (f.N == 0) throw UsageError("denominator factor with N = 0 has no power series");
        // divide by (1 - a t^N)
        for (unsigned i = f.N; i <= k; ++i) inv[i] += f.a * inv[i - f.N];
    }
    Poly out(k + 1, Rational(0));
    for (std::size_t j = 0; j < rf.numerator.size() && j <= k; ++j) {
        if (rf.numerator[j] == 0) continue;
        for (unsigned i = static_cast<unsigned>(j); i <= k; ++i) out[i] += rf.numerator[j] * inv[i - j];
    }
    return out;
}

Rational lattice_coefficient(const ResolutionData& data, std::uint64_t p, CharLabel chi, unsigned k, bool cumulative) {
    data.validate_at(p);
    Rational total = 0;
    for (const auto& s : data.strata) {
        const Integer c = data.count(s, chi, p);
        if (c == 0) continue;
        std::vector<const Component*> comps;
        bool divisible = true;
        for (unsigned id : s.ids) {
            comps.push_back(&data.component(id));
            divisible = divisible && comps.back()->N % chi.order == 0;
        }
        if (!divisible) continue;
        total += Rational(c) * rational_pow(Rational(p - 1), static_cast<unsigned>(comps.size())) *
                 lattice_sum(comps, p, k, cumulative);
    }
    return total * inverse_power(p, data.n);
}

}  // namespace

Rational coeff_series(const RationalFunctionT& rf, unsigned k) {
    return series(rf, k)[k];
}

Rational coeff_series_cumulative(const RationalFunctionT& rf, unsigned k) {
    const Poly s = series(rf, k);
    return std::accumulate(s.begin(), s.end(), Rational(0));
}

Rational coeff_lattice(const ResolutionData& data, std::uint64_t p, CharLabel chi, unsigned k) {
    return lattice_coefficient(data, p, chi, k, false);
}

Rational coeff_truncated_cumulative(const ResolutionData& data, std::uint64_t p, CharLabel chi, unsigned k) {
    return lattice_coefficient(data, p, chi, k, true);
}

std::vector<CharLabel> required_characters(const ResolutionData& data, std::uint64_t p) {
    std::vector<CharLabel> out;
    for (unsigned d = 2; d <= p - 1; ++d) {
        if ((p - 1) % d != 0) continue;
        const bool divides_some = std::any_of(data.components.begin(), data.components.end(),
                                              [d](const Component& c) { return c.N % d == 0; });
        if (!divides_some) continue;
        for (const auto& l : labels_of_exact_order(d)) out.push_back(l);
    }
    return out;
}

std::complex<double> reconstruct_exp_sum(const ResolutionData& data, std::uint64_t p, unsigned m, std::uint64_t u) {
    if (!data.good_reduction_regime) {
        throw DataError("good_reduction_regime", "data is not flagged as good reduction; refusing to reconstruct");
    }
    if (m < 2) throw UsageError("reconstruction needs m >= 2");
    if (u % p == 0) throw UsageError("u must be a unit mod p");
    const CharLabel trivial{1, 0};
    const auto z = denef_zeta(data, p, trivial);
    // kernel (t - p) / ((p - 1)(1 - t)) = -1/(p - 1) - 1/(1 - t)
    const Rational main = z.evaluate(Rational(1)) - coeff_lattice(data, p, trivial, m - 1) / Rational(p - 1) -
                          coeff_truncated_cumulative(data, p, trivial, m - 1);
    std::complex<double> total = to_double(main);
    const auto table = std::make_shared<const CharacterTable>(p);
    for (const CharLabel& label : required_characters(data, p)) {
        if (!data.supplies(label)) {
            throw DataError("strata", "no counts supplied for required character " + label_text(label) + " at p = " +
                                          std::to_string(p));
        }
        const MultChar chi(table, label);
        const Rational coeff = coeff_lattice(data, p, label, m - 1);
        if (coeff == 0) continue;
        total += gauss_sum(chi.inverse()) * chi(u) * to_double(coeff);
    }
    return total;
}

std::vector<PoleCandidate> pole_ledger(const ResolutionData& data, std::uint64_t p) {
    data.validate_at(p);
    std::map<Rational, unsigned> mult;
    for (const auto& s : data.strata) {
        const bool nonzero = std::any_of(s.counts.begin(), s.counts.end(), [p](const StratumCount& c) { return c.at(p) != 0; });
        if (!nonzero || s.ids.empty()) continue;
        std::map<Rational, unsigned> local;
        for (unsigned id : s.ids) {
            const auto& c = data.component(id);
            ++local[Rational(-Integer(c.nu), Integer(c.N))];
        }
        for (const auto& [r, k] : local) mult[r] = std::max(mult[r], k);
    }
    mult[Rational(-1)] = std::max(mult[Rational(-1)], 1U);
    std::vector<PoleCandidate> out;
    for (auto it = mult.rbegin(); it != mult.rend(); ++it) out.push_back({it->first, it->second});
    return out;
}

}  // namespace padicsum
