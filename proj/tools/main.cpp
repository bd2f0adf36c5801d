#include <algorithm>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "args.hpp"
#include "padicsum/chargauss.hpp"
#include "padicsum/critical.hpp"
#include "padicsum/error.hpp"
#include "padicsum/expsum.hpp"
#include "padicsum/harness.hpp"
#include "padicsum/histogram.hpp"
#include "padicsum/lct.hpp"
#include "padicsum/zeta.hpp"
#include "report.hpp"

namespace padicsum::cli {
namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

constexpr double kReconstructTolerance = 1e-9;
constexpr double kIdentityTolerance = 1e-9;

struct Options {
    std::string config;
    std::string format = "json";
    std::string output;
    std::string json_summary;
    std::uint64_t budget = kDefaultBudget;
    unsigned threads = 1;

    std::string poly;
    std::size_t nvars = 0;
    std::string variant;
    std::string y;
    std::string primes;
    std::string levels;
    std::string resolution;

    // zeta / reconstruct
    std::string character = "1:0";
    unsigned kmax = 10;
    std::uint64_t u = 1;

    // lemma-check
    std::uint64_t weil_pmax = 0;
    unsigned weil_dmax = 12;

    // lct
    unsigned mmax = 4;
    std::string box = "origin";

    // critical
    std::string critical;
    std::int64_t find_bound = 10;

    // verify
    std::optional<std::string> sigma;
    std::string sigma_source;
    std::optional<double> declared_c;
    bool reconstruct = false;
    std::string candidates;
    std::uint64_t fit_p = 0;
    unsigned period = 0;
};

HistogramOptions histogram_options(const Options& o) {
    return {o.budget, std::max(1u, o.threads), EnumerationStrategy::Reduced};
}

struct Input {
    Polynomial f;
    std::vector<std::int64_t> y;
};

Input read_input(const Options& o, Report& r) {
    if (o.poly.empty()) throw UsageError("--poly is required");
    std::size_t nvars = o.nvars;
    Polynomial f = read_polynomial(o.poly, nvars);
    require_nonconstant(f);
    std::vector<std::int64_t> y = o.y.empty() ? std::vector<std::int64_t>{} : parse_point(o.y);
    r.config["poly"] = to_string(f);
    r.config["nvars"] = nvars;
    return {std::move(f), std::move(y)};
}

Json value_json(const ExpSumValue& v) {
    return complex_json(v.value);
}

std::string cplx(std::complex<double> z) {
    std::ostringstream s;
    s << fmt(z.real()) << (z.imag() < 0 ? "-" : "+") << fmt(std::abs(z.imag())) << "i";
    return s.str();
}

void echo_grid(Report& r, const std::vector<std::uint64_t>& ps, const std::vector<unsigned>& ms) {
    r.config["primes"] = ps;
    r.config["ms"] = ms;
}

void echo_budget(Report& r, const Options& o) {
    r.config["budget"] = o.budget;
}

// expsum: the normalized sum, its valuation split and the contact counts.
Report run_expsum(const Options& o) {
    Report r;
    r.command = "expsum";
    auto in = read_input(o, r);
    const auto variant = parse_variant(o.variant.empty() ? "full" : o.variant);
    const auto box = variant_box(variant, in.f.nvars(), in.y);
    const auto ps = parse_primes(o.primes.empty() ? "5" : o.primes);
    const auto ms = parse_levels(o.levels.empty() ? "1" : o.levels);
    r.config["variant"] = to_string(variant);
    r.config["box"] = to_string(box);
    echo_grid(r, ps, ms);
    echo_budget(r, o);

    r.csv_header = {"p", "m", "variant", "re", "im", "abs", "low_re", "low_im", "mid_re", "mid_im",
                    "high_re", "high_im", "a_count", "b_count"};
    Json rows = Json::array();
    for (auto p : ps) {
        for (auto m : ms) {
            const PadicLevel level(p, m);
            const auto hist = build_histogram(in.f, level, box, histogram_options(o));
            const auto value = exp_sum(hist);
            const auto counts = contact_counts(hist);
            Json row;
            row["p"] = p;
            row["m"] = m;
            row["value"] = value_json(value);
            std::vector<std::string> csv{std::to_string(p), std::to_string(m), to_string(variant),
                                         fmt(value.value.real()), fmt(value.value.imag()), fmt(value.magnitude)};
            std::string line = "p=" + std::to_string(p) + " m=" + std::to_string(m) + " E=" + cplx(value.value) +
                               " |E|=" + fmt(value.magnitude);
            if (m >= 2) {
                const auto t = subsum_decomposition(hist);
                row["subsums"] = {{"low", value_json(t.low)}, {"mid", value_json(t.mid)}, {"high", value_json(t.high)}};
                for (const auto* part : {&t.low, &t.mid, &t.high}) {
                    csv.push_back(fmt(part->value.real()));
                    csv.push_back(fmt(part->value.imag()));
                }
                line += " low=" + cplx(t.low.value) + " mid=" + cplx(t.mid.value) + " high=" + cplx(t.high.value);
            } else {
                row["subsums"] = nullptr;
                csv.insert(csv.end(), 6, "");
            }
            row["a_count"] = counts.a_count;
            row["b_count"] = counts.b_count;
            csv.push_back(std::to_string(counts.a_count));
            csv.push_back(std::to_string(counts.b_count));
            line += " a=" + std::to_string(counts.a_count) + " b=" + std::to_string(counts.b_count);
            rows.push_back(std::move(row));
            r.csv_rows.push_back(std::move(csv));
            r.plain.push_back(std::move(line));
        }
    }
    r.result["rows"] = std::move(rows);
    return r;
}

std::vector<WeilCheck> weil_sweep(std::uint64_t p, unsigned d) {
    std::vector<WeilCheck> out;
    for (std::uint64_t xi = 1; xi < p; ++xi) out.push_back(weil_power_sum_check(p, d, xi));
    return out;
}

// lemma-check: exact lift counts, orbit constancy and the Weil bound.
Report run_lemma_check(const Options& o) {
    Report r;
    r.command = "lemma-check";
    auto in = read_input(o, r);
    const auto variant = parse_variant(o.variant.empty() ? "origin" : o.variant);
    const auto box = variant_box(variant, in.f.nvars(), in.y);
    const auto ps = parse_primes(o.primes.empty() ? "5..37" : o.primes);
    const auto ms = parse_levels(o.levels.empty() ? "3,4" : o.levels);
    r.config["variant"] = to_string(variant);
    r.config["box"] = to_string(box);
    echo_grid(r, ps, ms);
    r.config["weil_pmax"] = o.weil_pmax;
    r.config["weil_dmax"] = o.weil_dmax;
    echo_budget(r, o);

    r.csv_header = {"check", "p", "level_or_order", "holds", "measured", "reference"};
    Json rows = Json::array();
    for (auto p : ps) {
        const bool orbit_box = box.kind == BoxKind::Shifted &&
                               std::all_of(box.base.begin(), box.base.end(), [p](std::int64_t v) {
                                   return v % static_cast<std::int64_t>(p) == 0;
                               });
        for (auto m : ms) {
            const PadicLevel level(p, m);
            const auto hist = build_histogram(in.f, level, box, histogram_options(o));
            Json row;
            row["p"] = p;
            row["m"] = m;
            if (m >= 3) {
                const auto rep = lift_constancy_check(hist);
                Json witnesses = Json::array();
                for (const auto& w : rep.witnesses)
                    witnesses.push_back({{"residue", w.residue}, {"lift_counts", w.lift_counts}});
                row["lift"] = {{"holds", rep.holds}, {"low", value_json(rep.low)}, {"witnesses", witnesses}};
                r.check_failed |= !rep.holds;
                r.csv_rows.push_back({"lift", std::to_string(p), std::to_string(m), rep.holds ? "1" : "0",
                                      fmt(rep.low.magnitude), std::to_string(rep.witnesses.size())});
                r.plain.push_back("lift    p=" + std::to_string(p) + " m=" + std::to_string(m) +
                                  (rep.holds ? " holds" : " FAILS") + " |low|=" + fmt(rep.low.magnitude) +
                                  " witnesses=" + std::to_string(rep.witnesses.size()));
            } else {
                row["lift"] = nullptr;
            }
            if (m >= 2 && orbit_box) {
                const auto rep = orbit_constancy_check(hist);
                Json viol = Json::array();
                for (const auto& v : rep.violations)
                    viol.push_back({{"orbit", v.orbit}, {"angular", v.angular}, {"count", v.count}, {"expected", v.expected}});
                Json orbit{{"d", rep.d}, {"holds", rep.holds}, {"orbits", rep.orbits}, {"constants", rep.constants},
                           {"violations", viol}, {"mid_direct", value_json(rep.mid_direct)}};
                std::string diff;
                if (rep.mid_from_orbits) {
                    orbit["mid_from_orbits"] = value_json(*rep.mid_from_orbits);
                    const double err = std::abs(rep.mid_from_orbits->value - rep.mid_direct.value);
                    orbit["mid_difference"] = err;
                    diff = fmt(err);
                } else {
                    orbit["mid_from_orbits"] = nullptr;
                    orbit["mid_difference"] = nullptr;
                }
                row["orbit"] = std::move(orbit);
                r.check_failed |= !rep.holds;
                r.csv_rows.push_back({"orbit", std::to_string(p), std::to_string(m), rep.holds ? "1" : "0", diff,
                                      std::to_string(rep.d)});
                r.plain.push_back("orbit   p=" + std::to_string(p) + " m=" + std::to_string(m) + " d=" +
                                  std::to_string(rep.d) + (rep.holds ? " holds" : " FAILS") +
                                  (diff.empty() ? "" : " |mid diff|=" + diff));
            } else {
                row["orbit"] = nullptr;
            }
            rows.push_back(std::move(row));
        }
    }
    r.result["rows"] = std::move(rows);

    Json weil = Json::array();
    for (std::uint64_t p = 3; p <= o.weil_pmax; ++p) {
        if (!is_prime(p)) continue;
        for (unsigned d = 2; d <= o.weil_dmax; ++d) {
            if ((p - 1) % d != 0) continue;
            double worst = 0.0, bound = 0.0;
            bool ok = true;
            for (const auto& c : weil_sweep(p, d)) {
                worst = std::max(worst, c.sum_magnitude);
                bound = c.bound;
                ok &= c.ok;
            }
            weil.push_back({{"p", p}, {"d", d}, {"max_magnitude", worst}, {"bound", bound}, {"holds", ok}});
            r.check_failed |= !ok;
            r.csv_rows.push_back({"weil", std::to_string(p), std::to_string(d), ok ? "1" : "0", fmt(worst), fmt(bound)});
            r.plain.push_back("weil    p=" + std::to_string(p) + " d=" + std::to_string(d) + " max=" + fmt(worst) +
                              " bound=" + fmt(bound) + (ok ? " holds" : " FAILS"));
        }
    }
    r.result["weil"] = std::move(weil);
    return r;
}

ResolutionData read_resolution_file(const Options& o) {
    if (o.resolution.empty()) throw UsageError("--resolution is required");
    return load_resolution(o.resolution);
}

Json poles_json(const std::vector<PoleCandidate>& poles) {
    Json out = Json::array();
    for (const auto& c : poles) out.push_back({{"real_part", rational_json(c.real_part)}, {"multiplicity", c.multiplicity}});
    return out;
}

// zeta: Denef's formula at one prime, its coefficients two ways, and the poles.
Report run_zeta(const Options& o) {
    Report r;
    r.command = "zeta";
    const auto data = read_resolution_file(o);
    const auto ps = parse_primes(o.primes.empty() ? "5" : o.primes);
    if (ps.size() != 1) throw UsageError("zeta takes a single prime");
    const auto p = ps.front();
    const auto chi = parse_char_label(o.character);
    data.validate_at(p);
    MultChar(p, chi);  // rejects labels that are not characters mod p
    r.config["resolution"] = o.resolution;
    r.config["p"] = p;
    r.config["char"] = std::to_string(chi.order) + ":" + std::to_string(chi.index);
    r.config["kmax"] = o.kmax;

    const auto rf = denef_zeta(data, p, chi);
    Json num = Json::array();
    for (const auto& c : rf.numerator) num.push_back(rational_json(c));
    Json den = Json::array();
    for (const auto& fct : rf.denominator)
        den.push_back({{"N", fct.N}, {"nu", fct.nu}, {"a", rational_json(fct.a)}});
    r.result["rational_function"] = {{"numerator", num}, {"denominator", den}};
    r.plain.push_back("numerator degree " + std::to_string(rf.numerator_degree()) + ", denominator degree " +
                      std::to_string(rf.denominator_degree()));

    r.csv_header = {"k", "series", "lattice", "cumulative_series", "cumulative_lattice", "agree"};
    Json coeffs = Json::array();
    for (unsigned k = 0; k <= o.kmax; ++k) {
        const auto s = coeff_series(rf, k);
        const auto l = coeff_lattice(data, p, chi, k);
        const auto cs = coeff_series_cumulative(rf, k);
        const auto cl = coeff_truncated_cumulative(data, p, chi, k);
        const bool agree = s == l && cs == cl;
        r.check_failed |= !agree;
        coeffs.push_back({{"k", k}, {"series", rational_json(s)}, {"lattice", rational_json(l)},
                          {"cumulative_series", rational_json(cs)}, {"cumulative_lattice", rational_json(cl)},
                          {"agree", agree}});
        r.csv_rows.push_back({std::to_string(k), to_string(s), to_string(l), to_string(cs), to_string(cl),
                              agree ? "1" : "0"});
        r.plain.push_back("k=" + std::to_string(k) + " coeff=" + to_string(s) + " cumulative=" + to_string(cs) +
                          (agree ? "" : " MISMATCH lattice=" + to_string(l)));
    }
    r.result["coefficients"] = std::move(coeffs);

    const auto poles = pole_ledger(data, p);
    r.result["poles"] = poles_json(poles);
    for (const auto& c : poles)
        r.plain.push_back("pole candidate Re(s)=" + to_string(c.real_part) + " multiplicity " + std::to_string(c.multiplicity));
    Json req = Json::array();
    for (const auto& lbl : required_characters(data, p)) req.push_back(std::to_string(lbl.order) + ":" + std::to_string(lbl.index));
    r.result["required_characters"] = std::move(req);
    return r;
}

// reconstruct: E(u p^{-m}) from the zeta data against direct enumeration.
Report run_reconstruct(const Options& o) {
    Report r;
    r.command = "reconstruct";
    const auto data = read_resolution_file(o);
    auto in = read_input(o, r);
    const auto variant = parse_variant(o.variant.empty() ? "full" : o.variant);
    if (variant == SumVariant::Shifted) throw UsageError("reconstruct supports the full and origin variants");
    const auto box = variant_box(variant, in.f.nvars(), in.y);
    const auto ps = parse_primes(o.primes.empty() ? "5" : o.primes);
    const auto ms = parse_levels(o.levels.empty() ? "2..4" : o.levels);
    r.config["resolution"] = o.resolution;
    r.config["variant"] = to_string(variant);
    echo_grid(r, ps, ms);
    r.config["u"] = o.u;
    echo_budget(r, o);
    if (data.n != in.f.nvars()) throw DataError("n", "resolution data has n=" + std::to_string(data.n) +
                                                         " but the polynomial has " + std::to_string(in.f.nvars()) +
                                                         " variables");

    r.csv_header = {"p", "m", "u", "direct_re", "direct_im", "reconstructed_re", "reconstructed_im", "abs_error", "ok"};
    Json rows = Json::array();
    double worst = 0.0;
    for (auto p : ps) {
        if (o.u % p == 0) throw UsageError("u must be a unit mod " + std::to_string(p));
        const Polynomial scaled = Polynomial::constant(in.f.nvars(), Integer(o.u)) * in.f;
        for (auto m : ms) {
            const PadicLevel level(p, m);
            const auto direct = exp_sum(build_histogram(scaled, level, box, histogram_options(o)));
            const auto recon = reconstruct_exp_sum(data, p, m, o.u);
            const double err = std::abs(direct.value - recon);
            const bool ok = err <= kReconstructTolerance;
            worst = std::max(worst, err);
            r.check_failed |= !ok;
            rows.push_back({{"p", p}, {"m", m}, {"direct", value_json(direct)}, {"reconstructed", complex_json(recon)},
                            {"abs_error", err}, {"ok", ok}});
            r.csv_rows.push_back({std::to_string(p), std::to_string(m), std::to_string(o.u), fmt(direct.value.real()),
                                  fmt(direct.value.imag()), fmt(recon.real()), fmt(recon.imag()), fmt(err),
                                  ok ? "1" : "0"});
            r.plain.push_back("p=" + std::to_string(p) + " m=" + std::to_string(m) + " direct=" + cplx(direct.value) +
                              " reconstructed=" + cplx(recon) + " error=" + fmt(err) + (ok ? "" : " MISMATCH"));
        }
    }
    r.result["rows"] = std::move(rows);
    r.result["max_abs_error"] = worst;
    r.result["tolerance"] = kReconstructTolerance;
    return r;
}

// lct: jet-scheme estimate, optional exact value from resolution data, sigma.
Report run_lct(const Options& o) {
    Report r;
    r.command = "lct";
    auto in = read_input(o, r);
    const auto variant = parse_variant(o.box);
    if (variant == SumVariant::Shifted) throw UsageError("--box must be origin or full");
    const auto box = variant_box(variant, in.f.nvars(), in.y);
    const auto ps = parse_primes(o.primes.empty() ? "7,11,13" : o.primes);
    r.config["box"] = to_string(variant);
    r.config["primes"] = ps;
    r.config["mmax"] = o.mmax;
    if (!o.resolution.empty()) r.config["resolution"] = o.resolution;
    echo_budget(r, o);

    auto est = lct_jet_estimate(in.f, ps, o.mmax, box, histogram_options(o));
    Json per_m = Json::array();
    r.csv_header = {"m", "p", "count", "log_p_count", "dim_fit", "codim", "codim_over_m"};
    for (const auto& lv : est.per_m) {
        Json rows = Json::array();
        for (const auto& row : lv.rows) {
            rows.push_back({{"p", row.p}, {"count", row.count}, {"log_p_count", row.log_p_count}});
            r.csv_rows.push_back({std::to_string(lv.m), std::to_string(row.p), std::to_string(row.count),
                                  fmt(row.log_p_count), fmt(lv.dim_fit), fmt(lv.codim), fmt(lv.ratio)});
        }
        per_m.push_back({{"m", lv.m}, {"dim_fit", lv.dim_fit}, {"intercept", lv.intercept}, {"residual", lv.residual},
                         {"codim", lv.codim}, {"codim_over_m", lv.ratio}, {"rows", rows}});
        r.plain.push_back("m=" + std::to_string(lv.m) + " dim_fit=" + fmt(lv.dim_fit) + " codim/m=" + fmt(lv.ratio) +
                          " residual=" + fmt(lv.residual));
    }
    r.result["per_m"] = std::move(per_m);
    r.result["inf_value"] = est.inf_value;
    r.result["argmin_m"] = est.argmin_m;
    r.result["min_at_mmax"] = est.min_at_mmax;
    r.plain.push_back("jet estimate " + fmt(est.inf_value) + " at m=" + std::to_string(est.argmin_m) +
                      (est.min_at_mmax ? " (minimum at mmax, may not be attained)" : ""));

    if (!o.resolution.empty()) {
        const auto data = load_resolution(o.resolution);
        const auto exact = variant == SumVariant::Full ? lct_from_resolution(data, [](const Component&) { return true; })
                                                       : lct_from_resolution(data);
        const auto s = sigma_of(exact);
        r.result["resolution_value"] = rational_json(exact);
        r.result["sigma"] = to_double(s);
        r.result["sigma_exact"] = rational_json(s);
        r.result["sigma_source"] = "resolution";
        r.plain.push_back("resolution lct " + to_string(exact) + ", sigma " + to_string(s));
    } else {
        r.result["resolution_value"] = nullptr;
        r.result["sigma"] = sigma_of(est.inf_value);
        r.result["sigma_exact"] = nullptr;
        r.result["sigma_source"] = "jet-estimate";
        r.plain.push_back("sigma " + fmt(sigma_of(est.inf_value)) + " (from the jet estimate)");
    }
    return r;
}

// critical: conditions on the critical values mod p, and the split of E by them.
Report run_critical(const Options& o) {
    Report r;
    r.command = "critical";
    auto in = read_input(o, r);
    const auto ps = parse_primes(o.primes.empty() ? "7,11,13" : o.primes);
    const auto ms = parse_levels(o.levels.empty() ? "2,3" : o.levels);
    echo_grid(r, ps, ms);
    std::vector<Integer> values;
    if (!o.critical.empty()) {
        values = parse_integers(o.critical);
        r.config["critical_source"] = "given";
    } else {
        values = find_integer_critical_values(in.f, o.find_bound, o.budget);
        r.config["critical_source"] = "integer-search";
        r.config["find_bound"] = o.find_bound;
    }
    Json vals = Json::array();
    for (const auto& v : values) vals.push_back(v.str());
    r.config["critical"] = vals;
    echo_budget(r, o);
    if (ms.front() < 2) throw UsageError("critical needs m >= 2");

    r.csv_header = {"p", "m", "part", "re", "im", "abs"};
    Json per_p = Json::array();
    for (auto p : ps) {
        const auto rep = critical_data_mod_p(in.f, p, values, o.budget);
        Json entry{{"p", p}, {"crit_points", rep.crit_points}, {"crit_values", rep.crit_values},
                   {"units", rep.units}, {"distinct", rep.distinct}, {"smooth_elsewhere", rep.smooth_elsewhere}};
        r.plain.push_back("p=" + std::to_string(p) + " critical points mod p: " + std::to_string(rep.crit_points.size()) +
                          " units=" + (rep.units ? "yes" : "no") + " distinct=" + (rep.distinct ? "yes" : "no") +
                          " smooth_elsewhere=" + (rep.smooth_elsewhere ? "yes" : "no"));
        Json splits = Json::array();
        if (rep.distinct) {
            for (auto m : ms) {
                const auto split = split_exp_sum_by_critical_values(in.f, PadicLevel(p, m), values, histogram_options(o));
                Json parts = Json::array();
                for (const auto& [z, v] : split.parts) {
                    parts.push_back({{"z", z.str()}, {"value", value_json(v)}});
                    r.csv_rows.push_back({std::to_string(p), std::to_string(m), z.str(), fmt(v.value.real()),
                                          fmt(v.value.imag()), fmt(v.magnitude)});
                }
                for (const auto& [name, v] : {std::pair{"rest", split.remainder}, std::pair{"total", split.total}})
                    r.csv_rows.push_back({std::to_string(p), std::to_string(m), name, fmt(v.value.real()),
                                          fmt(v.value.imag()), fmt(v.magnitude)});
                const bool ok = split.identity_error <= kIdentityTolerance;
                r.check_failed |= !ok;
                splits.push_back({{"m", m}, {"parts", parts}, {"remainder", value_json(split.remainder)},
                                  {"total", value_json(split.total)}, {"identity_error", split.identity_error},
                                  {"ok", ok}});
                r.plain.push_back("  m=" + std::to_string(m) + " E=" + cplx(split.total.value) + " rest=" +
                                  cplx(split.remainder.value) + " identity error " + fmt(split.identity_error));
            }
            entry["split"] = std::move(splits);
        } else {
            entry["split"] = nullptr;
            r.plain.push_back("  split skipped: critical values collide mod p");
        }
        per_p.push_back(std::move(entry));
    }
    r.result["primes"] = std::move(per_p);
    return r;
}

unsigned components_lcm(const ResolutionData& data) {
    unsigned l = 1;
    for (const auto& c : data.components) l = std::lcm(l, c.N);
    return l;
}

// verify: bound sweep with C_fit, and optionally the asymptotic model fit.
Report run_verify(const Options& o) {
    Report r;
    r.command = "verify";
    auto in = read_input(o, r);
    const auto variant = parse_variant(o.variant.empty() ? "origin" : o.variant);
    const auto box = variant_box(variant, in.f.nvars(), in.y);
    const auto ps = parse_primes(o.primes.empty() ? "5..37" : o.primes);
    const auto ms = parse_levels(o.levels.empty() ? "1..5" : o.levels);
    r.config["variant"] = to_string(variant);
    r.config["box"] = to_string(box);
    echo_grid(r, ps, ms);
    echo_budget(r, o);

    std::optional<ResolutionData> data;
    if (!o.resolution.empty()) {
        data = load_resolution(o.resolution);
        r.config["resolution"] = o.resolution;
    }
    std::string source = o.sigma_source;
    if (source.empty()) source = o.sigma ? "explicit" : data ? "resolution" : "jet-estimate";
    double sigma = 0.0;
    std::string sigma_exact;
    if (source == "explicit") {
        if (!o.sigma) throw UsageError("--sigma-source explicit needs --sigma");
        const auto q = parse_rational(*o.sigma);
        sigma = to_double(q);
        sigma_exact = to_string(q);
    } else if (source == "resolution") {
        if (!data) throw UsageError("--sigma-source resolution needs --resolution");
        const auto lct = variant == SumVariant::Full ? lct_from_resolution(*data, [](const Component&) { return true; })
                                                     : lct_from_resolution(*data);
        const auto q = sigma_of(lct);
        sigma = to_double(q);
        sigma_exact = to_string(q);
    } else if (source == "jet-estimate") {
        sigma = sigma_of(lct_jet_estimate(in.f, ps, o.mmax, box, histogram_options(o)).inf_value);
        r.config["mmax"] = o.mmax;
    } else {
        throw UsageError("unknown sigma source '" + source + "' (expected explicit, resolution or jet-estimate)");
    }
    r.config["sigma_source"] = source;
    r.config["sigma"] = sigma_exact.empty() ? Json(sigma) : Json(sigma_exact);
    if (o.declared_c) r.config["declared_c"] = *o.declared_c;
    r.config["reconstruct"] = o.reconstruct;
    if (o.reconstruct && !data) throw UsageError("--reconstruct needs --resolution");

    SweepOptions sweep;
    sweep.histogram = histogram_options(o);
    sweep.declared_c = o.declared_c;
    sweep.resolution = o.reconstruct ? &*data : nullptr;
    const auto rep = sweep_and_fit(in.f, variant, sigma, ps, ms, in.y, sweep);

    r.csv_header = {"p", "m", "re", "im", "abs", "bound_ratio", "violation"};
    Json grid = Json::array();
    for (const auto& row : rep.grid) {
        const bool violation = rep.declared_c && row.bound_ratio > *rep.declared_c;
        Json j{{"p", row.p}, {"m", row.m}, {"value", complex_json(row.value)}, {"bound_ratio", row.bound_ratio},
               {"violation", violation}};
        if (row.reconstructed) j["reconstructed"] = complex_json(*row.reconstructed);
        grid.push_back(std::move(j));
        r.csv_rows.push_back({std::to_string(row.p), std::to_string(row.m), fmt(row.value.real()), fmt(row.value.imag()),
                              fmt(row.magnitude), fmt(row.bound_ratio), violation ? "1" : "0"});
    }
    Json viol = Json::array();
    for (const auto& row : rep.violations) viol.push_back({{"p", row.p}, {"m", row.m}, {"bound_ratio", row.bound_ratio}});
    r.check_failed |= !rep.violations.empty();

    r.result["sigma"] = sigma;
    r.result["grid"] = std::move(grid);
    r.result["c_fit"] = rep.c_fit;
    r.result["c_fit_top_half"] = rep.c_fit_top_half;
    r.result["c_fit_largest_prime"] = rep.c_fit_largest_prime;
    r.result["stable_from"] = rep.stable_from;
    r.result["no_upward_trend"] = rep.no_upward_trend();
    r.result["declared_c"] = rep.declared_c ? Json(*rep.declared_c) : Json(nullptr);
    r.result["violations"] = std::move(viol);
    if (o.reconstruct) {
        const bool ok = rep.reconstruction_error <= kReconstructTolerance;
        r.check_failed |= !ok;
        r.result["reconstruction_error"] = rep.reconstruction_error;
    }
    r.plain.push_back("sigma=" + fmt(sigma) + " C_fit=" + fmt(rep.c_fit) + " top-half=" + fmt(rep.c_fit_top_half) +
                      " largest-prime=" + fmt(rep.c_fit_largest_prime) + " stable_from=" +
                      std::to_string(rep.stable_from) + (rep.no_upward_trend() ? "" : " (upward trend)"));
    if (rep.declared_c)
        r.plain.push_back("violations of C=" + fmt(*rep.declared_c) + ": " + std::to_string(rep.violations.size()));

    if (!o.candidates.empty()) {
        const auto cands = parse_candidates(o.candidates);
        const std::uint64_t fp = o.fit_p ? o.fit_p : ps.back();
        const unsigned period = o.period ? o.period : data ? components_lcm(*data) : 1;
        std::vector<unsigned> fit_ms;
        for (auto m : ms)
            if (variant != SumVariant::Full || m >= 2) fit_ms.push_back(m);
        const auto fit = fit_asymptotic_model(in.f, variant, fp, fit_ms, cands, period, in.y, histogram_options(o));
        Json terms = Json::array();
        for (const auto& t : fit.terms)
            terms.push_back({{"lambda", t.lambda}, {"beta", t.beta}, {"residue_class", t.residue_class},
                             {"coefficient", complex_json(t.coefficient)}});
        r.result["model_fit"] = {{"p", fp}, {"period", fit.period}, {"terms", terms}, {"residual", fit.residual},
                                 {"relative_residual", fit.relative_residual}, {"flagged", fit.flagged}};
        r.check_failed |= fit.flagged;
        r.plain.push_back("model fit at p=" + std::to_string(fp) + " period " + std::to_string(fit.period) +
                          ": relative residual " + fmt(fit.relative_residual) + (fit.flagged ? " (flagged)" : ""));
    }
    return r;
}

int fail(int code, const std::string& kind, const std::string& message) {
    std::cerr << "error code=" << code << " kind=" << kind << ": " << message << '\n';
    return code;
}

void add_common(CLI::App* sub, Options& o) {
    sub->add_option("--config", o.config, "JSON run-config; command-line options take precedence");
    sub->add_option("--format", o.format, "json, csv or plain")->capture_default_str();
    sub->add_option("--output", o.output, "write the report here instead of stdout");
    sub->add_option("--json-summary", o.json_summary, "also write the JSON report to this path");
    sub->add_option("--budget", o.budget, "maximum enumerated points")->envname("PADICSUM_BUDGET")->capture_default_str();
    sub->add_option("--threads", o.threads, "worker threads")->envname("PADICSUM_THREADS")->capture_default_str();
}

void add_poly(CLI::App* sub, Options& o) {
    sub->add_option("--poly", o.poly, "polynomial, e.g. \"x^2+y^3\"");
    sub->add_option("--nvars", o.nvars, "number of variables (default: inferred)");
}

void add_grid(CLI::App* sub, Options& o, bool with_variant = true) {
    sub->add_option("--p,--primes", o.primes, "primes: list \"5,7\" or range \"5..37\"");
    sub->add_option("--m,--ms", o.levels, "levels: list \"2,3\" or range \"2..6\"");
    if (with_variant) {
        sub->add_option("--variant", o.variant, "full, origin or shifted");
        sub->add_option("--y", o.y, "base point for the shifted variant, e.g. \"0,5\"");
    }
}

}  // namespace

int run(int argc, char** argv) {
    CLI::App app{"p-adic exponential sums, Igusa zeta functions and log-canonical thresholds"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    Options o;

    auto* expsum = app.add_subcommand("expsum", "normalized exponential sums and their valuation split");
    add_common(expsum, o);
    add_poly(expsum, o);
    add_grid(expsum, o);
    std::string histogram_out;
    expsum->add_option("--histogram-out", histogram_out, "write the value histogram (single p and m only)");

    auto* lemma = app.add_subcommand("lemma-check", "lift-count vanishing, orbit constancy and the Weil bound");
    add_common(lemma, o);
    add_poly(lemma, o);
    add_grid(lemma, o);
    lemma->add_option("--weil-pmax", o.weil_pmax, "also check the Weil bound for primes up to this");
    lemma->add_option("--weil-dmax", o.weil_dmax, "largest power d in the Weil sweep")->capture_default_str();

    auto* zeta = app.add_subcommand("zeta", "Denef's formula from resolution data");
    add_common(zeta, o);
    zeta->add_option("--resolution", o.resolution, "resolution data (JSON)");
    zeta->add_option("--p,--primes", o.primes, "the prime");
    zeta->add_option("--char", o.character, "character label order:index")->capture_default_str();
    zeta->add_option("--kmax", o.kmax, "last coefficient index")->capture_default_str();

    auto* recon = app.add_subcommand("reconstruct", "exponential sums from zeta coefficients vs enumeration");
    add_common(recon, o);
    add_poly(recon, o);
    add_grid(recon, o);
    recon->add_option("--resolution", o.resolution, "resolution data (JSON)");
    recon->add_option("--u", o.u, "unit u in E(u p^-m)")->capture_default_str();

    auto* lct = app.add_subcommand("lct", "log-canonical threshold: jet estimate and resolution value");
    add_common(lct, o);
    add_poly(lct, o);
    lct->add_option("--p,--primes", o.primes, "primes for the fit (at least two)");
    lct->add_option("--mmax", o.mmax, "largest level")->capture_default_str();
    lct->add_option("--box", o.box, "origin or full")->capture_default_str();
    lct->add_option("--resolution", o.resolution, "resolution data (JSON) for the exact value");

    auto* crit = app.add_subcommand("critical", "critical values mod p and the split of E by them");
    add_common(crit, o);
    add_poly(crit, o);
    add_grid(crit, o, false);
    crit->add_option("--critical", o.critical, "critical values, e.g. \"-2,2\" (default: integer search)");
    crit->add_option("--find-bound", o.find_bound, "search box |x_i| <= bound")->capture_default_str();

    auto* verify = app.add_subcommand("verify", "bound sweep with fitted constants and model fit");
    add_common(verify, o);
    add_poly(verify, o);
    add_grid(verify, o);
    verify->add_option("--sigma", o.sigma, "exponent, e.g. \"1/4\"");
    verify->add_option("--sigma-source", o.sigma_source, "explicit, resolution or jet-estimate");
    verify->add_option("--resolution", o.resolution, "resolution data (JSON)");
    verify->add_option("--declared-c", o.declared_c, "report grid points with bound ratio above this");
    verify->add_flag("--reconstruct", o.reconstruct, "cross-check each value against the zeta reconstruction");
    verify->add_option("--candidates", o.candidates, "model terms \"lambda:beta,...\"");
    verify->add_option("--fit-p", o.fit_p, "prime for the model fit (default: largest)");
    verify->add_option("--period", o.period, "residue-class period in m (default: lcm of N_i, or 1)");
    verify->add_option("--mmax", o.mmax, "largest level for a jet-estimated sigma")->capture_default_str();

    std::set<std::string> names;
    for (const auto* s : app.get_subcommands({})) names.insert(s->get_name());

    try {
        std::vector<std::string> args(argv, argv + argc);
        args = expand_config(args, names);
        std::vector<std::string> rest(args.rbegin(), args.rend() - 1);
        app.parse(rest);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(kExitUsage, "usage", e.what());
    } catch (const DataError& e) {
        return fail(kExitUsage, "data field=" + e.field(), e.what());
    } catch (const UsageError& e) {
        return fail(kExitUsage, "usage", e.what());
    }

    try {
        const Format format = parse_format(o.format);
        Report report;
        auto* chosen = app.get_subcommands().front();
        const std::string name = chosen->get_name();
        if (name == "expsum") {
            report = run_expsum(o);
            if (!histogram_out.empty()) {
                const auto ps = parse_primes(o.primes.empty() ? "5" : o.primes);
                const auto ms = parse_levels(o.levels.empty() ? "1" : o.levels);
                if (ps.size() != 1 || ms.size() != 1) throw UsageError("--histogram-out needs a single p and m");
                std::size_t nvars = o.nvars;
                const auto f = read_polynomial(o.poly, nvars);
                const auto variant = parse_variant(o.variant.empty() ? "full" : o.variant);
                const auto y = o.y.empty() ? std::vector<std::int64_t>{} : parse_point(o.y);
                std::ofstream hout(histogram_out);
                if (!hout) throw UsageError("cannot write '" + histogram_out + "'");
                write_histogram(hout, build_histogram(f, PadicLevel(ps[0], ms[0]), variant_box(variant, nvars, y),
                                                      histogram_options(o)));
            }
        } else if (name == "lemma-check") {
            report = run_lemma_check(o);
        } else if (name == "zeta") {
            report = run_zeta(o);
        } else if (name == "reconstruct") {
            report = run_reconstruct(o);
        } else if (name == "lct") {
            report = run_lct(o);
        } else if (name == "critical") {
            report = run_critical(o);
        } else {
            report = run_verify(o);
        }
        report.config["format"] = o.format;

        if (o.output.empty()) {
            report.emit(std::cout, format);
        } else {
            std::ofstream out(o.output);
            if (!out) throw UsageError("cannot write '" + o.output + "'");
            report.emit(out, format);
        }
        if (!o.json_summary.empty()) {
            std::ofstream out(o.json_summary);
            if (!out) throw UsageError("cannot write '" + o.json_summary + "'");
            report.emit(out, Format::Json);
        }
        if (report.check_failed) {
            std::cerr << "error code=" << kExitCheckFailed << " kind=check: one or more checks failed\n";
            return kExitCheckFailed;
        }
        return 0;
    } catch (const BudgetError& e) {
        return fail(kExitBudget, "budget", e.what());
    } catch (const ParseError& e) {
        return fail(kExitUsage, "parse position=" + std::to_string(e.position()), e.what());
    } catch (const DataError& e) {
        return fail(kExitUsage, "data field=" + e.field(), e.what());
    } catch (const UsageError& e) {
        return fail(kExitUsage, "usage", e.what());
    } catch (const std::exception& e) {
        return fail(kExitCheckFailed, "internal", e.what());
    }
}

}  // namespace padicsum::cli

int main(int argc, char** argv) {
    return padicsum::cli::run(argc, argv);
}
