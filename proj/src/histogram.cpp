#include "padicsum/histogram.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "padicsum/error.hpp"

namespace padicsum {

namespace {

using Entry = ValueHistogram::Entry;

constexpr std::uint64_t kDenseLimit = std::uint64_t{1} << 23U;

// Counts over keys in [0, range): dense array for small ranges, hash map otherwise.
class CountMap {
public:
    explicit CountMap(std::uint64_t range) : dense_(range <= kDenseLimit) {
        if (dense_) counts_.assign(range, 0);
    }

    void add(std::uint64_t key, std::uint64_t n) {
        if (dense_) {
            counts_[key] += n;
        } else {
            sparse_[key] += n;
        }
    }

    void merge(const CountMap& other) {
        if (dense_ && other.dense_) {
            for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
            return;
        }
        for (const auto& [k, n] : other.sorted()) add(k, n);
    }

    std::vector<Entry> sorted() const {
        std::vector<Entry> out;
        if (dense_) {
            for (std::size_t i = 0; i < counts_.size(); ++i) {
                if (counts_[i]) out.emplace_back(i, counts_[i]);
            }
        } else {
            out.assign(sparse_.begin(), sparse_.end());
            std::sort(out.begin(), out.end());
        }
        return out;
    }

private:
    bool dense_;
    std::vector<std::uint64_t> counts_;
    std::unordered_map<std::uint64_t, std::uint64_t> sparse_;
};

struct KernelTerm {
    std::uint64_t coeff;
    std::vector<unsigned> exps;
};

// A box of points x_j = offset_j + stride_j * i_j (mod modulus), i_j in [0, range_j),
// pushed through a polynomial with coefficients mod `modulus`.
struct Kernel {
    std::uint64_t modulus = 1;
    std::vector<KernelTerm> terms;
    std::vector<std::uint64_t> offsets;
    std::vector<std::uint64_t> strides;
    std::vector<std::uint64_t> ranges;

    std::uint64_t points() const {
        std::uint64_t n = 1;
        for (auto r : ranges) n *= r;
        return n;
    }
};

struct WideMul {
    static std::uint64_t mul(std::uint64_t a, std::uint64_t b, std::uint64_t m) { return mulmod(a, b, m); }
};

// Moduli below 2^32 keep products in 64 bits, avoiding the 128-bit division.
struct NarrowMul {
    static std::uint64_t mul(std::uint64_t a, std::uint64_t b, std::uint64_t m) { return a * b % m; }
};

// Odometer over the box with the leading index restricted to [lead_lo, lead_hi).
template <typename Mul>
void run_kernel_with(const Kernel& k, std::uint64_t lead_lo, std::uint64_t lead_hi, CountMap& out) {
    const std::size_t nv = k.ranges.size();
    if (nv == 0) {
        std::uint64_t c = 0;
        for (const auto& t : k.terms) c = addmod(c, t.coeff, k.modulus);
        out.add(c, lead_hi > lead_lo ? 1 : 0);
        return;
    }
    if (lead_lo >= lead_hi) return;

    std::vector<unsigned> max_deg(nv, 0);
    for (const auto& t : k.terms) {
        for (std::size_t j = 0; j < nv; ++j) max_deg[j] = std::max(max_deg[j], t.exps[j]);
    }
    std::vector<std::uint64_t> idx(nv, 0);
    idx[0] = lead_lo;
    // pw[j][e] = x_j^e mod modulus for the current x_j.
    std::vector<std::vector<std::uint64_t>> pw(nv);
    auto refresh = [&](std::size_t j) {
        const std::uint64_t x = addmod(k.offsets[j], Mul::mul(k.strides[j], idx[j], k.modulus), k.modulus);
        auto& row = pw[j];
        row.resize(max_deg[j] + 1);
        row[0] = 1 % k.modulus;
        for (unsigned e = 1; e <= max_deg[j]; ++e) row[e] = Mul::mul(row[e - 1], x, k.modulus);
    };
    for (std::size_t j = 0; j < nv; ++j) refresh(j);

    const std::size_t last = nv - 1;
    for (;;) {
        std::uint64_t value = 0;
        for (const auto& t : k.terms) {
            std::uint64_t v = t.coeff;
            for (std::size_t j = 0; j < nv; ++j) {
                if (t.exps[j]) v = Mul::mul(v, pw[j][t.exps[j]], k.modulus);
            }
            value = addmod(value, v, k.modulus);
        }
        out.add(value, 1);

        // advance odometer, innermost coordinate fastest
        std::size_t j = last;
        for (;;) {
            ++idx[j];
            const std::uint64_t limit = j == 0 ? lead_hi : k.ranges[j];
            if (idx[j] < limit) {
                refresh(j);
                break;
            }
            if (j == 0) return;
            idx[j] = 0;
            refresh(j);
            --j;
        }
    }
}

void run_kernel(const Kernel& k, std::uint64_t lead_lo, std::uint64_t lead_hi, CountMap& out) {
    if (k.modulus <= (std::uint64_t{1} << 32U)) {
        run_kernel_with<NarrowMul>(k, lead_lo, lead_hi, out);
    } else {
        run_kernel_with<WideMul>(k, lead_lo, lead_hi, out);
    }
}

std::vector<Entry> run_kernel_parallel(const Kernel& k, std::uint64_t range, unsigned threads) {
    const std::uint64_t lead = k.ranges.empty() ? 1 : k.ranges[0];
    const unsigned chunks = static_cast<unsigned>(std::clamp<std::uint64_t>(threads, 1, std::max<std::uint64_t>(lead, 1)));
    if (chunks <= 1) {
        CountMap counts(range);
        run_kernel(k, 0, lead, counts);
        return counts.sorted();
    }
    std::vector<CountMap> partial;
    partial.reserve(chunks);
    for (unsigned c = 0; c < chunks; ++c) partial.emplace_back(range);
    std::vector<std::thread> workers;
    for (unsigned c = 0; c < chunks; ++c) {
        const std::uint64_t lo = lead * c / chunks;
        const std::uint64_t hi = lead * (c + 1) / chunks;
        workers.emplace_back([&k, &partial, c, lo, hi] { run_kernel(k, lo, hi, partial[c]); });
    }
    for (auto& w : workers) w.join();
    for (unsigned c = 1; c < chunks; ++c) partial[0].merge(partial[c]);
    return partial[0].sorted();
}

// Reduced enumeration plan for the shifted box y + (pZ/p^m)^n.
struct BasePlan {
    std::uint64_t constant = 0;      // f(y) mod p^m
    unsigned e_min = 0;              // min valuation of nonconstant coefficients of f(y + p t)
    std::uint64_t wmod = 1;          // p^(m - e_min)
    std::uint64_t multiplicity = 1;  // fiber size of the precision reduction
    std::vector<Kernel> components;  // independent variable groups, values in w-space

    std::uint64_t cost() const {
        std::uint64_t c = 0;
        for (const auto& k : components) c += k.points();
        return c;
    }
};

BasePlan make_base_plan(const Polynomial& f, const PadicLevel& level, std::span<const Integer> y) {
    const std::uint64_t p = level.p();
    const unsigned m = level.m();
    const std::uint64_t modulus = level.require_small_modulus();
    const std::size_t n = f.nvars();
    const Polynomial h = f.affine_substitute(y, Integer(p));

    struct Reduced {
        std::uint64_t coeff;
        unsigned val;
        const Exponents* exps;
    };
    std::vector<Reduced> terms;
    BasePlan plan;
    for (const auto& t : h.terms()) {
        const std::uint64_t c = reduce_mod(t.coeff, modulus);
        if (c == 0) continue;
        const bool is_const = std::all_of(t.exps.begin(), t.exps.end(), [](unsigned e) { return e == 0; });
        if (is_const) {
            plan.constant = c;
            continue;
        }
        terms.push_back({c, valuation_capped(c, p, m), &t.exps});
    }

    std::vector<unsigned> precision(n, 0);
    plan.e_min = m;
    for (const auto& t : terms) {
        plan.e_min = std::min(plan.e_min, t.val);
        for (std::size_t i = 0; i < n; ++i) {
            if ((*t.exps)[i]) precision[i] = std::max(precision[i], m - t.val);
        }
    }
    plan.wmod = level.power(m - plan.e_min);
    for (std::size_t i = 0; i < n; ++i) plan.multiplicity *= level.power(m - 1 - precision[i]);
    if (terms.empty()) return plan;

    // group variables that share a monomial
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (const auto& t : terms) {
        std::size_t first = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(*t.exps)[i]) continue;
            if (first == n) {
                first = i;
            } else {
                parent[find(i)] = find(first);
            }
        }
    }
    std::vector<std::size_t> group_of(n, n);
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) {
        if (precision[i] == 0) continue;
        const std::size_t root = find(i);
        if (group_of[root] == n) {
            group_of[root] = groups.size();
            groups.emplace_back();
        }
        groups[group_of[root]].push_back(i);
    }
    const std::uint64_t scale = level.power(plan.e_min);
    plan.components.resize(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g) {
        Kernel& k = plan.components[g];
        k.modulus = plan.wmod;
        for (std::size_t i : groups[g]) {
            k.offsets.push_back(0);
            k.strides.push_back(1);
            k.ranges.push_back(level.power(precision[i]));
        }
    }
    for (const auto& t : terms) {
        std::size_t first = n;
        for (std::size_t i = 0; i < n && first == n; ++i) {
            if ((*t.exps)[i]) first = i;
        }
        const std::size_t g = group_of[find(first)];
        KernelTerm kt{(t.coeff / scale) % plan.wmod, {}};
        for (std::size_t i : groups[g]) kt.exps.push_back((*t.exps)[i]);
        plan.components[g].terms.push_back(std::move(kt));
    }
    return plan;
}

std::vector<Entry> convolve(const std::vector<Entry>& a, const std::vector<Entry>& b, std::uint64_t wmod) {
    CountMap out(wmod);
    for (const auto& [ka, ca] : a) {
        for (const auto& [kb, cb] : b) out.add(addmod(ka, kb, wmod), ca * cb);
    }
    return out.sorted();
}

void execute_base_plan(const BasePlan& plan, const PadicLevel& level, unsigned threads, CountMap& out) {
    const std::uint64_t modulus = level.require_small_modulus();
    std::vector<Entry> acc{{0, 1}};
    for (const auto& k : plan.components) acc = convolve(acc, run_kernel_parallel(k, plan.wmod, threads), plan.wmod);
    const std::uint64_t scale = level.power(plan.e_min);
    for (const auto& [w, c] : acc) {
        const std::uint64_t r = addmod(plan.constant, mulmod(scale, w, modulus), modulus);
        out.add(r, c * plan.multiplicity);
    }
}

std::vector<std::vector<Integer>> base_points(const PadicLevel& level, const ResidueBox& box, std::size_t n) {
    std::vector<std::vector<Integer>> out;
    if (box.kind == BoxKind::Shifted) {
        std::vector<Integer> y;
        for (auto v : box.base) y.emplace_back(v);
        out.push_back(std::move(y));
        return out;
    }
    const auto count = checked_pow(level.p(), static_cast<unsigned>(n));
    if (!count) throw BudgetError(std::numeric_limits<std::uint64_t>::max(), 0);
    std::vector<std::uint64_t> digits(n, 0);
    for (std::uint64_t idx = 0; idx < *count; ++idx) {
        std::uint64_t rest = idx;
        std::vector<Integer> y(n);
        for (std::size_t i = n; i-- > 0;) {
            y[i] = rest % level.p();
            rest /= level.p();
        }
        out.push_back(std::move(y));
    }
    return out;
}

void validate(const Polynomial& f, const PadicLevel& level, const ResidueBox& box) {
    require_nonconstant(f);
    level.require_small_modulus();
    if (box.kind == BoxKind::Shifted && box.base.size() != f.nvars()) {
        throw UsageError("box base point has " + std::to_string(box.base.size()) + " coordinates, expected " +
                         std::to_string(f.nvars()));
    }
    if (!box_cardinality(level, box, f.nvars())) {
        throw BudgetError(std::numeric_limits<std::uint64_t>::max(), 0);
    }
}

Kernel direct_kernel(const Polynomial& f, const PadicLevel& level, const ResidueBox& box) {
    const std::uint64_t modulus = level.require_small_modulus();
    Kernel k;
    k.modulus = modulus;
    for (const auto& t : f.terms()) {
        const std::uint64_t c = reduce_mod(t.coeff, modulus);
        if (c) k.terms.push_back({c, t.exps});
    }
    for (std::size_t i = 0; i < f.nvars(); ++i) {
        if (box.kind == BoxKind::Full) {
            k.offsets.push_back(0);
            k.strides.push_back(1);
            k.ranges.push_back(modulus);
        } else {
            k.offsets.push_back(reduce_mod(Integer(box.base[i]), modulus));
            k.strides.push_back(level.p() % modulus);
            k.ranges.push_back(level.power(level.m() - 1));
        }
    }
    return k;
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
    return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max() : a + b;
}

}  // namespace

ValueHistogram::ValueHistogram(PadicLevel level, ResidueBox box, std::size_t nvars, std::vector<Entry> entries)
    : level_(std::move(level)), box_(std::move(box)), nvars_(nvars), entries_(std::move(entries)) {
    const auto size = box_cardinality(level_, box_, nvars_);
    if (!size) throw UsageError("box cardinality exceeds 63 bits");
    box_size_ = *size;
}

std::uint64_t ValueHistogram::count(std::uint64_t residue) const {
    const auto it = std::lower_bound(entries_.begin(), entries_.end(), Entry{residue, 0});
    return it != entries_.end() && it->first == residue ? it->second : 0;
}

std::uint64_t ValueHistogram::total() const {
    std::uint64_t t = 0;
    for (const auto& e : entries_) t += e.second;
    return t;
}

std::uint64_t enumeration_cost(const Polynomial& f, const PadicLevel& level, const ResidueBox& box,
                               EnumerationStrategy strategy) {
    validate(f, level, box);
    if (strategy == EnumerationStrategy::Direct) return *box_cardinality(level, box, f.nvars());
    std::uint64_t cost = 0;
    for (const auto& y : base_points(level, box, f.nvars())) {
        cost = saturating_add(cost, make_base_plan(f, level, y).cost());
    }
    return cost;
}

ValueHistogram build_histogram(const Polynomial& f, const PadicLevel& level, const ResidueBox& box,
                               const HistogramOptions& options) {
    validate(f, level, box);
    const std::uint64_t modulus = level.require_small_modulus();
    const unsigned threads = std::max(1U, options.threads);

    if (options.strategy == EnumerationStrategy::Direct) {
        const std::uint64_t cost = *box_cardinality(level, box, f.nvars());
        if (cost > options.budget) throw BudgetError(cost, options.budget);
        return ValueHistogram(level, box, f.nvars(), run_kernel_parallel(direct_kernel(f, level, box), modulus, threads));
    }

    const auto points = base_points(level, box, f.nvars());
    std::vector<BasePlan> plans;
    plans.reserve(points.size());
    std::uint64_t cost = 0;
    for (const auto& y : points) {
        plans.push_back(make_base_plan(f, level, y));
        cost = saturating_add(cost, plans.back().cost());
    }
    if (cost > options.budget) throw BudgetError(cost, options.budget);

    if (threads > 1 && plans.size() >= threads) {
        // split the base points across workers; each merges into its own map
        std::vector<CountMap> partial;
        partial.reserve(threads);
        for (unsigned c = 0; c < threads; ++c) partial.emplace_back(modulus);
        std::vector<std::thread> workers;
        for (unsigned c = 0; c < threads; ++c) {
            const std::size_t lo = plans.size() * c / threads;
            const std::size_t hi = plans.size() * (c + 1) / threads;
            workers.emplace_back([&, c, lo, hi] {
                for (std::size_t i = lo; i < hi; ++i) execute_base_plan(plans[i], level, 1, partial[c]);
            });
        }
        for (auto& w : workers) w.join();
        for (unsigned c = 1; c < threads; ++c) partial[0].merge(partial[c]);
        return ValueHistogram(level, box, f.nvars(), partial[0].sorted());
    }

    CountMap counts(modulus);
    for (const auto& plan : plans) execute_base_plan(plan, level, threads, counts);
    return ValueHistogram(level, box, f.nvars(), counts.sorted());
}

void write_histogram(std::ostream& out, const ValueHistogram& hist) {
    out << "#histogram p=" << hist.level().p() << " m=" << hist.level().m() << " n=" << hist.nvars()
        << " box=" << to_string(hist.box()) << '\n';
    for (const auto& [r, c] : hist.entries()) out << r << ',' << c << '\n';
}

ValueHistogram read_histogram(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw DataError("histogram", "missing header");
    std::uint64_t p = 0;
    unsigned m = 0;
    std::size_t n = 0;
    std::string box_text;
    {
        std::istringstream hs(header);
        std::string tag;
        hs >> tag;
        if (tag != "#histogram") throw DataError("histogram.header", "expected '#histogram'");
        std::string field;
        while (hs >> field) {
            const auto eq = field.find('=');
            if (eq == std::string::npos) throw DataError("histogram.header", "malformed field '" + field + "'");
            const std::string key = field.substr(0, eq);
            const std::string value = field.substr(eq + 1);
            try {
                if (key == "p") {
                    p = std::stoull(value);
                } else if (key == "m") {
                    m = static_cast<unsigned>(std::stoul(value));
                } else if (key == "n") {
                    n = std::stoul(value);
                } else if (key == "box") {
                    box_text = value;
                } else {
                    throw DataError("histogram.header", "unknown field '" + key + "'");
                }
            } catch (const std::logic_error&) {
                throw DataError("histogram.header." + key, "malformed value '" + value + "'");
            }
        }
    }
    if (n == 0) throw DataError("histogram.header.n", "missing or zero");
    ResidueBox box = ResidueBox::full();
    if (box_text.rfind("shifted(", 0) == 0 && box_text.back() == ')') {
        box.kind = BoxKind::Shifted;
        std::istringstream bs(box_text.substr(8, box_text.size() - 9));
        std::string part;
        while (std::getline(bs, part, ',')) box.base.push_back(std::stoll(part));
        if (box.base.size() != n) throw DataError("histogram.header.box", "base point dimension mismatch");
    } else if (box_text != "full") {
        throw DataError("histogram.header.box", "expected 'full' or 'shifted(...)'");
    }
    const PadicLevel level(p, m);
    const std::uint64_t modulus = level.require_small_modulus();
    std::vector<Entry> entries;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw DataError("histogram.line" + std::to_string(line_no), "expected residue,count");
        Entry e{std::stoull(line.substr(0, comma)), std::stoull(line.substr(comma + 1))};
        if (e.first >= modulus) throw DataError("histogram.line" + std::to_string(line_no), "residue out of range");
        if (!entries.empty() && entries.back().first >= e.first) {
            throw DataError("histogram.line" + std::to_string(line_no), "residues must be strictly ascending");
        }
        if (e.second) entries.push_back(e);
    }
    ValueHistogram hist(level, box, n, std::move(entries));
    if (hist.total() != hist.box_size()) throw DataError("histogram", "counts do not sum to the box cardinality");
    return hist;
}

}  // namespace padicsum
