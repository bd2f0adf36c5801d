#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "padicsum/level.hpp"
#include "padicsum/polynomial.hpp"

namespace padicsum {

inline constexpr std::uint64_t kDefaultBudget = 100'000'000;

enum class EnumerationStrategy {
    // Enumerate every point of the box.
    Direct,
    // Expand f(y + p t), enumerate each t_i only modulo the power of p the
    // expansion actually depends on, and convolve independent variable groups.
    Reduced,
};

struct HistogramOptions {
    std::uint64_t budget = kDefaultBudget;  // max points actually evaluated
    unsigned threads = 1;
    EnumerationStrategy strategy = EnumerationStrategy::Reduced;
};

// Exact counts #{x in box : f(x) = r mod p^m}. Entries are sorted by residue
// and carry nonzero counts only.
class ValueHistogram {
public:
    using Entry = std::pair<std::uint64_t, std::uint64_t>;

    ValueHistogram(PadicLevel level, ResidueBox box, std::size_t nvars, std::vector<Entry> entries);

    const PadicLevel& level() const noexcept { return level_; }
    const ResidueBox& box() const noexcept { return box_; }
    std::size_t nvars() const noexcept { return nvars_; }
    const std::vector<Entry>& entries() const noexcept { return entries_; }

    std::uint64_t count(std::uint64_t residue) const;
    std::uint64_t total() const;
    std::uint64_t box_size() const noexcept { return box_size_; }

    bool operator==(const ValueHistogram& other) const {
        return level_ == other.level_ && box_ == other.box_ && nvars_ == other.nvars_ && entries_ == other.entries_;
    }

private:
    PadicLevel level_;
    ResidueBox box_;
    std::size_t nvars_;
    std::vector<Entry> entries_;
    std::uint64_t box_size_;
};

// Throws UsageError (constant f, dimension mismatch), BudgetError.
ValueHistogram build_histogram(const Polynomial& f, const PadicLevel& level, const ResidueBox& box,
                               const HistogramOptions& options = {});

// Number of points the given strategy would evaluate; used for budget checks.
std::uint64_t enumeration_cost(const Polynomial& f, const PadicLevel& level, const ResidueBox& box,
                               EnumerationStrategy strategy);

// Text format:
//   #histogram p=<p> m=<m> n=<n> box=<full|shifted(y1,...,yn)>
//   residue,count        (one line per nonzero count, ascending residue)
void write_histogram(std::ostream& out, const ValueHistogram& hist);
ValueHistogram read_histogram(std::istream& in);

}  // namespace padicsum
