#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "padicsum/arith.hpp"
#include "padicsum/chargauss.hpp"
#include "padicsum/harness.hpp"
#include "padicsum/polynomial.hpp"

namespace padicsum::cli {

// "5,7,11", "5..37" or a mix; ranges keep only primes.
std::vector<std::uint64_t> parse_primes(const std::string& text);
// "2,3,5" or "2..6".
std::vector<unsigned> parse_levels(const std::string& text);
std::vector<std::int64_t> parse_point(const std::string& text);
std::vector<Integer> parse_integers(const std::string& text);
// "d:j"
CharLabel parse_char_label(const std::string& text);
// "lambda:beta,lambda:beta"
std::vector<Candidate> parse_candidates(const std::string& text);

// nvars == 0 infers the count from the highest variable that occurs.
Polynomial read_polynomial(const std::string& text, std::size_t& nvars);

// Splices the keys of the --config JSON document into argv after the
// subcommand name, so options given on the command line (parsed later) win.
std::vector<std::string> expand_config(const std::vector<std::string>& argv,
                                       const std::set<std::string>& subcommands);

}  // namespace padicsum::cli
