#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "immse/codebook.hpp"
#include "immse/gaussian.hpp"

namespace immse::cli {

/// Comma-separated numbers.
std::vector<double> parse_list(const std::string& text, const char* what);

/// "start:stop:step", "start:stop@count", a single value, or a comma list.
/// Values are SNRs, in dB when `db` is set. Strictly increasing.
std::vector<Snr> parse_grid(const std::string& text, bool db);

std::vector<Snr> to_snrs(const std::vector<double>& values, bool db, const char* what);

/// "bpsk", "random:M=8,n=2", or inline rows "a,b;c,d".
DiscreteCodebook parse_codebook(const std::string& text, std::uint64_t seed);

/// One codeword per line; entries separated by commas or whitespace; '#' starts a comment.
DiscreteCodebook read_codebook_file(const std::string& path);

/// printf("%.17g").
std::string format_double(double x);

}  // namespace immse::cli
