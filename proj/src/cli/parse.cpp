#include "parse.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "immse/errors.hpp"

namespace immse::cli {

namespace {

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> parts;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, sep)) {
        parts.push_back(trim(item));
    }
    return parts;
}

double parse_number(const std::string& token, const char* what)
{
    double value = 0.0;
    const auto* begin = token.data();
    const auto* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (token.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value)) {
        throw InvalidArgument(std::string(what) + ": cannot parse '" + token + "' as a number");
    }
    return value;
}

std::size_t parse_count(const std::string& token, const char* what)
{
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
        throw InvalidArgument(std::string(what) + ": cannot parse '" + token + "' as a count");
    }
    return value;
}

}  // namespace

std::vector<double> parse_list(const std::string& text, const char* what)
{
    std::vector<double> values;
    for (const auto& part : split(text, ',')) {
        values.push_back(parse_number(part, what));
    }
    detail::require(!values.empty(), std::string(what) + " must not be empty");
    return values;
}

std::vector<Snr> to_snrs(const std::vector<double>& values, bool db, const char* what)
{
    std::vector<Snr> out;
    for (double v : values) {
        if (db) {
            out.push_back(Snr::from_db(v));
        } else {
            detail::require(v >= 0.0, std::string(what) + " must be nonnegative");
            out.push_back(Snr(v));
        }
    }
    return out;
}

std::vector<Snr> parse_grid(const std::string& text, bool db)
{
    const std::string spec = trim(text);
    std::vector<double> values;
    if (const auto at = spec.find('@'); at != std::string::npos) {
        const auto range = split(spec.substr(0, at), ':');
        detail::require(range.size() == 2, "grid: expected start:stop@count");
        const double start = parse_number(range[0], "grid start");
        const double stop = parse_number(range[1], "grid stop");
        const std::size_t count = parse_count(trim(spec.substr(at + 1)), "grid count");
        detail::require(count >= 1, "grid count must be at least 1");
        detail::require(count == 1 || stop > start, "grid stop must exceed start");
        for (std::size_t i = 0; i < count; ++i) {
            values.push_back(i + 1 == count && count > 1
                                 ? stop
                                 : start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1));
        }
    } else if (spec.find(':') != std::string::npos) {
        const auto range = split(spec, ':');
        detail::require(range.size() == 3, "grid: expected start:stop:step");
        const double start = parse_number(range[0], "grid start");
        const double stop = parse_number(range[1], "grid stop");
        const double step = parse_number(range[2], "grid step");
        detail::require(step > 0.0, "grid step must be positive");
        detail::require(stop >= start, "grid stop must not be below start");
        const double span = (stop - start) / step;
        detail::require(span < 1e8, "grid has too many points");
        const auto intervals = static_cast<std::size_t>(std::floor(span + 1e-9));
        for (std::size_t i = 0; i <= intervals; ++i) {
            values.push_back(start + step * static_cast<double>(i));
        }
        // A stop that the step reaches up to rounding is taken verbatim.
        if (std::abs(values.back() - stop) <= 1e-9 * step) {
            values.back() = stop;
        }
    } else {
        values = parse_list(spec, "grid");
    }

    auto grid = to_snrs(values, db, "grid");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        detail::require(grid[i - 1] < grid[i], "grid must be strictly increasing");
    }
    return grid;
}

DiscreteCodebook parse_codebook(const std::string& text, std::uint64_t seed)
{
    const std::string spec = trim(text);
    if (spec == "bpsk") {
        return DiscreteCodebook::bpsk();
    }
    if (spec.rfind("random:", 0) == 0) {
        std::size_t m = 0;
        std::size_t n = 0;
        for (const auto& kv : split(spec.substr(7), ',')) {
            const auto eq = kv.find('=');
            detail::require(eq != std::string::npos, "codebook: expected random:M=<count>,n=<dim>");
            const auto key = trim(kv.substr(0, eq));
            const auto value = parse_count(trim(kv.substr(eq + 1)), "codebook size");
            if (key == "M") {
                m = value;
            } else if (key == "n") {
                n = value;
            } else {
                throw InvalidArgument("codebook: unknown key '" + key + "'");
            }
        }
        detail::require(m >= 1 && n >= 1, "codebook: random generator needs M >= 1 and n >= 1");
        return random_gaussian_codebook(m, n, seed);
    }
    std::vector<std::vector<double>> rows;
    for (const auto& row : split(spec, ';')) {
        rows.push_back(parse_list(row, "codeword"));
    }
    return DiscreteCodebook::from_rows(rows);
}

DiscreteCodebook read_codebook_file(const std::string& path)
{
    std::ifstream in(path);
    detail::require(static_cast<bool>(in), "cannot open codebook file '" + path + "'");
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) {
            continue;
        }
        for (char& c : line) {
            if (c == ',') {
                c = ' ';
            }
        }
        std::stringstream fields(line);
        std::vector<double> row;
        std::string token;
        while (fields >> token) {
            row.push_back(parse_number(token, "codeword"));
        }
        rows.push_back(std::move(row));
    }
    detail::require(!rows.empty(), "codebook file '" + path + "' holds no codewords");
    return DiscreteCodebook::from_rows(rows);
}

std::string format_double(double x)
{
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.17g", x);
    return buffer;
}

}  // namespace immse::cli
