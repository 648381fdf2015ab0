#ifndef PLENOPTIC_CSV_HPP
#define PLENOPTIC_CSV_HPP

// Comma-separated numeric grids. Lines starting with '#' are comments;
// non-finite values are spelled nan, inf and -inf.

#include <cmath>
#include <cstdio>
#include <limits>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "plenoptic/error.hpp"
#include "plenoptic/image.hpp"

namespace plenoptic::csv {

inline std::string format_number(double v, int precision = 6)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, v);
    return buf;
}

inline double parse_number(const std::string& token)
{
    std::string t;
    for (char ch : token)
        if (!std::isspace(static_cast<unsigned char>(ch)))
            t += ch;
    if (t == "nan" || t == "NaN")
        return std::nan("");
    if (t == "inf" || t == "+inf")
        return std::numeric_limits<double>::infinity();
    if (t == "-inf")
        return -std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (t.empty() || used != t.size())
        throw error("csv: cannot parse '" + token + "' as a number");
    return v;
}

inline void write_grid(std::ostream& out, const ImageF& grid, int precision = 6,
                       const std::vector<std::string>& comments = {})
{
    for (const auto& c : comments)
        out << "# " << c << '\n';
    for (int y = 0; y < grid.height(); ++y) {
        for (int x = 0; x < grid.width(); ++x) {
            if (x)
                out << ',';
            out << format_number(grid(x, y), precision);
        }
        out << '\n';
    }
}

inline ImageF read_grid(std::istream& in)
{
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line[0] == '#')
            continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            row.push_back(parse_number(cell));
        if (!rows.empty() && row.size() != rows.front().size())
            throw error("csv: ragged row " + std::to_string(rows.size() + 1));
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        return {};
    ImageF grid(static_cast<int>(rows.front().size()), static_cast<int>(rows.size()));
    for (int y = 0; y < grid.height(); ++y)
        for (int x = 0; x < grid.width(); ++x)
            grid(x, y) = rows[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)];
    return grid;
}

} // namespace plenoptic::csv

#endif // PLENOPTIC_CSV_HPP
