#pragma once

#include "chi2/analysis.hpp"
#include "chi2/errors.hpp"
#include "chi2/fixedpoint.hpp"
#include "chi2/model.hpp"

#include "json.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace chi2 {

using json = nlohmann::json;

/// 17 significant digits, enough to round-trip any double.
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline constexpr std::string_view csv_header = "x,phi,psi";

inline std::string to_csv(const Grid& grid, const FieldPair& fields) {
    check_dimensions(grid, fields);
    std::string out;
    out.reserve(grid.size() * 64);
    out += csv_header;
    out += '\n';
    for (std::size_t k = 0; k < grid.size(); ++k) {
        out += format_double(grid[k]);
        out += ',';
        out += format_double(fields.phi[k]);
        out += ',';
        out += format_double(fields.psi[k]);
        out += '\n';
    }
    return out;
}

inline json profile_to_json(const Grid& grid, const FieldPair& fields) {
    check_dimensions(grid, fields);
    return json{{"x", std::vector<double>(grid.nodes().begin(), grid.nodes().end())},
                {"phi", fields.phi},
                {"psi", fields.psi}};
}

struct Profile {
    Grid grid;
    FieldPair fields;
};

namespace detail {

inline double parse_number(std::string_view text, std::size_t line) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t'))
        text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
        text.remove_suffix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
        throw ParseError("not a number: '" + std::string(text) + "'", line);
    if (!std::isfinite(v))
        throw ParseError("non-finite value", line);
    return v;
}

} // namespace detail

/// Reads `x,phi,psi` rows; the x column must form a uniform grid.
inline Profile parse_csv_profile(std::string_view text) {
    std::vector<double> xs, phi, psi;
    std::vector<std::size_t> rows;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos)
            end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        if (line.empty())
            continue;
        if (!header_seen) {
            header_seen = true;
            if (line == csv_header)
                continue;
        }
        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
        if (c2 == std::string_view::npos || line.find(',', c2 + 1) != std::string_view::npos)
            throw ParseError("expected three comma-separated columns", line_no);
        xs.push_back(detail::parse_number(line.substr(0, c1), line_no));
        phi.push_back(detail::parse_number(line.substr(c1 + 1, c2 - c1 - 1), line_no));
        psi.push_back(detail::parse_number(line.substr(c2 + 1), line_no));
        rows.push_back(line_no);
    }
    if (xs.size() < 3)
        throw ParseError("profile needs at least 3 rows", line_no);
    if (!(xs.back() > xs.front()))
        throw ParseError("x column must be increasing", line_no);

    Grid grid(Domain(xs.front(), xs.back()), xs.size());
    const double tol = 1e-9 * grid.domain().length();
    for (std::size_t k = 0; k < xs.size(); ++k) {
        if (std::abs(xs[k] - grid[k]) > tol)
            throw ParseError("x column is not a uniform grid", rows[k]);
    }
    return {std::move(grid), {std::move(phi), std::move(psi)}};
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open '" + path + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out)
        throw IoError("write to '" + path + "' failed");
}

inline json to_json(const SystemParams& p) {
    return json{{"r", p.r()}, {"s", p.s()}, {"alpha", p.alpha()}};
}

inline json to_json(const Certificate& c) {
    return json{
        {"inputs", {{"params", to_json(c.params)},
                    {"length", c.length},
                    {"M", c.bounds.M},
                    {"Mstar", c.bounds.Mstar}}},
        {"lipschitz", {{"L11", c.lipschitz.L11},
                       {"L12", c.lipschitz.L12},
                       {"L21", c.lipschitz.L21},
                       {"L22", c.lipschitz.L22}}},
        {"L_max", c.L_max},
        {"A", c.A},
        {"K", c.K},
        {"exists_ok", c.exists_ok},
        {"unique_ok", c.unique_ok},
    };
}

inline json to_json(const PicardRecord& r) {
    return json{{"iteration", r.iteration},
                {"diff_phi", r.diff_phi},
                {"diff_psi", r.diff_psi},
                {"bound_phi", r.bound_phi},
                {"bound_psi", r.bound_psi},
                {"bound_applicable", r.bound_applicable},
                {"endpoint_phi", r.endpoint_phi},
                {"endpoint_psi", r.endpoint_psi}};
}

inline json to_json(const std::vector<PicardRecord>& trace) {
    json arr = json::array();
    for (const auto& r : trace)
        arr.push_back(to_json(r));
    return arr;
}

inline json to_json(const std::vector<GreenRecord>& trace) {
    json arr = json::array();
    for (const auto& r : trace)
        arr.push_back({{"iteration", r.iteration}, {"diff_phi", r.diff_phi}, {"diff_psi", r.diff_psi}});
    return arr;
}

} // namespace chi2
