#pragma once

// CSV emission (the canonical output) and minimal SVG plots.

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tripod/config.hpp"
#include "tripod/evolution.hpp"
#include "tripod/spectra.hpp"

namespace tripod {

/// 17 significant digits in %g style; parsing the text back gives the same
/// double bit for bit.
inline std::string format_double(double v)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    if (ec != std::errc())
        throw IoError("cannot format value");
    return std::string(buf, ptr);
}

inline double parse_double(const std::string& s, const std::string& where)
{
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw IoError(where + ": not a number: '" + s + "'");
    return v;
}

namespace detail {

inline void join_row(std::string& out, const std::vector<std::string>& cells)
{
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i)
            out += ',';
        out += cells[i];
    }
}

inline void write_text(const std::string& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw IoError("cannot open '" + path + "' for writing");
    f << text;
    f.close();
    if (!f)
        throw IoError("write to '" + path + "' failed");
}

inline std::string read_text(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline std::vector<std::string> split(const std::string& line, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto p = line.find(sep, start);
        out.push_back(line.substr(start, p == std::string::npos ? std::string::npos : p - start));
        if (p == std::string::npos)
            break;
        start = p + 1;
    }
    return out;
}

} // namespace detail

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

/// Header is the axis name followed by every column in order; the standard
/// columns come first. Lines end in '\n' and there is no trailing blank line.
inline std::string spectrum_csv(const SpectrumSeries& s)
{
    std::string out;
    std::vector<std::string> cells{s.axis_name};
    for (const auto& c : s.columns) {
        if (c.values.size() != s.axis.size())
            throw PreconditionError("column '" + c.name + "' does not match the axis length");
        cells.push_back(c.name);
    }
    detail::join_row(out, cells);
    for (std::size_t i = 0; i < s.axis.size(); ++i) {
        out += '\n';
        cells.assign(1, format_double(s.axis[i]));
        for (const auto& c : s.columns)
            cells.push_back(format_double(c.values[i]));
        detail::join_row(out, cells);
    }
    out += '\n';
    return out;
}

inline void write_spectrum_csv(const SpectrumSeries& s, const std::string& path)
{
    detail::write_text(path, spectrum_csv(s));
}

inline SpectrumSeries parse_spectrum_csv(const std::string& text, const std::string& where = "csv")
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw IoError(where + ": empty file");
    const auto header = detail::split(line, ',');
    if (header.size() < 2)
        throw IoError(where + ": header needs an axis and at least one column");
    SpectrumSeries s;
    s.axis_name = header[0];
    for (std::size_t c = 1; c < header.size(); ++c)
        s.columns.push_back({header[c], {}});
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        const auto cells = detail::split(line, ',');
        if (cells.size() != header.size())
            throw IoError(where + ": line " + std::to_string(lineno) + " has " + std::to_string(cells.size()) +
                          " fields, expected " + std::to_string(header.size()));
        const std::string ctx = where + ":" + std::to_string(lineno);
        s.axis.push_back(parse_double(cells[0], ctx));
        for (std::size_t c = 1; c < cells.size(); ++c)
            s.columns[c - 1].values.push_back(parse_double(cells[c], ctx));
    }
    return s;
}

inline SpectrumSeries read_spectrum_csv(const std::string& path)
{
    return parse_spectrum_csv(detail::read_text(path), path);
}

/// Long format, one row per grid point, row-major in delta then delta_p.
inline std::string map_csv(const Map2D& m)
{
    if (m.im_rho24.size() != m.d_axis.size() * m.dp_axis.size())
        throw PreconditionError("map data does not match its axes");
    std::string out = "delta_khz,delta_p_khz,im_rho24";
    for (std::size_t r = 0; r < m.d_axis.size(); ++r)
        for (std::size_t c = 0; c < m.dp_axis.size(); ++c) {
            out += '\n';
            detail::join_row(out, {format_double(m.d_axis[r]), format_double(m.dp_axis[c]), format_double(m.at(r, c))});
        }
    out += '\n';
    return out;
}

inline void write_map_csv(const Map2D& m, const std::string& path)
{
    detail::write_text(path, map_csv(m));
}

inline const std::vector<std::string>& evolution_columns()
{
    static const std::vector<std::string> names{"time_ms", "rho11", "rho22", "rho33", "rho44",
                                                "im_rho24", "re_rho12", "re_rho13", "re_rho23", "trace"};
    return names;
}

inline std::string evolution_csv(const Trajectory& traj)
{
    std::string out;
    detail::join_row(out, evolution_columns());
    for (const auto& sample : traj) {
        const auto& r = sample.rho;
        out += '\n';
        detail::join_row(out, {format_double(sample.time), format_double(r(0, 0).real()),
                               format_double(r(1, 1).real()), format_double(r(2, 2).real()),
                               format_double(r(3, 3).real()), format_double(coherence(r, 2, 4).imag()),
                               format_double(coherence(r, 1, 2).real()), format_double(coherence(r, 1, 3).real()),
                               format_double(coherence(r, 2, 3).real()), format_double(r.trace().real())});
    }
    out += '\n';
    return out;
}

inline void write_evolution_csv(const Trajectory& traj, const std::string& path)
{
    detail::write_text(path, evolution_csv(traj));
}

// ---------------------------------------------------------------------------
// SVG
// ---------------------------------------------------------------------------

namespace detail {

struct Frame
{
    double x0, x1, y0, y1;
    double w = 640, h = 400, margin = 50;

    double px(double x) const { return margin + (x - x0) / (x1 - x0) * (w - 2 * margin); }
    double py(double y) const { return h - margin - (y - y0) / (y1 - y0) * (h - 2 * margin); }
};

inline std::string num(double v)
{
    std::ostringstream ss;
    ss.precision(6);
    ss << v;
    return ss.str();
}

inline std::string svg_open(const Frame& f, const std::string& title)
{
    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(f.w) + "\" height=\"" + num(f.h) +
                    "\">\n";
    s += "<rect x=\"" + num(f.margin) + "\" y=\"" + num(f.margin) + "\" width=\"" + num(f.w - 2 * f.margin) +
         "\" height=\"" + num(f.h - 2 * f.margin) + "\" fill=\"none\" stroke=\"black\"/>\n";
    s += "<text x=\"" + num(f.margin) + "\" y=\"" + num(f.margin - 10) + "\" font-size=\"14\">" + title + "</text>\n";
    s += "<text x=\"" + num(f.margin) + "\" y=\"" + num(f.h - f.margin + 18) + "\" font-size=\"11\">" + num(f.x0) +
         "</text>\n";
    s += "<text x=\"" + num(f.w - f.margin) + "\" y=\"" + num(f.h - f.margin + 18) +
         "\" font-size=\"11\" text-anchor=\"end\">" + num(f.x1) + "</text>\n";
    return s;
}

} // namespace detail

/// Polyline plot of the named columns against the axis.
inline std::string spectrum_svg(const SpectrumSeries& s, const std::vector<std::string>& columns,
                                const std::string& title)
{
    if (s.axis.size() < 2)
        throw PreconditionError("plot needs at least two points");
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& name : columns)
        for (double v : s.column(name)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    if (!(hi > lo)) {
        lo -= 1.0;
        hi += 1.0;
    }
    const detail::Frame f{s.axis.front(), s.axis.back(), lo, hi};
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};
    std::string out = detail::svg_open(f, title);
    for (std::size_t k = 0; k < columns.size(); ++k) {
        const auto& v = s.column(columns[k]);
        out += "<polyline fill=\"none\" stroke=\"" + std::string(colors[k % 7]) + "\" points=\"";
        for (std::size_t i = 0; i < v.size(); ++i)
            out += detail::num(f.px(s.axis[i])) + "," + detail::num(f.py(v[i])) + " ";
        out += "\"/>\n";
        out += "<text x=\"" + detail::num(f.w - f.margin) + "\" y=\"" + detail::num(f.margin + 14.0 * (k + 1)) +
               "\" font-size=\"11\" text-anchor=\"end\" fill=\"" + colors[k % 7] + "\">" + columns[k] + "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

inline void write_spectrum_svg(const SpectrumSeries& s, const std::vector<std::string>& columns,
                               const std::string& title, const std::string& path)
{
    detail::write_text(path, spectrum_svg(s, columns, title));
}

/// Grey-scale heat map, delta on the vertical axis.
inline std::string map_svg(const Map2D& m, const std::string& title)
{
    if (m.dp_axis.size() < 2 || m.d_axis.size() < 2)
        throw PreconditionError("heat map needs at least a 2x2 grid");
    const auto [mn, mx] = std::minmax_element(m.im_rho24.begin(), m.im_rho24.end());
    const double lo = *mn, span = (*mx > *mn) ? *mx - *mn : 1.0;
    const detail::Frame f{m.dp_axis.front(), m.dp_axis.back(), m.d_axis.front(), m.d_axis.back()};
    const double cw = (f.w - 2 * f.margin) / static_cast<double>(m.dp_axis.size());
    const double ch = (f.h - 2 * f.margin) / static_cast<double>(m.d_axis.size());
    std::string out = detail::svg_open(f, title);
    for (std::size_t r = 0; r < m.d_axis.size(); ++r)
        for (std::size_t c = 0; c < m.dp_axis.size(); ++c) {
            const int g = static_cast<int>(std::lround(255.0 * (1.0 - (m.at(r, c) - lo) / span)));
            out += "<rect x=\"" + detail::num(f.margin + cw * c) + "\" y=\"" +
                   detail::num(f.h - f.margin - ch * (r + 1)) + "\" width=\"" + detail::num(cw) + "\" height=\"" +
                   detail::num(ch) + "\" fill=\"rgb(" + std::to_string(g) + "," + std::to_string(g) + "," +
                   std::to_string(g) + ")\"/>\n";
        }
    out += "</svg>\n";
    return out;
}

inline void write_map_svg(const Map2D& m, const std::string& title, const std::string& path)
{
    detail::write_text(path, map_svg(m, title));
}

/// Reads a whole config file and parses it.
inline Config load_config(const std::string& path)
{
    return parse_config(detail::read_text(path));
}

} // namespace tripod
