#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vrigid/direction_set.hpp"
#include "vrigid/function_model.hpp"

namespace vrigid {

namespace iodetail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline double parse_number(const std::string& text, std::size_t line) {
    try {
        std::size_t used = 0;
        double v = std::stod(text, &used);
        if (used != text.size()) throw ParseError("trailing characters after number", line, used + 1);
        return v;
    } catch (const std::invalid_argument&) {
        throw ParseError("expected a number, got '" + text + "'", line, 1);
    } catch (const std::out_of_range&) {
        throw ParseError("number out of range: '" + text + "'", line, 1);
    }
}

/// Fixed-width shortest-round-trip formatting so outputs are byte-stable.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // prefer the shortest representation that round-trips
    for (int prec = 1; prec < 17; ++prec) {
        char cand[40];
        std::snprintf(cand, sizeof(cand), "%.*g", prec, v);
        if (std::strtod(cand, nullptr) == v) return cand;
    }
    return buf;
}

}  // namespace iodetail

/// Parses the `key = value` function description format:
///   f(x,y) = <expression>            expression body
///   family = affine|expstrip|expaffine  closed-form body, with a/b/d/k lines
///   s(y) = <expression>              the strip curve (expstrip only)
///   rotation_z = <radians>
/// Blank lines and lines starting with # are ignored; unknown keys rejected.
inline FunctionSpec parse_function_file_text(const std::string& text) {
    std::istringstream in(text);
    std::string lineText;
    std::size_t lineNo = 0;

    std::optional<std::string> fexpr, family, sexpr;
    std::map<std::string, double> params;
    double rotation = 0.0;
    std::size_t kLine = 0;

    while (std::getline(in, lineText)) {
        ++lineNo;
        std::string line = iodetail::trim(lineText);
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected 'key = value'", lineNo, 1);
        std::string key = iodetail::trim(line.substr(0, eq));
        std::string value = iodetail::trim(line.substr(eq + 1));
        if (value.empty()) throw ParseError("missing value for '" + key + "'", lineNo, eq + 2);

        if (key == "f(x,y)") {
            fexpr = value;
        } else if (key == "family") {
            if (value != "affine" && value != "expstrip" && value != "expaffine")
                throw ParseError("unknown family '" + value + "'", lineNo, eq + 2);
            family = value;
        } else if (key == "s(y)") {
            sexpr = value;
        } else if (key == "rotation_z") {
            rotation = iodetail::parse_number(value, lineNo);
        } else if (key == "a" || key == "b" || key == "d" || key == "k") {
            params[key] = iodetail::parse_number(value, lineNo);
            if (key == "k") kLine = lineNo;
        } else {
            throw ParseError("unknown key '" + key + "'", lineNo, 1);
        }
    }

    if (fexpr && family)
        throw ParseError("both f(x,y) and family given; pick one body", lineNo, 1);
    if (fexpr) {
        try {
            return FunctionSpec(Expression::parse(*fexpr), rotation);
        } catch (const ParseError& e) {
            throw ParseError(std::string("in f(x,y): ") + e.what(), 0, e.column);
        }
    }
    if (!family) throw ParseError("missing f(x,y) or family", lineNo == 0 ? 1 : lineNo, 1);

    auto get = [&](const std::string& k, double fallback) {
        auto it = params.find(k);
        return it == params.end() ? fallback : it->second;
    };
    if (*family == "affine")
        return FunctionSpec(Affine{get("a", 0), get("b", 0), get("d", 0)}, rotation);
    double k = get("k", 1.0);
    if (k == 0.0) throw ParseError("k must be nonzero", kLine ? kLine : lineNo, 1);
    if (*family == "expstrip") {
        if (!sexpr) throw ParseError("expstrip needs an s(y) line", lineNo, 1);
        return FunctionSpec(ExpStrip{get("a", 0), k, CurveSpec::fromExpression(*sexpr)}, rotation);
    }
    return FunctionSpec(ExpAffine{get("a", 0), get("b", 1), get("d", 1), k}, rotation);
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline FunctionSpec parse_function_file(const std::string& path) {
    return parse_function_file_text(read_file(path));
}

/// Parses `x,y,z` CSV rows in row-major lattice order into a bilinear grid
/// body. The lattice must be rectangular with uniform spacing.
inline FunctionSpec parse_grid_csv_text(const std::string& text) {
    std::istringstream in(text);
    std::string lineText;
    std::size_t lineNo = 0;

    struct Row {
        double x, y, z;
        std::size_t line;
    };
    std::vector<Row> rows;
    while (std::getline(in, lineText)) {
        ++lineNo;
        std::string line = iodetail::trim(lineText);
        if (line.empty()) continue;
        if (lineNo == 1) {
            if (line != "x,y,z") throw ParseError("grid CSV must start with header x,y,z", 1, 1);
            continue;
        }
        std::istringstream ls(line);
        std::string fx, fy, fz;
        if (!std::getline(ls, fx, ',') || !std::getline(ls, fy, ',') || !std::getline(ls, fz))
            throw ParseError("expected three comma-separated fields", lineNo, 1);
        rows.push_back({iodetail::parse_number(iodetail::trim(fx), lineNo),
                        iodetail::parse_number(iodetail::trim(fy), lineNo),
                        iodetail::parse_number(iodetail::trim(fz), lineNo), lineNo});
    }
    if (rows.size() < 4) throw ParseError("grid CSV needs at least a 2x2 lattice", lineNo, 1);

    // row-major: x varies fastest; the first repeat of x0 starts a new y-row
    std::size_t nx = 1;
    while (nx < rows.size() && rows[nx].x != rows[0].x) ++nx;
    if (nx == rows.size() || rows.size() % nx != 0)
        throw ParseError("grid is not a rectangular lattice", rows.back().line, 1);
    std::size_t ny = rows.size() / nx;
    if (nx < 2 || ny < 2)
        throw ParseError("grid CSV needs at least a 2x2 lattice", rows.back().line, 1);

    double hx = rows[1].x - rows[0].x;
    double hy = rows[nx].y - rows[0].y;
    auto near = [](double a, double b) {
        return std::abs(a - b) <= 1e-9 * (1.0 + std::abs(a) + std::abs(b));
    };
    std::vector<std::vector<double>> values(ny, std::vector<double>(nx));
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i) {
            const Row& r = rows[j * nx + i];
            double ex = rows[0].x + hx * double(i);
            double ey = rows[0].y + hy * double(j);
            if (!near(r.x, ex) || !near(r.y, ey))
                throw ParseError("grid is not a rectangular lattice", r.line, 1);
            values[j][i] = r.z;
        }
    return FunctionSpec(GridBody({rows[0].x, rows[0].y}, {hx, hy}, std::move(values)));
}

inline FunctionSpec parse_grid_csv(const std::string& path) {
    return parse_grid_csv_text(read_file(path));
}

// --- Exports -----------------------------------------------------------------

inline std::string profile_csv(const H3Profile& profile) {
    std::ostringstream out;
    out << "theta,top,bottom,topSaturated,bottomSaturated\n";
    for (int j = 0; j < profile.nbins; ++j)
        out << iodetail::format_double(profile.binTheta(j)) << ','
            << iodetail::format_double(profile.top[j]) << ','
            << iodetail::format_double(profile.bottom[j]) << ','
            << int(profile.topSaturated[j]) << ',' << int(profile.bottomSaturated[j]) << '\n';
    return out.str();
}

inline std::string sample_csv(const DirectionSample& sample) {
    std::ostringstream out;
    out << "x,y,z\n";
    for (const auto& d : sample.directions)
        out << iodetail::format_double(d.v.x) << ',' << iodetail::format_double(d.v.y) << ','
            << iodetail::format_double(d.v.z) << '\n';
    return out.str();
}

/// Plain-text grayscale raster (portable graymap, P2): equirectangular in
/// (azimuth, z), 255 where a sampled direction lands, 0 elsewhere. Row 0 is
/// z = +1; azimuth 0 is column 0.
inline std::string render_raster(const DirectionSample& sample, int width = 720,
                                 int height = 360) {
    if (width < 1 || height < 1) throw UsageError("raster dimensions must be positive");
    std::vector<std::vector<int>> px(height, std::vector<int>(width, 0));
    for (const auto& d : sample.directions) {
        double az = std::atan2(d.v.y, d.v.x);
        if (az < 0) az += 2.0 * M_PI;
        int col = std::min(width - 1, int(az / (2.0 * M_PI) * width));
        int row = std::min(height - 1, std::max(0, int((1.0 - d.v.z) / 2.0 * height)));
        px[row][col] = 255;
    }
    std::ostringstream out;
    out << "P2\n" << width << ' ' << height << "\n255\n";
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) out << px[r][c] << (c + 1 == width ? '\n' : ' ');
    }
    return out.str();
}

inline void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << contents;
    if (!out) throw IoError("failed writing " + path);
}

}  // namespace vrigid
