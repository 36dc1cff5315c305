#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <json.hpp>
#include <openssl/evp.h>

#include "flatfix/core/errors.hpp"
#include "flatfix/core/polyline.hpp"
#include "flatfix/dynamics/sweep.hpp"

namespace flatfix::cli {

inline constexpr const char* tool_version = "0.1.0";

// Shortest round-trip decimal form; long double keeps values below the double range.
template <class Real>
std::string fmt_num(Real v) {
    char buf[64];
    if constexpr (std::is_same_v<Real, long double>)
        std::snprintf(buf, sizeof buf, "%.21Lg", v);
    else
        std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(v));
    return buf;
}

inline std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw Error("sha256: digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

inline std::string utc_timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Sweep CSV: one row per fixed-point record or emptiness certificate. A
// certificate whose margin is not positive is reported as ambiguous.
template <class Real>
std::string sweep_csv(const dynamics::SweepResult<Real>& res) {
    std::ostringstream out;
    out << "epsilon,status,x,y,residual,index,min_displacement,grid_step\n";
    for (const auto& e : res.entries) {
        for (const auto& r : e.records) {
            out << fmt_num(e.epsilon) << ",fixed," << fmt_num(r.location.x) << ',' << fmt_num(r.location.y) << ','
                << fmt_num(r.residual) << ',';
            if (r.index) out << *r.index;
            out << ",,\n";
        }
        if (e.certificate) {
            const auto& c = *e.certificate;
            out << fmt_num(e.epsilon) << ',' << (c.certified() ? "empty" : "ambiguous") << ",,,,,"
                << fmt_num(c.min_displacement) << ',' << fmt_num(c.grid_step) << '\n';
        }
    }
    return out.str();
}

struct NamedPolyline {
    std::string name;
    std::vector<std::pair<double, double>> points;
    bool start_ray = false, end_ray = false;
};

template <class Real>
NamedPolyline named(const std::string& name, const Polyline<Real>& L) {
    NamedPolyline n{name, {}, L.start_ray.has_value(), L.end_ray.has_value()};
    for (const auto& v : L.vertices) n.points.emplace_back(static_cast<double>(v.x), static_cast<double>(v.y));
    return n;
}

// Line-geometry CSV: curve,vertex,x,y,ray where ray marks the end vertices
// continued by a ray.
inline std::string polylines_csv(const std::vector<NamedPolyline>& curves) {
    std::ostringstream out;
    out << "curve,vertex,x,y,ray\n";
    for (const auto& c : curves) {
        for (std::size_t i = 0; i < c.points.size(); ++i) {
            const bool ray = (i == 0 && c.start_ray) || (i + 1 == c.points.size() && c.end_ray);
            out << c.name << ',' << i << ',' << fmt_num(c.points[i].first) << ',' << fmt_num(c.points[i].second) << ','
                << (ray ? 1 : 0) << '\n';
        }
    }
    return out.str();
}

namespace detail {

struct Frame {
    double x0, x1, y0, y1;
    static constexpr double W = 800, H = 600, M = 60;
    double px(double x) const { return M + (x - x0) / (x1 - x0) * (W - 2 * M); }
    double py(double y) const { return H - M - (y - y0) / (y1 - y0) * (H - 2 * M); }
};

inline std::string svg_header(const std::string& title) {
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"0 0 800 600\">\n"
        << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n"
        << "<text x=\"400\" y=\"30\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" << title
        << "</text>\n";
    return out.str();
}

inline std::string svg_axes(const Frame& f, const std::string& xlabel, const std::string& ylabel) {
    std::ostringstream out;
    out << "<rect x=\"60\" y=\"60\" width=\"680\" height=\"480\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double x = f.x0 + (f.x1 - f.x0) * i / 4, y = f.y0 + (f.y1 - f.y0) * i / 4;
        out << "<text x=\"" << f.px(x) << "\" y=\"560\" text-anchor=\"middle\" font-size=\"11\">" << fmt_num(x)
            << "</text>\n";
        out << "<text x=\"55\" y=\"" << f.py(y) << "\" text-anchor=\"end\" font-size=\"11\">" << fmt_num(y)
            << "</text>\n";
    }
    out << "<text x=\"400\" y=\"585\" text-anchor=\"middle\" font-size=\"13\">" << xlabel << "</text>\n"
        << "<text x=\"15\" y=\"300\" transform=\"rotate(-90 15 300)\" text-anchor=\"middle\" font-size=\"13\">"
        << ylabel << "</text>\n";
    return out.str();
}

} // namespace detail

// Fixed-point locus: epsilon horizontal (log10 when it spans many decades),
// fixed-point height vertical.
template <class Real>
std::string sweep_svg(const dynamics::SweepResult<Real>& res, const std::string& title) {
    std::vector<std::pair<long double, long double>> pts;
    std::vector<long double> empties;
    for (const auto& e : res.entries) {
        for (const auto& r : e.records) pts.emplace_back(e.epsilon, r.location.y);
        if (e.certificate) empties.push_back(e.epsilon);
    }
    long double lo = std::numeric_limits<long double>::infinity(), hi = -lo;
    for (Real e : res.epsilon_grid) {
        lo = std::min<long double>(lo, e);
        hi = std::max<long double>(hi, e);
    }
    const bool logx = lo > 0 && hi / lo > 1e3L;
    auto xv = [&](long double e) { return static_cast<double>(logx ? std::log10(e) : e); };
    detail::Frame f{0, 1, 0, 1};
    if (!res.epsilon_grid.empty()) {
        f.x0 = xv(lo);
        f.x1 = xv(hi);
        if (!(f.x1 > f.x0)) { f.x0 -= 1; f.x1 += 1; }
    }
    std::ostringstream out;
    out << detail::svg_header(title) << detail::svg_axes(f, logx ? "log10 epsilon" : "epsilon", "fixed point y");
    for (const auto& [e, y] : pts)
        out << "<circle cx=\"" << f.px(xv(e)) << "\" cy=\"" << f.py(static_cast<double>(y))
            << "\" r=\"3\" fill=\"crimson\"/>\n";
    for (long double e : empties)
        out << "<line x1=\"" << f.px(xv(e)) << "\" y1=\"535\" x2=\"" << f.px(xv(e))
            << "\" y2=\"540\" stroke=\"gray\"/>\n";
    out << "</svg>\n";
    return out.str();
}

inline std::string polylines_svg(const std::vector<NamedPolyline>& curves, double x0, double x1, double y0, double y1,
                                 const std::string& title) {
    static const char* colors[] = {"black", "steelblue", "crimson", "darkgreen", "darkorange", "purple"};
    const detail::Frame f{x0, x1, y0, y1};
    std::ostringstream out;
    out << detail::svg_header(title) << detail::svg_axes(f, "x", "y");
    out << "<clipPath id=\"frame\"><rect x=\"60\" y=\"60\" width=\"680\" height=\"480\"/></clipPath>\n";
    for (std::size_t i = 0; i < curves.size(); ++i) {
        const auto& c = curves[i];
        const char* col = colors[i % 6];
        out << "<polyline clip-path=\"url(#frame)\" fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [x, y] : c.points) out << f.px(x) << ',' << f.py(y) << ' ';
        out << "\"/>\n";
        out << "<text x=\"" << 70 + 120 * (i % 6) << "\" y=\"50\" font-size=\"12\" fill=\"" << col << "\">" << c.name
            << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

// Collects emitted files; the manifest itself is written last and lists
// every other file with its SHA-256.
class OutputDir {
public:
    explicit OutputDir(std::filesystem::path dir) : dir_(std::move(dir)) {}

    const std::filesystem::path& path() const { return dir_; }

    void write(const std::string& name, const std::string& content) {
        const auto p = dir_ / name;
        std::ofstream out(p, std::ios::binary);
        if (!out) throw ConfigError("cannot write " + p.string());
        out << content;
        if (!out) throw ConfigError("write failed for " + p.string());
        files_.push_back({name, sha256_hex(content), content.size()});
    }

    void write_manifest(const std::string& command, const nlohmann::json& config, const nlohmann::json& checks,
                        const std::string& started) const {
        nlohmann::json inv = nlohmann::json::array();
        for (const auto& f : files_) inv.push_back({{"file", f.name}, {"sha256", f.digest}, {"bytes", f.bytes}});
        const nlohmann::json m = {{"tool", "flatfix"},       {"version", tool_version}, {"command", command},
                                  {"config", config},        {"started", started},      {"finished", utc_timestamp()},
                                  {"checks", checks},        {"files", inv}};
        std::ofstream out(dir_ / "manifest.json");
        if (!out) throw ConfigError("cannot write manifest in " + dir_.string());
        out << m.dump(2) << '\n';
    }

private:
    struct File {
        std::string name, digest;
        std::size_t bytes;
    };
    std::filesystem::path dir_;
    std::vector<File> files_;
};

} // namespace flatfix::cli
