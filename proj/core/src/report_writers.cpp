#include "dnscatter/report_writers.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

namespace dnscatter {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_scan_csv(std::ostream& os, const ScanTable& table, MomentumUnits units) {
    const int m = table.max_channels();
    os << "k,n1";
    for (int i = 1; i <= m; ++i) os << ",PR" << i;
    for (int i = 1; i <= m; ++i) os << ",PT" << i;
    os << ",flux_defect,cond\n";
    for (const ScanRow& row : table.rows) {
        if (!row.ok) continue;
        os << format_double(from_absolute(row.k, units, table.geom)) << ',' << row.n1;
        for (int i = 0; i < m; ++i) {
            os << ',';
            if (i < row.n1) os << format_double(row.PR[static_cast<std::size_t>(i)]);
        }
        for (int i = 0; i < m; ++i) {
            os << ',';
            if (i < row.n1) os << format_double(row.PT[static_cast<std::size_t>(i)]);
        }
        os << ',' << format_double(row.flux_defect) << ',' << format_double(row.cond) << '\n';
    }
}

namespace {

std::string fix(double v, int digits = 2) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                          "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"};

}  // namespace

void write_scan_svg(std::ostream& os, const ScanTable& table, const std::string& title) {
    constexpr double W = 800, H = 500, left = 70, right = 20, top = 40, bottom = 60;
    const double pw = W - left - right, ph = H - top - bottom;
    const double unit = table.geom.half_pi_over_d();

    double kmin = std::numeric_limits<double>::infinity(), kmax = -kmin;
    for (const ScanRow& r : table.rows) {
        kmin = std::min(kmin, r.k / unit);
        kmax = std::max(kmax, r.k / unit);
    }
    if (!(kmax > kmin)) {
        kmin = 0.0;
        kmax = 1.0;
    }
    auto X = [&](double ku) { return left + (ku - kmin) / (kmax - kmin) * pw; };
    auto Y = [&](double p) { return top + (1.0 - std::clamp(p, 0.0, 1.05) / 1.05) * ph; };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title
       << "</text>\n";
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (int i = 0; i <= 5; ++i) {
        const double ku = kmin + (kmax - kmin) * i / 5.0;
        os << "<text x=\"" << fix(X(ku)) << "\" y=\"" << fix(top + ph + 18)
           << "\" text-anchor=\"middle\" font-size=\"12\">" << fix(ku) << "</text>\n";
        const double p = i / 5.0;
        os << "<text x=\"" << fix(left - 8) << "\" y=\"" << fix(Y(p) + 4)
           << "\" text-anchor=\"end\" font-size=\"12\">" << fix(p, 1) << "</text>\n";
    }
    os << "<text x=\"" << fix(left + pw / 2) << "\" y=\"" << fix(H - 15)
       << "\" text-anchor=\"middle\" font-size=\"14\">k (units of π/2d)</text>\n";
    os << "<text x=\"18\" y=\"" << fix(top + ph / 2) << "\" text-anchor=\"middle\" font-size=\"14\""
       << " transform=\"rotate(-90 18 " << fix(top + ph / 2) << ")\">probability</text>\n";

    for (double th : table.thresholds) {
        const double ku = th / unit;
        if (ku < kmin || ku > kmax) continue;
        os << "<line x1=\"" << fix(X(ku)) << "\" y1=\"" << top << "\" x2=\"" << fix(X(ku))
           << "\" y2=\"" << top + ph << "\" stroke=\"gray\" stroke-dasharray=\"2,3\"/>\n";
    }

    const int m = table.max_channels();
    for (int ch = 1; ch <= m; ++ch) {
        const char* color = kPalette[(ch - 1) % 10];
        for (int kind = 0; kind < 2; ++kind) {  // 0: reflection, 1: transmission
            std::string pts;
            auto flush = [&] {
                if (pts.empty()) return;
                os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\""
                   << (kind == 0 ? " stroke-dasharray=\"6,4\"" : "") << " points=\"" << pts
                   << "\"/>\n";
                pts.clear();
            };
            for (const ScanRow& r : table.rows) {
                if (!r.ok || r.n1 < ch) {
                    flush();
                    continue;
                }
                const double p = (kind == 0 ? r.PR : r.PT)[static_cast<std::size_t>(ch - 1)];
                if (!pts.empty()) pts += ' ';
                pts += fix(X(r.k / unit)) + "," + fix(Y(p));
            }
            flush();
        }
    }

    // legend
    for (int ch = 1; ch <= m; ++ch) {
        const char* color = kPalette[(ch - 1) % 10];
        const double y = top + 14.0 * ch;
        const double x = left + pw - 150;
        os << "<line x1=\"" << fix(x) << "\" y1=\"" << fix(y) << "\" x2=\"" << fix(x + 20)
           << "\" y2=\"" << fix(y) << "\" stroke=\"" << color << "\" stroke-dasharray=\"6,4\"/>\n";
        os << "<line x1=\"" << fix(x + 70) << "\" y1=\"" << fix(y) << "\" x2=\"" << fix(x + 90)
           << "\" y2=\"" << fix(y) << "\" stroke=\"" << color << "\"/>\n";
        os << "<text x=\"" << fix(x + 24) << "\" y=\"" << fix(y + 4) << "\" font-size=\"11\">PR"
           << ch << "</text>\n";
        os << "<text x=\"" << fix(x + 94) << "\" y=\"" << fix(y + 4) << "\" font-size=\"11\">PT"
           << ch << "</text>\n";
    }
    os << "</svg>\n";
}

void write_modes_csv(std::ostream& os, const Geometry& geom, int N) {
    const OverlapMatrix O(N);
    os << "n,mu";
    for (int m = 1; m <= N; ++m) os << ",O" << m;
    os << '\n';
    for (int n = 1; n <= N; ++n) {
        os << n << ',' << format_double(mu(n, geom));
        for (int m = 1; m <= N; ++m) os << ',' << format_double(O(n, m));
        os << '\n';
    }
}

void write_decay_csv(std::ostream& os, const std::vector<std::pair<double, double>>& samples) {
    os << "t,distance\n";
    for (const auto& [t, d] : samples) os << format_double(t) << ',' << format_double(d) << '\n';
}

void write_snapshot_csv(std::ostream& os, const FieldSnapshot& snap) {
    os << "x,y,re,im\n";
    for (int i = 0; i < snap.nx; ++i) {
        for (int j = 0; j < snap.ny; ++j) {
            const auto v = snap.at(i, j);
            os << format_double(snap.x(i)) << ',' << format_double(snap.y(j)) << ','
               << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
        }
    }
}

}  // namespace dnscatter
