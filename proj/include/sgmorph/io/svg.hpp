#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "sgmorph/features/directional.hpp"

namespace sgmorph {

namespace detail {

inline std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

inline const char* k_palette[10] = {"#4477aa", "#ee6677", "#228833", "#ccbb44",
                                    "#66ccee", "#aa3377", "#bbbbbb", "#222255",
                                    "#225555", "#552222"};

}  // namespace detail

/// Scatter plot of 2D points colored by integer group (cluster or class).
inline std::string svg_scatter(const Eigen::MatrixXd& points,
                               const std::vector<int>& groups,
                               const std::vector<std::string>& legend = {}) {
  const double size = 640.0, margin = 40.0;
  double xmin = points.col(0).minCoeff(), xmax = points.col(0).maxCoeff();
  double ymin = points.col(1).minCoeff(), ymax = points.col(1).maxCoeff();
  const double span = std::max({xmax - xmin, ymax - ymin, 1e-9});
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\""
      << size << "\" viewBox=\"0 0 " << size << " " << size << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const double x = margin + (points(i, 0) - xmin) / span * (size - 2 * margin);
    const double y = size - margin - (points(i, 1) - ymin) / span * (size - 2 * margin);
    const int g = i < static_cast<Eigen::Index>(groups.size()) ? groups[i] : 0;
    out << "<circle cx=\"" << detail::svg_num(x) << "\" cy=\"" << detail::svg_num(y)
        << "\" r=\"4\" fill=\"" << detail::k_palette[((g % 10) + 10) % 10]
        << "\" fill-opacity=\"0.8\"/>\n";
  }
  for (std::size_t g = 0; g < legend.size(); ++g) {
    const double y = margin + 18.0 * g;
    out << "<circle cx=\"" << detail::svg_num(margin / 2) << "\" cy=\""
        << detail::svg_num(y) << "\" r=\"5\" fill=\"" << detail::k_palette[g % 10]
        << "\"/>\n<text x=\"" << detail::svg_num(margin / 2 + 10) << "\" y=\""
        << detail::svg_num(y + 4) << "\" font-size=\"12\" font-family=\"sans-serif\">"
        << legend[g] << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

/// Rose plot of a 2D directional histogram: 18 wedges over [0,pi) mirrored
/// to the full circle (unoriented mass).
inline std::string svg_rose(const DirectionalHistogram& hist) {
  const double size = 480.0, cx = size / 2, cy = size / 2, radius = size / 2 - 20.0;
  double pmax = 1e-12;
  for (const double p : hist.mass) pmax = std::max(pmax, p);
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\""
      << size << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << radius
      << "\" fill=\"none\" stroke=\"#ccc\"/>\n";
  const int n = static_cast<int>(hist.mass.size());
  for (int half = 0; half < 2; ++half)
    for (int k = 0; k < n; ++k) {
      const double r = radius * hist.mass[k] / pmax;
      if (r <= 0.0) continue;
      const double a0 = k_pi * k / n + half * k_pi;
      const double a1 = k_pi * (k + 1) / n + half * k_pi;
      out << "<path d=\"M" << detail::svg_num(cx) << " " << detail::svg_num(cy) << " L"
          << detail::svg_num(cx + r * std::cos(a0)) << " "
          << detail::svg_num(cy - r * std::sin(a0)) << " A" << detail::svg_num(r) << " "
          << detail::svg_num(r) << " 0 0 0 " << detail::svg_num(cx + r * std::cos(a1))
          << " " << detail::svg_num(cy - r * std::sin(a1))
          << " Z\" fill=\"#4477aa\" fill-opacity=\"0.7\" stroke=\"#225\" "
             "stroke-width=\"0.5\"/>\n";
    }
  out << "</svg>\n";
  return out.str();
}

/// Upper-hemisphere plot of a 3D directional histogram: Lambert equal-area
/// disc, 8 rings x 16 sectors shaded by mass.
inline std::string svg_hemisphere(const DirectionalHistogram& hist) {
  const double size = 480.0, cx = size / 2, cy = size / 2, radius = size / 2 - 20.0;
  double pmax = 1e-12;
  for (const double p : hist.mass) pmax = std::max(pmax, p);
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\""
      << size << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (int band = 0; band < k_polar_bands_3d; ++band) {
    // z in [band/8, (band+1)/8): equal-area ring radii sqrt(1 - z)
    const double r_outer = radius * std::sqrt(1.0 - band / 8.0);
    const double r_inner = radius * std::sqrt(1.0 - (band + 1) / 8.0);
    for (int s = 0; s < k_azimuth_sectors_3d; ++s) {
      const double p = hist.mass[band * k_azimuth_sectors_3d + s];
      const int shade = static_cast<int>(245.0 - 205.0 * p / pmax);
      const double a0 = 2 * k_pi * s / k_azimuth_sectors_3d;
      const double a1 = 2 * k_pi * (s + 1) / k_azimuth_sectors_3d;
      const auto px = [&](double r, double a) { return cx + r * std::cos(a); };
      const auto py = [&](double r, double a) { return cy - r * std::sin(a); };
      out << "<path d=\"M" << detail::svg_num(px(r_inner, a0)) << " "
          << detail::svg_num(py(r_inner, a0)) << " L" << detail::svg_num(px(r_outer, a0))
          << " " << detail::svg_num(py(r_outer, a0)) << " A" << detail::svg_num(r_outer)
          << " " << detail::svg_num(r_outer) << " 0 0 0 "
          << detail::svg_num(px(r_outer, a1)) << " " << detail::svg_num(py(r_outer, a1))
          << " L" << detail::svg_num(px(r_inner, a1)) << " "
          << detail::svg_num(py(r_inner, a1)) << " A" << detail::svg_num(r_inner) << " "
          << detail::svg_num(r_inner) << " 0 0 1 " << detail::svg_num(px(r_inner, a0))
          << " " << detail::svg_num(py(r_inner, a0)) << " Z\" fill=\"rgb(" << shade
          << "," << shade << ",255)\" stroke=\"#99a\" stroke-width=\"0.4\"/>\n";
    }
  }
  out << "</svg>\n";
  return out.str();
}

/// Heatmap of a labeled square matrix (MD matrices and the like).
inline std::string svg_heatmap(const std::vector<std::string>& ids,
                               const Eigen::MatrixXd& values) {
  const int n = static_cast<int>(values.rows());
  const double cell = 64.0, label_space = 110.0;
  const double size = label_space + n * cell + 20.0;
  double vmax = 1e-12;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) vmax = std::max(vmax, values(i, j));
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\""
      << size << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double t = values(i, j) / vmax;
      const int red = static_cast<int>(255.0 * t);
      const int blue = static_cast<int>(255.0 * (1.0 - t));
      const double x = label_space + j * cell, y = label_space + i * cell;
      out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell
          << "\" height=\"" << cell << "\" fill=\"rgb(" << red << ",64," << blue
          << ")\"/>\n<text x=\"" << x + cell / 2 << "\" y=\"" << y + cell / 2 + 4
          << "\" font-size=\"11\" fill=\"white\" text-anchor=\"middle\" "
             "font-family=\"sans-serif\">"
          << detail::svg_num(values(i, j)) << "</text>\n";
    }
  for (int i = 0; i < n; ++i) {
    out << "<text x=\"" << label_space - 6 << "\" y=\"" << label_space + i * cell + cell / 2 + 4
        << "\" font-size=\"12\" text-anchor=\"end\" font-family=\"sans-serif\">" << ids[i]
        << "</text>\n";
    out << "<text x=\"" << label_space + i * cell + cell / 2 << "\" y=\"" << label_space - 6
        << "\" font-size=\"12\" text-anchor=\"middle\" font-family=\"sans-serif\">"
        << ids[i] << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace sgmorph
