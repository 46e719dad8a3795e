#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sgmorph/core/distance_matrix.hpp"
#include "sgmorph/core/error.hpp"
#include "sgmorph/features/feature_vector.hpp"
#include "sgmorph/popstats/popstats.hpp"

namespace sgmorph {

/// Shortest decimal form that parses back to the same double (17
/// significant digits always round-trip).
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

/// Comment lines ('# key: value') carrying the reproducibility metadata
/// every CSV output starts with.
inline std::string csv_metadata(const std::vector<std::pair<std::string, std::string>>& meta) {
  std::ostringstream out;
  for (const auto& [key, value] : meta) out << "# " << key << ": " << value << "\n";
  return out.str();
}

inline std::string write_feature_csv(const std::vector<FeatureVector>& rows,
                                     const std::string& metadata = "") {
  std::ostringstream out;
  out << metadata;
  out << "id";
  for (const auto& name : k_feature_names) out << "," << name;
  out << "\n";
  for (const FeatureVector& fv : rows) {
    out << fv.id;
    for (int f = 0; f < k_num_features; ++f) {
      out << ",";
      if (!fv.missing[f]) out << format_double(fv.values[f]);
    }
    out << "\n";
  }
  return out.str();
}

/// Parses a feature CSV (as written by write_feature_csv); empty cells are
/// NaN. The header must list the canonical feature names.
inline FeatureMatrix read_feature_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> data_lines;
  std::string header;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header.empty())
      header = line;
    else
      data_lines.push_back(line);
  }
  const auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(s);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!s.empty() && s.back() == ',') cells.push_back("");
    return cells;
  };
  const std::vector<std::string> head = split(header);
  if (head.size() != k_num_features + 1 || head[0] != "id")
    throw parse_error("feature CSV header must be 'id' plus the 19 canonical names");
  for (int f = 0; f < k_num_features; ++f)
    if (head[f + 1] != k_feature_names[f])
      throw parse_error("feature CSV header: expected column '" +
                        std::string(k_feature_names[f]) + "', found '" + head[f + 1] +
                        "'");

  FeatureMatrix m;
  m.values.resize(static_cast<Eigen::Index>(data_lines.size()), k_num_features);
  for (std::size_t r = 0; r < data_lines.size(); ++r) {
    const std::vector<std::string> cells = split(data_lines[r]);
    if (cells.size() != k_num_features + 1)
      throw parse_error("feature CSV row " + std::to_string(r + 1) + " has " +
                        std::to_string(cells.size()) + " cells");
    m.ids.push_back(cells[0]);
    for (int f = 0; f < k_num_features; ++f)
      m.values(static_cast<Eigen::Index>(r), f) =
          cells[f + 1].empty() ? std::numeric_limits<double>::quiet_NaN()
                               : std::strtod(cells[f + 1].c_str(), nullptr);
  }
  return m;
}

/// Square matrix with identical row/column ids (MD, W1, GW, Spearman...).
inline std::string write_matrix_csv(const std::vector<std::string>& ids,
                                    const Eigen::MatrixXd& values,
                                    const std::string& metadata = "") {
  std::ostringstream out;
  out << metadata;
  for (const std::string& id : ids) out << "," << id;
  out << "\n";
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    out << ids[i];
    for (Eigen::Index j = 0; j < values.cols(); ++j)
      out << "," << format_double(values(i, j));
    out << "\n";
  }
  return out.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace sgmorph
