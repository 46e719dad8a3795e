// sgmorph: shape-graph morphometry pipelines.
//
// Subcommands: extract, compare, cluster, classify, gw, synth. Every run is
// deterministic given the same inputs, config and seed; outputs carry their
// parameters as comment headers so results can be reproduced.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "sgmorph/core/parallel.hpp"
#include "sgmorph/features/feature_vector.hpp"
#include "sgmorph/gw/gw.hpp"
#include "sgmorph/ingest/clean.hpp"
#include "sgmorph/ingest/graph_json.hpp"
#include "sgmorph/ingest/mask_io.hpp"
#include "sgmorph/ingest/skeleton.hpp"
#include "sgmorph/ingest/swc.hpp"
#include "sgmorph/io/csv.hpp"
#include "sgmorph/io/svg.hpp"
#include "sgmorph/learn/agglomerative.hpp"
#include "sgmorph/learn/metrics.hpp"
#include "sgmorph/learn/tsne.hpp"
#include "sgmorph/popstats/popstats.hpp"
#include "sgmorph/synth.hpp"
#include "sgmorph/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

struct PipelineConfig {
  std::string input;
  std::string format = "json";  // json|swc|mask
  std::string labels_file;      // optional id,label CSV
  std::string out = "out";
  std::uint64_t seed = 0;
  int bins = 20;
  double perplexity = 30.0;
  int tsne_iterations = 1000;
  int k = 0;
  int trees = 100;
  int max_depth = 0;
  double train_frac = 0.7;
  int runs = 10;
  int min_pixels = 6;
  double clean_ratio = 0.05;
  double reconnect_dist = 6.0;
  std::string keep_types = "1,3,4";
  bool clean = false;  // apply component cleanup to swc/json inputs too
  int gw_max_iters = 200;
  double gw_tol = 1e-7;
  int gw_starts = 1;
  bool gw_cluster = false;
  bool dump_histograms = false;
  int threads = 0;
};

void config_from_json(PipelineConfig& cfg, const json& j) {
  const auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j[key].get<std::decay_t<decltype(field)>>();
  };
  get("input", cfg.input);
  get("format", cfg.format);
  get("labels", cfg.labels_file);
  get("out", cfg.out);
  get("seed", cfg.seed);
  get("bins", cfg.bins);
  get("perplexity", cfg.perplexity);
  get("tsne_iterations", cfg.tsne_iterations);
  get("k", cfg.k);
  get("trees", cfg.trees);
  get("max_depth", cfg.max_depth);
  get("train_frac", cfg.train_frac);
  get("runs", cfg.runs);
  get("min_pixels", cfg.min_pixels);
  get("clean_ratio", cfg.clean_ratio);
  get("reconnect_dist", cfg.reconnect_dist);
  get("keep_types", cfg.keep_types);
  get("clean", cfg.clean);
  get("gw_max_iters", cfg.gw_max_iters);
  get("gw_tol", cfg.gw_tol);
  get("gw_starts", cfg.gw_starts);
  get("gw_cluster", cfg.gw_cluster);
  get("dump_histograms", cfg.dump_histograms);
  get("threads", cfg.threads);
}

std::vector<std::pair<std::string, std::string>> base_metadata(const PipelineConfig& cfg,
                                                               const std::string& command) {
  return {{"tool", std::string("sgmorph ") + sgmorph::version_string},
          {"command", command},
          {"seed", std::to_string(cfg.seed)}};
}

std::set<int> parse_keep_types(const std::string& spec) {
  std::set<int> types;
  std::istringstream in(spec);
  std::string tok;
  while (std::getline(in, tok, ','))
    if (!tok.empty()) types.insert(std::stoi(tok));
  return types;
}

struct LoadedGraphs {
  std::vector<sgmorph::ShapeGraph> graphs;
  std::vector<std::vector<std::string>> warnings;  // per graph
  std::vector<std::pair<std::string, std::string>> failures;  // file, reason
};

std::vector<fs::path> list_input_files(const PipelineConfig& cfg) {
  const fs::path input(cfg.input);
  if (!fs::exists(input))
    throw std::runtime_error("input path '" + cfg.input + "' does not exist");
  std::vector<fs::path> files;
  const std::set<std::string> exts =
      cfg.format == "json"  ? std::set<std::string>{".json"}
      : cfg.format == "swc" ? std::set<std::string>{".swc", ".SWC"}
                            : std::set<std::string>{".png", ".pgm", ".PNG", ".PGM"};
  if (fs::is_directory(input)) {
    for (const auto& entry : fs::recursive_directory_iterator(input))
      if (entry.is_regular_file() && exts.count(entry.path().extension().string()))
        files.push_back(entry.path());
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(input);
  }
  return files;
}

LoadedGraphs load_graphs(const PipelineConfig& cfg) {
  using namespace sgmorph;
  const std::vector<fs::path> files = list_input_files(cfg);
  const fs::path root(cfg.input);
  const std::set<int> keep_types = parse_keep_types(cfg.keep_types);

  LoadedGraphs out;
  out.graphs.resize(files.size());
  out.warnings.resize(files.size());
  std::vector<std::string> errors(files.size());

  parallel_for(
      files.size(),
      [&](std::size_t i) {
        const fs::path& file = files[i];
        try {
          ShapeGraph g;
          std::vector<std::string>& warn = out.warnings[i];
          if (cfg.format == "json") {
            g = read_graph_json(read_text_file(file.string()));
            if (cfg.clean) g = clean_components(g, cfg.clean_ratio, cfg.reconnect_dist, &warn);
          } else if (cfg.format == "swc") {
            g = parse_swc(read_text_file(file.string()), keep_types, &warn);
            if (cfg.clean) g = clean_components(g, cfg.clean_ratio, cfg.reconnect_dist, &warn);
          } else if (cfg.format == "mask") {
            SkeletonMask mask = file.extension() == ".pgm" || file.extension() == ".PGM"
                                    ? read_pgm(read_text_file(file.string()))
                                    : read_png_file(file.string());
            mask = prune_fragments(mask, cfg.min_pixels);
            g = skeleton_to_graph(mask, &warn);
            g = clean_components(g, cfg.clean_ratio, cfg.reconnect_dist, &warn);
          } else {
            throw std::runtime_error("unknown format '" + cfg.format + "'");
          }
          if (g.id.empty()) g.id = file.stem().string();
          if (g.label.empty() && fs::is_directory(root)) {
            const fs::path rel = fs::relative(file.parent_path(), root);
            if (!rel.empty() && rel != ".") g.label = rel.begin()->string();
          }
          const std::vector<std::string> report = validate(g);
          if (!report.empty())
            throw std::runtime_error("invalid graph: " + report.front());
          out.graphs[i] = std::move(g);
        } catch (const std::exception& e) {
          errors[i] = e.what();
        }
      },
      cfg.threads);

  // compact: drop failed slots, keep input order
  LoadedGraphs compact;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (!errors[i].empty()) {
      compact.failures.emplace_back(files[i].string(), errors[i]);
    } else {
      compact.graphs.push_back(std::move(out.graphs[i]));
      compact.warnings.push_back(std::move(out.warnings[i]));
    }
  }
  return compact;
}

std::map<std::string, std::string> load_labels(const PipelineConfig& cfg,
                                               const std::string& features_path) {
  std::map<std::string, std::string> labels;
  if (!cfg.labels_file.empty()) {
    std::istringstream in(sgmorph::read_text_file(cfg.labels_file));
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#' || line == "id,label") continue;
      const std::size_t comma = line.find(',');
      if (comma == std::string::npos) continue;
      labels[line.substr(0, comma)] = line.substr(comma + 1);
    }
    return labels;
  }
  const fs::path meta = fs::path(features_path).parent_path() / "metadata.json";
  if (fs::exists(meta)) {
    const json j = json::parse(sgmorph::read_text_file(meta.string()));
    for (const auto& sample : j.value("samples", json::array()))
      labels[sample.at("id").get<std::string>()] = sample.value("label", "");
  }
  return labels;
}

/// Feature matrix from CSV with incomplete rows dropped (reported).
sgmorph::FeatureMatrix load_complete_features(const std::string& path,
                                              std::vector<std::string>* excluded) {
  using namespace sgmorph;
  const FeatureMatrix raw = read_feature_csv(read_text_file(path));
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < raw.rows(); ++i) {
    bool complete = true;
    for (Eigen::Index f = 0; f < raw.cols(); ++f)
      complete &= std::isfinite(raw.values(i, f));
    if (complete)
      keep.push_back(i);
    else if (excluded)
      excluded->push_back(raw.ids[i]);
  }
  FeatureMatrix m;
  m.values.resize(static_cast<Eigen::Index>(keep.size()), raw.cols());
  for (std::size_t r = 0; r < keep.size(); ++r) {
    m.values.row(static_cast<Eigen::Index>(r)) = raw.values.row(keep[r]);
    m.ids.push_back(raw.ids[keep[r]]);
  }
  return m;
}

void attach_labels(sgmorph::FeatureMatrix& m, const std::map<std::string, std::string>& labels) {
  m.labels.clear();
  for (const std::string& id : m.ids) {
    const auto it = labels.find(id);
    m.labels.push_back(it == labels.end() ? "" : it->second);
  }
}

// ---------------------------------------------------------------------------

int cmd_extract(const PipelineConfig& cfg) {
  using namespace sgmorph;
  LoadedGraphs loaded;
  try {
    loaded = load_graphs(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  for (const auto& [file, reason] : loaded.failures)
    std::cerr << "warning: skipped " << file << ": " << reason << "\n";

  std::vector<FeatureVector> rows(loaded.graphs.size());
  std::vector<std::string> errors(loaded.graphs.size());
  parallel_for(
      loaded.graphs.size(),
      [&](std::size_t i) {
        try {
          rows[i] = feature_vector(loaded.graphs[i], /*hull_degenerate_as_missing=*/true);
        } catch (const std::exception& e) {
          errors[i] = e.what();
        }
      },
      cfg.threads);

  fs::create_directories(cfg.out);
  std::vector<FeatureVector> good_rows;
  ordered_json meta;
  meta["tool"] = std::string("sgmorph ") + version_string;
  meta["seed"] = cfg.seed;
  meta["format"] = cfg.format;
  meta["samples"] = json::array();
  meta["failures"] = json::array();
  for (const auto& [file, reason] : loaded.failures)
    meta["failures"].push_back({{"file", file}, {"error", reason}});

  for (std::size_t i = 0; i < loaded.graphs.size(); ++i) {
    if (!errors[i].empty()) {
      std::cerr << "warning: no features for " << loaded.graphs[i].id << ": "
                << errors[i] << "\n";
      meta["failures"].push_back({{"file", loaded.graphs[i].id}, {"error", errors[i]}});
      continue;
    }
    ordered_json sample;
    sample["id"] = rows[i].id;
    sample["label"] = loaded.graphs[i].label;
    json missing = json::array();
    for (int f = 0; f < k_num_features; ++f)
      if (rows[i].missing[f]) missing.push_back(std::string(k_feature_names[f]));
    if (!missing.empty()) sample["missing_features"] = missing;
    if (!loaded.warnings[i].empty()) sample["warnings"] = loaded.warnings[i];
    meta["samples"].push_back(sample);
    good_rows.push_back(rows[i]);

    if (cfg.dump_histograms) {
      const ShapeGraph& g = loaded.graphs[i];
      fs::create_directories(fs::path(cfg.out) / "histograms");
      const DirectionalDistribution dist = directional_distribution(g);
      const DirectionalHistogram hist = directional_histogram(dist, false);
      std::ostringstream csv;
      csv << "bin_start,bin_end,mass\n";
      if (g.dim == 2) {
        for (int b = 0; b < k_bins_2d; ++b)
          csv << format_double(k_pi * b / k_bins_2d) << ","
              << format_double(k_pi * (b + 1) / k_bins_2d) << ","
              << format_double(hist.mass[b]) << "\n";
      } else {
        for (std::size_t b = 0; b < hist.mass.size(); ++b)
          csv << b / k_azimuth_sectors_3d << "," << b % k_azimuth_sectors_3d << ","
              << format_double(hist.mass[b]) << "\n";
      }
      const fs::path base = fs::path(cfg.out) / "histograms" / g.id;
      write_text_file(base.string() + ".csv", csv.str());
      write_text_file(base.string() + ".svg",
                      g.dim == 2 ? svg_rose(hist) : svg_hemisphere(hist));
    }
  }

  const std::string csv = write_feature_csv(
      good_rows, csv_metadata(base_metadata(cfg, "extract")));
  write_text_file((fs::path(cfg.out) / "features.csv").string(), csv);
  write_text_file((fs::path(cfg.out) / "metadata.json").string(), meta.dump(1) + "\n");
  std::cout << "extracted " << good_rows.size() << " of "
            << loaded.graphs.size() + loaded.failures.size() << " graphs -> " << cfg.out
            << "\n";
  return good_rows.empty() ? 1 : 0;
}

int cmd_compare(const PipelineConfig& cfg, const std::string& features_path) {
  using namespace sgmorph;
  std::vector<std::string> excluded;
  FeatureMatrix m = load_complete_features(features_path, &excluded);
  attach_labels(m, load_labels(cfg, features_path));
  for (const std::string& id : excluded)
    std::cerr << "warning: excluded '" << id << "' (missing features)\n";
  for (std::size_t i = 0; i < m.labels.size(); ++i)
    if (m.labels[i].empty()) {
      std::cerr << "error: sample '" << m.ids[i] << "' has no group label\n";
      return 1;
    }
  const std::set<std::string> groups(m.labels.begin(), m.labels.end());
  if (groups.size() < 2) {
    std::cerr << "error: group comparison needs at least 2 groups\n";
    return 1;
  }
  if (m.rows() < 3) {
    std::cerr << "error: group comparison needs at least 3 samples\n";
    return 1;
  }

  const FeatureMatrix norm = normalize_features(m);
  const std::vector<GroupSummary> summaries = group_histograms(norm, cfg.bins);
  const CorrelationMatrix corr = spearman_matrix(norm);

  std::vector<std::string> group_ids;
  for (const GroupSummary& gs : summaries) group_ids.push_back(gs.group);
  const int p = static_cast<int>(summaries.size());

  Eigen::MatrixXd md = Eigen::MatrixXd::Zero(p, p);
  bool any_clamped = false;
  for (int a = 0; a < p; ++a)
    for (int b = a + 1; b < p; ++b) {
      bool clamped = false;
      md(a, b) = md(b, a) = morphological_distance(summaries[a], summaries[b], corr, &clamped);
      any_clamped |= clamped;
    }
  if (any_clamped)
    std::cerr << "warning: negative squared morphological distance clamped to 0\n";
  const double md_max = md.maxCoeff();
  if (md_max > 0) md /= md_max;

  fs::create_directories(cfg.out);
  auto meta = base_metadata(cfg, "compare");
  meta.push_back({"bins", std::to_string(cfg.bins)});
  meta.push_back({"md_normalized_by", format_double(md_max)});
  if (!excluded.empty()) {
    std::string joined;
    for (const std::string& id : excluded) joined += (joined.empty() ? "" : " ") + id;
    meta.push_back({"excluded", joined});
  }
  write_text_file((fs::path(cfg.out) / "md_matrix.csv").string(),
                  write_matrix_csv(group_ids, md, csv_metadata(meta)));
  write_text_file((fs::path(cfg.out) / "md_matrix.svg").string(),
                  svg_heatmap(group_ids, md));

  std::vector<std::string> feature_ids;
  for (const auto& name : k_feature_names) feature_ids.emplace_back(name);
  write_text_file((fs::path(cfg.out) / "spearman.csv").string(),
                  write_matrix_csv(feature_ids, corr.values, csv_metadata(meta)));

  fs::create_directories(fs::path(cfg.out) / "w1_per_feature");
  for (int f = 0; f < k_num_features; ++f) {
    Eigen::MatrixXd w1 = Eigen::MatrixXd::Zero(p, p);
    for (int a = 0; a < p; ++a)
      for (int b = a + 1; b < p; ++b)
        w1(a, b) = w1(b, a) =
            wasserstein1(summaries[a].histograms[f], summaries[b].histograms[f]);
    write_text_file((fs::path(cfg.out) / "w1_per_feature" /
                     (std::string(k_feature_names[f]) + ".csv"))
                        .string(),
                    write_matrix_csv(group_ids, w1, csv_metadata(meta)));
  }
  std::cout << "compared " << p << " groups over " << m.rows() << " samples -> "
            << cfg.out << "\n";
  return 0;
}

int write_cluster_outputs(const PipelineConfig& cfg, const sgmorph::DistanceMatrix& dist,
                          const std::map<std::string, std::string>& labels,
                          const std::string& command) {
  using namespace sgmorph;
  const Eigen::Index n = dist.values.rows();
  if (n < 4) {
    std::cerr << "error: clustering needs at least 4 samples\n";
    return 1;
  }
  if (cfg.k < 1 || cfg.k > n) {
    std::cerr << "error: cluster count k=" << cfg.k << " out of range for " << n
              << " samples\n";
    return 1;
  }
  const Embedding2D emb = tsne_embed(dist, cfg.perplexity, cfg.tsne_iterations, cfg.seed);
  if (emb.perplexity_reduced)
    std::cerr << "warning: perplexity reduced to " << emb.perplexity << "\n";
  const std::vector<int> clusters = agglomerative_cluster(emb.points, cfg.k);

  std::vector<std::string> truth;
  bool have_truth = !labels.empty();
  for (const std::string& id : dist.ids) {
    const auto it = labels.find(id);
    if (it == labels.end() || it->second.empty()) {
      have_truth = false;
      break;
    }
    truth.push_back(it->second);
  }

  fs::create_directories(cfg.out);
  auto meta = base_metadata(cfg, command);
  meta.push_back({"k", std::to_string(cfg.k)});
  meta.push_back({"perplexity", format_double(emb.perplexity)});
  meta.push_back({"tsne_iterations", std::to_string(cfg.tsne_iterations)});

  std::ostringstream csv;
  csv << csv_metadata(meta) << "id,x,y,cluster,label\n";
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto it = labels.find(dist.ids[i]);
    csv << dist.ids[i] << "," << format_double(emb.points(i, 0)) << ","
        << format_double(emb.points(i, 1)) << "," << clusters[i] << ","
        << (it == labels.end() ? "" : it->second) << "\n";
  }
  write_text_file((fs::path(cfg.out) / "embedding.csv").string(), csv.str());

  std::ostringstream ccsv;
  ccsv << csv_metadata(meta) << "id,cluster\n";
  for (Eigen::Index i = 0; i < n; ++i) ccsv << dist.ids[i] << "," << clusters[i] << "\n";
  write_text_file((fs::path(cfg.out) / "clusters.csv").string(), ccsv.str());

  write_text_file((fs::path(cfg.out) / "scatter.svg").string(),
                  svg_scatter(emb.points, clusters));

  if (have_truth) {
    std::vector<std::string> unique_sorted(truth);
    std::sort(unique_sorted.begin(), unique_sorted.end());
    unique_sorted.erase(std::unique(unique_sorted.begin(), unique_sorted.end()),
                        unique_sorted.end());
    ordered_json ari;
    ari["ari"] = adjusted_rand_index(clusters, truth);
    ari["k"] = cfg.k;
    ari["classes"] = unique_sorted;
    ari["seed"] = cfg.seed;
    write_text_file((fs::path(cfg.out) / "ari.json").string(), ari.dump(1) + "\n");
    std::cout << "ARI: " << ari["ari"] << "\n";
  }
  std::cout << "clustered " << n << " samples into " << cfg.k << " clusters -> "
            << cfg.out << "\n";
  return 0;
}

int cmd_cluster(const PipelineConfig& cfg, const std::string& features_path) {
  using namespace sgmorph;
  std::vector<std::string> excluded;
  FeatureMatrix m = load_complete_features(features_path, &excluded);
  for (const std::string& id : excluded)
    std::cerr << "warning: excluded '" << id << "' (missing features)\n";
  const FeatureMatrix norm = normalize_features(m);
  const DistanceMatrix dist = pairwise_feature_distances(norm);
  return write_cluster_outputs(cfg, dist, load_labels(cfg, features_path), "cluster");
}

int cmd_classify(const PipelineConfig& cfg, const std::string& features_path) {
  using namespace sgmorph;
  std::vector<std::string> excluded;
  FeatureMatrix m = load_complete_features(features_path, &excluded);
  attach_labels(m, load_labels(cfg, features_path));
  for (const std::string& id : excluded)
    std::cerr << "warning: excluded '" << id << "' (missing features)\n";
  for (std::size_t i = 0; i < m.labels.size(); ++i)
    if (m.labels[i].empty()) {
      std::cerr << "error: sample '" << m.ids[i] << "' has no class label\n";
      return 1;
    }
  const FeatureMatrix norm = normalize_features(m);

  AggregatedReport report;
  try {
    report = split_runs(norm.values, m.labels, cfg.train_frac, cfg.runs, cfg.seed,
                        cfg.trees, cfg.max_depth, /*oversample=*/true);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  fs::create_directories(cfg.out);
  ordered_json j;
  j["tool"] = std::string("sgmorph ") + version_string;
  j["seed"] = cfg.seed;
  j["runs"] = report.num_runs;
  j["train_fraction"] = report.train_fraction;
  j["trees"] = report.trees;
  j["max_depth"] = report.max_depth;
  j["oversampled"] = report.oversampled;
  j["overall_accuracy"] = {{"mean", report.overall_accuracy.mean},
                           {"std", report.overall_accuracy.std}};
  j["classes"] = ordered_json::array();
  for (std::size_t c = 0; c < report.classes.size(); ++c) {
    const AggregatedClassMetrics& pc = report.per_class[c];
    j["classes"].push_back(
        {{"label", report.classes[c]},
         {"sensitivity", {{"mean", pc.sensitivity.mean}, {"std", pc.sensitivity.std}}},
         {"precision", {{"mean", pc.precision.mean}, {"std", pc.precision.std}}},
         {"f1", {{"mean", pc.f1.mean}, {"std", pc.f1.std}}},
         {"accuracy", {{"mean", pc.accuracy.mean}, {"std", pc.accuracy.std}}}});
  }
  write_text_file((fs::path(cfg.out) / "report.json").string(), j.dump(1) + "\n");

  // importances ranked by mean MDI, ties in canonical order
  std::vector<int> order(k_num_features);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return report.importances[a].mean > report.importances[b].mean;
  });
  std::ostringstream icsv;
  icsv << csv_metadata(base_metadata(cfg, "classify")) << "feature,mdi_mean,mdi_std\n";
  for (const int f : order)
    icsv << k_feature_names[f] << "," << format_double(report.importances[f].mean) << ","
         << format_double(report.importances[f].std) << "\n";
  write_text_file((fs::path(cfg.out) / "importances.csv").string(), icsv.str());

  std::cout << "overall accuracy: " << report.overall_accuracy.mean << " +- "
            << report.overall_accuracy.std << " over " << report.num_runs << " runs -> "
            << cfg.out << "\n";
  return 0;
}

int cmd_gw(const PipelineConfig& cfg) {
  using namespace sgmorph;
  LoadedGraphs loaded;
  try {
    loaded = load_graphs(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  for (const auto& [file, reason] : loaded.failures)
    std::cerr << "warning: skipped " << file << ": " << reason << "\n";
  if (loaded.graphs.size() < 2) {
    std::cerr << "error: gw needs at least 2 graphs\n";
    return 1;
  }

  const DistanceMatrix gw =
      gw_matrix(loaded.graphs, cfg.gw_max_iters, cfg.gw_tol, cfg.seed, cfg.gw_starts,
                cfg.threads);
  fs::create_directories(cfg.out);
  auto meta = base_metadata(cfg, "gw");
  meta.push_back({"max_iters", std::to_string(cfg.gw_max_iters)});
  meta.push_back({"tol", format_double(cfg.gw_tol)});
  meta.push_back({"starts", std::to_string(cfg.gw_starts)});
  write_text_file((fs::path(cfg.out) / "gw_matrix.csv").string(),
                  write_matrix_csv(gw.ids, gw.values, csv_metadata(meta)));
  std::cout << "gw matrix over " << gw.ids.size() << " graphs -> " << cfg.out << "\n";

  if (cfg.gw_cluster) {
    std::map<std::string, std::string> labels;
    for (const ShapeGraph& g : loaded.graphs)
      if (!g.label.empty()) labels[g.id] = g.label;
    return write_cluster_outputs(cfg, gw, labels, "gw --cluster");
  }
  return 0;
}

int cmd_synth(const PipelineConfig& cfg, const std::string& kind, int count) {
  using namespace sgmorph;
  if (count < 1) {
    std::cerr << "error: count must be >= 1\n";
    return 1;
  }
  std::vector<std::string> texts(count);
  try {
    parallel_for(
        static_cast<std::size_t>(count),
        [&](std::size_t i) {
          texts[i] = write_graph_json(synth_graph(kind, cfg.seed, static_cast<int>(i)));
        },
        cfg.threads);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  fs::create_directories(cfg.out);
  for (int i = 0; i < count; ++i)
    write_text_file(
        (fs::path(cfg.out) / (kind + "_" + std::to_string(i) + ".json")).string(),
        texts[i]);
  std::cout << "wrote " << count << " " << kind << " graphs -> " << cfg.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  PipelineConfig cfg;

  // config file first, explicit flags override
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--config") {
      try {
        config_from_json(cfg, json::parse(sgmorph::read_text_file(argv[i + 1])));
      } catch (const std::exception& e) {
        std::cerr << "error: bad config file: " << e.what() << "\n";
        return 2;
      }
    }

  CLI::App app{"shape-graph morphometry: feature extraction and population analysis"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (flags override it)");

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--out", cfg.out, "output directory");
    sub->add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
    sub->add_option("--config", config_path, "JSON config file (flags override it)");
  };

  std::string features_path = "features.csv";
  std::string synth_kind;
  int synth_count = 1;

  CLI::App* extract = app.add_subcommand("extract", "compute the 19-feature descriptors");
  extract->add_option("--input", cfg.input, "input file or directory")->required();
  extract->add_option("--format", cfg.format, "swc|json|mask");
  extract->add_option("--keep-types", cfg.keep_types, "SWC types to keep");
  extract->add_option("--min-pixels", cfg.min_pixels, "skeleton fragment threshold");
  extract->add_option("--clean-ratio", cfg.clean_ratio, "component size ratio");
  extract->add_option("--reconnect-dist", cfg.reconnect_dist, "reconnection distance");
  extract->add_flag("--clean", cfg.clean, "component cleanup for swc/json inputs");
  extract->add_flag("--dump-histograms", cfg.dump_histograms,
                    "per-graph directional histogram CSV + SVG");
  add_common(extract);

  CLI::App* compare = app.add_subcommand("compare", "group comparison (W1 + MD)");
  compare->add_option("--features", features_path, "features.csv from extract");
  compare->add_option("--labels", cfg.labels_file, "id,label CSV (default: metadata.json)");
  compare->add_option("--bins", cfg.bins, "histogram bins");
  add_common(compare);

  CLI::App* cluster = app.add_subcommand("cluster", "t-SNE + agglomerative clustering");
  cluster->add_option("--features", features_path, "features.csv from extract");
  cluster->add_option("--labels", cfg.labels_file, "optional ground truth labels");
  cluster->add_option("--k", cfg.k, "number of clusters")->required();
  cluster->add_option("--perplexity", cfg.perplexity, "t-SNE perplexity");
  cluster->add_option("--iterations", cfg.tsne_iterations, "t-SNE iterations");
  add_common(cluster);

  CLI::App* classify = app.add_subcommand("classify", "one-vs-rest random forest");
  classify->add_option("--features", features_path, "features.csv from extract");
  classify->add_option("--labels", cfg.labels_file, "id,label CSV (default: metadata.json)");
  classify->add_option("--trees", cfg.trees, "trees per binary forest");
  classify->add_option("--max-depth", cfg.max_depth, "tree depth cap (0 = none)");
  classify->add_option("--train-frac", cfg.train_frac, "training fraction");
  classify->add_option("--runs", cfg.runs, "random split repetitions");
  add_common(classify);

  CLI::App* gw = app.add_subcommand("gw", "pairwise Gromov-Wasserstein matrix");
  gw->add_option("--input", cfg.input, "input file or directory")->required();
  gw->add_option("--format", cfg.format, "swc|json|mask");
  gw->add_option("--max-iters", cfg.gw_max_iters, "Frank-Wolfe iteration cap");
  gw->add_option("--tol", cfg.gw_tol, "relative objective tolerance");
  gw->add_option("--starts", cfg.gw_starts, "restarts per pair");
  gw->add_flag("--cluster", cfg.gw_cluster, "run the cluster pipeline on the matrix");
  gw->add_option("--k", cfg.k, "cluster count for --cluster");
  gw->add_option("--perplexity", cfg.perplexity, "t-SNE perplexity for --cluster");
  gw->add_option("--iterations", cfg.tsne_iterations, "t-SNE iterations for --cluster");
  add_common(gw);

  CLI::App* synth = app.add_subcommand("synth", "generate synthetic shape graphs");
  synth->add_option("kind", synth_kind, "grid|organic|hybrid|tree3d")->required();
  synth->add_option("--count", synth_count, "number of graphs");
  add_common(synth);

  CLI11_PARSE(app, argc, argv);

  try {
    if (extract->parsed()) return cmd_extract(cfg);
    if (compare->parsed()) return cmd_compare(cfg, features_path);
    if (cluster->parsed()) return cmd_cluster(cfg, features_path);
    if (classify->parsed()) return cmd_classify(cfg, features_path);
    if (gw->parsed()) return cmd_gw(cfg);
    if (synth->parsed()) return cmd_synth(cfg, synth_kind, synth_count);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
