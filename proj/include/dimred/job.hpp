#pragma once

// Batch front end: a validated job configuration, the method dispatch
// mirroring the library call for call, and the result bundle (coordinate
// files, eigenvalue file, quality report, run manifest). The manifest echoes
// the full configuration, so a run can be reproduced from it alone.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dimred/backend.hpp"
#include "dimred/cca.hpp"
#include "dimred/coa.hpp"
#include "dimred/error.hpp"
#include "dimred/io.hpp"
#include "dimred/mca.hpp"
#include "dimred/mds.hpp"
#include "dimred/pca.hpp"
#include "dimred/pcaiv.hpp"
#include "dimred/pcamet.hpp"
#include "dimred/quality.hpp"
#include "dimred/version.hpp"

namespace dimred {
namespace job {

enum class Method { Pca, PcaSc, PcaDa, Pcaiv, Pcamet, Coa, Cca, Mca, Mds };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::Pca: return "pca";
    case Method::PcaSc: return "pca-sc";
    case Method::PcaDa: return "pca-da";
    case Method::Pcaiv: return "pcaiv";
    case Method::Pcamet: return "pcamet";
    case Method::Coa: return "coa";
    case Method::Cca: return "cca";
    case Method::Mca: return "mca";
    case Method::Mds: return "mds";
  }
  return "?";
}

inline Method parse_method(const std::string& name) {
  for (Method m : {Method::Pca, Method::PcaSc, Method::PcaDa, Method::Pcaiv, Method::Pcamet,
                   Method::Coa, Method::Cca, Method::Mca, Method::Mds}) {
    if (name == method_name(m)) return m;
  }
  throw ConfigError("unknown method '" + name + "'");
}

inline const char* backend_name(SvdBackend b) {
  switch (b) {
    case SvdBackend::Evd: return "evd";
    case SvdBackend::Svd: return "svd";
    case SvdBackend::Grp: return "grp";
  }
  return "?";
}

inline SvdBackend parse_backend(const std::string& name) {
  if (name == "evd") return SvdBackend::Evd;
  if (name == "svd") return SvdBackend::Svd;
  if (name == "grp") return SvdBackend::Grp;
  throw ConfigError("unknown backend '" + name + "' (expected evd, svd or grp)");
}

struct JobConfig {
  Method method = Method::Pca;
  std::string input;
  std::string input_b;  // second block, cca only
  long rank = -1;       // -1 keeps every component
  SvdBackend backend = SvdBackend::Svd;
  long oversampling = 5;
  std::uint64_t seed = 0;
  bool center = false;
  bool scale = false;
  bool drop_empty = false;         // coa: drop all-zero rows/columns first
  std::string row_weights_file;    // row metric: vector (diagonal) or square SPD table
  std::string col_metric_file;     // column metric, same formats
  std::string row_basis_file;      // pcaiv: basis of the component-side subspace
  std::string col_basis_file;      // pcaiv: basis of the axis-side subspace
  std::string out_dir;
  char delimiter = ',';
  io::HeaderMode header = io::HeaderMode::Auto;
  std::vector<std::string> categorical;  // mca: columns to expand as indicators
  std::string id_column;
};

/// Method-specific configuration checks; runs before any input is read.
inline void validate(const JobConfig& c) {
  if (c.input.empty()) throw ConfigError("--input is required");
  if (c.out_dir.empty()) throw ConfigError("--out is required");
  if (c.rank != -1 && c.rank < 1) throw ConfigError("--rank must be positive or -1 (all)");
  if (c.oversampling < 0) throw ConfigError("--oversampling must be >= 0");
  if (c.backend == SvdBackend::Grp && c.rank == -1) {
    throw ConfigError("the grp backend needs a prescribed --rank");
  }
  const bool is_cca = c.method == Method::Cca;
  if (is_cca && c.input_b.empty()) throw ConfigError("cca needs --input-b");
  if (!is_cca && !c.input_b.empty()) throw ConfigError("--input-b only applies to cca");

  const bool is_pcaiv = c.method == Method::Pcaiv;
  if (!is_pcaiv && (!c.row_basis_file.empty() || !c.col_basis_file.empty())) {
    throw ConfigError("--row-basis/--col-basis only apply to pcaiv");
  }
  const bool takes_metrics = c.method == Method::Pcamet || is_pcaiv;
  if (!takes_metrics && (!c.row_weights_file.empty() || !c.col_metric_file.empty())) {
    throw ConfigError("--row-weights/--col-metric only apply to pcamet and pcaiv");
  }
  if (c.center && !(c.method == Method::Pca || c.method == Method::Pcamet || is_cca)) {
    throw ConfigError("--center only applies to pca, pcamet and cca");
  }
  if (c.scale && c.method != Method::Pca) {
    throw ConfigError("--scale only applies to pca");
  }
  if (c.drop_empty && c.method != Method::Coa) {
    throw ConfigError("--drop-empty only applies to coa");
  }
  if (!c.categorical.empty() && c.method != Method::Mca) {
    throw ConfigError("--categorical only applies to mca");
  }
}

inline PcaMethod pca_method_of(const JobConfig& c) {
  PcaMethod m;
  m.backend = c.backend;
  if (c.rank != -1) m.rank = static_cast<Index>(c.rank);
  m.oversampling = static_cast<Index>(c.oversampling);
  m.seed = RngSeed{c.seed};
  return m;
}

struct ResultBundle {
  std::vector<std::string> files;  // everything written, manifest last
  nlohmann::ordered_json manifest;
};

namespace detail {

inline nlohmann::ordered_json config_to_json(const JobConfig& c) {
  nlohmann::ordered_json j;
  j["method"] = method_name(c.method);
  j["input"] = c.input;
  j["input_b"] = c.input_b;
  j["rank"] = c.rank;
  j["backend"] = backend_name(c.backend);
  j["oversampling"] = c.oversampling;
  j["seed"] = c.seed;
  j["center"] = c.center;
  j["scale"] = c.scale;
  j["drop_empty"] = c.drop_empty;
  j["row_weights"] = c.row_weights_file;
  j["col_metric"] = c.col_metric_file;
  j["row_basis"] = c.row_basis_file;
  j["col_basis"] = c.col_basis_file;
  j["out"] = c.out_dir;
  j["delimiter"] = std::string(1, c.delimiter);
  j["header"] = c.header == io::HeaderMode::Auto ? "auto"
               : c.header == io::HeaderMode::Yes ? "yes"
                                                 : "no";
  j["categorical"] = c.categorical;
  j["id_column"] = c.id_column;
  return j;
}

inline JobConfig config_from_json(const nlohmann::json& j) {
  JobConfig c;
  c.method = parse_method(j.at("method").get<std::string>());
  c.input = j.at("input").get<std::string>();
  c.input_b = j.value("input_b", std::string{});
  c.rank = j.value("rank", -1L);
  c.backend = parse_backend(j.value("backend", std::string{"svd"}));
  c.oversampling = j.value("oversampling", 5L);
  c.seed = j.value("seed", static_cast<std::uint64_t>(0));
  c.center = j.value("center", false);
  c.scale = j.value("scale", false);
  c.drop_empty = j.value("drop_empty", false);
  c.row_weights_file = j.value("row_weights", std::string{});
  c.col_metric_file = j.value("col_metric", std::string{});
  c.row_basis_file = j.value("row_basis", std::string{});
  c.col_basis_file = j.value("col_basis", std::string{});
  c.out_dir = j.value("out", std::string{});
  const std::string delim = j.value("delimiter", std::string{","});
  if (delim.size() != 1) throw ConfigError("manifest delimiter must be one character");
  c.delimiter = delim[0];
  const std::string header = j.value("header", std::string{"auto"});
  c.header = header == "yes"  ? io::HeaderMode::Yes
             : header == "no" ? io::HeaderMode::No
                              : io::HeaderMode::Auto;
  c.categorical = j.value("categorical", std::vector<std::string>{});
  c.id_column = j.value("id_column", std::string{});
  return c;
}

inline std::vector<std::string> axis_names(Index k, const std::string& stem = "axis") {
  std::vector<std::string> names;
  for (Index j = 0; j < k; ++j) names.push_back(stem + std::to_string(j + 1));
  return names;
}

inline std::vector<std::string> index_names(Index k) {
  std::vector<std::string> names;
  for (Index j = 0; j < k; ++j) names.push_back(std::to_string(j + 1));
  return names;
}

/// A run in progress: collects files and the report, then seals the manifest.
class BundleWriter {
 public:
  BundleWriter(const JobConfig& config) : config_(config) {
    std::filesystem::create_directories(config.out_dir);
    start_ = std::chrono::steady_clock::now();
  }

  std::string path_of(const std::string& name) const {
    return (std::filesystem::path(config_.out_dir) / name).string();
  }

  void write_matrix(const std::string& name, const Matrix& m,
                    const std::vector<std::string>& row_ids,
                    std::vector<std::string> col_names, const std::string& id_header) {
    io::write_matrix_csv_file(path_of(name), m, row_ids, std::move(col_names), id_header);
    bundle_.files.push_back(path_of(name));
  }

  void write_eigenvalues(const Vector& lambda, const std::string& name = "eigenvalues.csv",
                         const std::string& value_column = "lambda") {
    Matrix m(lambda.size(), 1);
    m.col(0) = lambda;
    write_matrix(name, m, index_names(lambda.size()), {value_column}, "axis");
  }

  nlohmann::ordered_json& report() { return report_; }

  /// Quality curve from a bare spectrum (methods whose coordinates are not
  /// a PcaResult): share per axis and the cumulative curve.
  void add_spectrum_quality(const Vector& lambda) {
    const double total = lambda.cwiseMax(0.0).sum();
    nlohmann::ordered_json quality;
    std::vector<double> share, cumulative;
    double running = 0.0;
    for (Index j = 0; j < lambda.size(); ++j) {
      const double s = total > 0.0 ? std::max(lambda[j], 0.0) / total : 0.0;
      running += s;
      share.push_back(s);
      cumulative.push_back(running);
    }
    quality["axis_share"] = share;
    quality["cumulative_share"] = cumulative;
    report_["quality"] = std::move(quality);
  }

  void add_quality(const QualityReport& q) {
    nlohmann::ordered_json quality;
    quality["axis_share"] = std::vector<double>(q.axis_share.begin(), q.axis_share.end());
    quality["cumulative_share"] =
        std::vector<double>(q.cumulative_share.begin(), q.cumulative_share.end());
    quality["degenerate_items"] = q.degenerate_items;
    quality["spectrum_complete"] = q.spectrum_complete;
    if (!q.spectrum_complete) {
      quality["note"] = "shares divide by the computed part of the spectrum only; "
                        "they are optimistic lower-bounded-denominator values";
    }
    report_["quality"] = std::move(quality);
  }

  ResultBundle finish() {
    report_["method"] = method_name(config_.method);
    std::ofstream report_file(path_of("report.json"));
    report_file << report_.dump(2) << '\n';
    bundle_.files.push_back(path_of("report.json"));

    const auto elapsed = std::chrono::steady_clock::now() - start_;
    nlohmann::ordered_json manifest;
    manifest["tool"] = "dimred";
    manifest["version"] = kVersion;
    manifest["config"] = config_to_json(config_);
    manifest["seed"] = config_.seed;
    manifest["duration_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
    manifest["outputs"] = bundle_.files;
    bundle_.manifest = manifest;
    std::ofstream manifest_file(path_of("manifest.json"));
    manifest_file << manifest.dump(2) << '\n';
    bundle_.files.push_back(path_of("manifest.json"));
    return std::move(bundle_);
  }

 private:
  const JobConfig& config_;
  std::chrono::steady_clock::time_point start_;
  ResultBundle bundle_;
  nlohmann::ordered_json report_;
};

/// Metric file: one column (or row) of weights = diagonal metric, square
/// table = full SPD metric.
inline SpdFactor load_metric(const std::string& path, Index expected_dim, char delimiter) {
  const Matrix m = io::read_matrix(path, delimiter);
  if (m.cols() == 1 || m.rows() == 1) {
    const Vector w = m.cols() == 1 ? Vector(m.col(0)) : Vector(m.row(0).transpose());
    if (w.size() != expected_dim) {
      throw DimensionMismatchError("metric file '" + path + "' has " +
                                   std::to_string(w.size()) + " weights, expected " +
                                   std::to_string(expected_dim));
    }
    return SpdFactor::from_weights(w);
  }
  if (m.rows() != expected_dim || m.cols() != expected_dim) {
    throw DimensionMismatchError("metric file '" + path + "' is " + std::to_string(m.rows()) +
                                 "x" + std::to_string(m.cols()) + ", expected " +
                                 std::to_string(expected_dim) + "x" +
                                 std::to_string(expected_dim));
  }
  return spd_factor(m);
}

inline void write_pca_outputs(BundleWriter& writer, const PcaResult& result,
                              const Vector& full_lambda, bool spectrum_complete,
                              const std::vector<std::string>& row_ids,
                              const std::vector<std::string>& variable_names) {
  writer.write_matrix("components.csv", result.components, row_ids,
                      axis_names(result.components.cols()), "id");
  writer.write_matrix("axes.csv", result.axes, variable_names, axis_names(result.axes.cols()),
                      "variable");
  writer.write_eigenvalues(result.eigenvalues);
  writer.add_quality(quality_metrics(result, full_lambda, spectrum_complete));
}

/// Truncate a full decomposition for output while quality keeps the whole
/// spectrum.
inline PcaResult truncated(const PcaResult& full, long rank) {
  if (rank == -1 || rank >= full.eigenvalues.size()) return full;
  PcaResult cut;
  cut.components = full.components.leftCols(rank);
  cut.eigenvalues = full.eigenvalues.head(rank);
  cut.axes = full.axes.leftCols(rank);
  return cut;
}

}  // namespace detail

/// Run one job end to end: ingest, dispatch to the method pipeline, write
/// the bundle. Throws typed errors; the CLI maps them to exit codes.
inline ResultBundle run_job(const JobConfig& config) {
  validate(config);

  io::IngestOptions ingest_options;
  ingest_options.delimiter = config.delimiter;
  ingest_options.header = config.header;
  ingest_options.categorical = config.categorical;
  ingest_options.id_column = config.id_column;
  ingest_options.auto_categorical = config.method == Method::Mca;

  detail::BundleWriter writer(config);

  switch (config.method) {
    case Method::Pca:
    case Method::PcaSc:
    case Method::PcaDa:
    case Method::Pcamet: {
      const io::IngestedTable table = io::ingest_file(config.input, ingest_options);
      Matrix a = table.numeric;
      PcaResult full;
      const bool complete = config.backend != SvdBackend::Grp;
      // with an exact backend, compute everything and truncate afterwards so
      // the quality report sees the whole spectrum
      PcaMethod method = pca_method_of(config);
      PcaMethod full_method = method;
      if (complete) full_method.rank.reset();

      if (config.method == Method::Pca) {
        if (config.center) a = center(a).matrix;
        if (config.scale) a = scale_columns(a);
        full = pca_core(a, full_method);
      } else if (config.method == Method::PcaSc) {
        full = pca_scaled_centered(a, full_method);
      } else if (config.method == Method::PcaDa) {
        const DoubleAveragedPca da = pca_double_averaged(a, full_method);
        full = da.pca;
        Matrix row_fx(da.decomposition.row_effects.size(), 1);
        row_fx.col(0) = da.decomposition.row_effects;
        writer.write_matrix("row_effects.csv", row_fx, table.row_ids, {"effect"}, "id");
        Matrix col_fx(da.decomposition.col_effects.size(), 1);
        col_fx.col(0) = da.decomposition.col_effects;
        writer.write_matrix("col_effects.csv", col_fx, table.numeric_names, {"effect"},
                            "variable");
        writer.report()["global_mean"] = da.decomposition.global_mean;
      } else {  // Pcamet
        const SpdFactor n = config.row_weights_file.empty()
                                ? SpdFactor::identity(a.rows())
                                : detail::load_metric(config.row_weights_file, a.rows(),
                                                      config.delimiter);
        const SpdFactor p = config.col_metric_file.empty()
                                ? SpdFactor::identity(a.cols())
                                : detail::load_metric(config.col_metric_file, a.cols(),
                                                      config.delimiter);
        if (config.center) {
          a = n.is_diagonal() ? weighted_center(a, n.matrix().diagonal()).matrix
                              : center(a).matrix;
        }
        full = pca_met(a, n, p, full_method);
      }
      detail::write_pca_outputs(writer, detail::truncated(full, config.rank),
                                full.eigenvalues, complete, table.row_ids,
                                table.numeric_names);
      break;
    }

    case Method::Pcaiv: {
      const io::IngestedTable table = io::ingest_file(config.input, ingest_options);
      const Matrix& a = table.numeric;
      const Subspace e = config.row_basis_file.empty()
                             ? Subspace::full(a.rows())
                             : Subspace(io::read_matrix(config.row_basis_file, config.delimiter));
      const Subspace f = config.col_basis_file.empty()
                             ? Subspace::full(a.cols())
                             : Subspace(io::read_matrix(config.col_basis_file, config.delimiter));
      PcaMethod method = pca_method_of(config);
      const bool complete = config.backend != SvdBackend::Grp;
      if (complete) method.rank.reset();

      PcaivResult r;
      if (!config.row_weights_file.empty() || !config.col_metric_file.empty()) {
        const SpdFactor n = config.row_weights_file.empty()
                                ? SpdFactor::identity(a.rows())
                                : detail::load_metric(config.row_weights_file, a.rows(),
                                                      config.delimiter);
        const SpdFactor p = config.col_metric_file.empty()
                                ? SpdFactor::identity(a.cols())
                                : detail::load_metric(config.col_metric_file, a.cols(),
                                                      config.delimiter);
        r = pcaiv_with_metrics(a, e, f, n, p, method);
      } else {
        r = pcaiv(a, e, f, method);
      }
      detail::write_pca_outputs(writer, detail::truncated(r.pca, config.rank),
                                r.pca.eigenvalues, complete, table.row_ids,
                                table.numeric_names);
      writer.report()["projection_quality"] = r.projection_quality;
      writer.report()["projection_degenerate"] = r.degenerate;
      break;
    }

    case Method::Coa: {
      const io::IngestedTable table = io::ingest_file(config.input, ingest_options);
      Matrix counts = table.numeric;
      std::vector<std::string> row_ids = table.row_ids;
      std::vector<std::string> col_names = table.numeric_names;
      if (config.drop_empty) {
        std::vector<Index> rows, cols;
        for (Index i = 0; i < counts.rows(); ++i)
          if (counts.row(i).sum() > 0.0) rows.push_back(i);
        for (Index j = 0; j < counts.cols(); ++j)
          if (counts.col(j).sum() > 0.0) cols.push_back(j);
        Matrix kept(rows.size(), cols.size());
        std::vector<std::string> kept_rows, kept_cols;
        for (std::size_t i = 0; i < rows.size(); ++i) {
          kept_rows.push_back(row_ids[static_cast<std::size_t>(rows[i])]);
          for (std::size_t j = 0; j < cols.size(); ++j) {
            kept(static_cast<Index>(i), static_cast<Index>(j)) = counts(rows[i], cols[j]);
          }
        }
        for (Index j : cols) kept_cols.push_back(col_names[static_cast<std::size_t>(j)]);
        counts = std::move(kept);
        row_ids = std::move(kept_rows);
        col_names = std::move(kept_cols);
      }
      const ContingencyTable t(counts);
      const CoaResult r = coa(t, pca_method_of(config));
      const ChiSquareStat chi2 = chi_square(t);
      writer.write_matrix("row_coordinates.csv", r.row_coords, row_ids,
                          detail::axis_names(r.row_coords.cols()), "id");
      writer.write_matrix("col_coordinates.csv", r.col_coords, col_names,
                          detail::axis_names(r.col_coords.cols()), "category");
      writer.write_eigenvalues(r.lambda);
      writer.add_spectrum_quality(r.lambda);
      writer.report()["chi_square"] = {{"frequency_scale", chi2.frequency_scale},
                                       {"count_scale", chi2.count_scale}};
      writer.report()["spectrum_total"] = r.lambda.sum();
      break;
    }

    case Method::Cca: {
      const io::IngestedTable table_a = io::ingest_file(config.input, ingest_options);
      const io::IngestedTable table_b = io::ingest_file(config.input_b, ingest_options);
      Matrix a = table_a.numeric;
      Matrix b = table_b.numeric;
      if (config.center) {
        a = center(a).matrix;
        b = center(b).matrix;
      }
      const CcaResult r = cca(a, b, pca_method_of(config));
      const auto can = detail::axis_names(r.correlations.size(), "can");
      writer.write_matrix("variates_a.csv", r.variates_a, table_a.row_ids, can, "id");
      writer.write_matrix("variates_b.csv", r.variates_b, table_b.row_ids, can, "id");
      writer.write_matrix("loadings_a.csv", r.loadings_a, table_a.numeric_names, can,
                          "variable");
      writer.write_matrix("loadings_b.csv", r.loadings_b, table_b.numeric_names, can,
                          "variable");
      writer.write_eigenvalues(r.correlations, "correlations.csv", "correlation");
      writer.report()["warnings"] = r.warnings;
      break;
    }

    case Method::Mca: {
      const io::IngestedTable table = io::ingest_file(config.input, ingest_options);
      std::vector<Matrix> blocks;
      std::vector<std::string> variable_labels;
      for (std::size_t b = 0; b < table.categorical.size(); ++b) {
        blocks.push_back(table.categorical[b].z);
        for (const std::string& label : table.categorical[b].labels) {
          variable_labels.push_back(table.categorical_names[b] + "=" + label);
        }
      }
      for (Index j = 0; j < table.numeric.cols(); ++j) {
        blocks.push_back(table.numeric.col(j));
        variable_labels.push_back(table.numeric_names[static_cast<std::size_t>(j)]);
      }
      PcaMethod method = pca_method_of(config);
      const bool complete = config.backend != SvdBackend::Grp;
      if (complete) method.rank.reset();
      const McaResult r = mca(blocks, method);
      detail::write_pca_outputs(writer, detail::truncated(r.pca, config.rank),
                                r.pca.eigenvalues, complete, table.row_ids, variable_labels);
      nlohmann::ordered_json slices = nlohmann::ordered_json::array();
      for (const BlockSlice& s : r.block_slices) {
        slices.push_back({{"begin", s.begin}, {"size", s.size}});
      }
      writer.report()["block_slices"] = std::move(slices);
      break;
    }

    case Method::Mds: {
      const io::IngestedTable table = io::ingest_file(config.input, ingest_options);
      const DistanceMatrix d(table.numeric);
      const Index r_requested =
          config.rank == -1 ? d.size() - 1 : static_cast<Index>(config.rank);
      const MdsResult r = mds(d, r_requested, pca_method_of(config));
      writer.write_matrix("coordinates.csv", r.coords, table.row_ids,
                          detail::axis_names(r.coords.cols()), "id");
      writer.write_eigenvalues(r.lambda);
      writer.add_spectrum_quality(r.lambda);
      writer.report()["n_negative"] = r.n_negative;
      writer.report()["negative_mass"] = r.negative_mass;
      writer.report()["stress"] = embedding_stress(d, r.coords);
      writer.report()["warnings"] = r.warnings;
      break;
    }
  }

  return writer.finish();
}

/// Rebuild a configuration from a manifest written by run_job.
inline JobConfig config_from_manifest(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw ConfigError("cannot open manifest '" + manifest_path + "'");
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("manifest '" + manifest_path + "' is not valid JSON: " + e.what());
  }
  if (!manifest.contains("config")) {
    throw ConfigError("manifest '" + manifest_path + "' has no config block");
  }
  return detail::config_from_json(manifest["config"]);
}

}  // namespace job
}  // namespace dimred
