// Command-line front end: one subcommand per analysis plus `rerun`, which
// replays a job from its manifest. Numeric outputs are CSV at 17 significant
// digits; errors map to family-specific exit codes (see --help).

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "dimred/job.hpp"
#include "dimred/version.hpp"

namespace {

// Exit codes by error family.
constexpr int kExitConfig = 2;     // bad flags or job configuration
constexpr int kExitParse = 3;      // unreadable input files
constexpr int kExitShape = 4;      // dimension or rank mismatches
constexpr int kExitDomain = 5;     // data violates a method precondition
constexpr int kExitNumerical = 6;  // rank-deficient sketch, singular block

void configure_threads() {
  const char* env = std::getenv("DIMRED_THREADS");
  if (env == nullptr) env = std::getenv("TOOL_THREADS");
  if (env == nullptr) return;
  const int threads = std::atoi(env);
  if (threads > 0) Eigen::setNbThreads(threads);
  // 0 = auto: leave Eigen's default
}

void add_job_options(CLI::App* cmd, dimred::job::JobConfig& config) {
  cmd->add_option("--input", config.input, "input table (delimited text)")->required();
  cmd->add_option("--input-b", config.input_b, "second input block (cca)");
  cmd->add_option("--rank", config.rank, "components to keep, -1 = all")->default_val(-1L);
  cmd->add_option_function<std::string>(
         "--backend",
         [&config](const std::string& name) { config.backend = dimred::job::parse_backend(name); },
         "spectral backend: evd, svd or grp")
      ->check(CLI::IsMember({"evd", "svd", "grp"}))
      ->default_str("svd");
  cmd->add_option("--oversampling", config.oversampling,
                  "extra sketch columns for the grp backend")
      ->default_val(5L);
  cmd->add_option("--seed", config.seed, "seed of the grp sketch")->default_val(0);
  cmd->add_flag("--center", config.center, "center columns before the analysis");
  cmd->add_flag("--scale", config.scale, "scale columns to unit norm (pca)");
  cmd->add_flag("--drop-empty", config.drop_empty, "coa: drop all-zero rows/columns");
  cmd->add_option("--row-weights", config.row_weights_file,
                  "row metric file: weight per line, or a square SPD table");
  cmd->add_option("--col-metric", config.col_metric_file,
                  "column metric file: weight per line, or a square SPD table");
  cmd->add_option("--row-basis", config.row_basis_file,
                  "pcaiv: basis of the component-side subspace (n x m table)");
  cmd->add_option("--col-basis", config.col_basis_file,
                  "pcaiv: basis of the axis-side subspace (p x q table)");
  cmd->add_option("--out", config.out_dir, "output directory")->required();
  cmd->add_option_function<std::string>(
         "--delimiter",
         [&config](const std::string& d) {
           if (d.size() != 1) throw CLI::ValidationError("--delimiter must be one character");
           config.delimiter = d[0];
         },
         "field delimiter")
      ->default_str(",");
  cmd->add_option_function<std::string>(
         "--header",
         [&config](const std::string& mode) {
           if (mode == "auto") config.header = dimred::io::HeaderMode::Auto;
           else if (mode == "yes") config.header = dimred::io::HeaderMode::Yes;
           else if (mode == "no") config.header = dimred::io::HeaderMode::No;
           else throw CLI::ValidationError("--header must be auto, yes or no");
         },
         "first row is a header: auto, yes, no")
      ->default_str("auto");
  cmd->add_option("--categorical", config.categorical,
                  "mca: columns (names or 1-based indices) to expand as indicators")
      ->delimiter(',');
  cmd->add_option("--id-column", config.id_column, "column holding row labels");
}

int run(const dimred::job::JobConfig& config) {
  const dimred::job::ResultBundle bundle = dimred::job::run_job(config);
  for (const std::string& file : bundle.files) {
    std::cout << file << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  configure_threads();

  CLI::App app{"dimred: dimension-reduction toolkit (PCA family, CoA, CCA, MCA, classical MDS)"};
  app.set_version_flag("--version", dimred::kVersion);
  app.require_subcommand(1);
  app.footer(
      "exit codes: 0 ok, 2 configuration, 3 input parsing, 4 shapes/ranks,\n"
      "            5 data domain (non-SPD metric, zero column, empty margin, ...),\n"
      "            6 numerical rank failures (collapsed sketch, singular block)\n"
      "environment: DIMRED_THREADS (or TOOL_THREADS) caps internal parallelism, 0 = auto");

  dimred::job::JobConfig config;
  std::string manifest_path;

  for (dimred::job::Method method :
       {dimred::job::Method::Pca, dimred::job::Method::PcaSc, dimred::job::Method::PcaDa,
        dimred::job::Method::Pcaiv, dimred::job::Method::Pcamet, dimred::job::Method::Coa,
        dimred::job::Method::Cca, dimred::job::Method::Mca, dimred::job::Method::Mds}) {
    CLI::App* cmd = app.add_subcommand(dimred::job::method_name(method));
    add_job_options(cmd, config);
    cmd->callback([&config, method]() { config.method = method; });
  }
  CLI::App* rerun = app.add_subcommand("rerun", "replay a job from its manifest");
  rerun->add_option("--manifest", manifest_path, "manifest.json of a previous run")->required();
  rerun->add_option("--out", config.out_dir, "output directory (defaults to the recorded one)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (rerun->parsed()) {
      const std::string out_override = config.out_dir;
      config = dimred::job::config_from_manifest(manifest_path);
      if (!out_override.empty()) config.out_dir = out_override;
    }
    return run(config);
  } catch (const dimred::ConfigError& e) {
    std::cerr << "error (configuration): " << e.what() << '\n';
    return kExitConfig;
  } catch (const dimred::ParseError& e) {
    std::cerr << "error (input parsing): " << e.what() << '\n';
    return kExitParse;
  } catch (const dimred::MixedTypeError& e) {
    std::cerr << "error (input parsing): " << e.what() << '\n';
    return kExitParse;
  } catch (const dimred::BadRankError& e) {
    std::cerr << "error (rank): " << e.what() << '\n';
    return kExitShape;
  } catch (const dimred::DimensionMismatchError& e) {
    std::cerr << "error (dimensions): " << e.what() << '\n';
    return kExitShape;
  } catch (const dimred::RankDeficientError& e) {
    std::cerr << "error (numerical rank): " << e.what()
              << "\nhint: for the grp backend, retry with another --seed\n";
    return kExitNumerical;
  } catch (const dimred::SingularBlockError& e) {
    std::cerr << "error (numerical rank): " << e.what() << '\n';
    return kExitNumerical;
  } catch (const dimred::ZeroColumnError& e) {
    std::cerr << "error (data domain): " << e.what()
              << "\nhint: drop the constant column or rerun without --scale\n";
    return kExitDomain;
  } catch (const dimred::EmptyMarginError& e) {
    std::cerr << "error (data domain): " << e.what()
              << "\nhint: rerun with --drop-empty to remove empty rows/columns first\n";
    return kExitDomain;
  } catch (const dimred::Error& e) {
    std::cerr << "error (data domain): " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
