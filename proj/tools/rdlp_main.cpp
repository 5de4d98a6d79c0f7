// rdlp: cluster daily load profiles over an experiment grid and select the
// best cluster set by CI and the qualitative scoring matrix.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "rdlp/config.hpp"
#include "rdlp/csv_io.hpp"
#include "rdlp/error.hpp"
#include "rdlp/plots.hpp"
#include "rdlp/results.hpp"
#include "rdlp/runner.hpp"
#include "rdlp/synthetic.hpp"

namespace fs = std::filesystem;

namespace {

void print_report(const rdlp::FinalReport& report) {
  std::printf("%zu runs, %zu with a valid CI\n\n", report.n_records, report.n_valid_ci);
  std::printf("Stage 1: top %zu by CI\n", report.by_ci.size());
  for (const auto& r : report.by_ci) std::printf("  %3d  %10.4f  %s\n", r.rank, r.ci, r.run_id.c_str());
  std::printf("\nStage 2: scoring matrix (lower total is better)\n");
  for (const auto& s : report.by_score) {
    if (s.disqualified) {
      std::printf("  %3d  %10s  %s  [%s]\n", s.final_rank, "-", s.run_id.c_str(), s.reason.c_str());
    } else {
      std::printf("  %3d  %10.1f  %s\n", s.final_rank, *s.total, s.run_id.c_str());
    }
  }
}

rdlp::ScoringMatrix matrix_for(const std::optional<fs::path>& path) {
  return path ? rdlp::load_scoring_matrix(*path) : rdlp::default_matrix();
}

int cmd_run(const fs::path& config_path, const std::optional<fs::path>& output, std::optional<std::size_t> top_n,
            std::optional<int> workers) {
  auto config = rdlp::load_config(config_path);
  if (output) config.output_dir = *output;
  if (top_n) config.top_n = *top_n;
  if (workers) config.workers = *workers;
  rdlp::validate(config);

  const auto data = rdlp::load_dataset(config.dataset);
  std::fprintf(stderr, "dataset: %zu profiles\n", data.profiles.size());
  const auto records = rdlp::run_grid(config, data);
  rdlp::write_results(config.output_dir, records, config);
  std::fprintf(stderr, "wrote %zu run records to %s\n", records.size(), config.output_dir.string().c_str());

  const rdlp::DatasetQualEvaluator evaluator(data.profiles, config.usability);
  const auto report =
      rdlp::select_and_rank(records, config.top_n, matrix_for(config.scoring_matrix), std::cref(evaluator));
  rdlp::write_report(config.output_dir, report);
  print_report(report);
  return 0;
}

int cmd_rank(const fs::path& dir, std::optional<std::size_t> top_n, const std::optional<fs::path>& matrix_path) {
  const auto config = rdlp::read_results_config(dir);
  const auto records = rdlp::read_results(dir);
  const auto data = rdlp::load_dataset(config.dataset);
  const rdlp::DatasetQualEvaluator evaluator(data.profiles, config.usability);
  const auto matrix = matrix_for(matrix_path ? matrix_path : config.scoring_matrix);
  const auto report = rdlp::select_and_rank(records, top_n.value_or(config.top_n), matrix, std::cref(evaluator));
  rdlp::write_report(dir, report);
  print_report(report);
  return 0;
}

int cmd_plot(const std::string& run_id, const fs::path& dir, const std::optional<fs::path>& out) {
  const auto record = rdlp::read_run(dir, run_id);
  const auto target = out.value_or(dir / "plots" / run_id);
  for (const auto& path : rdlp::emit_plots(record, target)) std::printf("%s\n", path.string().c_str());
  return 0;
}

int cmd_synth(const fs::path& spec_path, const fs::path& out, const std::optional<fs::path>& labels_path) {
  const auto spec = rdlp::load_synthetic_spec(spec_path);
  const auto data = rdlp::generate_synthetic(spec);
  rdlp::write_csv(out, data.profiles);
  if (labels_path) {
    std::ofstream labels(*labels_path);
    if (!labels) throw rdlp::DataError("cannot write '" + labels_path->string() + "'");
    labels << "household_id,date,archetype\n";
    for (std::size_t i = 0; i < data.profiles.size(); ++i) {
      const auto& p = data.profiles[i];
      labels << p.household_id << ',' << rdlp::format_date(p.date) << ','
             << spec.archetypes[static_cast<std::size_t>(data.labels[i])].name << '\n';
    }
  }
  std::fprintf(stderr, "wrote %zu profiles to %s\n", data.profiles.size(), out.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Representative daily load profile clustering and cluster-set selection"};
  app.require_subcommand(1);

  fs::path config_path;
  std::optional<fs::path> output;
  std::optional<std::size_t> top_n;
  std::optional<int> workers;
  auto* run = app.add_subcommand("run", "Execute an experiment grid and rank the results");
  run->add_option("--config", config_path, "Experiment config (YAML)")->required()->check(CLI::ExistingFile);
  run->add_option("--output", output, "Override the results directory");
  run->add_option("--top-n", top_n, "Runs carried into the qualitative stage");
  run->add_option("--workers", workers, "Concurrent clustering runs");

  fs::path results_dir = "results";
  std::optional<fs::path> matrix_path;
  auto* rank = app.add_subcommand("rank", "Re-rank persisted results");
  rank->add_option("--results", results_dir, "Results directory")->required()->check(CLI::ExistingDirectory);
  rank->add_option("--top-n", top_n, "Runs carried into the qualitative stage");
  rank->add_option("--matrix", matrix_path, "Scoring matrix (YAML)")->check(CLI::ExistingFile);

  std::string run_id;
  std::optional<fs::path> plot_out;
  auto* plot = app.add_subcommand("plot", "Emit RDLP curves and cluster sizes of one run");
  plot->add_option("--run", run_id, "Run id")->required();
  plot->add_option("--results", results_dir, "Results directory")->check(CLI::ExistingDirectory);
  plot->add_option("--out", plot_out, "Output directory (default <results>/plots/<run>)");

  fs::path spec_path, csv_out;
  std::optional<fs::path> labels_out;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic profile CSV");
  synth->add_option("--spec", spec_path, "Synthetic dataset spec (YAML)")->required()->check(CLI::ExistingFile);
  synth->add_option("--out", csv_out, "Output CSV")->required();
  synth->add_option("--labels", labels_out, "Also write generator archetype labels");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, output, top_n, workers);
    if (*rank) return cmd_rank(results_dir, top_n, matrix_path);
    if (*plot) return cmd_plot(run_id, results_dir, plot_out);
    if (*synth) return cmd_synth(spec_path, csv_out, labels_out);
  } catch (const rdlp::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const rdlp::DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
