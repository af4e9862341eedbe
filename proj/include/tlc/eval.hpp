// Confusion matrices, evaluation reports, and the split x head sweep.
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tlc/dataset.hpp"
#include "tlc/embedding.hpp"
#include "tlc/heads.hpp"

namespace tlc::eval {

struct ConfusionMatrix {
  std::size_t classes = 0;
  std::vector<std::uint64_t> counts;  // classes x classes, row = true class
  std::vector<double> normalized;     // rows sum to 1 unless the row is empty
  std::vector<bool> empty_rows;       // true classes with no test samples

  std::uint64_t at(std::size_t t, std::size_t p) const {
    return counts[t * classes + p];
  }
  double norm_at(std::size_t t, std::size_t p) const {
    return normalized[t * classes + p];
  }
  std::uint64_t total() const;
  std::uint64_t diagonal() const;
};

ConfusionMatrix confusion_matrix(std::span<const int> truths,
                                 std::span<const int> predictions,
                                 std::size_t classes);

struct EvaluationReport {
  double overall_accuracy = 0.0;
  std::vector<double> per_class_accuracy;  // normalized diagonal
  ConfusionMatrix confusion;
  double baseline = 0.0;  // 1/K
  std::string head;
  std::string split_label;
  dataset::SplitConfig split;
  std::uint64_t seed = 0;
  std::size_t sample_count = 0;
};

// Predicts every test row exactly once. test_batch_size only chunks the
// work (-1 means one pass over the whole set) and never changes results.
EvaluationReport evaluate(const heads::TrainedHead& head,
                          const heads::LabeledEmbeddings& test,
                          int test_batch_size);

struct SweepCell {
  std::string split_label;
  dataset::SplitConfig split;
  std::string head;
  std::uint64_t seed = 0;
  EvaluationReport report;
};

struct SweepReport {
  std::string dataset;
  std::string provider_tag;
  std::vector<SweepCell> cells;

  const SweepCell* find(std::string_view split_label,
                        std::string_view head) const;
};

// The partitioned data for one sweep cell; standardization (when enabled)
// is fitted on the train partition and applied to all three.
struct CellData {
  dataset::SplitResult split;
  heads::LabeledEmbeddings train;
  heads::LabeledEmbeddings validation;
  heads::LabeledEmbeddings test;
};

CellData prepare_cell_data(const dataset::DatasetManifest& manifest,
                           const embedding::EmbeddingSet& set,
                           const dataset::SplitConfig& split_config,
                           bool standardize);

struct CellResult {
  heads::TrainedHead model;
  EvaluationReport report;
};

// One split+train+evaluate cycle. train_seed overrides config.seed for
// this cell (the sweep derives per-cell seeds; standalone runs pass the
// config seed through).
CellResult run_cell(const dataset::DatasetManifest& manifest,
                    const embedding::EmbeddingSet& set,
                    const dataset::SplitConfig& split_config,
                    heads::HeadKind head, const heads::TrainingConfig& config,
                    std::uint64_t train_seed);

using ProgressFn = std::function<void(const std::string&)>;

// Cell (i, j) trains with seed
// combine_seed(combine_seed(combine_seed(config.seed, 2), i), j).
// Failures propagate with the cell coordinates prepended.
SweepReport run_sweep(const dataset::DatasetManifest& manifest,
                      const embedding::EmbeddingSet& set,
                      const std::vector<dataset::SplitConfig>& splits,
                      const std::vector<heads::HeadKind>& head_kinds,
                      const heads::TrainingConfig& config,
                      const ProgressFn& progress = {});

std::uint64_t cell_seed(std::uint64_t master_seed, std::size_t split_index,
                        std::size_t head_index);

// Report emission. JSON is lossless (shortest round-trip doubles) and
// byte-stable for identical reports; the plot data file carries each
// normalized matrix twice, as 2-decimal display strings and full
// precision values. All writes go through a temp file + rename.
std::string to_json_string(const SweepReport& report);
SweepReport sweep_from_json_string(const std::string& text);
void write_json(const SweepReport& report, const std::filesystem::path& path);
void write_csv(const SweepReport& report, const std::filesystem::path& path);
void write_plot_data(const SweepReport& report,
                     const std::filesystem::path& path);

}  // namespace tlc::eval
