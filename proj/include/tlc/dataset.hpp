// Labeled-sample manifests and deterministic stratified splitting.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace tlc::dataset {

struct ClassLabel {
  int id = 0;
  std::string name;
};

struct Sample {
  std::string sample_id;
  std::string source;  // image file path or embedding key
  int label = 0;
};

struct DatasetManifest {
  std::string name;
  std::vector<ClassLabel> labels;
  std::vector<Sample> samples;

  std::size_t class_count() const { return labels.size(); }
  std::size_t size() const { return samples.size(); }
};

struct SplitConfig {
  double train_fraction = 0.8;
  double test_fraction = 0.1;
  double validation_fraction = 0.1;
  std::uint64_t seed = 0;
};

struct SplitResult {
  std::vector<std::string> train_ids;
  std::vector<std::string> validation_ids;
  std::vector<std::string> test_ids;
  SplitConfig config_echo;
};

// Text manifest format (see docs/formats.md):
//   name=<string>;labels=<comma-separated names>
//   <sample_id>\t<source>\t<label_name>
// Blank lines and lines starting with '#' are ignored.
DatasetManifest load_manifest(const std::filesystem::path& path);
DatasetManifest parse_manifest(const std::string& text,
                               const std::string& origin);
void save_manifest(const DatasetManifest& manifest,
                   const std::filesystem::path& path);

// Throws on any invariant violation (duplicate ids, empty class, ...).
void validate(const DatasetManifest& manifest);
void validate(const SplitConfig& config);

// Counts indexed by class id; sums to manifest.size().
std::vector<std::size_t> class_distribution(const DatasetManifest& manifest);

// Per class: shuffle with a seed derived from (config.seed, class id),
// then take round(count * validation_fraction) for validation, then
// round(count * train_fraction) for train, then round(count *
// test_fraction) for test, each truncated to what is left. Rounding is
// half-up. A class that cannot place at least one sample in every
// partition is an error.
SplitResult stratified_split(const DatasetManifest& manifest,
                             const SplitConfig& config);

// "80-10" -> train 0.80, test 0.10 plus the given validation fraction.
SplitConfig parse_split_label(const std::string& label,
                              double validation_fraction,
                              std::uint64_t seed);
std::string split_label(const SplitConfig& config);

// Builds the configs for a sweep: split i gets seed
// combine_seed(combine_seed(master_seed, 1), i).
std::vector<SplitConfig> make_split_configs(
    const std::vector<std::string>& labels, double validation_fraction,
    std::uint64_t master_seed);

}  // namespace tlc::dataset
