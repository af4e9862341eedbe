#include "tlc/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "binio.hpp"
#include "json.hpp"
#include "tlc/error.hpp"
#include "tlc/rng.hpp"

namespace tlc::eval {

namespace {

using nlohmann::json;

[[noreturn]] void fail_eval(const std::string& message) {
  throw Error(ErrorKind::kTrainEval, message);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_display(double v) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

json matrix_to_json(const std::vector<double>& values, std::size_t classes) {
  json rows = json::array();
  for (std::size_t t = 0; t < classes; ++t) {
    json row = json::array();
    for (std::size_t p = 0; p < classes; ++p) {
      row.push_back(values[t * classes + p]);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

json counts_to_json(const std::vector<std::uint64_t>& counts,
                    std::size_t classes) {
  json rows = json::array();
  for (std::size_t t = 0; t < classes; ++t) {
    json row = json::array();
    for (std::size_t p = 0; p < classes; ++p) {
      row.push_back(counts[t * classes + p]);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

json cell_to_json(const SweepCell& cell) {
  const EvaluationReport& r = cell.report;
  json j;
  j["split"] = {{"train", cell.split.train_fraction},
                {"test", cell.split.test_fraction},
                {"validation", cell.split.validation_fraction},
                {"seed", cell.split.seed}};
  j["split_label"] = cell.split_label;
  j["head"] = cell.head;
  j["seed"] = cell.seed;
  j["overall_accuracy"] = r.overall_accuracy;
  j["baseline"] = r.baseline;
  j["sample_count"] = r.sample_count;
  j["per_class_accuracy"] = r.per_class_accuracy;
  j["confusion_counts"] = counts_to_json(r.confusion.counts,
                                         r.confusion.classes);
  j["confusion_normalized"] =
      matrix_to_json(r.confusion.normalized, r.confusion.classes);
  return j;
}

SweepCell cell_from_json(const json& j) {
  SweepCell cell;
  cell.split.train_fraction = j.at("split").at("train").get<double>();
  cell.split.test_fraction = j.at("split").at("test").get<double>();
  cell.split.validation_fraction =
      j.at("split").at("validation").get<double>();
  cell.split.seed = j.at("split").at("seed").get<std::uint64_t>();
  cell.split_label = j.at("split_label").get<std::string>();
  cell.head = j.at("head").get<std::string>();
  cell.seed = j.at("seed").get<std::uint64_t>();

  EvaluationReport& r = cell.report;
  r.head = cell.head;
  r.split = cell.split;
  r.split_label = cell.split_label;
  r.seed = cell.seed;
  r.overall_accuracy = j.at("overall_accuracy").get<double>();
  r.baseline = j.at("baseline").get<double>();
  r.sample_count = j.at("sample_count").get<std::size_t>();
  r.per_class_accuracy =
      j.at("per_class_accuracy").get<std::vector<double>>();

  const json& counts = j.at("confusion_counts");
  const std::size_t classes = counts.size();
  r.confusion.classes = classes;
  r.confusion.counts.reserve(classes * classes);
  for (const auto& row : counts) {
    if (row.size() != classes) fail_eval("confusion_counts is not square");
    for (const auto& v : row) {
      r.confusion.counts.push_back(v.get<std::uint64_t>());
    }
  }
  const json& norm = j.at("confusion_normalized");
  if (norm.size() != classes) fail_eval("confusion_normalized shape mismatch");
  for (const auto& row : norm) {
    for (const auto& v : row) {
      r.confusion.normalized.push_back(v.get<double>());
    }
  }
  r.confusion.empty_rows.assign(classes, false);
  for (std::size_t t = 0; t < classes; ++t) {
    std::uint64_t row_sum = 0;
    for (std::size_t p = 0; p < classes; ++p) {
      row_sum += r.confusion.at(t, p);
    }
    r.confusion.empty_rows[t] = row_sum == 0;
  }
  return cell;
}

}  // namespace

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t sum = 0;
  for (const std::uint64_t c : counts) sum += c;
  return sum;
}

std::uint64_t ConfusionMatrix::diagonal() const {
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < classes; ++i) sum += at(i, i);
  return sum;
}

ConfusionMatrix confusion_matrix(std::span<const int> truths,
                                 std::span<const int> predictions,
                                 std::size_t classes) {
  if (truths.size() != predictions.size()) {
    throw Error(ErrorKind::kInvalidInput,
                "truth and prediction lists differ in length: " +
                    std::to_string(truths.size()) + " vs " +
                    std::to_string(predictions.size()));
  }
  if (classes == 0) {
    throw Error(ErrorKind::kInvalidInput, "class count must be >= 1");
  }
  ConfusionMatrix m;
  m.classes = classes;
  m.counts.assign(classes * classes, 0);
  m.normalized.assign(classes * classes, 0.0);
  m.empty_rows.assign(classes, false);
  for (std::size_t i = 0; i < truths.size(); ++i) {
    const int t = truths[i];
    const int p = predictions[i];
    if (t < 0 || p < 0 || t >= static_cast<int>(classes) ||
        p >= static_cast<int>(classes)) {
      throw Error(ErrorKind::kInvalidInput,
                  "class id out of range at position " + std::to_string(i));
    }
    ++m.counts[static_cast<std::size_t>(t) * classes +
               static_cast<std::size_t>(p)];
  }
  for (std::size_t t = 0; t < classes; ++t) {
    std::uint64_t row_sum = 0;
    for (std::size_t p = 0; p < classes; ++p) row_sum += m.at(t, p);
    if (row_sum == 0) {
      m.empty_rows[t] = true;
      continue;
    }
    for (std::size_t p = 0; p < classes; ++p) {
      m.normalized[t * classes + p] =
          static_cast<double>(m.at(t, p)) / static_cast<double>(row_sum);
    }
  }
  return m;
}

EvaluationReport evaluate(const heads::TrainedHead& head,
                          const heads::LabeledEmbeddings& test,
                          int test_batch_size) {
  if (test.size() == 0) fail_eval("test set is empty");
  if (test_batch_size != -1 && test_batch_size < 1) {
    throw Error(ErrorKind::kInvalidInput,
                "test_batch_size must be -1 or >= 1");
  }
  const std::size_t classes = std::visit(
      [](const auto& model) { return static_cast<std::size_t>(model.classes); },
      head);
  if (test.classes != classes) {
    fail_eval("head has " + std::to_string(classes) +
              " classes but the test set declares " +
              std::to_string(test.classes));
  }

  std::vector<int> predictions;
  predictions.reserve(test.size());
  const std::size_t chunk = test_batch_size == -1
                                ? test.size()
                                : static_cast<std::size_t>(test_batch_size);
  for (std::size_t begin = 0; begin < test.size(); begin += chunk) {
    const std::size_t end = std::min(begin + chunk, test.size());
    for (std::size_t i = begin; i < end; ++i) {
      predictions.push_back(heads::predict(head, test.row(i)).label);
    }
  }

  EvaluationReport report;
  report.confusion = confusion_matrix(test.labels, predictions, classes);
  report.sample_count = test.size();
  report.overall_accuracy =
      static_cast<double>(report.confusion.diagonal()) /
      static_cast<double>(report.confusion.total());
  report.per_class_accuracy.resize(classes);
  for (std::size_t c = 0; c < classes; ++c) {
    report.per_class_accuracy[c] = report.confusion.norm_at(c, c);
  }
  report.baseline = 1.0 / static_cast<double>(classes);
  report.head = heads::head_kind_name(heads::kind_of(head));
  return report;
}

const SweepCell* SweepReport::find(std::string_view split_label,
                                   std::string_view head) const {
  for (const SweepCell& cell : cells) {
    if (cell.split_label == split_label && cell.head == head) return &cell;
  }
  return nullptr;
}

CellData prepare_cell_data(const dataset::DatasetManifest& manifest,
                           const embedding::EmbeddingSet& set,
                           const dataset::SplitConfig& split_config,
                           bool standardize) {
  CellData data;
  data.split = dataset::stratified_split(manifest, split_config);
  data.train = heads::make_labeled(manifest, set, data.split.train_ids);
  data.validation =
      heads::make_labeled(manifest, set, data.split.validation_ids);
  data.test = heads::make_labeled(manifest, set, data.split.test_ids);
  if (standardize) {
    const heads::Standardizer s = heads::fit_standardizer(data.train);
    heads::standardize_in_place(s, data.train);
    heads::standardize_in_place(s, data.validation);
    heads::standardize_in_place(s, data.test);
  }
  return data;
}

CellResult run_cell(const dataset::DatasetManifest& manifest,
                    const embedding::EmbeddingSet& set,
                    const dataset::SplitConfig& split_config,
                    heads::HeadKind head, const heads::TrainingConfig& config,
                    std::uint64_t train_seed) {
  CellData data = prepare_cell_data(manifest, set, split_config,
                                    config.standardize_features);
  heads::TrainingConfig cell_config = config;
  cell_config.seed = train_seed;
  CellResult result;
  result.model =
      heads::train_head(head, data.train, data.validation, cell_config);
  result.report = evaluate(result.model, data.test, config.test_batch_size);
  result.report.split = split_config;
  result.report.split_label = dataset::split_label(split_config);
  result.report.seed = train_seed;
  return result;
}

std::uint64_t cell_seed(std::uint64_t master_seed, std::size_t split_index,
                        std::size_t head_index) {
  return combine_seed(
      combine_seed(combine_seed(master_seed, 2),
                   static_cast<std::uint64_t>(split_index)),
      static_cast<std::uint64_t>(head_index));
}

SweepReport run_sweep(const dataset::DatasetManifest& manifest,
                      const embedding::EmbeddingSet& set,
                      const std::vector<dataset::SplitConfig>& splits,
                      const std::vector<heads::HeadKind>& head_kinds,
                      const heads::TrainingConfig& config,
                      const ProgressFn& progress) {
  if (splits.empty() || head_kinds.empty()) {
    throw Error(ErrorKind::kInvalidInput,
                "sweep needs at least one split and one head");
  }
  for (const dataset::Sample& s : manifest.samples) {
    if (set.entries.find(s.sample_id) == set.entries.end()) {
      fail_eval("no embedding for sample '" + s.sample_id + "'");
    }
  }

  SweepReport report;
  report.dataset = manifest.name;
  report.provider_tag = set.provider_tag;
  for (std::size_t i = 0; i < splits.size(); ++i) {
    const std::string label = dataset::split_label(splits[i]);
    for (std::size_t j = 0; j < head_kinds.size(); ++j) {
      const char* head_name = heads::head_kind_name(head_kinds[j]);
      try {
        CellResult cell = run_cell(manifest, set, splits[i], head_kinds[j],
                                   config, cell_seed(config.seed, i, j));
        if (progress) {
          progress("split=" + label + " head=" + head_name + " accuracy=" +
                   format_display(cell.report.overall_accuracy));
        }
        report.cells.push_back({label, splits[i], head_name,
                                cell.report.seed, std::move(cell.report)});
      } catch (const Error& e) {
        throw Error(e.kind(), "sweep cell (split=" + label +
                                  ", head=" + head_name + "): " + e.what());
      }
    }
  }
  return report;
}

std::string to_json_string(const SweepReport& report) {
  json j;
  j["dataset"] = report.dataset;
  j["provider_tag"] = report.provider_tag;
  json cells = json::array();
  for (const SweepCell& cell : report.cells) {
    cells.push_back(cell_to_json(cell));
  }
  j["cells"] = std::move(cells);
  return j.dump(2) + "\n";
}

SweepReport sweep_from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kInvalidInput,
                std::string("bad report json: ") + e.what());
  }
  try {
    SweepReport report;
    report.dataset = j.at("dataset").get<std::string>();
    report.provider_tag = j.at("provider_tag").get<std::string>();
    for (const auto& cell : j.at("cells")) {
      report.cells.push_back(cell_from_json(cell));
    }
    return report;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kInvalidInput,
                std::string("bad report json: ") + e.what());
  }
}

void write_json(const SweepReport& report, const std::filesystem::path& path) {
  binio::write_file_atomic(to_json_string(report), path);
}

void write_csv(const SweepReport& report, const std::filesystem::path& path) {
  std::string out = "split_label,head,seed,overall_accuracy\n";
  for (const SweepCell& cell : report.cells) {
    out += cell.split_label;
    out += ',';
    out += cell.head;
    out += ',';
    out += std::to_string(cell.seed);
    out += ',';
    out += format_double(cell.report.overall_accuracy);
    out += '\n';
  }
  binio::write_file_atomic(out, path);
}

void write_plot_data(const SweepReport& report,
                     const std::filesystem::path& path) {
  json matrices = json::array();
  for (const SweepCell& cell : report.cells) {
    const ConfusionMatrix& m = cell.report.confusion;
    json display = json::array();
    for (std::size_t t = 0; t < m.classes; ++t) {
      json row = json::array();
      for (std::size_t p = 0; p < m.classes; ++p) {
        row.push_back(format_display(m.norm_at(t, p)));
      }
      display.push_back(std::move(row));
    }
    json entry;
    entry["split_label"] = cell.split_label;
    entry["head"] = cell.head;
    entry["display"] = std::move(display);
    entry["values"] = matrix_to_json(m.normalized, m.classes);
    matrices.push_back(std::move(entry));
  }
  json j;
  j["matrices"] = std::move(matrices);
  binio::write_file_atomic(j.dump(2) + "\n", path);
}

}  // namespace tlc::eval
