// tlc: transfer-learning classifier heads over cached embeddings.
//
// Subcommands: ingest, extract, train, eval, sweep, report. Options come
// from an optional key=value config file with flag overrides; every
// random decision flows from --seed. Exit codes: 0 success, 2 input
// validation, 3 extraction, 4 train/eval.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tlc/dataset.hpp"
#include "tlc/embedding.hpp"
#include "tlc/error.hpp"
#include "tlc/eval.hpp"
#include "tlc/heads.hpp"
#include "tlc/rng.hpp"

namespace {

using namespace tlc;

struct Overrides {
  std::optional<std::string> config_path;
  std::optional<std::string> manifest;
  std::optional<std::string> provider;
  std::optional<std::string> source;
  std::optional<std::string> cache;
  std::optional<std::string> out;
  std::optional<std::string> splits;
  std::optional<std::string> heads;
  std::optional<std::string> head;
  std::optional<std::string> split;
  std::optional<std::string> model;
  std::optional<std::string> in;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> provider_seed;
  std::optional<std::uint64_t> dim;
  std::optional<int> steps;
  std::optional<int> train_batch;
  std::optional<int> validation_batch;
  std::optional<int> test_batch;
  std::optional<int> knn_k;
  std::optional<double> learning_rate;
  std::optional<double> svm_lambda;
  std::optional<double> validation_fraction;
  std::optional<bool> standardize;
};

struct Settings {
  std::string manifest;
  std::string provider = "builtin";
  std::string source;
  std::string cache;
  std::string out = ".";
  std::string head = "softmax";
  std::string split = "80-10";
  std::string model;
  std::string in;
  std::uint64_t seed = 0;
  std::uint64_t provider_seed = 0;  // backbone seed, fixed by default
  std::size_t dim = 2048;
  std::vector<std::string> split_labels = {"80-10", "60-30", "50-40",
                                           "40-50", "20-70"};
  std::vector<std::string> head_names = {"softmax", "svm", "knn"};
  double validation_fraction = 0.10;
  heads::TrainingConfig training;
};

[[noreturn]] void bad_input(const std::string& message) {
  throw Error(ErrorKind::kInvalidInput, message);
}

// Full precision so RESULT lines compare exactly across runs.
std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  std::string current;
  for (const char c : s) {
    if (c == ',') {
      parts.push_back(trim(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  parts.push_back(trim(current));
  for (const auto& p : parts) {
    if (p.empty()) bad_input("empty entry in list '" + s + "'");
  }
  return parts;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    return std::stoull(value);
  } catch (const std::exception&) {
    bad_input("'" + key + "': expected an unsigned integer, got '" + value +
              "'");
  }
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    return std::stoi(value);
  } catch (const std::exception&) {
    bad_input("'" + key + "': expected an integer, got '" + value + "'");
  }
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    return std::stod(value);
  } catch (const std::exception&) {
    bad_input("'" + key + "': expected a number, got '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  bad_input("'" + key + "': expected true/false, got '" + value + "'");
}

void apply_config_file(Settings& s, const std::string& path) {
  std::ifstream in(path);
  if (!in) bad_input("config file not found: " + path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      bad_input(path + ":" + std::to_string(line_no) +
                ": expected key = value");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key == "manifest") {
      s.manifest = value;
    } else if (key == "provider") {
      s.provider = value;
    } else if (key == "source") {
      s.source = value;
    } else if (key == "cache") {
      s.cache = value;
    } else if (key == "out") {
      s.out = value;
    } else if (key == "head") {
      s.head = value;
    } else if (key == "split") {
      s.split = value;
    } else if (key == "model") {
      s.model = value;
    } else if (key == "seed") {
      s.seed = parse_u64(key, value);
    } else if (key == "provider_seed") {
      s.provider_seed = parse_u64(key, value);
    } else if (key == "dim") {
      s.dim = static_cast<std::size_t>(parse_u64(key, value));
    } else if (key == "splits") {
      s.split_labels = split_list(value);
    } else if (key == "heads") {
      s.head_names = split_list(value);
    } else if (key == "validation_fraction") {
      s.validation_fraction = parse_double(key, value);
    } else if (key == "steps") {
      s.training.steps = parse_int(key, value);
    } else if (key == "learning_rate") {
      s.training.learning_rate = parse_double(key, value);
    } else if (key == "train_batch") {
      s.training.train_batch_size = parse_int(key, value);
    } else if (key == "validation_batch") {
      s.training.validation_batch_size = parse_int(key, value);
    } else if (key == "test_batch") {
      s.training.test_batch_size = parse_int(key, value);
    } else if (key == "svm_lambda") {
      s.training.svm_regularization = parse_double(key, value);
    } else if (key == "knn_k") {
      s.training.knn_k = parse_int(key, value);
    } else if (key == "standardize") {
      s.training.standardize_features = parse_bool(key, value);
    } else {
      bad_input(path + ":" + std::to_string(line_no) + ": unknown key '" +
                key + "'");
    }
  }
}

Settings resolve(const Overrides& ov) {
  Settings s;
  if (ov.config_path) apply_config_file(s, *ov.config_path);
  if (ov.manifest) s.manifest = *ov.manifest;
  if (ov.provider) s.provider = *ov.provider;
  if (ov.source) s.source = *ov.source;
  if (ov.cache) s.cache = *ov.cache;
  if (ov.out) s.out = *ov.out;
  if (ov.head) s.head = *ov.head;
  if (ov.split) s.split = *ov.split;
  if (ov.model) s.model = *ov.model;
  if (ov.in) s.in = *ov.in;
  if (ov.seed) s.seed = *ov.seed;
  if (ov.provider_seed) s.provider_seed = *ov.provider_seed;
  if (ov.dim) s.dim = static_cast<std::size_t>(*ov.dim);
  if (ov.splits) s.split_labels = split_list(*ov.splits);
  if (ov.heads) s.head_names = split_list(*ov.heads);
  if (ov.validation_fraction) s.validation_fraction = *ov.validation_fraction;
  if (ov.steps) s.training.steps = *ov.steps;
  if (ov.learning_rate) s.training.learning_rate = *ov.learning_rate;
  if (ov.train_batch) s.training.train_batch_size = *ov.train_batch;
  if (ov.validation_batch) {
    s.training.validation_batch_size = *ov.validation_batch;
  }
  if (ov.test_batch) s.training.test_batch_size = *ov.test_batch;
  if (ov.svm_lambda) s.training.svm_regularization = *ov.svm_lambda;
  if (ov.knn_k) s.training.knn_k = *ov.knn_k;
  if (ov.standardize) s.training.standardize_features = *ov.standardize;
  s.training.seed = s.seed;
  return s;
}

embedding::ProviderConfig provider_config(const Settings& s) {
  embedding::ProviderConfig config;
  if (s.provider == "builtin") {
    config.kind = embedding::ProviderKind::kBuiltinDeterministic;
  } else if (s.provider == "precomputed") {
    config.kind = embedding::ProviderKind::kPrecomputedFile;
    config.source_path = s.source;
  } else {
    bad_input("provider must be 'builtin' or 'precomputed', got '" +
              s.provider + "'");
  }
  config.dim = s.dim;
  config.seed = s.provider_seed;
  return config;
}

dataset::DatasetManifest load_manifest_checked(const Settings& s) {
  if (s.manifest.empty()) bad_input("no manifest given (--manifest or config)");
  return dataset::load_manifest(s.manifest);
}

embedding::EmbeddingSet load_embeddings(const Settings& s,
                                        const dataset::DatasetManifest& m) {
  return embedding::get_or_compute(m, provider_config(s), s.cache).set;
}

std::vector<heads::HeadKind> head_kinds(const Settings& s) {
  std::vector<heads::HeadKind> kinds;
  for (const auto& name : s.head_names) {
    const auto kind = heads::parse_head_kind(name);
    if (!kind) bad_input("unknown head '" + name + "'");
    kinds.push_back(*kind);
  }
  return kinds;
}

// Standalone train/eval act as cell (0, 0) of a one-split, one-head
// sweep, so they compose exactly with run_sweep.
dataset::SplitConfig standalone_split(const Settings& s) {
  return dataset::parse_split_label(s.split, s.validation_fraction,
                                    combine_seed(combine_seed(s.seed, 1), 0));
}

std::filesystem::path model_path(const Settings& s) {
  if (!s.model.empty()) return s.model;
  return std::filesystem::path(s.out) / ("model_" + s.head + ".hed");
}

void ensure_out_dir(const Settings& s) {
  std::filesystem::create_directories(s.out);
}

int cmd_ingest(const Settings& s) {
  const auto manifest = load_manifest_checked(s);
  const auto counts = dataset::class_distribution(manifest);
  std::cout << "manifest '" << manifest.name << "': "
            << manifest.class_count() << " classes, " << manifest.size()
            << " samples\n";
  for (std::size_t c = 0; c < counts.size(); ++c) {
    std::cout << "  " << manifest.labels[c].name << ": " << counts[c] << "\n";
  }
  std::cout << "RESULT: ingest ok name=" << manifest.name
            << " classes=" << manifest.class_count()
            << " samples=" << manifest.size() << "\n";
  return 0;
}

int cmd_extract(const Settings& s) {
  const auto manifest = load_manifest_checked(s);
  Settings with_cache = s;
  if (with_cache.cache.empty() &&
      provider_config(s).kind ==
          embedding::ProviderKind::kBuiltinDeterministic) {
    ensure_out_dir(s);
    with_cache.cache =
        (std::filesystem::path(s.out) / "embeddings.emb").string();
  }
  const auto result = embedding::get_or_compute(
      manifest, provider_config(with_cache), with_cache.cache);
  std::cout << "RESULT: extract ok entries=" << result.set.entries.size()
            << " dim=" << result.set.dim
            << " cached=" << result.served_from_cache
            << " computed=" << result.computed << "\n";
  return 0;
}

int cmd_train(const Settings& s) {
  const auto manifest = load_manifest_checked(s);
  const auto set = load_embeddings(s, manifest);
  const auto kind = heads::parse_head_kind(s.head);
  if (!kind) bad_input("unknown head '" + s.head + "'");
  ensure_out_dir(s);
  const auto cell =
      eval::run_cell(manifest, set, standalone_split(s), *kind, s.training,
                     eval::cell_seed(s.seed, 0, 0));
  const auto path = model_path(s);
  heads::save_head(cell.model, path);
  std::cout << "RESULT: train ok head=" << s.head << " split=" << s.split
            << " model=" << path.string()
            << " test_accuracy=" << fmt_double(cell.report.overall_accuracy)
            << "\n";
  return 0;
}

int cmd_eval(const Settings& s) {
  const auto manifest = load_manifest_checked(s);
  const auto set = load_embeddings(s, manifest);
  const auto head = heads::load_head(model_path(s));
  const auto split = standalone_split(s);
  const auto data = eval::prepare_cell_data(
      manifest, set, split, s.training.standardize_features);
  auto report = eval::evaluate(head, data.test, s.training.test_batch_size);
  report.split = split;
  report.split_label = dataset::split_label(split);
  report.seed = eval::cell_seed(s.seed, 0, 0);

  eval::SweepReport wrapped;
  wrapped.dataset = manifest.name;
  wrapped.provider_tag = set.provider_tag;
  wrapped.cells.push_back(
      {report.split_label, split, report.head, report.seed, report});
  ensure_out_dir(s);
  const auto json_path = std::filesystem::path(s.out) /
                         ("eval_" + report.head + "_" + s.split + ".json");
  eval::write_json(wrapped, json_path);

  std::cout << "overall accuracy " << report.overall_accuracy
            << " (baseline " << report.baseline << ", "
            << report.sample_count << " samples)\n";
  for (std::size_t c = 0; c < report.per_class_accuracy.size(); ++c) {
    std::cout << "  " << manifest.labels[c].name << ": "
              << report.per_class_accuracy[c] << "\n";
  }
  std::cout << "RESULT: eval ok head=" << report.head << " split=" << s.split
            << " accuracy=" << fmt_double(report.overall_accuracy)
            << " report=" << json_path.string() << "\n";
  return 0;
}

int cmd_sweep(const Settings& s) {
  const auto manifest = load_manifest_checked(s);
  const auto set = load_embeddings(s, manifest);
  const auto splits = dataset::make_split_configs(
      s.split_labels, s.validation_fraction, s.seed);
  const auto kinds = head_kinds(s);
  const auto report = eval::run_sweep(
      manifest, set, splits, kinds, s.training,
      [](const std::string& line) { std::cerr << "[sweep] " << line << "\n"; });

  ensure_out_dir(s);
  const std::filesystem::path out(s.out);
  eval::write_json(report, out / "sweep.json");
  eval::write_csv(report, out / "sweep.csv");
  eval::write_plot_data(report, out / "sweep_plot_data.json");

  std::printf("%-8s", "split");
  for (const auto& name : s.head_names) std::printf(" %10s", name.c_str());
  std::printf("\n");
  double min_accuracy = 1.0;
  for (const auto& label : s.split_labels) {
    std::printf("%-8s", label.c_str());
    for (const auto& name : s.head_names) {
      const auto* cell = report.find(label, name);
      std::printf(" %10.4f", cell->report.overall_accuracy);
      min_accuracy = std::min(min_accuracy, cell->report.overall_accuracy);
    }
    std::printf("\n");
  }
  std::cout << "RESULT: sweep ok cells=" << report.cells.size()
            << " min_accuracy=" << fmt_double(min_accuracy) << " out=" << s.out
            << "\n";
  return 0;
}

int cmd_report(const Settings& s) {
  if (s.in.empty()) bad_input("report needs --in <sweep.json>");
  std::ifstream in(s.in, std::ios::binary);
  if (!in) bad_input("cannot open report: " + s.in);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  const auto report = eval::sweep_from_json_string(text);
  ensure_out_dir(s);
  const std::filesystem::path out(s.out);
  eval::write_json(report, out / "report.json");
  eval::write_csv(report, out / "report.csv");
  eval::write_plot_data(report, out / "report_plot_data.json");
  std::cout << "RESULT: report ok cells=" << report.cells.size()
            << " out=" << s.out << "\n";
  return 0;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInput:
      return 2;
    case ErrorKind::kExtraction:
      return 3;
    case ErrorKind::kTrainEval:
    case ErrorKind::kIo:
      return 4;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"transfer-learning classifier heads over cached embeddings"};
  app.require_subcommand(1);
  Overrides ov;
  std::string manifest_positional;

  const auto add_shared = [&ov](CLI::App* cmd) {
    cmd->add_option("--config", ov.config_path, "key=value config file");
    cmd->add_option("--manifest", ov.manifest, "dataset manifest path");
    cmd->add_option("--seed", ov.seed, "master seed (default 0)");
    cmd->add_option("--out", ov.out, "output directory");
    cmd->add_option("--splits", ov.splits,
                    "comma-separated split labels, e.g. 80-10,60-30");
    cmd->add_option("--heads", ov.heads,
                    "comma-separated heads: softmax,svm,knn");
    cmd->add_option("--dim", ov.dim, "embedding dimension");
    cmd->add_option("--cache", ov.cache, "embedding cache path");
    cmd->add_option("--provider", ov.provider, "builtin or precomputed");
    cmd->add_option("--source", ov.source, "precomputed embedding file");
    cmd->add_option("--provider-seed", ov.provider_seed,
                    "builtin extractor seed (default 0)");
    cmd->add_option("--validation-fraction", ov.validation_fraction,
                    "held-out validation fraction (default 0.10)");
    cmd->add_option("--steps", ov.steps, "training steps (default 4000)");
    cmd->add_option("--learning-rate", ov.learning_rate,
                    "learning rate (default 0.035)");
    cmd->add_option("--train-batch", ov.train_batch,
                    "train batch size (default 100)");
    cmd->add_option("--validation-batch", ov.validation_batch,
                    "validation batch size (default 100)");
    cmd->add_option("--test-batch", ov.test_batch,
                    "test batch size, -1 for the whole test set");
    cmd->add_option("--svm-lambda", ov.svm_lambda,
                    "svm L2 regularization (default 1e-4)");
    cmd->add_option("--knn-k", ov.knn_k, "neighbor count (default 3)");
    cmd->add_option("--standardize", ov.standardize,
                    "standardize features on the train partition");
  };

  auto* ingest = app.add_subcommand(
      "ingest", "validate a manifest and print its class distribution");
  ingest->add_option("path", manifest_positional, "manifest path");
  add_shared(ingest);

  auto* extract = app.add_subcommand(
      "extract", "compute or refresh the embedding cache");
  add_shared(extract);

  auto* train = app.add_subcommand(
      "train", "train one head on one split and save the model");
  add_shared(train);
  train->add_option("--head", ov.head, "softmax, svm, or knn");
  train->add_option("--split", ov.split, "split label, e.g. 80-10");
  train->add_option("--model", ov.model, "model output path");

  auto* eval_cmd = app.add_subcommand(
      "eval", "evaluate a saved model on the test partition");
  add_shared(eval_cmd);
  eval_cmd->add_option("--head", ov.head,
                       "head name used for the default model path");
  eval_cmd->add_option("--split", ov.split, "split label, e.g. 80-10");
  eval_cmd->add_option("--model", ov.model, "model file to load");

  auto* sweep = app.add_subcommand(
      "sweep", "run the full split x head grid and write reports");
  add_shared(sweep);

  auto* report = app.add_subcommand(
      "report", "re-emit csv and plot data from a sweep json");
  add_shared(report);
  report->add_option("--in", ov.in, "sweep json produced by 'sweep'");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    Settings settings = resolve(ov);
    if (command == "ingest") {
      if (!manifest_positional.empty()) settings.manifest = manifest_positional;
      return cmd_ingest(settings);
    }
    if (command == "extract") return cmd_extract(settings);
    if (command == "train") return cmd_train(settings);
    if (command == "eval") return cmd_eval(settings);
    if (command == "sweep") return cmd_sweep(settings);
    if (command == "report") return cmd_report(settings);
    std::cerr << "unknown command " << command << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::cout << "RESULT: " << command << " error " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    std::cout << "RESULT: " << command << " error " << e.what() << "\n";
    return 1;
  }
}
