#include "tlc/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "tlc/error.hpp"
#include "tlc/rng.hpp"

namespace tlc::dataset {

namespace {

[[noreturn]] void fail(const std::string& message) {
  throw Error(ErrorKind::kInvalidInput, message);
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  parts.push_back(current);
  return parts;
}

// round-half-up; fractions and counts are small enough that the double
// product is exact to well below 0.5.
std::size_t round_count(double x) {
  return static_cast<std::size_t>(std::floor(x + 0.5));
}

}  // namespace

DatasetManifest parse_manifest(const std::string& text,
                               const std::string& origin) {
  DatasetManifest manifest;
  std::unordered_map<std::string, int> label_by_name;
  std::unordered_set<std::string> seen_ids;

  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;

    if (!header_seen) {
      if (stripped.rfind("name=", 0) != 0) {
        fail(origin + ":" + std::to_string(line_no) +
             ": expected header 'name=<string>;labels=<names>'");
      }
      const auto semi = stripped.find(';');
      if (semi == std::string::npos ||
          stripped.compare(semi + 1, 7, "labels=") != 0) {
        fail(origin + ":" + std::to_string(line_no) +
             ": malformed header, missing ';labels=' part");
      }
      manifest.name = stripped.substr(5, semi - 5);
      const std::string label_list = stripped.substr(semi + 8);
      for (const std::string& raw : split_on(label_list, ',')) {
        const std::string name = trim(raw);
        if (name.empty()) {
          fail(origin + ":" + std::to_string(line_no) +
               ": empty label name in header");
        }
        if (label_by_name.count(name) != 0) {
          fail(origin + ":" + std::to_string(line_no) +
               ": duplicate label name '" + name + "'");
        }
        const int id = static_cast<int>(manifest.labels.size());
        label_by_name[name] = id;
        manifest.labels.push_back({id, name});
      }
      if (manifest.labels.empty()) {
        fail(origin + ":" + std::to_string(line_no) + ": no labels declared");
      }
      header_seen = true;
      continue;
    }

    const std::vector<std::string> fields = split_on(line, '\t');
    if (fields.size() != 3) {
      fail(origin + ":" + std::to_string(line_no) +
           ": malformed record, expected <sample_id>\\t<source>\\t<label>");
    }
    Sample sample;
    sample.sample_id = trim(fields[0]);
    sample.source = trim(fields[1]);
    const std::string label_name = trim(fields[2]);
    if (sample.sample_id.empty()) {
      fail(origin + ":" + std::to_string(line_no) + ": empty sample_id");
    }
    const auto it = label_by_name.find(label_name);
    if (it == label_by_name.end()) {
      fail(origin + ":" + std::to_string(line_no) + ": unknown label name '" +
           label_name + "'");
    }
    sample.label = it->second;
    if (!seen_ids.insert(sample.sample_id).second) {
      fail(origin + ":" + std::to_string(line_no) + ": duplicate sample_id '" +
           sample.sample_id + "'");
    }
    manifest.samples.push_back(std::move(sample));
  }

  if (!header_seen) fail(origin + ": empty manifest, no header line");
  validate(manifest);
  return manifest;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail("manifest file not found: " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_manifest(buffer.str(), path.string());
}

void save_manifest(const DatasetManifest& manifest,
                   const std::filesystem::path& path) {
  std::ostringstream out;
  out << "name=" << manifest.name << ";labels=";
  for (std::size_t i = 0; i < manifest.labels.size(); ++i) {
    if (i > 0) out << ',';
    out << manifest.labels[i].name;
  }
  out << '\n';
  for (const Sample& s : manifest.samples) {
    out << s.sample_id << '\t' << s.source << '\t'
        << manifest.labels[static_cast<std::size_t>(s.label)].name << '\n';
  }

  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream file(tmp, std::ios::binary);
    if (!file) throw Error(ErrorKind::kIo, "cannot write " + tmp.string());
    file << out.str();
  }
  std::filesystem::rename(tmp, path);
}

void validate(const DatasetManifest& manifest) {
  if (manifest.labels.empty()) fail("manifest declares no labels");
  std::unordered_set<std::string> names;
  for (std::size_t i = 0; i < manifest.labels.size(); ++i) {
    const ClassLabel& label = manifest.labels[i];
    if (label.id != static_cast<int>(i)) {
      fail("label ids must be contiguous 0..K-1, got " +
           std::to_string(label.id) + " at position " + std::to_string(i));
    }
    if (label.name.empty()) fail("empty label name");
    if (!names.insert(label.name).second) {
      fail("duplicate label name '" + label.name + "'");
    }
  }
  std::vector<std::size_t> counts(manifest.labels.size(), 0);
  std::unordered_set<std::string> ids;
  for (const Sample& s : manifest.samples) {
    if (s.label < 0 || s.label >= static_cast<int>(manifest.labels.size())) {
      fail("sample '" + s.sample_id + "' has out-of-range label id " +
           std::to_string(s.label));
    }
    if (!ids.insert(s.sample_id).second) {
      fail("duplicate sample_id '" + s.sample_id + "'");
    }
    ++counts[static_cast<std::size_t>(s.label)];
  }
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0) {
      fail("class '" + manifest.labels[c].name + "' has no samples");
    }
  }
}

void validate(const SplitConfig& config) {
  if (!(config.train_fraction > 0.0) || !(config.test_fraction > 0.0) ||
      !(config.validation_fraction > 0.0)) {
    fail("split fractions must all be > 0");
  }
  const double sum = config.train_fraction + config.test_fraction +
                     config.validation_fraction;
  if (sum > 1.0 + 1e-12) {
    fail("split fractions sum to " + std::to_string(sum) + " > 1");
  }
}

std::vector<std::size_t> class_distribution(const DatasetManifest& manifest) {
  std::vector<std::size_t> counts(manifest.labels.size(), 0);
  for (const Sample& s : manifest.samples) {
    ++counts[static_cast<std::size_t>(s.label)];
  }
  return counts;
}

SplitResult stratified_split(const DatasetManifest& manifest,
                             const SplitConfig& config) {
  validate(config);
  validate(manifest);

  const std::size_t k = manifest.class_count();
  std::vector<std::vector<std::size_t>> by_class(k);
  for (std::size_t i = 0; i < manifest.samples.size(); ++i) {
    by_class[static_cast<std::size_t>(manifest.samples[i].label)].push_back(i);
  }

  SplitResult result;
  result.config_echo = config;
  for (std::size_t c = 0; c < k; ++c) {
    std::vector<std::size_t>& members = by_class[c];
    if (members.size() < 3) {
      fail("class '" + manifest.labels[c].name + "' has only " +
           std::to_string(members.size()) +
           " samples; need at least 3 to split");
    }
    SplitMix64 rng(combine_seed(config.seed, static_cast<std::uint64_t>(c)));
    rng.shuffle(members);

    const double count = static_cast<double>(members.size());
    std::size_t n_val = round_count(count * config.validation_fraction);
    n_val = std::min(n_val, members.size());
    std::size_t n_train = round_count(count * config.train_fraction);
    n_train = std::min(n_train, members.size() - n_val);
    std::size_t n_test = round_count(count * config.test_fraction);
    n_test = std::min(n_test, members.size() - n_val - n_train);
    if (n_val == 0 || n_train == 0 || n_test == 0) {
      fail("class '" + manifest.labels[c].name +
           "' is too small to place a sample in every partition");
    }

    std::size_t pos = 0;
    for (std::size_t i = 0; i < n_val; ++i, ++pos) {
      result.validation_ids.push_back(manifest.samples[members[pos]].sample_id);
    }
    for (std::size_t i = 0; i < n_train; ++i, ++pos) {
      result.train_ids.push_back(manifest.samples[members[pos]].sample_id);
    }
    for (std::size_t i = 0; i < n_test; ++i, ++pos) {
      result.test_ids.push_back(manifest.samples[members[pos]].sample_id);
    }
  }
  return result;
}

SplitConfig parse_split_label(const std::string& label,
                              double validation_fraction,
                              std::uint64_t seed) {
  const auto dash = label.find('-');
  if (dash == std::string::npos || dash == 0 || dash + 1 >= label.size()) {
    fail("bad split label '" + label + "', expected e.g. '80-10'");
  }
  const std::string train_part = label.substr(0, dash);
  const std::string test_part = label.substr(dash + 1);
  const auto all_digits = [](const std::string& s) {
    return !s.empty() &&
           s.find_first_not_of("0123456789") == std::string::npos;
  };
  if (!all_digits(train_part) || !all_digits(test_part)) {
    fail("bad split label '" + label + "', expected e.g. '80-10'");
  }
  int train_pct = 0;
  int test_pct = 0;
  try {
    train_pct = std::stoi(train_part);
    test_pct = std::stoi(test_part);
  } catch (const std::exception&) {
    fail("bad split label '" + label + "', expected e.g. '80-10'");
  }
  if (train_pct <= 0 || test_pct <= 0 || train_pct + test_pct > 100) {
    fail("split label '" + label + "' has percentages out of range");
  }
  SplitConfig config;
  config.train_fraction = train_pct / 100.0;
  config.test_fraction = test_pct / 100.0;
  config.validation_fraction = validation_fraction;
  config.seed = seed;
  return config;
}

std::string split_label(const SplitConfig& config) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%d-%d",
                static_cast<int>(std::lround(config.train_fraction * 100.0)),
                static_cast<int>(std::lround(config.test_fraction * 100.0)));
  return buf;
}

std::vector<SplitConfig> make_split_configs(
    const std::vector<std::string>& labels, double validation_fraction,
    std::uint64_t master_seed) {
  const std::uint64_t split_stream = combine_seed(master_seed, 1);
  std::vector<SplitConfig> configs;
  configs.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    configs.push_back(parse_split_label(
        labels[i], validation_fraction,
        combine_seed(split_stream, static_cast<std::uint64_t>(i))));
  }
  return configs;
}

}  // namespace tlc::dataset
