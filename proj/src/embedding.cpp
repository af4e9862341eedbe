#include "tlc/embedding.hpp"

#include <cmath>
#include <string>

#include "binio.hpp"
#include "tlc/error.hpp"
#include "tlc/rng.hpp"

namespace tlc::embedding {

namespace {

[[noreturn]] void fail_extract(const std::string& message) {
  throw Error(ErrorKind::kExtraction, message);
}

}  // namespace

void validate(const ProviderConfig& config) {
  if (config.dim < 1) {
    throw Error(ErrorKind::kInvalidInput, "provider dim must be >= 1");
  }
  if (config.kind == ProviderKind::kPrecomputedFile &&
      config.source_path.empty()) {
    throw Error(ErrorKind::kInvalidInput,
                "precomputed provider needs a source path");
  }
  if (config.kind == ProviderKind::kBuiltinDeterministic &&
      !config.source_path.empty()) {
    throw Error(ErrorKind::kInvalidInput,
                "builtin provider does not take a source path");
  }
}

std::string provider_tag(const ProviderConfig& config) {
  if (config.kind == ProviderKind::kBuiltinDeterministic) {
    return "builtin-deterministic;dim=" + std::to_string(config.dim) +
           ";seed=" + std::to_string(config.seed);
  }
  return "precomputed-file;source=" + config.source_path.filename().string();
}

namespace detail {

std::vector<double> pre_projection_features(const image::Image& img) {
  const int h = img.height;
  const int w = img.width;
  std::vector<double> features(kFeatureDim, 0.0);

  // Area-weighted resample onto a kGrid x kGrid grid. Each output cell
  // covers the continuous pixel-row interval [gi*h/G, (gi+1)*h/G) and the
  // matching column interval; an input pixel contributes the product of
  // its row and column overlaps.
  const double area =
      (h / static_cast<double>(kGrid)) * (w / static_cast<double>(kGrid));
  for (std::size_t gi = 0; gi < kGrid; ++gi) {
    const double r0 = static_cast<double>(gi) * h / kGrid;
    const double r1 = static_cast<double>(gi + 1) * h / kGrid;
    for (std::size_t gj = 0; gj < kGrid; ++gj) {
      const double c0 = static_cast<double>(gj) * w / kGrid;
      const double c1 = static_cast<double>(gj + 1) * w / kGrid;
      double acc[3] = {0.0, 0.0, 0.0};
      for (int r = static_cast<int>(std::floor(r0)); r < r1 && r < h; ++r) {
        const double wr =
            std::min(r1, r + 1.0) - std::max(r0, static_cast<double>(r));
        if (wr <= 0) continue;
        for (int c = static_cast<int>(std::floor(c0)); c < c1 && c < w; ++c) {
          const double wc =
              std::min(c1, c + 1.0) - std::max(c0, static_cast<double>(c));
          if (wc <= 0) continue;
          for (int ch = 0; ch < 3; ++ch) {
            acc[ch] += wr * wc * (img.at(r, c, ch) / 255.0);
          }
        }
      }
      for (int ch = 0; ch < 3; ++ch) {
        features[(gi * kGrid + gj) * 3 + static_cast<std::size_t>(ch)] =
            acc[ch] / area;
      }
    }
  }

  // Per-channel 32-bin histograms over the raw bytes, normalized by the
  // pixel count.
  const std::size_t hist_base = kGrid * kGrid * 3;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      for (int ch = 0; ch < 3; ++ch) {
        const std::size_t bin =
            static_cast<std::size_t>(img.at(r, c, ch)) >> 3;
        features[hist_base + static_cast<std::size_t>(ch) * kHistBins + bin] +=
            1.0;
      }
    }
  }
  const double n = static_cast<double>(h) * static_cast<double>(w);
  for (std::size_t i = hist_base; i < kFeatureDim; ++i) features[i] /= n;

  return features;
}

}  // namespace detail

EmbeddingVector extract_embedding(const image::Image& img,
                                  const ProviderConfig& config) {
  validate(config);
  if (config.kind != ProviderKind::kBuiltinDeterministic) {
    fail_extract("extract_embedding requires the builtin provider");
  }
  if (img.channels != 3) {
    fail_extract("extractor needs a 3-channel image, got " +
                 std::to_string(img.channels));
  }
  if (img.height < 8 || img.width < 8) {
    fail_extract("image too small: " + std::to_string(img.height) + "x" +
                 std::to_string(img.width) + ", need at least 8x8");
  }

  const std::vector<double> features = detail::pre_projection_features(img);

  // Seeded gaussian projection, rows drawn in output order, then tanh.
  const double scale =
      1.0 / std::sqrt(static_cast<double>(detail::kFeatureDim));
  SplitMix64 rng(config.seed);
  EmbeddingVector out(config.dim);
  for (std::size_t d = 0; d < config.dim; ++d) {
    double acc = 0.0;
    for (std::size_t k = 0; k < detail::kFeatureDim; ++k) {
      acc += rng.next_gaussian() * scale * features[k];
    }
    out[d] = static_cast<float>(std::tanh(acc));
  }
  return out;
}

void save_cache(const EmbeddingSet& set, const std::filesystem::path& path) {
  std::string out;
  out.append("EMB1");
  binio::put_u32(out, static_cast<std::uint32_t>(set.dim));
  binio::put_u32(out, static_cast<std::uint32_t>(set.entries.size()));
  binio::put_u32(out, static_cast<std::uint32_t>(set.provider_tag.size()));
  out.append(set.provider_tag);
  for (const auto& [id, vec] : set.entries) {
    if (vec.size() != set.dim) {
      fail_extract("entry '" + id + "' has dim " + std::to_string(vec.size()) +
                   ", set dim is " + std::to_string(set.dim));
    }
    binio::put_u16(out, static_cast<std::uint16_t>(id.size()));
    out.append(id);
    for (float v : vec) binio::put_f32(out, v);
  }
  binio::write_file_atomic(out, path);
}

EmbeddingSet load_cache(const std::filesystem::path& path) {
  const std::string data = binio::read_file(path, ErrorKind::kExtraction);
  binio::Reader reader(data, path.string(), ErrorKind::kExtraction);
  if (reader.str(4) != "EMB1") {
    reader.fail("bad magic, not an EMB1 cache");
  }
  EmbeddingSet set;
  set.dim = reader.u32();
  const std::uint32_t count = reader.u32();
  const std::uint32_t tag_len = reader.u32();
  set.provider_tag = reader.str(tag_len);
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint16_t id_len = reader.u16();
    std::string id = reader.str(id_len);
    EmbeddingVector vec(set.dim);
    for (std::size_t d = 0; d < set.dim; ++d) {
      vec[d] = reader.f32();
      if (!std::isfinite(vec[d])) {
        reader.fail("non-finite value in entry '" + id + "'");
      }
    }
    if (!set.entries.emplace(std::move(id), std::move(vec)).second) {
      reader.fail("duplicate sample_id in cache");
    }
  }
  if (!reader.at_end()) {
    reader.fail("trailing bytes after last entry");
  }
  return set;
}

namespace {

// Exactly one entry per manifest sample: entries the manifest does not
// reference are dropped, missing ones are an error naming the sample.
EmbeddingSet restrict_to_manifest(EmbeddingSet set,
                                  const dataset::DatasetManifest& manifest,
                                  const std::string& origin) {
  EmbeddingSet out;
  out.dim = set.dim;
  out.provider_tag = std::move(set.provider_tag);
  for (const dataset::Sample& s : manifest.samples) {
    const auto it = set.entries.find(s.sample_id);
    if (it == set.entries.end()) {
      fail_extract(origin + ": missing embedding for sample '" + s.sample_id +
                   "'");
    }
    out.entries.emplace(s.sample_id, std::move(it->second));
  }
  return out;
}

}  // namespace

EmbeddingSet load_precomputed(const ProviderConfig& config,
                              const dataset::DatasetManifest& manifest) {
  validate(config);
  if (config.kind != ProviderKind::kPrecomputedFile) {
    fail_extract("load_precomputed requires the precomputed provider");
  }
  EmbeddingSet set = load_cache(config.source_path);
  if (set.dim != config.dim) {
    fail_extract(config.source_path.string() + ": dimension mismatch, file " +
                 std::to_string(set.dim) + " vs configured " +
                 std::to_string(config.dim));
  }
  return restrict_to_manifest(std::move(set), manifest,
                              config.source_path.string());
}

GetOrComputeResult get_or_compute(const dataset::DatasetManifest& manifest,
                                  const ProviderConfig& config,
                                  const std::filesystem::path& cache_path) {
  validate(config);
  if (config.kind == ProviderKind::kPrecomputedFile) {
    GetOrComputeResult result;
    result.set = load_precomputed(config, manifest);
    result.served_from_cache = manifest.size();
    return result;
  }

  const std::string tag = provider_tag(config);
  if (!cache_path.empty() && std::filesystem::exists(cache_path)) {
    EmbeddingSet cached = load_cache(cache_path);
    if (cached.provider_tag != tag) {
      fail_extract("cache " + cache_path.string() + " was built by '" +
                   cached.provider_tag + "' but '" + tag +
                   "' was requested; refusing to mix providers");
    }
    bool covered = cached.dim == config.dim;
    for (const dataset::Sample& s : manifest.samples) {
      if (!covered) break;
      covered = cached.entries.find(s.sample_id) != cached.entries.end();
    }
    if (covered) {
      GetOrComputeResult result;
      result.set = restrict_to_manifest(std::move(cached), manifest,
                                        cache_path.string());
      result.served_from_cache = manifest.size();
      return result;
    }
  }

  GetOrComputeResult result;
  result.set.dim = config.dim;
  result.set.provider_tag = tag;
  for (const dataset::Sample& s : manifest.samples) {
    image::Image img;
    try {
      img = image::read_ppm(s.source);
    } catch (const Error& e) {
      fail_extract("sample '" + s.sample_id + "': " + e.what());
    }
    result.set.entries.emplace(s.sample_id, extract_embedding(img, config));
  }
  result.computed = manifest.size();
  if (!cache_path.empty()) save_cache(result.set, cache_path);
  return result;
}

}  // namespace tlc::embedding
