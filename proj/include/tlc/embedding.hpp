// Embedding providers and the on-disk embedding cache.
//
// The backbone is abstracted behind ProviderConfig: either the built-in
// deterministic extractor (grid resample + color histograms + seeded
// projection) or a loader for precomputed vectors in the cache format.
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "tlc/dataset.hpp"
#include "tlc/image.hpp"

namespace tlc::embedding {

using EmbeddingVector = std::vector<float>;

struct EmbeddingSet {
  std::size_t dim = 0;
  std::string provider_tag;
  std::map<std::string, EmbeddingVector> entries;  // sample_id -> vector
};

enum class ProviderKind { kBuiltinDeterministic, kPrecomputedFile };

struct ProviderConfig {
  ProviderKind kind = ProviderKind::kBuiltinDeterministic;
  std::size_t dim = 2048;
  std::uint64_t seed = 0;              // builtin only
  std::filesystem::path source_path;   // precomputed only
};

void validate(const ProviderConfig& config);
std::string provider_tag(const ProviderConfig& config);

// Built-in extractor. Deterministic in (pixel content, dim, seed):
// 16x16x3 area-weighted grid resample of the [0,1]-scaled image,
// concatenated with per-channel 32-bin normalized histograms, then a
// gaussian random projection seeded from config.seed, then tanh.
// Output components lie in (-1, 1). Requires H, W >= 8 and 3 channels.
EmbeddingVector extract_embedding(const image::Image& img,
                                  const ProviderConfig& config);

// Cache format "EMB1" (little-endian), see docs/formats.md.
void save_cache(const EmbeddingSet& set, const std::filesystem::path& path);
EmbeddingSet load_cache(const std::filesystem::path& path);

// Loads config.source_path and checks it covers every manifest sample and
// matches config.dim.
EmbeddingSet load_precomputed(const ProviderConfig& config,
                              const dataset::DatasetManifest& manifest);

struct GetOrComputeResult {
  EmbeddingSet set;
  std::size_t served_from_cache = 0;
  std::size_t computed = 0;
};

// Serves the cache when its provider tag matches and it covers the whole
// manifest; otherwise extracts every sample (builtin kind) and rewrites
// the cache. A tag mismatch is an error, never a silent recompute.
GetOrComputeResult get_or_compute(const dataset::DatasetManifest& manifest,
                                  const ProviderConfig& config,
                                  const std::filesystem::path& cache_path);

namespace detail {
// Pre-projection feature vector (768 grid values + 96 histogram values),
// exposed so tests can recompute the pipeline stages independently.
std::vector<double> pre_projection_features(const image::Image& img);
inline constexpr std::size_t kGrid = 16;
inline constexpr std::size_t kHistBins = 32;
inline constexpr std::size_t kFeatureDim = kGrid * kGrid * 3 + 3 * kHistBins;
}  // namespace detail

}  // namespace tlc::embedding
