// Synthetic dataset generators used by tests, the acceptance suite, and
// the fixtures tool: gaussian blob embeddings with known separability and
// small color-coded images for the built-in extractor.
#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "tlc/dataset.hpp"
#include "tlc/embedding.hpp"

namespace tlc::synth {

inline const std::vector<std::string> kDefaultClassNames = {
    "cbsd", "cmd", "bls", "gmd", "rmd", "healthy"};

struct BlobSpec {
  std::size_t classes = 6;
  std::size_t per_class = 300;
  std::size_t dim = 32;          // requires dim >= classes
  double center_scale = 4.0;     // class c mean = center_scale * e_c
  double sigma = 0.3;
  std::size_t noise_dims = 0;    // extra label-free features
  double noise_sigma = 1.0;
  std::uint64_t seed = 0;
};

struct BlobDataset {
  dataset::DatasetManifest manifest;
  embedding::EmbeddingSet embeddings;
};

BlobDataset generate_blobs(const BlobSpec& spec);

// Manifest whose sources are the sample ids themselves (embedding keys),
// with the requested per-class counts.
dataset::DatasetManifest manifest_with_counts(
    const std::string& name, const std::vector<std::string>& class_names,
    const std::vector<std::size_t>& counts);

struct ImageDatasetSpec {
  std::size_t classes = 6;
  std::size_t per_class = 10;
  int size = 32;  // square images
  std::uint64_t seed = 0;
};

// Writes <dir>/images/*.ppm plus <dir>/manifest.tsv and returns the
// manifest. Each class has a distinct base color with per-pixel noise.
dataset::DatasetManifest generate_image_dataset(
    const ImageDatasetSpec& spec, const std::filesystem::path& dir);

}  // namespace tlc::synth
