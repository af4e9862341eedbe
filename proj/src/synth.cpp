#include "tlc/synth.hpp"

#include <algorithm>
#include <cstdio>

#include "tlc/error.hpp"
#include "tlc/image.hpp"
#include "tlc/rng.hpp"

namespace tlc::synth {

namespace {

std::vector<dataset::ClassLabel> make_labels(
    const std::vector<std::string>& names, std::size_t classes) {
  if (classes > names.size()) {
    throw Error(ErrorKind::kInvalidInput,
                "not enough class names for " + std::to_string(classes) +
                    " classes");
  }
  std::vector<dataset::ClassLabel> labels;
  for (std::size_t c = 0; c < classes; ++c) {
    labels.push_back({static_cast<int>(c), names[c]});
  }
  return labels;
}

std::string sample_name(const std::string& class_name, std::size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04zu", index);
  return class_name + "_" + buf;
}

}  // namespace

BlobDataset generate_blobs(const BlobSpec& spec) {
  if (spec.dim < spec.classes) {
    throw Error(ErrorKind::kInvalidInput,
                "blob dim must be >= class count so every class gets its "
                "own axis");
  }
  const std::size_t full_dim = spec.dim + spec.noise_dims;

  BlobDataset data;
  data.manifest.name = "blobs";
  data.manifest.labels = make_labels(kDefaultClassNames, spec.classes);
  data.embeddings.dim = full_dim;
  data.embeddings.provider_tag =
      "synthetic-blobs;dim=" + std::to_string(full_dim) +
      ";seed=" + std::to_string(spec.seed);

  SplitMix64 rng(spec.seed);
  for (std::size_t c = 0; c < spec.classes; ++c) {
    const std::string& class_name = data.manifest.labels[c].name;
    for (std::size_t i = 0; i < spec.per_class; ++i) {
      const std::string id = sample_name(class_name, i);
      embedding::EmbeddingVector vec(full_dim);
      for (std::size_t d = 0; d < spec.dim; ++d) {
        const double mean = d == c ? spec.center_scale : 0.0;
        vec[d] = static_cast<float>(mean + spec.sigma * rng.next_gaussian());
      }
      for (std::size_t d = spec.dim; d < full_dim; ++d) {
        vec[d] = static_cast<float>(spec.noise_sigma * rng.next_gaussian());
      }
      data.manifest.samples.push_back({id, id, static_cast<int>(c)});
      data.embeddings.entries.emplace(id, std::move(vec));
    }
  }
  return data;
}

dataset::DatasetManifest manifest_with_counts(
    const std::string& name, const std::vector<std::string>& class_names,
    const std::vector<std::size_t>& counts) {
  if (class_names.size() != counts.size()) {
    throw Error(ErrorKind::kInvalidInput,
                "class_names and counts differ in length");
  }
  dataset::DatasetManifest manifest;
  manifest.name = name;
  manifest.labels = make_labels(class_names, class_names.size());
  for (std::size_t c = 0; c < counts.size(); ++c) {
    for (std::size_t i = 0; i < counts[c]; ++i) {
      const std::string id = sample_name(class_names[c], i);
      manifest.samples.push_back({id, id, static_cast<int>(c)});
    }
  }
  return manifest;
}

dataset::DatasetManifest generate_image_dataset(
    const ImageDatasetSpec& spec, const std::filesystem::path& dir) {
  // Distinct base color per class; per-pixel uniform noise keeps images
  // within a class different while histograms stay well separated.
  static const std::uint8_t palette[6][3] = {
      {200, 40, 40}, {40, 200, 40}, {40, 40, 200},
      {200, 200, 40}, {200, 40, 200}, {40, 200, 200}};
  if (spec.classes > 6) {
    throw Error(ErrorKind::kInvalidInput,
                "image fixture palette supports at most 6 classes");
  }
  if (spec.size < 8) {
    throw Error(ErrorKind::kInvalidInput, "image fixture size must be >= 8");
  }

  std::filesystem::create_directories(dir / "images");
  dataset::DatasetManifest manifest;
  manifest.name = "synthetic-images";
  manifest.labels = make_labels(kDefaultClassNames, spec.classes);

  SplitMix64 rng(spec.seed);
  for (std::size_t c = 0; c < spec.classes; ++c) {
    const std::string& class_name = manifest.labels[c].name;
    for (std::size_t i = 0; i < spec.per_class; ++i) {
      image::Image img;
      img.height = spec.size;
      img.width = spec.size;
      img.channels = 3;
      img.pixels.resize(static_cast<std::size_t>(spec.size) * spec.size * 3);
      for (std::size_t p = 0; p < img.pixels.size(); ++p) {
        const int base = palette[c][p % 3];
        const int noise = static_cast<int>(rng.next_below(81)) - 40;
        img.pixels[p] = static_cast<std::uint8_t>(
            std::clamp(base + noise, 0, 255));
      }
      const std::string id = sample_name(class_name, i);
      const std::filesystem::path path = dir / "images" / (id + ".ppm");
      image::write_ppm(img, path);
      manifest.samples.push_back({id, path.string(), static_cast<int>(c)});
    }
  }
  dataset::save_manifest(manifest, dir / "manifest.tsv");
  return manifest;
}

}  // namespace tlc::synth
