// tlc_fixtures: generates the synthetic datasets used in tests and docs.
//
//   tlc_fixtures blobs  --out DIR   gaussian blob embeddings + manifest
//   tlc_fixtures images --out DIR   color-coded ppm images + manifest
//   tlc_fixtures counts --out DIR   manifest only, with given class counts
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tlc/dataset.hpp"
#include "tlc/embedding.hpp"
#include "tlc/error.hpp"
#include "tlc/synth.hpp"

int main(int argc, char** argv) {
  CLI::App app{"synthetic dataset generator"};
  app.require_subcommand(1);

  std::string out = ".";
  std::uint64_t seed = 0;
  std::size_t classes = 6;
  std::size_t per_class = 300;
  std::size_t images_per_class = 10;
  std::size_t dim = 32;
  double sigma = 0.3;
  double center_scale = 4.0;
  std::size_t noise_dims = 0;
  double noise_sigma = 1.0;
  int size = 32;
  std::string counts_list = "398,388,386,309,415,300";

  auto* blobs = app.add_subcommand("blobs", "gaussian blob embeddings");
  blobs->add_option("--out", out, "output directory")->required();
  blobs->add_option("--seed", seed, "generator seed");
  blobs->add_option("--classes", classes, "class count (max 6)");
  blobs->add_option("--per-class", per_class, "samples per class");
  blobs->add_option("--dim", dim, "embedding dimension");
  blobs->add_option("--sigma", sigma, "per-coordinate noise");
  blobs->add_option("--scale", center_scale, "blob center distance");
  blobs->add_option("--noise-dims", noise_dims, "label-free extra features");
  blobs->add_option("--noise-sigma", noise_sigma,
                    "sigma of the label-free features");

  auto* images = app.add_subcommand("images", "color-coded ppm images");
  images->add_option("--out", out, "output directory")->required();
  images->add_option("--seed", seed, "generator seed");
  images->add_option("--classes", classes, "class count (max 6)");
  images->add_option("--per-class", images_per_class, "images per class");
  images->add_option("--size", size, "square image size");

  auto* counts = app.add_subcommand("counts", "manifest with fixed counts");
  counts->add_option("--out", out, "output directory")->required();
  counts->add_option("--counts", counts_list, "comma list of class counts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    std::filesystem::create_directories(out);
    const auto* cmd = app.get_subcommands().front();
    if (cmd == blobs) {
      tlc::synth::BlobSpec spec;
      spec.classes = classes;
      spec.per_class = per_class;
      spec.dim = dim;
      spec.sigma = sigma;
      spec.center_scale = center_scale;
      spec.noise_dims = noise_dims;
      spec.noise_sigma = noise_sigma;
      spec.seed = seed;
      const auto data = tlc::synth::generate_blobs(spec);
      tlc::dataset::save_manifest(data.manifest,
                                  std::filesystem::path(out) / "manifest.tsv");
      tlc::embedding::save_cache(
          data.embeddings, std::filesystem::path(out) / "embeddings.emb");
      std::cout << "RESULT: fixtures ok kind=blobs samples="
                << data.manifest.size() << " dim=" << data.embeddings.dim
                << " out=" << out << "\n";
    } else if (cmd == images) {
      tlc::synth::ImageDatasetSpec spec;
      spec.classes = classes;
      spec.per_class = images_per_class;
      spec.size = size;
      spec.seed = seed;
      const auto manifest = tlc::synth::generate_image_dataset(spec, out);
      std::cout << "RESULT: fixtures ok kind=images samples="
                << manifest.size() << " out=" << out << "\n";
    } else {
      std::vector<std::size_t> parsed;
      std::string current;
      for (const char c : counts_list + ",") {
        if (c == ',') {
          if (!current.empty()) parsed.push_back(std::stoull(current));
          current.clear();
        } else {
          current.push_back(c);
        }
      }
      std::vector<std::string> names(tlc::synth::kDefaultClassNames.begin(),
                                     tlc::synth::kDefaultClassNames.begin() +
                                         parsed.size());
      const auto manifest =
          tlc::synth::manifest_with_counts("synthetic-counts", names, parsed);
      tlc::dataset::save_manifest(manifest,
                                  std::filesystem::path(out) / "manifest.tsv");
      std::cout << "RESULT: fixtures ok kind=counts samples="
                << manifest.size() << " out=" << out << "\n";
    }
    return 0;
  } catch (const tlc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
}
