// The three retrainable classifier heads behind one train/predict
// contract: multinomial softmax regression, one-vs-rest linear SVM, and
// kNN. Softmax and SVM share the seeded mini-batch (sub)gradient loop.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tlc/dataset.hpp"
#include "tlc/embedding.hpp"

namespace tlc::heads {

enum class HeadKind : std::uint8_t { kSoftmax = 0, kSvm = 1, kKnn = 2 };

const char* head_kind_name(HeadKind kind);
std::optional<HeadKind> parse_head_kind(std::string_view name);

struct TrainingConfig {
  int steps = 4000;
  double learning_rate = 0.035;
  int train_batch_size = 100;
  int validation_batch_size = 100;
  int test_batch_size = -1;  // -1: the entire test set
  std::uint64_t seed = 0;
  bool standardize_features = false;
  double svm_regularization = 1e-4;
  int knn_k = 3;
};

void validate(const TrainingConfig& config);

// Dense row-major view of embeddings with labels; the input every head
// trains on and every evaluation runs over.
struct LabeledEmbeddings {
  std::size_t dim = 0;
  std::size_t classes = 0;
  std::vector<std::string> ids;
  std::vector<int> labels;
  std::vector<float> values;  // size() x dim

  std::size_t size() const { return labels.size(); }
  std::span<const float> row(std::size_t i) const {
    return {values.data() + i * dim, dim};
  }
};

// Selects the given sample ids (in order) out of an embedding set.
LabeledEmbeddings make_labeled(const dataset::DatasetManifest& manifest,
                               const embedding::EmbeddingSet& set,
                               const std::vector<std::string>& ids);

// Per-feature standardization fitted on the training partition.
// Features with zero variance keep scale 1.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> inv_std;
};
Standardizer fit_standardizer(const LabeledEmbeddings& data);
void standardize_in_place(const Standardizer& s, LabeledEmbeddings& data);

struct SoftmaxModel {
  std::uint32_t classes = 0;
  std::uint32_t dim = 0;
  std::vector<std::uint32_t> class_order;
  std::vector<float> weights;  // classes x dim, row-major
  std::vector<float> bias;     // classes
};

struct SvmModel {
  std::uint32_t classes = 0;
  std::uint32_t dim = 0;
  std::vector<std::uint32_t> class_order;
  std::vector<float> weights;  // one w_c per class, row-major
  std::vector<float> bias;
};

struct KnnModel {
  std::uint32_t classes = 0;
  std::uint32_t dim = 0;
  std::vector<std::uint32_t> class_order;
  std::uint32_t k = 3;
  std::vector<std::string> ids;
  std::vector<int> labels;
  std::vector<float> vectors;  // reference rows, verbatim
};

using TrainedHead = std::variant<SoftmaxModel, SvmModel, KnnModel>;
HeadKind kind_of(const TrainedHead& head);

struct Prediction {
  int label = 0;
  std::vector<double> scores;  // probabilities, decision values, or votes/k
};

struct TrainingTrace {
  struct Entry {
    int step = 0;
    double batch_loss = 0.0;
    std::optional<double> validation_accuracy;
  };
  std::vector<Entry> entries;
};

// Mini-batch gradient descent on mean cross-entropy, weights and biases
// initialized to zero. Batches of train_batch_size are drawn with
// replacement from SplitMix64(config.seed); every 100 steps the
// validation accuracy on validation_batch_size sampled rows is recorded.
// Aborts with the step number if the loss turns non-finite.
SoftmaxModel train_softmax(const LabeledEmbeddings& train,
                           const LabeledEmbeddings& validation,
                           const TrainingConfig& config,
                           TrainingTrace* trace = nullptr);

// One binary hinge + L2 problem per class, all K updated from the same
// batch stream as train_softmax. Bias is not regularized.
SvmModel train_svm(const LabeledEmbeddings& train,
                   const TrainingConfig& config);

// Stores the references verbatim.
KnnModel train_knn(const LabeledEmbeddings& train,
                   const TrainingConfig& config);

TrainedHead train_head(HeadKind kind, const LabeledEmbeddings& train,
                       const LabeledEmbeddings& validation,
                       const TrainingConfig& config,
                       TrainingTrace* trace = nullptr);

// Softmax probabilities with max-subtraction; label = argmax, ties to the
// lowest class id.
Prediction predict(const SoftmaxModel& model, std::span<const float> x);
// Decision values w_c.x + b_c.
Prediction predict(const SvmModel& model, std::span<const float> x);
// Majority vote among the k nearest by Euclidean distance; distance ties
// go to the earlier reference, vote ties to the lowest class id.
Prediction predict(const KnnModel& model, std::span<const float> x);
Prediction predict(const TrainedHead& head, std::span<const float> x);

// Model file format "HED1" (little-endian), see docs/formats.md.
// Round-trips are bitwise lossless.
void save_head(const TrainedHead& head, const std::filesystem::path& path);
TrainedHead load_head(const std::filesystem::path& path);

namespace detail {
// Loss / gradient kernels shared by training and by the finite-difference
// checks in the tests. Parameters are double for the probes; `rows`
// selects the batch.
double softmax_loss(std::span<const double> weights,
                    std::span<const double> bias,
                    const LabeledEmbeddings& data,
                    std::span<const std::size_t> rows, std::size_t classes);
double softmax_loss_grad(std::span<const double> weights,
                         std::span<const double> bias,
                         const LabeledEmbeddings& data,
                         std::span<const std::size_t> rows,
                         std::size_t classes, std::span<double> grad_weights,
                         std::span<double> grad_bias);
// lambda/2 ||w||^2 + mean hinge for the one-vs-rest problem of
// `positive_class` over the selected rows.
double hinge_objective(std::span<const double> w, double b, double lambda,
                       const LabeledEmbeddings& data,
                       std::span<const std::size_t> rows, int positive_class);
double hinge_subgradient(std::span<const double> w, double b, double lambda,
                         const LabeledEmbeddings& data,
                         std::span<const std::size_t> rows,
                         int positive_class, std::span<double> grad_w,
                         double& grad_b);
// Full objective summed over all one-vs-rest problems of a trained model.
double svm_objective(const SvmModel& model, const LabeledEmbeddings& data,
                     double lambda);
}  // namespace detail

}  // namespace tlc::heads
