#include "tlc/heads.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <unordered_map>

#include "binio.hpp"
#include "tlc/error.hpp"
#include "tlc/rng.hpp"

namespace tlc::heads {

namespace {

[[noreturn]] void fail_train(const std::string& message) {
  throw Error(ErrorKind::kTrainEval, message);
}

std::vector<std::uint32_t> identity_order(std::size_t classes) {
  std::vector<std::uint32_t> order(classes);
  for (std::size_t i = 0; i < classes; ++i) {
    order[i] = static_cast<std::uint32_t>(i);
  }
  return order;
}

// Argmax with ties to the lowest class id.
int argmax_label(const std::vector<double>& scores,
                 const std::vector<std::uint32_t>& class_order) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best] ||
        (scores[i] == scores[best] && class_order[i] < class_order[best])) {
      best = i;
    }
  }
  return static_cast<int>(class_order[best]);
}

void check_dim(std::size_t model_dim, std::size_t x_dim) {
  if (model_dim != x_dim) {
    fail_train("dimension mismatch: model expects " +
               std::to_string(model_dim) + ", input has " +
               std::to_string(x_dim));
  }
}

void check_train_input(const LabeledEmbeddings& train) {
  if (train.size() == 0) fail_train("training set is empty");
  if (train.classes == 0) fail_train("training set declares no classes");
  std::vector<std::size_t> counts(train.classes, 0);
  for (int label : train.labels) {
    if (label < 0 || label >= static_cast<int>(train.classes)) {
      fail_train("label id " + std::to_string(label) + " out of range");
    }
    ++counts[static_cast<std::size_t>(label)];
  }
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0) {
      fail_train("class " + std::to_string(c) + " has no training samples");
    }
  }
}

std::vector<float> to_floats(const std::vector<double>& v) {
  std::vector<float> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = static_cast<float>(v[i]);
  }
  return out;
}

// Accuracy of argmax(Wx + b) over sampled validation rows.
double sampled_accuracy(const std::vector<double>& weights,
                        const std::vector<double>& bias,
                        const LabeledEmbeddings& validation,
                        std::size_t classes, int batch_size,
                        SplitMix64& rng) {
  const std::size_t dim = validation.dim;
  std::size_t correct = 0;
  const std::size_t draws = static_cast<std::size_t>(batch_size);
  for (std::size_t n = 0; n < draws; ++n) {
    const std::size_t i =
        static_cast<std::size_t>(rng.next_below(validation.size()));
    const auto x = validation.row(i);
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_c = 0;
    for (std::size_t c = 0; c < classes; ++c) {
      double z = bias[c];
      for (std::size_t d = 0; d < dim; ++d) z += weights[c * dim + d] * x[d];
      if (z > best) {
        best = z;
        best_c = c;
      }
    }
    if (static_cast<int>(best_c) == validation.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(draws);
}

}  // namespace

const char* head_kind_name(HeadKind kind) {
  switch (kind) {
    case HeadKind::kSoftmax:
      return "softmax";
    case HeadKind::kSvm:
      return "svm";
    case HeadKind::kKnn:
      return "knn";
  }
  return "unknown";
}

std::optional<HeadKind> parse_head_kind(std::string_view name) {
  if (name == "softmax") return HeadKind::kSoftmax;
  if (name == "svm") return HeadKind::kSvm;
  if (name == "knn") return HeadKind::kKnn;
  return std::nullopt;
}

void validate(const TrainingConfig& config) {
  const auto bad = [](const std::string& what) {
    throw Error(ErrorKind::kInvalidInput, "training config: " + what);
  };
  if (config.steps < 1) bad("steps must be >= 1");
  if (!(config.learning_rate > 0)) bad("learning_rate must be > 0");
  if (config.train_batch_size < 1) bad("train_batch_size must be >= 1");
  if (config.validation_batch_size < 1) {
    bad("validation_batch_size must be >= 1");
  }
  if (config.test_batch_size != -1 && config.test_batch_size < 1) {
    bad("test_batch_size must be -1 or >= 1");
  }
  if (config.knn_k < 1) bad("knn_k must be >= 1");
  if (!(config.svm_regularization > 0)) {
    bad("svm_regularization must be > 0");
  }
}

LabeledEmbeddings make_labeled(const dataset::DatasetManifest& manifest,
                               const embedding::EmbeddingSet& set,
                               const std::vector<std::string>& ids) {
  std::unordered_map<std::string, int> label_of;
  label_of.reserve(manifest.samples.size());
  for (const dataset::Sample& s : manifest.samples) {
    label_of[s.sample_id] = s.label;
  }

  LabeledEmbeddings out;
  out.dim = set.dim;
  out.classes = manifest.class_count();
  out.ids.reserve(ids.size());
  out.labels.reserve(ids.size());
  out.values.reserve(ids.size() * set.dim);
  for (const std::string& id : ids) {
    const auto lit = label_of.find(id);
    if (lit == label_of.end()) {
      fail_train("sample '" + id + "' is not in the manifest");
    }
    const auto eit = set.entries.find(id);
    if (eit == set.entries.end()) {
      fail_train("no embedding for sample '" + id + "'");
    }
    if (eit->second.size() != set.dim) {
      fail_train("embedding for '" + id + "' has wrong dimension");
    }
    out.ids.push_back(id);
    out.labels.push_back(lit->second);
    out.values.insert(out.values.end(), eit->second.begin(),
                      eit->second.end());
  }
  return out;
}

Standardizer fit_standardizer(const LabeledEmbeddings& data) {
  const std::size_t dim = data.dim;
  const double n = static_cast<double>(data.size());
  Standardizer s;
  s.mean.assign(dim, 0.0);
  s.inv_std.assign(dim, 1.0);
  if (data.size() == 0) return s;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto row = data.row(i);
    for (std::size_t d = 0; d < dim; ++d) s.mean[d] += row[d];
  }
  for (std::size_t d = 0; d < dim; ++d) s.mean[d] /= n;
  std::vector<double> var(dim, 0.0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto row = data.row(i);
    for (std::size_t d = 0; d < dim; ++d) {
      const double dev = row[d] - s.mean[d];
      var[d] += dev * dev;
    }
  }
  for (std::size_t d = 0; d < dim; ++d) {
    const double sd = std::sqrt(var[d] / n);
    s.inv_std[d] = sd > 1e-12 ? 1.0 / sd : 1.0;
  }
  return s;
}

void standardize_in_place(const Standardizer& s, LabeledEmbeddings& data) {
  if (s.mean.size() != data.dim) {
    fail_train("standardizer dimension mismatch");
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    float* row = data.values.data() + i * data.dim;
    for (std::size_t d = 0; d < data.dim; ++d) {
      row[d] = static_cast<float>((row[d] - s.mean[d]) * s.inv_std[d]);
    }
  }
}

namespace detail {

double softmax_loss(std::span<const double> weights,
                    std::span<const double> bias,
                    const LabeledEmbeddings& data,
                    std::span<const std::size_t> rows, std::size_t classes) {
  const std::size_t dim = data.dim;
  std::vector<double> logits(classes);
  double loss = 0.0;
  for (const std::size_t i : rows) {
    const auto x = data.row(i);
    for (std::size_t c = 0; c < classes; ++c) {
      double z = bias[c];
      for (std::size_t d = 0; d < dim; ++d) z += weights[c * dim + d] * x[d];
      logits[c] = z;
    }
    const double m = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (std::size_t c = 0; c < classes; ++c) sum += std::exp(logits[c] - m);
    const double lse = m + std::log(sum);
    loss += lse - logits[static_cast<std::size_t>(data.labels[i])];
  }
  return loss / static_cast<double>(rows.size());
}

double softmax_loss_grad(std::span<const double> weights,
                         std::span<const double> bias,
                         const LabeledEmbeddings& data,
                         std::span<const std::size_t> rows,
                         std::size_t classes, std::span<double> grad_weights,
                         std::span<double> grad_bias) {
  const std::size_t dim = data.dim;
  std::fill(grad_weights.begin(), grad_weights.end(), 0.0);
  std::fill(grad_bias.begin(), grad_bias.end(), 0.0);
  std::vector<double> logits(classes);
  double loss = 0.0;
  for (const std::size_t i : rows) {
    const auto x = data.row(i);
    for (std::size_t c = 0; c < classes; ++c) {
      double z = bias[c];
      for (std::size_t d = 0; d < dim; ++d) z += weights[c * dim + d] * x[d];
      logits[c] = z;
    }
    const double m = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (std::size_t c = 0; c < classes; ++c) sum += std::exp(logits[c] - m);
    const double lse = m + std::log(sum);
    const std::size_t y = static_cast<std::size_t>(data.labels[i]);
    loss += lse - logits[y];
    for (std::size_t c = 0; c < classes; ++c) {
      double g = std::exp(logits[c] - lse);
      if (c == y) g -= 1.0;
      grad_bias[c] += g;
      for (std::size_t d = 0; d < dim; ++d) {
        grad_weights[c * dim + d] += g * x[d];
      }
    }
  }
  const double inv_n = 1.0 / static_cast<double>(rows.size());
  for (double& g : grad_weights) g *= inv_n;
  for (double& g : grad_bias) g *= inv_n;
  return loss * inv_n;
}

double hinge_objective(std::span<const double> w, double b, double lambda,
                       const LabeledEmbeddings& data,
                       std::span<const std::size_t> rows,
                       int positive_class) {
  const std::size_t dim = data.dim;
  double reg = 0.0;
  for (const double v : w) reg += v * v;
  double hinge = 0.0;
  for (const std::size_t i : rows) {
    const auto x = data.row(i);
    const double y = data.labels[i] == positive_class ? 1.0 : -1.0;
    double z = b;
    for (std::size_t d = 0; d < dim; ++d) z += w[d] * x[d];
    hinge += std::max(0.0, 1.0 - y * z);
  }
  return 0.5 * lambda * reg + hinge / static_cast<double>(rows.size());
}

double hinge_subgradient(std::span<const double> w, double b, double lambda,
                         const LabeledEmbeddings& data,
                         std::span<const std::size_t> rows,
                         int positive_class, std::span<double> grad_w,
                         double& grad_b) {
  const std::size_t dim = data.dim;
  std::fill(grad_w.begin(), grad_w.end(), 0.0);
  grad_b = 0.0;
  double reg = 0.0;
  for (const double v : w) reg += v * v;
  double hinge = 0.0;
  for (const std::size_t i : rows) {
    const auto x = data.row(i);
    const double y = data.labels[i] == positive_class ? 1.0 : -1.0;
    double z = b;
    for (std::size_t d = 0; d < dim; ++d) z += w[d] * x[d];
    const double margin = y * z;
    if (margin < 1.0) {
      hinge += 1.0 - margin;
      for (std::size_t d = 0; d < dim; ++d) grad_w[d] -= y * x[d];
      grad_b -= y;
    }
  }
  const double inv_n = 1.0 / static_cast<double>(rows.size());
  for (std::size_t d = 0; d < dim; ++d) {
    grad_w[d] = grad_w[d] * inv_n + lambda * w[d];
  }
  grad_b *= inv_n;
  return 0.5 * lambda * reg + hinge * inv_n;
}

double svm_objective(const SvmModel& model, const LabeledEmbeddings& data,
                     double lambda) {
  std::vector<std::size_t> rows(data.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  double total = 0.0;
  std::vector<double> w(model.dim);
  for (std::size_t c = 0; c < model.classes; ++c) {
    for (std::size_t d = 0; d < model.dim; ++d) {
      w[d] = model.weights[c * model.dim + d];
    }
    total += hinge_objective(w, model.bias[c], lambda, data, rows,
                             static_cast<int>(model.class_order[c]));
  }
  return total;
}

}  // namespace detail

SoftmaxModel train_softmax(const LabeledEmbeddings& train,
                           const LabeledEmbeddings& validation,
                           const TrainingConfig& config,
                           TrainingTrace* trace) {
  validate(config);
  check_train_input(train);
  if (validation.size() > 0 && validation.dim != train.dim) {
    fail_train("validation dimension differs from training dimension");
  }

  const std::size_t classes = train.classes;
  const std::size_t dim = train.dim;
  std::vector<double> weights(classes * dim, 0.0);
  std::vector<double> bias(classes, 0.0);
  std::vector<double> grad_w(classes * dim);
  std::vector<double> grad_b(classes);
  std::vector<std::size_t> batch(
      static_cast<std::size_t>(config.train_batch_size));

  SplitMix64 batch_rng(config.seed);
  SplitMix64 validation_rng(combine_seed(config.seed, 3));

  for (int step = 1; step <= config.steps; ++step) {
    for (std::size_t& i : batch) {
      i = static_cast<std::size_t>(batch_rng.next_below(train.size()));
    }
    const double loss = detail::softmax_loss_grad(
        weights, bias, train, batch, classes, grad_w, grad_b);
    if (!std::isfinite(loss)) {
      fail_train("softmax training hit a non-finite loss at step " +
                 std::to_string(step));
    }
    for (std::size_t i = 0; i < weights.size(); ++i) {
      weights[i] -= config.learning_rate * grad_w[i];
    }
    for (std::size_t c = 0; c < classes; ++c) {
      bias[c] -= config.learning_rate * grad_b[c];
    }

    if (step % 100 == 0 || step == config.steps) {
      TrainingTrace::Entry entry;
      entry.step = step;
      entry.batch_loss = loss;
      if (validation.size() > 0) {
        entry.validation_accuracy = sampled_accuracy(
            weights, bias, validation, classes, config.validation_batch_size,
            validation_rng);
      }
      if (trace) trace->entries.push_back(std::move(entry));
    }
  }

  for (const double v : weights) {
    if (!std::isfinite(v)) fail_train("softmax weights diverged");
  }

  SoftmaxModel model;
  model.classes = static_cast<std::uint32_t>(classes);
  model.dim = static_cast<std::uint32_t>(dim);
  model.class_order = identity_order(classes);
  model.weights = to_floats(weights);
  model.bias = to_floats(bias);
  return model;
}

SvmModel train_svm(const LabeledEmbeddings& train,
                   const TrainingConfig& config) {
  validate(config);
  check_train_input(train);

  const std::size_t classes = train.classes;
  const std::size_t dim = train.dim;
  std::vector<double> weights(classes * dim, 0.0);
  std::vector<double> bias(classes, 0.0);
  std::vector<double> grad_w(dim);
  std::vector<std::size_t> batch(
      static_cast<std::size_t>(config.train_batch_size));
  std::vector<double> w(dim);

  SplitMix64 batch_rng(config.seed);

  for (int step = 1; step <= config.steps; ++step) {
    for (std::size_t& i : batch) {
      i = static_cast<std::size_t>(batch_rng.next_below(train.size()));
    }
    double step_objective = 0.0;
    for (std::size_t c = 0; c < classes; ++c) {
      for (std::size_t d = 0; d < dim; ++d) w[d] = weights[c * dim + d];
      double grad_b = 0.0;
      step_objective += detail::hinge_subgradient(
          w, bias[c], config.svm_regularization, train, batch,
          static_cast<int>(c), grad_w, grad_b);
      for (std::size_t d = 0; d < dim; ++d) {
        weights[c * dim + d] = w[d] - config.learning_rate * grad_w[d];
      }
      bias[c] -= config.learning_rate * grad_b;
    }
    if (!std::isfinite(step_objective)) {
      fail_train("svm training hit a non-finite objective at step " +
                 std::to_string(step));
    }
  }

  SvmModel model;
  model.classes = static_cast<std::uint32_t>(classes);
  model.dim = static_cast<std::uint32_t>(dim);
  model.class_order = identity_order(classes);
  model.weights = to_floats(weights);
  model.bias = to_floats(bias);
  return model;
}

KnnModel train_knn(const LabeledEmbeddings& train,
                   const TrainingConfig& config) {
  validate(config);
  if (train.size() == 0) fail_train("training set is empty");
  if (static_cast<std::size_t>(config.knn_k) > train.size()) {
    fail_train("knn_k = " + std::to_string(config.knn_k) +
               " exceeds training size " + std::to_string(train.size()));
  }
  KnnModel model;
  model.classes = static_cast<std::uint32_t>(train.classes);
  model.dim = static_cast<std::uint32_t>(train.dim);
  model.class_order = identity_order(train.classes);
  model.k = static_cast<std::uint32_t>(config.knn_k);
  model.ids = train.ids;
  model.labels = train.labels;
  model.vectors = train.values;
  return model;
}

TrainedHead train_head(HeadKind kind, const LabeledEmbeddings& train,
                       const LabeledEmbeddings& validation,
                       const TrainingConfig& config, TrainingTrace* trace) {
  switch (kind) {
    case HeadKind::kSoftmax:
      return train_softmax(train, validation, config, trace);
    case HeadKind::kSvm:
      return train_svm(train, config);
    case HeadKind::kKnn:
      return train_knn(train, config);
  }
  fail_train("unknown head kind");
}

Prediction predict(const SoftmaxModel& model, std::span<const float> x) {
  check_dim(model.dim, x.size());
  const std::size_t classes = model.classes;
  const std::size_t dim = model.dim;
  std::vector<double> scores(classes);
  for (std::size_t c = 0; c < classes; ++c) {
    double z = model.bias[c];
    for (std::size_t d = 0; d < dim; ++d) {
      z += static_cast<double>(model.weights[c * dim + d]) * x[d];
    }
    scores[c] = z;
  }
  const double m = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (std::size_t c = 0; c < classes; ++c) {
    scores[c] = std::exp(scores[c] - m);
    sum += scores[c];
  }
  for (std::size_t c = 0; c < classes; ++c) scores[c] /= sum;

  Prediction pred;
  pred.label = argmax_label(scores, model.class_order);
  pred.scores = std::move(scores);
  return pred;
}

Prediction predict(const SvmModel& model, std::span<const float> x) {
  check_dim(model.dim, x.size());
  const std::size_t classes = model.classes;
  const std::size_t dim = model.dim;
  std::vector<double> scores(classes);
  for (std::size_t c = 0; c < classes; ++c) {
    double z = model.bias[c];
    for (std::size_t d = 0; d < dim; ++d) {
      z += static_cast<double>(model.weights[c * dim + d]) * x[d];
    }
    scores[c] = z;
  }
  Prediction pred;
  pred.label = argmax_label(scores, model.class_order);
  pred.scores = std::move(scores);
  return pred;
}

Prediction predict(const KnnModel& model, std::span<const float> x) {
  check_dim(model.dim, x.size());
  const std::size_t n = model.labels.size();
  if (model.k == 0 || model.k > n) {
    fail_train("knn model has k = " + std::to_string(model.k) + " but " +
               std::to_string(n) + " references");
  }
  const std::size_t dim = model.dim;
  std::vector<std::pair<double, std::size_t>> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    const float* row = model.vectors.data() + i * dim;
    double d2 = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      const double diff = static_cast<double>(row[d]) - x[d];
      d2 += diff * diff;
    }
    dist[i] = {d2, i};
  }
  // (distance, insertion index) ordering makes distance ties stable.
  std::partial_sort(dist.begin(), dist.begin() + model.k, dist.end());

  std::vector<double> votes(model.classes, 0.0);
  for (std::size_t r = 0; r < model.k; ++r) {
    votes[static_cast<std::size_t>(model.labels[dist[r].second])] += 1.0;
  }
  for (double& v : votes) v /= static_cast<double>(model.k);

  Prediction pred;
  pred.label = argmax_label(votes, model.class_order);
  pred.scores = std::move(votes);
  return pred;
}

HeadKind kind_of(const TrainedHead& head) {
  if (std::holds_alternative<SoftmaxModel>(head)) return HeadKind::kSoftmax;
  if (std::holds_alternative<SvmModel>(head)) return HeadKind::kSvm;
  return HeadKind::kKnn;
}

Prediction predict(const TrainedHead& head, std::span<const float> x) {
  return std::visit([&](const auto& model) { return predict(model, x); },
                    head);
}

namespace {

void put_linear_model(std::string& out, const std::uint32_t classes,
                      const std::uint32_t dim,
                      const std::vector<std::uint32_t>& class_order,
                      const std::vector<float>& weights,
                      const std::vector<float>& bias) {
  binio::put_u32(out, classes);
  binio::put_u32(out, dim);
  for (const std::uint32_t id : class_order) binio::put_u32(out, id);
  for (const float v : weights) binio::put_f32(out, v);
  for (const float v : bias) binio::put_f32(out, v);
}

}  // namespace

void save_head(const TrainedHead& head, const std::filesystem::path& path) {
  std::string out;
  out.append("HED1");
  out.push_back(static_cast<char>(kind_of(head)));
  std::visit(
      [&out](const auto& model) {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, KnnModel>) {
          binio::put_u32(out, model.classes);
          binio::put_u32(out, model.dim);
          for (const std::uint32_t id : model.class_order) {
            binio::put_u32(out, id);
          }
          binio::put_u32(out, model.k);
          binio::put_u32(out, static_cast<std::uint32_t>(model.ids.size()));
          for (std::size_t i = 0; i < model.ids.size(); ++i) {
            binio::put_u16(out,
                           static_cast<std::uint16_t>(model.ids[i].size()));
            out.append(model.ids[i]);
            binio::put_u32(out, static_cast<std::uint32_t>(model.labels[i]));
            const float* row = model.vectors.data() + i * model.dim;
            for (std::size_t d = 0; d < model.dim; ++d) {
              binio::put_f32(out, row[d]);
            }
          }
        } else {
          put_linear_model(out, model.classes, model.dim, model.class_order,
                           model.weights, model.bias);
        }
      },
      head);
  binio::write_file_atomic(out, path);
}

TrainedHead load_head(const std::filesystem::path& path) {
  const std::string data = binio::read_file(path, ErrorKind::kTrainEval);
  binio::Reader reader(data, path.string(), ErrorKind::kTrainEval);
  if (reader.str(4) != "HED1") {
    reader.fail("bad magic, not a HED1 model file");
  }
  const std::uint8_t kind_byte = static_cast<std::uint8_t>(reader.str(1)[0]);
  if (kind_byte > 2) reader.fail("unknown head kind byte");
  const HeadKind kind = static_cast<HeadKind>(kind_byte);

  const std::uint32_t classes = reader.u32();
  const std::uint32_t dim = reader.u32();
  if (classes == 0 || dim == 0) reader.fail("zero classes or dimension");
  std::vector<std::uint32_t> class_order(classes);
  for (auto& id : class_order) {
    id = reader.u32();
    if (id >= classes) reader.fail("class_order id out of range");
  }

  TrainedHead head;
  if (kind == HeadKind::kKnn) {
    KnnModel model;
    model.classes = classes;
    model.dim = dim;
    model.class_order = std::move(class_order);
    model.k = reader.u32();
    const std::uint32_t count = reader.u32();
    if (model.k == 0 || model.k > count) {
      reader.fail("k exceeds the stored reference count");
    }
    model.ids.reserve(count);
    model.labels.reserve(count);
    model.vectors.reserve(static_cast<std::size_t>(count) * dim);
    for (std::uint32_t i = 0; i < count; ++i) {
      const std::uint16_t id_len = reader.u16();
      model.ids.push_back(reader.str(id_len));
      const std::uint32_t label = reader.u32();
      if (label >= classes) reader.fail("reference label out of range");
      model.labels.push_back(static_cast<int>(label));
      for (std::uint32_t d = 0; d < dim; ++d) {
        model.vectors.push_back(reader.f32());
      }
    }
    head = std::move(model);
  } else {
    std::vector<float> weights(static_cast<std::size_t>(classes) * dim);
    std::vector<float> bias(classes);
    for (auto& v : weights) v = reader.f32();
    for (auto& v : bias) v = reader.f32();
    if (kind == HeadKind::kSoftmax) {
      head = SoftmaxModel{classes, dim, std::move(class_order),
                          std::move(weights), std::move(bias)};
    } else {
      head = SvmModel{classes, dim, std::move(class_order),
                      std::move(weights), std::move(bias)};
    }
  }
  if (!reader.at_end()) reader.fail("trailing bytes after model payload");
  return head;
}

}  // namespace tlc::heads
