#include "sentvol/classify.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "sentvol/io_util.hpp"

namespace sentvol {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double dot_plus_bias(std::span<const double> w, double b,
                     std::span<const double> x) {
    double z = b;
    for (std::size_t j = 0; j < w.size(); ++j) z += w[j] * x[j];
    return z;
}

}  // namespace

LabeledDataset make_dataset(std::span<const DayFeatureVector> features,
                            std::span<const DirectionLabel> labels,
                            double split_fraction) {
    if (!(split_fraction > 0.0 && split_fraction < 1.0)) {
        throw std::invalid_argument("split_fraction must be in (0, 1)");
    }
    std::unordered_map<std::int64_t, const DirectionLabel*> by_date;
    for (const auto& label : labels) {
        by_date.emplace(day_number(label.date), &label);
    }
    LabeledDataset data;
    for (const auto& fv : features) {
        const auto it = by_date.find(day_number(fv.trading_day));
        if (it == by_date.end()) continue;
        data.rows.push_back(LabeledRow{fv.trading_day, fv.features,
                                       it->second->up});
    }
    if (data.rows.empty()) {
        throw std::invalid_argument(
            "make_dataset: no dates shared between features and labels");
    }
    std::sort(data.rows.begin(), data.rows.end(),
              [](const LabeledRow& a, const LabeledRow& b) {
                  return a.date < b.date;
              });
    data.n_train = static_cast<std::size_t>(
        std::floor(split_fraction * static_cast<double>(data.rows.size())));
    if (data.n_train == 0 || data.n_train == data.rows.size()) {
        throw std::invalid_argument("make_dataset: a split side is empty");
    }
    return data;
}

double logistic_loss(std::span<const LabeledRow> rows,
                     std::span<const double> weights, double bias,
                     double l2_lambda) {
    double loss = 0.0;
    for (const auto& row : rows) {
        const double z = dot_plus_bias(weights, bias, row.features);
        const double y = row.up ? 1.0 : 0.0;
        // numerically stable -[y log p + (1-y) log(1-p)]
        const double softplus =
            z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
        loss += softplus - y * z;
    }
    loss /= static_cast<double>(rows.size());
    double reg = 0.0;
    for (const double w : weights) reg += w * w;
    return loss + 0.5 * l2_lambda * reg;
}

void logistic_gradient(std::span<const LabeledRow> rows,
                       std::span<const double> weights, double bias,
                       double l2_lambda, std::span<double> grad_w,
                       double& grad_b) {
    std::fill(grad_w.begin(), grad_w.end(), 0.0);
    grad_b = 0.0;
    for (const auto& row : rows) {
        const double p = sigmoid(dot_plus_bias(weights, bias, row.features));
        const double err = p - (row.up ? 1.0 : 0.0);
        for (std::size_t j = 0; j < grad_w.size(); ++j) {
            grad_w[j] += err * row.features[j];
        }
        grad_b += err;
    }
    const double inv_n = 1.0 / static_cast<double>(rows.size());
    for (std::size_t j = 0; j < grad_w.size(); ++j) {
        grad_w[j] = grad_w[j] * inv_n + l2_lambda * weights[j];
    }
    grad_b *= inv_n;
}

LogisticModel train_classifier(const LabeledDataset& data,
                               const ClassifierConfig& config) {
    const auto train_rows = data.train();
    LogisticModel model;
    model.hyper = config;

    std::size_t n_up = 0;
    for (const auto& row : train_rows) n_up += row.up ? 1 : 0;
    const std::size_t dim =
        train_rows.empty() ? 0 : train_rows.front().features.size();
    model.weights.assign(dim, 0.0);

    if (train_rows.size() < 2 || n_up == 0 || n_up == train_rows.size()) {
        // degenerate training data: predict the (smoothed) majority class
        model.fallback_majority = true;
        const double up_odds =
            (static_cast<double>(n_up) + 1.0) /
            (static_cast<double>(train_rows.size() - n_up) + 1.0);
        model.bias = std::log(up_odds);
        return model;
    }

    std::vector<double> grad_w(dim, 0.0);
    double grad_b = 0.0;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        logistic_gradient(train_rows, model.weights, model.bias,
                          config.l2_lambda, grad_w, grad_b);
        for (std::size_t j = 0; j < dim; ++j) {
            model.weights[j] -= config.learning_rate * grad_w[j];
        }
        model.bias -= config.learning_rate * grad_b;
    }
    for (const double w : model.weights) {
        if (!std::isfinite(w)) {
            throw std::runtime_error(
                "train_classifier: non-finite weights (learning rate " +
                format_double(config.learning_rate) + ", epochs " +
                std::to_string(config.epochs) + ")");
        }
    }
    if (!std::isfinite(model.bias)) {
        throw std::runtime_error("train_classifier: non-finite bias");
    }
    return model;
}

Prediction predict(const LogisticModel& model,
                   std::span<const double> features) {
    if (features.size() != model.weights.size()) {
        throw std::invalid_argument("predict: feature dimension mismatch");
    }
    Prediction out;
    out.p_up = sigmoid(dot_plus_bias(model.weights, model.bias, features));
    out.up = out.p_up >= 0.5;
    return out;
}

EvalReport metrics_from_confusion(long tp, long fp, long fn, long tn) {
    EvalReport r;
    r.tp = tp;
    r.fp = fp;
    r.fn = fn;
    r.tn = tn;
    const long total = tp + fp + fn + tn;
    r.accuracy = total > 0
                     ? static_cast<double>(tp + tn) / static_cast<double>(total)
                     : 0.0;
    if (tp + fp > 0) {
        r.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    } else {
        r.precision = 0.0;
        r.precision_defined = false;
    }
    if (tp + fn > 0) {
        r.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    } else {
        r.recall = 0.0;
        r.recall_defined = false;
    }
    if (r.precision + r.recall > 0.0 && r.precision_defined && r.recall_defined) {
        r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
    } else {
        r.f1 = 0.0;
        r.f1_defined = false;
    }
    return r;
}

EvalReport evaluate(const LogisticModel& model,
                    std::span<const LabeledRow> rows) {
    if (rows.empty()) throw std::invalid_argument("evaluate: empty split");
    long tp = 0;
    long fp = 0;
    long fn = 0;
    long tn = 0;
    for (const auto& row : rows) {
        const bool predicted = predict(model, row.features).up;
        if (row.up && predicted) ++tp;
        if (!row.up && predicted) ++fp;
        if (row.up && !predicted) ++fn;
        if (!row.up && !predicted) ++tn;
    }
    return metrics_from_confusion(tp, fp, fn, tn);
}

void save_classifier(const LogisticModel& model, int feature_dim,
                     FeatureMode mode, const std::string& path) {
    std::ostringstream out;
    out << "sentvol-logit 1\n";
    out << "feature_dim " << feature_dim << "\n";
    out << "feature_mode " << to_string(mode) << "\n";
    out << "learning_rate " << format_double(model.hyper.learning_rate) << "\n";
    out << "epochs " << model.hyper.epochs << "\n";
    out << "l2_lambda " << format_double(model.hyper.l2_lambda) << "\n";
    out << "fallback_majority " << (model.fallback_majority ? 1 : 0) << "\n";
    out << "bias " << format_double(model.bias) << "\n";
    out << "weights";
    for (const double w : model.weights) out << " " << format_double(w);
    out << "\n";
    write_text_file(path, out.str());
}

LogisticModel load_classifier(const std::string& path, int* feature_dim,
                              FeatureMode* mode) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open classifier file: " + path);
    std::string magic;
    int version = 0;
    in >> magic >> version;
    if (magic != "sentvol-logit" || version != 1) {
        throw std::runtime_error(path + ": not a sentvol-logit v1 file");
    }
    LogisticModel model;
    std::string key;
    std::string mode_text;
    int dim = 0;
    int fallback = 0;
    in >> key >> dim;
    in >> key >> mode_text;
    in >> key >> model.hyper.learning_rate;
    in >> key >> model.hyper.epochs;
    in >> key >> model.hyper.l2_lambda;
    in >> key >> fallback;
    in >> key >> model.bias;
    in >> key;
    model.fallback_majority = fallback != 0;
    model.weights.resize(static_cast<std::size_t>(dim));
    for (auto& w : model.weights) in >> w;
    if (!in) throw std::runtime_error(path + ": truncated classifier file");
    if (feature_dim) *feature_dim = dim;
    if (mode) {
        *mode = mode_text == "count" ? FeatureMode::count
                                     : FeatureMode::distribution;
    }
    return model;
}

}  // namespace sentvol
