#pragma once

#include <span>
#include <string>
#include <vector>

#include "sentvol/market.hpp"
#include "sentvol/topics.hpp"

namespace sentvol {

struct LabeledRow {
    Date date;
    std::vector<double> features;
    bool up = false;
};

// Chronologically ordered rows; the first n_train form the training split.
// Every train date precedes every test date by construction.
struct LabeledDataset {
    std::vector<LabeledRow> rows;
    std::size_t n_train = 0;

    std::span<const LabeledRow> train() const {
        return {rows.data(), n_train};
    }
    std::span<const LabeledRow> test() const {
        return {rows.data() + n_train, rows.size() - n_train};
    }
};

// Inner join of features and labels on date, chronological split with the
// first floor(split_fraction * n) rows as train. Throws when the join or
// either split side is empty.
LabeledDataset make_dataset(std::span<const DayFeatureVector> features,
                            std::span<const DirectionLabel> labels,
                            double split_fraction);

struct ClassifierConfig {
    double learning_rate = 0.1;
    int epochs = 500;
    double l2_lambda = 1e-3;
};

struct LogisticModel {
    std::vector<double> weights;
    double bias = 0.0;
    ClassifierConfig hyper;
    bool fallback_majority = false;  // degenerate training data
};

// Full-batch gradient descent on mean binary cross-entropy with an L2
// penalty (lambda/2)||w||^2 on the weights (bias unpenalized). Weights start
// at zero; the run is deterministic. Training data with fewer than two rows
// or a single class yields a majority-class fallback model.
LogisticModel train_classifier(const LabeledDataset& data,
                               const ClassifierConfig& config);

// Mean training loss at the supplied parameters (used by gradient checks).
double logistic_loss(std::span<const LabeledRow> rows,
                     std::span<const double> weights, double bias,
                     double l2_lambda);
void logistic_gradient(std::span<const LabeledRow> rows,
                       std::span<const double> weights, double bias,
                       double l2_lambda, std::span<double> grad_w,
                       double& grad_b);

struct Prediction {
    double p_up = 0.5;
    bool up = true;  // p_up >= 0.5
};

Prediction predict(const LogisticModel& model, std::span<const double> features);

// rows = actual, cols = predicted; positive class is UP.
struct EvalReport {
    long tp = 0;
    long fp = 0;
    long fn = 0;
    long tn = 0;
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    bool precision_defined = true;
    bool recall_defined = true;
    bool f1_defined = true;

    long total() const { return tp + fp + fn + tn; }
};

EvalReport evaluate(const LogisticModel& model,
                    std::span<const LabeledRow> rows);

// Metrics from raw confusion counts (shared by evaluate and its tests).
EvalReport metrics_from_confusion(long tp, long fp, long fn, long tn);

void save_classifier(const LogisticModel& model, int feature_dim,
                     FeatureMode mode, const std::string& path);
LogisticModel load_classifier(const std::string& path, int* feature_dim = nullptr,
                              FeatureMode* mode = nullptr);

}  // namespace sentvol
