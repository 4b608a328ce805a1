#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "sentvol/classify.hpp"
#include "sentvol/io_util.hpp"
#include "sentvol/rng.hpp"

using namespace sentvol;

namespace {

DayFeatureVector fv(const std::string& date, std::vector<double> features) {
    DayFeatureVector v;
    v.trading_day = parse_date(date);
    v.features = std::move(features);
    return v;
}

DirectionLabel label(const std::string& date, bool up) {
    return DirectionLabel{parse_date(date), up};
}

LabeledDataset synthetic_dataset(std::size_t n, std::uint64_t seed,
                                 double split = 0.8) {
    Rng rng(seed);
    std::vector<DayFeatureVector> features;
    std::vector<DirectionLabel> labels;
    for (std::size_t i = 0; i < n; ++i) {
        const Date date = date_from_day_number(18000 + static_cast<long>(i));
        const bool up = rng.next_double() < 0.5;
        const double signal = up ? 0.7 : 0.3;
        features.push_back(DayFeatureVector{
            date,
            {signal + 0.05 * rng.next_normal(),
             1.0 - signal + 0.05 * rng.next_normal(),
             rng.next_double()}});
        labels.push_back(DirectionLabel{date, up});
    }
    return make_dataset(features, labels, split);
}

}  // namespace

TEST_CASE("make_dataset joins, orders and splits chronologically") {
    std::vector<DayFeatureVector> features{
        fv("2019-08-09", {0.5}), fv("2019-08-05", {0.1}),
        fv("2019-08-06", {0.2}), fv("2019-08-07", {0.3}),
        fv("2019-08-08", {0.4}), fv("2019-08-12", {0.6}),
        fv("2019-08-13", {0.7}), fv("2019-08-14", {0.8}),
        fv("2019-08-15", {0.9}), fv("2019-08-16", {1.0})};
    std::vector<DirectionLabel> labels;
    for (const auto& f : features) {
        labels.push_back(label(to_string(f.trading_day), f.features[0] > 0.5));
    }
    labels.push_back(label("2019-09-02", true));  // no matching feature

    const LabeledDataset data = make_dataset(features, labels, 0.8);
    REQUIRE(data.rows.size() == 10);
    CHECK(data.n_train == 8);
    CHECK(data.train().size() == 8);
    CHECK(data.test().size() == 2);
    for (std::size_t i = 0; i + 1 < data.rows.size(); ++i) {
        CHECK(data.rows[i].date < data.rows[i + 1].date);
    }
    // no test-date leakage
    for (const auto& train_row : data.train()) {
        for (const auto& test_row : data.test()) {
            CHECK(train_row.date < test_row.date);
        }
    }
    // the label at date t belongs to the feature at date t
    for (const auto& row : data.rows) {
        CHECK(row.up == (row.features[0] > 0.5));
    }
}

TEST_CASE("make_dataset error paths") {
    std::vector<DayFeatureVector> features{fv("2019-08-05", {0.1})};
    std::vector<DirectionLabel> labels{label("2019-09-05", true)};
    CHECK_THROWS_AS(make_dataset(features, labels, 0.8),
                    std::invalid_argument);  // disjoint dates

    std::vector<DirectionLabel> matching{label("2019-08-05", true)};
    CHECK_THROWS_AS(make_dataset(features, matching, 0.8),
                    std::invalid_argument);  // a split side is empty

    CHECK_THROWS_AS(make_dataset(features, matching, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_dataset(features, matching, 1.0),
                    std::invalid_argument);
}

TEST_CASE("a linearly separable pair trains to perfect accuracy") {
    std::vector<DayFeatureVector> features{
        fv("2019-08-05", {0.0}), fv("2019-08-06", {1.0}),
        fv("2019-08-07", {0.0}), fv("2019-08-08", {1.0}),
        fv("2019-08-09", {1.0})};
    std::vector<DirectionLabel> labels{
        label("2019-08-05", false), label("2019-08-06", true),
        label("2019-08-07", false), label("2019-08-08", true),
        label("2019-08-09", true)};
    const LabeledDataset data = make_dataset(features, labels, 0.8);
    ClassifierConfig config;
    config.learning_rate = 2.0;
    config.epochs = 2000;
    config.l2_lambda = 0.0;
    const LogisticModel model = train_classifier(data, config);
    CHECK_FALSE(model.fallback_majority);
    const EvalReport train = evaluate(model, data.train());
    CHECK(train.accuracy == 1.0);
}

TEST_CASE("extreme regularization collapses to the majority class") {
    const LabeledDataset data = synthetic_dataset(60, 999);
    ClassifierConfig config;
    // keep learning_rate * l2_lambda below the stability bound while the
    // penalty dwarfs the data term
    config.learning_rate = 1e-3;
    config.l2_lambda = 1e3;
    config.epochs = 3000;
    const LogisticModel model = train_classifier(data, config);
    for (const double w : model.weights) {
        CHECK(std::fabs(w) < 1e-3);
    }
    // all predictions equal -> one confusion column is empty
    const EvalReport report = evaluate(model, data.rows);
    const bool single_column = (report.tp + report.fp == 0) ||
                               (report.fn + report.tn == 0);
    CHECK(single_column);
}

TEST_CASE("analytic gradient matches central finite differences") {
    const LabeledDataset data = synthetic_dataset(40, 777);
    const auto rows = data.train();
    Rng rng(2);
    const double lambda = 1e-3;
    for (int point = 0; point < 10; ++point) {
        std::vector<double> weights(3);
        for (double& w : weights) w = rng.next_normal();
        const double bias = rng.next_normal();

        std::vector<double> grad(3);
        double grad_b = 0.0;
        logistic_gradient(rows, weights, bias, lambda, grad, grad_b);

        const double h = 1e-6;
        for (std::size_t j = 0; j < weights.size(); ++j) {
            std::vector<double> plus(weights);
            std::vector<double> minus(weights);
            plus[j] += h;
            minus[j] -= h;
            const double fd = (logistic_loss(rows, plus, bias, lambda) -
                               logistic_loss(rows, minus, bias, lambda)) /
                              (2 * h);
            CHECK(std::fabs(grad[j] - fd) <=
                  1e-5 * std::max(1.0, std::fabs(fd)));
        }
        const double fd_b = (logistic_loss(rows, weights, bias + h, lambda) -
                             logistic_loss(rows, weights, bias - h, lambda)) /
                            (2 * h);
        CHECK(std::fabs(grad_b - fd_b) <= 1e-5 * std::max(1.0, std::fabs(fd_b)));
    }
}

TEST_CASE("training loss is non-increasing at the default rate") {
    const LabeledDataset data = synthetic_dataset(80, 31415);
    ClassifierConfig config;  // defaults: lr 0.1, 500 epochs, lambda 1e-3
    LogisticModel model;
    model.hyper = config;
    model.weights.assign(3, 0.0);
    std::vector<double> grad(3);
    double grad_b = 0.0;
    double prev = logistic_loss(data.train(), model.weights, model.bias,
                                config.l2_lambda);
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        logistic_gradient(data.train(), model.weights, model.bias,
                          config.l2_lambda, grad, grad_b);
        for (std::size_t j = 0; j < model.weights.size(); ++j) {
            model.weights[j] -= config.learning_rate * grad[j];
        }
        model.bias -= config.learning_rate * grad_b;
        const double now = logistic_loss(data.train(), model.weights,
                                         model.bias, config.l2_lambda);
        CHECK(now <= prev + 1e-12);
        prev = now;
    }
}

TEST_CASE("prediction semantics") {
    LogisticModel model;
    model.weights = {0.0, 0.0};
    model.bias = 0.0;
    const std::vector<double> x{0.3, -0.2};
    const Prediction boundary = predict(model, x);
    CHECK(boundary.p_up == 0.5);
    CHECK(boundary.up);  // boundary rule: p >= 0.5 is UP

    model.bias = 40.0;
    CHECK(predict(model, x).p_up == doctest::Approx(1.0).epsilon(1e-12));

    // negating the parameters maps p to 1-p
    model.weights = {1.3, -0.4};
    model.bias = 0.7;
    const double p = predict(model, x).p_up;
    model.weights = {-1.3, 0.4};
    model.bias = -0.7;
    CHECK(predict(model, x).p_up == doctest::Approx(1.0 - p).epsilon(1e-12));

    CHECK_THROWS_AS(predict(model, std::vector<double>{1.0}),
                    std::invalid_argument);
}

TEST_CASE("label is invariant under the sign of the linear score") {
    const LabeledDataset data = synthetic_dataset(50, 606);
    const LogisticModel model = train_classifier(data, {});
    for (const auto& row : data.rows) {
        double z = model.bias;
        for (std::size_t j = 0; j < row.features.size(); ++j) {
            z += model.weights[j] * row.features[j];
        }
        CHECK(predict(model, row.features).up == (z >= 0.0));
    }
}

TEST_CASE("metric definitions on a pinned confusion matrix") {
    const EvalReport r = metrics_from_confusion(10, 5, 0, 5);
    CHECK(r.accuracy == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(r.precision == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(r.recall == 1.0);
    CHECK(r.f1 == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("perfect predictions give all-ones metrics") {
    std::vector<DayFeatureVector> features;
    std::vector<DirectionLabel> labels;
    for (int i = 0; i < 20; ++i) {
        const Date date = date_from_day_number(18100 + i);
        const bool up = i % 2 == 0;
        features.push_back(DayFeatureVector{date, {up ? 1.0 : -1.0}});
        labels.push_back(DirectionLabel{date, up});
    }
    const LabeledDataset data = make_dataset(features, labels, 0.5);
    ClassifierConfig config;
    config.learning_rate = 2.0;
    config.epochs = 3000;
    const LogisticModel model = train_classifier(data, config);
    const EvalReport report = evaluate(model, data.test());
    CHECK(report.accuracy == 1.0);
    CHECK(report.precision == 1.0);
    CHECK(report.recall == 1.0);
    CHECK(report.f1 == 1.0);
    CHECK(report.fp == 0);
    CHECK(report.fn == 0);
}

TEST_CASE("metrics recomputed from the confusion matrix are exact") {
    Rng rng(1000003);
    for (int trial = 0; trial < 1000; ++trial) {
        const long tp = static_cast<long>(rng.next_below(50));
        const long fp = static_cast<long>(rng.next_below(50));
        const long fn = static_cast<long>(rng.next_below(50));
        const long tn = static_cast<long>(rng.next_below(50));
        if (tp + fp + fn + tn == 0) continue;
        const EvalReport r = metrics_from_confusion(tp, fp, fn, tn);
        CHECK(r.accuracy == static_cast<double>(tp + tn) /
                                static_cast<double>(tp + fp + fn + tn));
        if (tp + fp > 0) {
            CHECK(r.precision ==
                  static_cast<double>(tp) / static_cast<double>(tp + fp));
        } else {
            CHECK_FALSE(r.precision_defined);
            CHECK(r.precision == 0.0);
        }
        if (tp + fn > 0) {
            CHECK(r.recall ==
                  static_cast<double>(tp) / static_cast<double>(tp + fn));
        } else {
            CHECK_FALSE(r.recall_defined);
        }
        if (r.precision + r.recall > 0 && r.precision_defined &&
            r.recall_defined) {
            CHECK(r.f1 ==
                  2.0 * r.precision * r.recall / (r.precision + r.recall));
        } else {
            CHECK(r.f1 == 0.0);
        }
    }
}

TEST_CASE("degenerate training falls back to the majority class") {
    std::vector<DayFeatureVector> features;
    std::vector<DirectionLabel> labels;
    for (int i = 0; i < 10; ++i) {
        const Date date = date_from_day_number(18200 + i);
        features.push_back(DayFeatureVector{date, {0.5}});
        labels.push_back(DirectionLabel{date, true});  // single class
    }
    const LabeledDataset data = make_dataset(features, labels, 0.8);
    const LogisticModel model = train_classifier(data, {});
    CHECK(model.fallback_majority);
    CHECK(predict(model, std::vector<double>{0.5}).up);
}

TEST_CASE("classifier files round-trip") {
    const LabeledDataset data = synthetic_dataset(60, 17);
    const LogisticModel model = train_classifier(data, {});
    TempDir tmp("classifier");
    save_classifier(model, 3, FeatureMode::distribution, tmp.file("model.txt"));
    int dim = 0;
    FeatureMode mode = FeatureMode::count;
    const LogisticModel loaded = load_classifier(tmp.file("model.txt"), &dim, &mode);
    CHECK(dim == 3);
    CHECK(mode == FeatureMode::distribution);
    CHECK(loaded.bias == model.bias);
    CHECK(loaded.weights == model.weights);
}
