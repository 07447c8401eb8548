#pragma once

#include <array>
#include <span>
#include <vector>

#include "passgauge/matrix.hpp"
#include "passgauge/tree.hpp"

namespace passgauge::models {

struct LogRegParams {
    double learning_rate = 0.1;
    int epochs = 300;
    double l2 = 1e-4;

    bool operator==(const LogRegParams&) const = default;
};

struct LossAndGradient {
    double loss = 0.0;
    Matrix grad_weights;  // classes x features
    std::vector<double> grad_bias;
};

// Mean multinomial cross-entropy plus (l2 / 2) * ||W||^2; the bias is not
// penalized.
LossAndGradient softmax_loss_and_gradient(const Matrix& weights, std::span<const double> bias,
                                          const Matrix& features, std::span<const int> labels, double l2);

class LogisticRegressionModel {
public:
    LogisticRegressionModel() = default;
    LogisticRegressionModel(Matrix weights, std::vector<double> bias, LogRegParams params,
                            std::vector<double> loss_trace)
        : weights_(std::move(weights)), bias_(std::move(bias)), params_(params), loss_trace_(std::move(loss_trace)) {}

    const Matrix& weights() const { return weights_; }
    const std::vector<double>& bias() const { return bias_; }
    const LogRegParams& params() const { return params_; }
    // Loss before each gradient step.
    const std::vector<double>& loss_trace() const { return loss_trace_; }
    std::size_t n_features() const { return weights_.cols(); }

    std::array<double, kClasses> predict_proba(std::span<const double> row) const;
    int predict_class(std::span<const double> row) const;

    bool operator==(const LogisticRegressionModel&) const = default;

private:
    Matrix weights_;
    std::vector<double> bias_;
    LogRegParams params_;
    std::vector<double> loss_trace_;
};

// Full-batch gradient descent from zero weights with a fixed step.
// Throws Error(NonFiniteLoss) if the loss diverges.
LogisticRegressionModel train_logreg(const Matrix& features, std::span<const int> labels,
                                     const LogRegParams& params);

}  // namespace passgauge::models
