#include "passgauge/logreg.hpp"

#include <algorithm>
#include <cmath>

#include "passgauge/error.hpp"

namespace passgauge::models {

namespace {

std::array<double, kClasses> softmax(const Matrix& w, std::span<const double> b, std::span<const double> row) {
    std::array<double, kClasses> z{};
    for (int c = 0; c < kClasses; ++c) {
        const auto wc = w.row(c);
        double s = b[c];
        for (std::size_t j = 0; j < row.size(); ++j) s += wc[j] * row[j];
        z[c] = s;
    }
    const double m = *std::max_element(z.begin(), z.end());
    double total = 0.0;
    for (double& v : z) {
        v = std::exp(v - m);
        total += v;
    }
    for (double& v : z) v /= total;
    return z;
}

}  // namespace

LossAndGradient softmax_loss_and_gradient(const Matrix& weights, std::span<const double> bias,
                                          const Matrix& features, std::span<const int> labels, double l2) {
    if (features.rows() != labels.size()) throw Error(ErrorKind::LengthMismatch, "rows and labels differ");
    if (features.rows() == 0) throw Error(ErrorKind::EmptyTrainingSet, "no samples");
    if (weights.rows() != kClasses || weights.cols() != features.cols() || bias.size() != kClasses) {
        throw Error(ErrorKind::DimensionMismatch, "weight shape does not match the features");
    }
    const std::size_t d = features.cols();
    const double n = static_cast<double>(features.rows());
    LossAndGradient out{0.0, Matrix(kClasses, d), std::vector<double>(kClasses, 0.0)};
    for (std::size_t i = 0; i < features.rows(); ++i) {
        const auto row = features.row(i);
        auto p = softmax(weights, bias, row);
        out.loss -= std::log(std::max(p[labels[i]], 1e-300));
        p[labels[i]] -= 1.0;
        for (int c = 0; c < kClasses; ++c) {
            if (p[c] == 0.0) continue;
            auto g = out.grad_weights.row(c);
            for (std::size_t j = 0; j < d; ++j) g[j] += p[c] * row[j];
            out.grad_bias[c] += p[c];
        }
    }
    double sq = 0.0;
    for (int c = 0; c < kClasses; ++c) {
        const auto w = weights.row(c);
        auto g = out.grad_weights.row(c);
        for (std::size_t j = 0; j < d; ++j) {
            g[j] = g[j] / n + l2 * w[j];
            sq += w[j] * w[j];
        }
        out.grad_bias[c] /= n;
    }
    out.loss = out.loss / n + 0.5 * l2 * sq;
    return out;
}

std::array<double, kClasses> LogisticRegressionModel::predict_proba(std::span<const double> row) const {
    if (row.size() != weights_.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "expected " + std::to_string(weights_.cols()) + " features");
    }
    return softmax(weights_, bias_, row);
}

int LogisticRegressionModel::predict_class(std::span<const double> row) const {
    const auto p = predict_proba(row);
    return argmax_low(p);
}

LogisticRegressionModel train_logreg(const Matrix& features, std::span<const int> labels,
                                     const LogRegParams& params) {
    std::array<bool, kClasses> seen{};
    for (int y : labels) {
        if (y < 0 || y >= kClasses) throw Error(ErrorKind::InvalidLabel, "label out of range");
        seen[y] = true;
    }
    if (std::count(seen.begin(), seen.end(), true) < 2) {
        throw Error(ErrorKind::SingleClassTrainingSet, "training data contains a single class");
    }
    Matrix w(kClasses, features.cols());
    std::vector<double> b(kClasses, 0.0);
    std::vector<double> trace;
    trace.reserve(static_cast<std::size_t>(std::max(params.epochs, 0)));
    for (int epoch = 0; epoch < params.epochs; ++epoch) {
        const auto step = softmax_loss_and_gradient(w, b, features, labels, params.l2);
        if (!std::isfinite(step.loss)) {
            throw Error(ErrorKind::NonFiniteLoss,
                        "loss diverged at epoch " + std::to_string(epoch) + "; reduce the learning rate");
        }
        trace.push_back(step.loss);
        for (int c = 0; c < kClasses; ++c) {
            auto wc = w.row(c);
            const auto gc = step.grad_weights.row(c);
            for (std::size_t j = 0; j < wc.size(); ++j) wc[j] -= params.learning_rate * gc[j];
            b[c] -= params.learning_rate * step.grad_bias[c];
        }
    }
    return LogisticRegressionModel(std::move(w), std::move(b), params, std::move(trace));
}

}  // namespace passgauge::models
