#include "passgauge/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "passgauge/error.hpp"

namespace passgauge::models {

double gini_impurity(std::span<const double> class_counts) {
    double total = 0.0;
    for (double c : class_counts) {
        if (c < 0.0) throw Error(ErrorKind::InvalidArgument, "negative class count");
        total += c;
    }
    if (total <= 0.0) throw Error(ErrorKind::AllZeroCounts, "gini of an empty node");
    double sq = 0.0;
    for (double c : class_counts) sq += (c / total) * (c / total);
    return 1.0 - sq;
}

double gini_impurity(const std::array<std::uint32_t, kClasses>& class_counts) {
    std::array<double, kClasses> c{};
    std::copy(class_counts.begin(), class_counts.end(), c.begin());
    return gini_impurity(std::span<const double>(c));
}

int argmax_low(std::span<const double> values) {
    int best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[best]) best = static_cast<int>(i);
    }
    return best;
}

const TreeNode& DecisionTree::leaf_for(std::span<const double> row) const {
    std::size_t at = 0;
    while (!nodes_[at].is_leaf()) {
        const auto& n = nodes_[at];
        at = static_cast<std::size_t>(row[n.feature] <= n.threshold ? n.left : n.right);
    }
    return nodes_[at];
}

std::size_t DecisionTree::depth() const {
    if (nodes_.empty()) return 0;
    std::vector<std::pair<int, std::size_t>> stack = {{0, 0}};
    std::size_t deepest = 0;
    while (!stack.empty()) {
        const auto [id, d] = stack.back();
        stack.pop_back();
        deepest = std::max(deepest, d);
        if (!nodes_[id].is_leaf()) {
            stack.emplace_back(nodes_[id].left, d + 1);
            stack.emplace_back(nodes_[id].right, d + 1);
        }
    }
    return deepest;
}

namespace {

struct Split {
    int feature = -1;
    double threshold = 0.0;
    double score = -1.0;  // sum_c L_c^2/nL + sum_c R_c^2/nR, larger is better
};

class TreeBuilder {
public:
    TreeBuilder(const Matrix& x, std::span<const int> y, const TreeParams& params, Rng& rng)
        : x_(x), y_(y), params_(params), rng_(rng), order_(x.cols()) {
        std::iota(order_.begin(), order_.end(), 0);
    }

    std::vector<TreeNode> build(std::vector<std::size_t> samples) {
        grow(std::move(samples), 0);
        return std::move(nodes_);
    }

private:
    int grow(std::vector<std::size_t> samples, int depth) {
        const int id = static_cast<int>(nodes_.size());
        nodes_.emplace_back();
        auto& hist = nodes_[id].histogram;
        for (std::size_t s : samples) ++hist[y_[s]];

        const int classes_present = std::count_if(hist.begin(), hist.end(), [](auto c) { return c > 0; });
        if (classes_present <= 1 || (params_.max_depth > 0 && depth >= params_.max_depth) ||
            samples.size() < params_.min_samples_split) {
            return id;
        }

        const Split best = find_split(samples, hist);
        if (best.feature < 0) return id;

        std::vector<std::size_t> left;
        std::vector<std::size_t> right;
        for (std::size_t s : samples) {
            (x_(s, best.feature) <= best.threshold ? left : right).push_back(s);
        }
        samples.clear();
        samples.shrink_to_fit();

        nodes_[id].feature = best.feature;
        nodes_[id].threshold = best.threshold;
        const int l = grow(std::move(left), depth + 1);
        const int r = grow(std::move(right), depth + 1);
        nodes_[id].left = l;
        nodes_[id].right = r;
        return id;
    }

    bool is_constant(const std::vector<std::size_t>& samples, std::size_t f) const {
        const double first = x_(samples.front(), f);
        return std::all_of(samples.begin(), samples.end(), [&](std::size_t s) { return x_(s, f) == first; });
    }

    std::vector<std::size_t> candidate_features(const std::vector<std::size_t>& samples) {
        const std::size_t d = x_.cols();
        const std::size_t want = params_.feature_subsample == 0 ? d : std::min(params_.feature_subsample, d);
        std::vector<std::size_t> picked;
        // Partial Fisher-Yates; constant features are skipped without counting.
        for (std::size_t i = 0; i < d && picked.size() < want; ++i) {
            if (want < d) std::swap(order_[i], order_[i + rng_.below(d - i)]);
            const std::size_t f = want < d ? order_[i] : i;
            if (!is_constant(samples, f)) picked.push_back(f);
        }
        std::sort(picked.begin(), picked.end());
        return picked;
    }

    Split find_split(const std::vector<std::size_t>& samples, const std::array<std::uint32_t, kClasses>& hist) {
        Split best;
        const double n = static_cast<double>(samples.size());
        for (std::size_t f : candidate_features(samples)) {
            values_.clear();
            for (std::size_t s : samples) values_.emplace_back(x_(s, f), y_[s]);
            std::sort(values_.begin(), values_.end());

            std::array<double, kClasses> left{};
            for (std::size_t i = 0; i + 1 < values_.size(); ++i) {
                left[values_[i].second] += 1.0;
                const double lo = values_[i].first;
                const double hi = values_[i + 1].first;
                if (lo == hi) continue;
                const double nl = static_cast<double>(i + 1);
                const double nr = n - nl;
                double sl = 0.0;
                double sr = 0.0;
                for (int c = 0; c < kClasses; ++c) {
                    const double rc = static_cast<double>(hist[c]) - left[c];
                    sl += left[c] * left[c];
                    sr += rc * rc;
                }
                const double score = sl / nl + sr / nr;
                if (score > best.score + 1e-12 * std::abs(best.score)) {
                    double mid = lo + (hi - lo) / 2.0;
                    if (!(mid < hi)) mid = lo;
                    best = {static_cast<int>(f), mid, score};
                }
            }
        }
        return best;
    }

    const Matrix& x_;
    std::span<const int> y_;
    const TreeParams& params_;
    Rng& rng_;
    std::vector<std::size_t> order_;
    std::vector<std::pair<double, int>> values_;
    std::vector<TreeNode> nodes_;
};

}  // namespace

DecisionTree train_tree(const Matrix& features, std::span<const int> labels, std::span<const std::size_t> samples,
                        const TreeParams& params, Rng& rng) {
    if (samples.empty()) throw Error(ErrorKind::EmptyTrainingSet, "a tree needs at least one sample");
    if (features.rows() != labels.size()) throw Error(ErrorKind::LengthMismatch, "rows and labels differ");
    for (std::size_t s : samples) {
        if (labels[s] < 0 || labels[s] >= kClasses) throw Error(ErrorKind::InvalidLabel, "label out of range");
    }
    TreeBuilder builder(features, labels, params, rng);
    return DecisionTree(builder.build({samples.begin(), samples.end()}));
}

}  // namespace passgauge::models
