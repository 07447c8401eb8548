#pragma once

// Deliberately naive reference implementations used only by the tests.
// They share no code with the library paths they check.

#include <cstddef>
#include <string>
#include <vector>

namespace oracle {

double entropy_by_frequency_table(const std::u32string& s);

struct NaiveTfidf {
    std::vector<std::string> terms;  // sorted
    std::vector<double> idf;
};
// ASCII-only corpora: lowercases, counts 1/2-grams with nested loops.
NaiveTfidf naive_fit(const std::vector<std::string>& corpus, std::size_t max_features);
std::vector<double> naive_transform(const std::string& pw, const NaiveTfidf& model);

struct BruteSplit {
    int feature = -1;
    double threshold = 0.0;
    double weighted_child_gini = 0.0;
};
// Tries every feature and every midpoint; keeps the first strict minimum
// scanning features then thresholds in ascending order.
BruteSplit brute_force_best_split(const std::vector<std::vector<double>>& rows, const std::vector<int>& labels);

double textbook_anova_f(const std::vector<double>& x, const std::vector<int>& labels);

}  // namespace oracle
