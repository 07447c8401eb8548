#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "passgauge/text.hpp"

namespace passgauge::ngrams {

inline constexpr std::size_t kDefaultMaxFeatures = 500;

struct SparseVector {
    std::vector<std::pair<std::size_t, double>> entries;  // column-sorted, weights != 0
    std::size_t dimension = 0;

    double norm() const;
};

/// Character 1-2-gram vocabulary with smoothed idf weights. Terms are stored
/// UTF-8 encoded; columns are assigned in lexicographic term order.
class NgramVocabulary {
public:
    NgramVocabulary() = default;

    struct Term {
        std::string text;
        double idf = 0.0;
    };
    NgramVocabulary(std::vector<Term> terms, std::size_t max_features, std::size_t corpus_size);

    std::size_t size() const { return terms_.size(); }
    std::size_t max_features() const { return max_features_; }
    std::size_t corpus_size() const { return corpus_size_; }
    const std::vector<Term>& terms() const { return terms_; }

    // Column for an n-gram, or -1 when out of vocabulary.
    long column(const std::string& term) const;

private:
    std::vector<Term> terms_;
    std::unordered_map<std::string, std::size_t> index_;
    std::size_t max_features_ = kDefaultMaxFeatures;
    std::size_t corpus_size_ = 0;
};

// All 1-grams and 2-grams of the ASCII-lowercased password, in order of
// occurrence (duplicates kept).
std::vector<std::string> char_ngrams(std::u32string_view pw);

// idf(t) = ln((1 + n) / (1 + df(t))) + 1; keeps the max_features terms with
// the highest total count, ties broken lexicographically.
NgramVocabulary fit_vocabulary(const std::vector<PasswordText>& corpus,
                               std::size_t max_features = kDefaultMaxFeatures);

// tf * idf, L2-normalized; the zero vector when nothing is in vocabulary.
SparseVector transform(std::u32string_view pw, const NgramVocabulary& vocab);

}  // namespace passgauge::ngrams
