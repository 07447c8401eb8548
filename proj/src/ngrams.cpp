#include "passgauge/ngrams.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "passgauge/error.hpp"

namespace passgauge::ngrams {

double SparseVector::norm() const {
    double sq = 0.0;
    for (const auto& [col, w] : entries) sq += w * w;
    return std::sqrt(sq);
}

NgramVocabulary::NgramVocabulary(std::vector<Term> terms, std::size_t max_features,
                                 std::size_t corpus_size)
    : terms_(std::move(terms)), max_features_(max_features), corpus_size_(corpus_size) {
    for (std::size_t i = 0; i < terms_.size(); ++i) index_.emplace(terms_[i].text, i);
}

long NgramVocabulary::column(const std::string& term) const {
    const auto it = index_.find(term);
    return it == index_.end() ? -1 : static_cast<long>(it->second);
}

std::vector<std::string> char_ngrams(std::u32string_view pw) {
    const PasswordText s = ascii_lower(pw);
    std::vector<std::string> grams;
    grams.reserve(2 * s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        grams.push_back(encode_utf8(s.substr(i, 1)));
        if (i + 1 < s.size()) grams.push_back(encode_utf8(s.substr(i, 2)));
    }
    return grams;
}

NgramVocabulary fit_vocabulary(const std::vector<PasswordText>& corpus, std::size_t max_features) {
    if (corpus.empty()) throw Error(ErrorKind::EmptyCorpus, "cannot fit a vocabulary on zero documents");
    if (max_features == 0) throw Error(ErrorKind::InvalidArgument, "max_features must be >= 1");

    std::map<std::string, std::size_t> total;
    std::map<std::string, std::size_t> df;
    for (const auto& doc : corpus) {
        const auto grams = char_ngrams(doc);
        for (const auto& g : grams) ++total[g];
        for (const auto& g : std::set<std::string>(grams.begin(), grams.end())) ++df[g];
    }

    std::vector<std::pair<std::string, std::size_t>> ranked(total.begin(), total.end());
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    if (ranked.size() > max_features) ranked.resize(max_features);
    std::sort(ranked.begin(), ranked.end());

    const double n = static_cast<double>(corpus.size());
    std::vector<NgramVocabulary::Term> terms;
    terms.reserve(ranked.size());
    for (const auto& [text, count] : ranked) {
        const double idf = std::log((1.0 + n) / (1.0 + static_cast<double>(df[text]))) + 1.0;
        terms.push_back({text, idf});
    }
    return NgramVocabulary(std::move(terms), max_features, corpus.size());
}

SparseVector transform(std::u32string_view pw, const NgramVocabulary& vocab) {
    std::map<std::size_t, double> tf;
    for (const auto& g : char_ngrams(pw)) {
        const long col = vocab.column(g);
        if (col >= 0) tf[static_cast<std::size_t>(col)] += 1.0;
    }
    SparseVector out;
    out.dimension = vocab.size();
    double sq = 0.0;
    for (const auto& [col, count] : tf) {
        const double w = count * vocab.terms()[col].idf;
        out.entries.emplace_back(col, w);
        sq += w * w;
    }
    if (sq > 0.0) {
        const double inv = 1.0 / std::sqrt(sq);
        for (auto& e : out.entries) e.second *= inv;
    }
    return out;
}

}  // namespace passgauge::ngrams
