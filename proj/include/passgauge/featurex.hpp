#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "passgauge/text.hpp"

namespace passgauge::featurex {

struct CharClassCounts {
    int lower = 0;
    int upper = 0;
    int digit = 0;
    int special = 0;
    int other_non_ascii = 0;
    int length = 0;

    bool operator==(const CharClassCounts&) const = default;
};

inline constexpr int kLowerPool = 26;
inline constexpr int kUpperPool = 26;
inline constexpr int kDigitPool = 10;
inline constexpr int kSpecialPool = 32;

// Special characters are the printable ASCII punctuation plus space.
bool is_special(char32_t c);

CharClassCounts char_class_counts(std::u32string_view pw);

// Number of {lower, upper, digit, special} classes with at least one member.
int variety_score(const CharClassCounts& counts);

// Lowercases ASCII letters, then maps @4->a $5->s 1!->l 0->o 3->e 7->t.
PasswordText leet_normalize(std::u32string_view pw);

// Shannon entropy in bits over the codepoint distribution; 0 for "".
double shannon_entropy(std::u32string_view s);

int dynamic_charset_size(const CharClassCounts& counts);

// Runs of >= 3 ascending/descending letters or digits, or a >= 3 substring of
// a QWERTY row read either way. Input is lowercased, not leet-normalized.
bool detect_sequential(std::u32string_view pw);

// Three identical characters in a row, or a block of >= 2 characters
// immediately repeated ("123123", "abab").
bool detect_repeats(std::u32string_view pw);

/// Immutable list of breached passwords. Terms are kept in their original
/// lowercase spelling; matching is done on their leet-normalized form so that
/// "123456" still matches after normalization turns it into "l2e4s6".
class BreachedDictionary {
public:
    BreachedDictionary() = default;
    explicit BreachedDictionary(std::vector<std::string> terms);

    // One term per line, '#' comments and blank lines skipped, deduplicated.
    static BreachedDictionary parse(std::string_view text);
    static BreachedDictionary load(const std::filesystem::path& path);
    // The 197-entry list bundled with the library.
    static const BreachedDictionary& bundled();

    const std::vector<std::string>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }

    struct Entry {
        std::string term;
        PasswordText normalized;
    };
    const std::vector<Entry>& entries() const { return entries_; }

private:
    std::vector<std::string> terms_;
    std::vector<Entry> entries_;
};

struct DictionaryMatch {
    bool hit = false;
    std::vector<std::string> terms;  // longest first, then lexicographic
};

// Substring match for terms of length >= 4, equality for shorter ones.
// Throws Error(EmptyDictionary) on an empty dictionary.
DictionaryMatch dictionary_match(std::u32string_view pw, const BreachedDictionary& dict);

struct PatternFlags {
    bool has_sequence = false;
    bool has_repeat = false;
    bool dictionary_hit = false;
    std::vector<std::string> dictionary_terms;
};

// Order of the hand-engineered columns in every feature matrix.
enum NumericFeature : std::size_t {
    kLength,
    kLower,
    kUpper,
    kDigit,
    kSpecial,
    kVariety,
    kEntropy,
    kCharset,
    kSequence,
    kRepeat,
    kDictionary,
    kNumericFeatureCount,
};

inline constexpr std::array<std::string_view, kNumericFeatureCount> kNumericFeatureNames = {
    "length",         "n_lower",      "n_upper",      "n_digit",      "n_special",     "variety_score",
    "normalized_entropy", "charset_size", "has_sequence", "has_repeat", "dictionary_hit",
};

struct FeatureVector {
    CharClassCounts counts;
    int variety = 0;
    double normalized_entropy = 0.0;
    int charset_size = 0;
    PatternFlags patterns;

    std::array<double, kNumericFeatureCount> numeric() const;
};

FeatureVector extract_features(std::u32string_view pw, const BreachedDictionary& dict);

}  // namespace passgauge::featurex
