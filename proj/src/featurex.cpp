#include "passgauge/featurex.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "passgauge/error.hpp"
#include "passgauge_assets.hpp"

namespace passgauge::featurex {

namespace {

bool is_ascii_lower(char32_t c) { return c >= U'a' && c <= U'z'; }
bool is_ascii_upper(char32_t c) { return c >= U'A' && c <= U'Z'; }
bool is_ascii_digit(char32_t c) { return c >= U'0' && c <= U'9'; }

constexpr std::array<std::u32string_view, 4> kKeyboardRows = {
    U"qwertyuiop", U"asdfghjkl", U"zxcvbnm", U"1234567890"};

// Position of c in its keyboard row, or npos.
std::pair<std::size_t, std::size_t> keyboard_position(char32_t c) {
    for (std::size_t r = 0; r < kKeyboardRows.size(); ++r) {
        const auto pos = kKeyboardRows[r].find(c);
        if (pos != std::u32string_view::npos) return {r, pos};
    }
    return {std::u32string_view::npos, 0};
}

bool same_class_step(char32_t a, char32_t b, int step) {
    const bool letters = is_ascii_lower(a) && is_ascii_lower(b);
    const bool digits = is_ascii_digit(a) && is_ascii_digit(b);
    return (letters || digits) && static_cast<long>(b) - static_cast<long>(a) == step;
}

bool keyboard_step(char32_t a, char32_t b, int step) {
    const auto [ra, pa] = keyboard_position(a);
    const auto [rb, pb] = keyboard_position(b);
    if (ra == std::u32string_view::npos || ra != rb) return false;
    return static_cast<long>(pb) - static_cast<long>(pa) == step;
}

// Longest run where every adjacent pair satisfies pred(a, b).
template <typename Pred>
bool has_run_of_three(std::u32string_view s, Pred pred) {
    int run = 1;
    for (std::size_t i = 1; i < s.size(); ++i) {
        run = pred(s[i - 1], s[i]) ? run + 1 : 1;
        if (run >= 3) return true;
    }
    return false;
}

}  // namespace

bool is_special(char32_t c) {
    return c >= 0x20 && c <= 0x7E && !is_ascii_lower(c) && !is_ascii_upper(c) && !is_ascii_digit(c);
}

CharClassCounts char_class_counts(std::u32string_view pw) {
    CharClassCounts counts;
    for (char32_t c : pw) {
        if (is_ascii_lower(c)) {
            ++counts.lower;
        } else if (is_ascii_upper(c)) {
            ++counts.upper;
        } else if (is_ascii_digit(c)) {
            ++counts.digit;
        } else if (is_special(c)) {
            ++counts.special;
        } else {
            ++counts.other_non_ascii;
        }
    }
    counts.length = static_cast<int>(pw.size());
    return counts;
}

int variety_score(const CharClassCounts& counts) {
    return (counts.lower > 0) + (counts.upper > 0) + (counts.digit > 0) + (counts.special > 0);
}

PasswordText leet_normalize(std::u32string_view pw) {
    PasswordText out = ascii_lower(pw);
    for (char32_t& c : out) {
        switch (c) {
            case U'@':
            case U'4': c = U'a'; break;
            case U'$':
            case U'5': c = U's'; break;
            case U'1':
            case U'!': c = U'l'; break;
            case U'0': c = U'o'; break;
            case U'3': c = U'e'; break;
            case U'7': c = U't'; break;
            default: break;
        }
    }
    return out;
}

double shannon_entropy(std::u32string_view s) {
    if (s.empty()) return 0.0;
    std::map<char32_t, std::size_t> freq;
    for (char32_t c : s) ++freq[c];
    const double n = static_cast<double>(s.size());
    double h = 0.0;
    for (const auto& [symbol, count] : freq) {
        const double p = static_cast<double>(count) / n;
        h -= p * std::log2(p);
    }
    // A single symbol gives -1*log2(1) == -0.0.
    return h <= 0.0 ? 0.0 : h;
}

int dynamic_charset_size(const CharClassCounts& counts) {
    return (counts.lower > 0 ? kLowerPool : 0) + (counts.upper > 0 ? kUpperPool : 0) +
           (counts.digit > 0 ? kDigitPool : 0) + (counts.special > 0 ? kSpecialPool : 0);
}

bool detect_sequential(std::u32string_view pw) {
    const PasswordText s = ascii_lower(pw);
    for (int step : {1, -1}) {
        if (has_run_of_three(s, [step](char32_t a, char32_t b) { return same_class_step(a, b, step); }))
            return true;
        if (has_run_of_three(s, [step](char32_t a, char32_t b) { return keyboard_step(a, b, step); }))
            return true;
    }
    return false;
}

bool detect_repeats(std::u32string_view pw) {
    if (has_run_of_three(pw, [](char32_t a, char32_t b) { return a == b; })) return true;
    const std::size_t n = pw.size();
    for (std::size_t block = 2; 2 * block <= n; ++block) {
        for (std::size_t i = 0; i + 2 * block <= n; ++i) {
            if (pw.substr(i, block) == pw.substr(i + block, block)) return true;
        }
    }
    return false;
}

BreachedDictionary::BreachedDictionary(std::vector<std::string> terms) {
    std::set<std::string> seen;
    for (auto& term : terms) {
        if (term.empty() || !seen.insert(term).second) continue;
        terms_.push_back(term);
        entries_.push_back({term, leet_normalize(decode_utf8(term))});
    }
}

BreachedDictionary BreachedDictionary::parse(std::string_view text) {
    std::vector<std::string> terms;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
            line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        terms.push_back(encode_utf8(ascii_lower(decode_utf8(line.substr(first)))));
    }
    return BreachedDictionary(std::move(terms));
}

BreachedDictionary BreachedDictionary::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::FileNotFound, "cannot open dictionary " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

const BreachedDictionary& BreachedDictionary::bundled() {
    static const BreachedDictionary dict = parse(assets::kTopBreached);
    return dict;
}

DictionaryMatch dictionary_match(std::u32string_view pw, const BreachedDictionary& dict) {
    if (dict.empty()) throw Error(ErrorKind::EmptyDictionary, "dictionary has no terms");
    const PasswordText normalized = leet_normalize(pw);
    DictionaryMatch match;
    for (const auto& entry : dict.entries()) {
        const bool found = entry.normalized.size() >= 4
                               ? normalized.find(entry.normalized) != PasswordText::npos
                               : normalized == entry.normalized;
        if (found) match.terms.push_back(entry.term);
    }
    std::sort(match.terms.begin(), match.terms.end(), [](const std::string& a, const std::string& b) {
        const auto la = decode_utf8(a).size();
        const auto lb = decode_utf8(b).size();
        return la != lb ? la > lb : a < b;
    });
    match.hit = !match.terms.empty();
    return match;
}

std::array<double, kNumericFeatureCount> FeatureVector::numeric() const {
    std::array<double, kNumericFeatureCount> v{};
    v[kLength] = counts.length;
    v[kLower] = counts.lower;
    v[kUpper] = counts.upper;
    v[kDigit] = counts.digit;
    v[kSpecial] = counts.special;
    v[kVariety] = variety;
    v[kEntropy] = normalized_entropy;
    v[kCharset] = charset_size;
    v[kSequence] = patterns.has_sequence ? 1.0 : 0.0;
    v[kRepeat] = patterns.has_repeat ? 1.0 : 0.0;
    v[kDictionary] = patterns.dictionary_hit ? 1.0 : 0.0;
    return v;
}

FeatureVector extract_features(std::u32string_view pw, const BreachedDictionary& dict) {
    FeatureVector fv;
    fv.counts = char_class_counts(pw);
    fv.variety = variety_score(fv.counts);
    fv.charset_size = dynamic_charset_size(fv.counts);
    fv.normalized_entropy = shannon_entropy(leet_normalize(pw));
    fv.patterns.has_sequence = detect_sequential(pw);
    fv.patterns.has_repeat = detect_repeats(ascii_lower(pw));
    auto match = dictionary_match(pw, dict);
    fv.patterns.dictionary_hit = match.hit;
    fv.patterns.dictionary_terms = std::move(match.terms);
    return fv;
}

}  // namespace passgauge::featurex
