#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "passgauge/error.hpp"
#include "passgauge/featurex.hpp"
#include "test_support.hpp"

using namespace passgauge;
using namespace passgauge::featurex;
using testing::u32;

TEST_CASE("char_class_counts") {
    const auto c = char_class_counts(U"P@ssw0rd!");
    CHECK(c.lower == 5);
    CHECK(c.upper == 1);
    CHECK(c.digit == 1);
    CHECK(c.special == 2);
    CHECK(c.length == 9);
    CHECK(char_class_counts(U"") == CharClassCounts{});

    const auto p = char_class_counts(U"Password123");
    CHECK(p.lower == 7);
    CHECK(p.upper == 1);
    CHECK(p.digit == 3);
    CHECK(p.special == 0);

    SUBCASE("space and backtick are special, other codepoints are not") {
        const auto s = char_class_counts(u32("a `\xC3\xA9\t"));
        CHECK(s.special == 2);
        CHECK(s.other_non_ascii == 2);
        CHECK(s.lower == 1);
    }
}

TEST_CASE("variety_score") {
    CHECK(variety_score(char_class_counts(U"password")) == 1);
    CHECK(variety_score(char_class_counts(U"P@ssw0rd!")) == 4);
    CHECK(variety_score(char_class_counts(U"")) == 0);
    CHECK(variety_score(char_class_counts(u32("\xC3\xA9\xC3\xA9"))) == 0);
}

TEST_CASE("leet_normalize") {
    CHECK(leet_normalize(U"P@55w0rd") == U"password");
    CHECK(leet_normalize(U"1!") == U"ll");
    CHECK(leet_normalize(U"xyz") == U"xyz");
    CHECK(leet_normalize(U"$h4773r") == U"shatter");
}

TEST_CASE("shannon_entropy") {
    CHECK(shannon_entropy(U"aaaa") == 0.0);
    CHECK(shannon_entropy(U"ab") == doctest::Approx(1.0));
    CHECK(shannon_entropy(U"") == 0.0);
    // s occurs 2/8, six others 1/8: -(0.25*log2 0.25 + 6*0.125*log2 0.125)
    const double expected = -(0.25 * std::log2(0.25) + 6 * 0.125 * std::log2(0.125));
    CHECK(expected == doctest::Approx(2.75));
    CHECK(shannon_entropy(leet_normalize(U"p@ssw0rd")) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("dynamic_charset_size") {
    CHECK(dynamic_charset_size(char_class_counts(U"Password123")) == 62);
    CHECK(dynamic_charset_size(char_class_counts(U"P@ssw0rd!")) == 94);
    CHECK(dynamic_charset_size(char_class_counts(U"")) == 0);
}

TEST_CASE("detect_sequential") {
    CHECK(detect_sequential(U"qwerty"));
    CHECK(detect_sequential(U"x789z"));
    CHECK_FALSE(detect_sequential(U"h4q9k"));
    CHECK(detect_sequential(U"ABC"));
    CHECK(detect_sequential(U"zyx"));
    CHECK(detect_sequential(U"lkj"));  // asdfghjkl backwards
    CHECK(detect_sequential(U"0987"));
    CHECK_FALSE(detect_sequential(U"ab"));
    CHECK_FALSE(detect_sequential(U"90a"));  // 9->0 only adjacent on the keyboard, and needs 3
    CHECK(detect_sequential(U"890"));        // keyboard row, not a numeric run
    CHECK_FALSE(detect_sequential(U"yza"));  // no wraparound
    CHECK_FALSE(detect_sequential(U"pas"));  // rows do not connect
}

TEST_CASE("detect_repeats") {
    CHECK(detect_repeats(U"1111"));
    CHECK(detect_repeats(U"123123"));
    CHECK_FALSE(detect_repeats(U"abcdefg"));
    CHECK(detect_repeats(U"xababy"));
    CHECK_FALSE(detect_repeats(U"aab"));
    CHECK(detect_repeats(U"aaa"));
    CHECK_FALSE(detect_repeats(U""));
}

TEST_CASE("dictionary parsing and matching") {
    const auto dict = BreachedDictionary::parse("# comment\npassword\n123456\nPassword\n\nabc\n  qwerty  \n");
    CHECK(dict.terms() == std::vector<std::string>{"password", "123456", "abc", "qwerty"});

    SUBCASE("bundled list") {
        const auto& bundled = BreachedDictionary::bundled();
        CHECK(bundled.size() == 197);
        CHECK(dictionary_match(U"123456", bundled).hit);
        const auto m = dictionary_match(U"p@ssw0rd99", bundled);
        REQUIRE(m.hit);
        CHECK(std::find(m.terms.begin(), m.terms.end(), "password") != m.terms.end());
        CHECK_FALSE(dictionary_match(U"zq8#Kv!m", bundled).hit);
    }
    SUBCASE("short terms match only by equality") {
        CHECK(dictionary_match(U"abc", dict).hit);
        CHECK_FALSE(dictionary_match(U"xabcx", dict).hit);
    }
    SUBCASE("terms are sorted longest first") {
        const auto m = dictionary_match(U"Password123456qwerty", dict);
        CHECK(m.terms == std::vector<std::string>{"password", "123456", "qwerty"});
    }
    SUBCASE("empty dictionary is a misconfiguration") {
        CHECK_THROWS_AS(dictionary_match(U"x", BreachedDictionary{}), Error);
        try {
            dictionary_match(U"x", BreachedDictionary{});
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::EmptyDictionary);
        }
    }
}

TEST_CASE("extract_features composes the per-feature operations") {
    const auto& dict = BreachedDictionary::bundled();
    const auto fv = extract_features(U"P@ssw0rd!", dict);
    CHECK(fv.counts.length == 9);
    CHECK(fv.variety == 4);
    CHECK(fv.charset_size == 94);
    CHECK(fv.normalized_entropy == doctest::Approx(shannon_entropy(U"passwordl")));
    CHECK(fv.patterns.dictionary_hit);

    const auto empty = extract_features(U"", dict).numeric();
    CHECK(std::all_of(empty.begin(), empty.end(), [](double v) { return v == 0.0; }));

    const auto a = extract_features(U"aaaa", dict);
    CHECK(a.counts.length == 4);
    CHECK(a.variety == 1);
    CHECK(a.charset_size == 26);
    CHECK(a.normalized_entropy == 0.0);
    CHECK(a.patterns.has_repeat);
}

TEST_CASE("feature invariants over fuzzed strings") {
    std::mt19937_64 rng(2024);
    const auto& dict = BreachedDictionary::bundled();
    for (int iter = 0; iter < 2000; ++iter) {
        const auto s = testing::random_password(rng);
        const auto counts = char_class_counts(s);
        CHECK(counts.lower + counts.upper + counts.digit + counts.special + counts.other_non_ascii == counts.length);

        const double h = shannon_entropy(s);
        CHECK(h == doctest::Approx(oracle::entropy_by_frequency_table(s)).epsilon(1e-12));
        if (!s.empty()) CHECK(h <= std::log2(double(s.size())) + 1e-12);

        auto shuffled = s;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        CHECK(shannon_entropy(shuffled) == doctest::Approx(h).epsilon(1e-12));

        const auto norm = leet_normalize(s);
        CHECK(leet_normalize(norm) == norm);
        CHECK(norm.size() == s.size());

        const int nonzero_pools = (counts.lower > 0) + (counts.upper > 0) + (counts.digit > 0) + (counts.special > 0);
        CHECK(variety_score(counts) == nonzero_pools);

        const auto x = testing::random_password(rng, 4);
        const auto y = testing::random_password(rng, 4);
        const auto wrapped = x + s + y;
        if (detect_sequential(s)) CHECK(detect_sequential(wrapped));
        if (detect_repeats(s)) CHECK(detect_repeats(wrapped));
        if (dictionary_match(s, dict).hit) CHECK(dictionary_match(wrapped, dict).hit);

        const auto a = extract_features(s, dict);
        const auto b = extract_features(s, dict);
        CHECK(a.numeric() == b.numeric());
    }
}

TEST_CASE("adding a new class grows the charset by its pool") {
    const auto base = char_class_counts(U"abc");
    CHECK(dynamic_charset_size(char_class_counts(U"abcD")) - dynamic_charset_size(base) == kUpperPool);
    CHECK(dynamic_charset_size(char_class_counts(U"abc1")) - dynamic_charset_size(base) == kDigitPool);
    CHECK(dynamic_charset_size(char_class_counts(U"abc!")) - dynamic_charset_size(base) == kSpecialPool);
    CHECK(dynamic_charset_size(char_class_counts(U"abcd")) == dynamic_charset_size(base));
}

TEST_CASE("leet normalization never raises entropy on the motivating example") {
    CHECK(shannon_entropy(leet_normalize(U"p@ssw0rd")) <= shannon_entropy(ascii_lower(U"p@ssw0rd")) + 1e-12);
}

TEST_CASE("entropy oracle over a 10-symbol alphabet") {
    std::mt19937_64 rng(10);
    const std::u32string alphabet = U"abcdef0123";
    for (int iter = 0; iter < 2000; ++iter) {
        std::u32string s(1 + rng() % 12, U'a');
        for (auto& c : s) c = alphabet[rng() % alphabet.size()];
        const double h = shannon_entropy(s);
        CHECK(std::abs(h - oracle::entropy_by_frequency_table(s)) <= 1e-9);
        CHECK(h >= 0.0);
        const bool uniform = std::all_of(s.begin(), s.end(), [&](char32_t c) { return c == s[0]; });
        CHECK((h == 0.0) == uniform);
    }
}
