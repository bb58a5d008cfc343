#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "corpus_lens/sentiment.hpp"
#include "test_util.hpp"

using namespace corpus_lens;

namespace {

std::vector<SentenceScore> scores_of(const std::vector<double>& values) {
    std::vector<SentenceScore> out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        SentenceScore s;
        s.chapter_index = 1;
        s.ordinal = i;
        s.matched_count = 1;
        s.score = values[i];
        s.label = values[i] > 0 ? SentimentLabel::Positive
                 : values[i] < 0 ? SentimentLabel::Negative
                                 : SentimentLabel::Neutral;
        out.push_back(s);
    }
    return out;
}

}  // namespace

TEST_CASE("polarity lexicon parses PN-table records") {
    const auto lex = PolarityLexicon::parse("優れる:すぐれる:動詞:1\n劣る:おとる:動詞:-0.9\n");
    CHECK(lex.size() == 2);
    const auto v = lex.lookup("優れる", "動詞");
    REQUIRE(v);
    CHECK(*v == 1.0);
    CHECK(lex.skipped_records() == 0);
}

TEST_CASE("polarity lexicon skips malformed records with a warning count") {
    const auto lex = PolarityLexicon::parse(
        "良い:よい:形容詞:0.9\n"
        "悪い:わるい:形容詞:2.0\n"    // out of range
        "怪しい:あやしい:形容詞:x\n"  // non-numeric
        "こわれた行\n");              // wrong field count
    CHECK(lex.size() == 1);
    CHECK(lex.skipped_records() == 3);
    CHECK_FALSE(lex.lookup("悪い", "形容詞"));
}

TEST_CASE("polarity lexicon rejects empty input") {
    CHECK_THROWS_AS(PolarityLexicon::parse(""), EmptyLexicon);
    CHECK_THROWS_AS(PolarityLexicon::parse("broken\n"), EmptyLexicon);
}

TEST_CASE("score_sentence averages matched values") {
    PolarityLexicon lex;
    lex.insert("美しい", "形容詞", 0.97);
    lex.insert("雨", "名詞", -0.2);
    lex.insert("道", "名詞", 0.0);

    SECTION("single positive word") {
        const std::vector<Token> toks = {Token{"美しい", "形容詞", "美しい"}};
        const auto s = score_sentence(toks, lex);
        REQUIRE(s.score);
        CHECK(*s.score == 0.97);
        CHECK(s.label == SentimentLabel::Positive);
        CHECK(s.matched_count == 1);
    }
    SECTION("no matches -> unscored") {
        const std::vector<Token> toks = {Token{"謎", "名詞", "謎"}};
        const auto s = score_sentence(toks, lex);
        CHECK_FALSE(s.score);
        CHECK(s.label == SentimentLabel::Unscored);
    }
    SECTION("matched zeros participate in the mean") {
        PolarityLexicon mixed;
        mixed.insert("a", "名詞", 0.8);
        mixed.insert("b", "名詞", -0.2);
        mixed.insert("c", "名詞", 0.0);
        const std::vector<Token> toks = {Token{"a", "名詞", "a"}, Token{"b", "名詞", "b"},
                                         Token{"c", "名詞", "c"}};
        const auto t = score_sentence(toks, mixed);
        REQUIRE(t.score);
        CHECK(*t.score == (0.8 + -0.2 + 0.0) / 3.0); // exact: same arithmetic order
        CHECK(t.label == SentimentLabel::Positive);
        CHECK(t.matched_count == 3);
    }
    SECTION("zero mean -> neutral") {
        PolarityLexicon z;
        z.insert("x", "名詞", 0.5);
        z.insert("y", "名詞", -0.5);
        const std::vector<Token> toks = {Token{"x", "名詞", "x"}, Token{"y", "名詞", "y"}};
        const auto s = score_sentence(toks, z);
        REQUIRE(s.score);
        CHECK(*s.score == 0.0);
        CHECK(s.label == SentimentLabel::Neutral);
    }
    SECTION("surface fallback catches tokens with differing pos") {
        const std::vector<Token> toks = {Token{"雨", "未知語", "雨"}};
        const auto s = score_sentence(toks, lex);
        REQUIRE(s.score);
        CHECK(*s.score == -0.2);
    }
}

TEST_CASE("histogram bins scores at 0.025 width") {
    const auto h = histogram(scores_of({-1.0, 0.0, 0.99}));
    CHECK(h.counts.size() == 80);
    CHECK(h.counts[0] == 1);
    CHECK(h.counts[40] == 1);
    CHECK(h.counts[79] == 1);
    CHECK(h.total() == 3);

    SECTION("+1 is clamped into the final closed bin") {
        const auto h1 = histogram(scores_of({1.0}));
        CHECK(h1.counts[79] == 1);
    }
    SECTION("unscored sentences are excluded") {
        std::vector<SentenceScore> scores(3); // all unscored
        const auto h0 = histogram(scores);
        CHECK(h0.total() == 0);
        CHECK(std::all_of(h0.counts.begin(), h0.counts.end(), [](std::size_t c) { return c == 0; }));
    }
    SECTION("permutation invariance") {
        std::vector<double> values = {-0.3, 0.2, 0.8, -0.9, 0.0, 0.41};
        const auto a = histogram(scores_of(values));
        std::mt19937 rng(3);
        std::shuffle(values.begin(), values.end(), rng);
        const auto b = histogram(scores_of(values));
        CHECK(a.counts == b.counts);
    }
    SECTION("total equals scored count") {
        std::vector<SentenceScore> mix = scores_of({0.1, -0.4});
        mix.push_back(SentenceScore{}); // unscored
        const auto h2 = histogram(mix);
        CHECK(h2.total() == 2);
    }
}

TEST_CASE("chapter_series computes per-chapter means") {
    SECTION("single chapter") {
        auto scores = scores_of({-0.5});
        const std::vector<int> chapters = {1};
        const auto series = chapter_series(scores, chapters);
        REQUIRE(series.rows.size() == 1);
        CHECK(series.rows[0].chapter_index == 1);
        CHECK(series.rows[0].mean_score == -0.5);
        CHECK(series.rows[0].scored_count == 1);
    }
    SECTION("two chapters with hand means") {
        std::vector<SentenceScore> scores = scores_of({-0.4, -0.2});
        SentenceScore s3;
        s3.chapter_index = 2;
        s3.matched_count = 1;
        s3.score = 0.3;
        s3.label = SentimentLabel::Positive;
        scores.push_back(s3);
        const std::vector<int> chapters = {1, 2};
        const auto series = chapter_series(scores, chapters);
        REQUIRE(series.rows.size() == 2);
        CHECK(series.rows[0].mean_score == Catch::Approx(-0.3).margin(1e-15));
        CHECK(series.rows[0].scored_count == 2);
        CHECK(series.rows[1].mean_score == Catch::Approx(0.3).margin(1e-15));
        CHECK(series.rows[1].scored_count == 1);
    }
    SECTION("chapter without scored sentences is flagged by count 0") {
        std::vector<SentenceScore> scores;
        SentenceScore unscored;
        unscored.chapter_index = 1;
        scores.push_back(unscored);
        const std::vector<int> chapters = {1, 2};
        const auto series = chapter_series(scores, chapters);
        REQUIRE(series.rows.size() == 2);
        CHECK(series.rows[0].scored_count == 0);
        CHECK(series.rows[0].mean_score == 0.0);
        CHECK(series.rows[1].scored_count == 0);
    }
}

TEST_CASE("negativity fraction counts strictly negative scores") {
    CHECK(negativity_fraction(scores_of({-0.1, -0.5})) == 1.0);
    CHECK(negativity_fraction(scores_of({-0.1, 0.2, -0.3, 0.0})) == 0.5);
    std::vector<SentenceScore> none(2); // unscored only
    CHECK_THROWS_AS(negativity_fraction(none), NoScoredSentences);
}

TEST_CASE("fraction identities sum to one") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> value(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> values;
        const auto n = 1 + static_cast<std::size_t>(rng() % 40);
        for (std::size_t i = 0; i < n; ++i) {
            double v = value(rng);
            if (rng() % 5 == 0) v = 0.0;
            values.push_back(v);
        }
        const auto scores = scores_of(values);
        const double total =
            negativity_fraction(scores) + positivity_fraction(scores) + neutrality_fraction(scores);
        CHECK(total == Catch::Approx(1.0).margin(1e-12));
        for (const auto& s : scores) {
            REQUIRE(s.score);
            CHECK(*s.score >= -1.0);
            CHECK(*s.score <= 1.0);
        }
    }
}

TEST_CASE("scoring is independent of sentence order") {
    PolarityLexicon lex;
    lex.insert("w0", "名詞", -0.8);
    lex.insert("w1", "名詞", 0.6);
    lex.insert("w2", "名詞", 0.1);

    TokenizedCorpus tokens;
    TokenizedChapter ch;
    ch.index = 1;
    std::mt19937 rng(17);
    for (int i = 0; i < 20; ++i) {
        std::vector<Token> sent;
        const auto len = 1 + rng() % 4;
        for (std::size_t k = 0; k < len; ++k) {
            const auto w = "w" + std::to_string(rng() % 4); // w3 never matches
            sent.push_back(Token{w, "名詞", w});
        }
        ch.sentences.push_back(std::move(sent));
    }
    tokens.chapters.push_back(ch);

    auto scores = score_corpus(tokens, lex);
    const auto series = chapter_series(tokens, scores);

    // recompute the mean from raw scores: must agree exactly
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& s : scores)
        if (s.score) {
            sum += *s.score;
            ++n;
        }
    if (n > 0) CHECK(series.rows[0].mean_score == Catch::Approx(sum / static_cast<double>(n)).margin(1e-15));

    const auto hist_before = histogram(scores);
    std::shuffle(scores.begin(), scores.end(), rng);
    const auto hist_after = histogram(scores);
    CHECK(hist_before.counts == hist_after.counts);
}

TEST_CASE("word polarity counts as secondary statistic") {
    PolarityLexicon lex;
    lex.insert("a", "名詞", -0.5);
    lex.insert("b", "名詞", 0.5);
    TokenizedCorpus tokens;
    TokenizedChapter ch;
    ch.index = 1;
    ch.sentences.push_back({Token{"a", "名詞", "a"}, Token{"a", "名詞", "a"}, Token{"b", "名詞", "b"},
                            Token{"c", "名詞", "c"}});
    tokens.chapters.push_back(ch);
    const auto counts = word_polarity_counts(tokens, lex);
    CHECK(counts.matched == 3);
    CHECK(counts.negative == 2);
    CHECK(counts.positive == 1);
    CHECK(counts.negativity() == Catch::Approx(2.0 / 3.0).margin(1e-15));
}
