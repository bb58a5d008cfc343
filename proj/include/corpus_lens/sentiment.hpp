#ifndef CORPUS_LENS_SENTIMENT_HPP
#define CORPUS_LENS_SENTIMENT_HPP

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "corpus_lens/errors.hpp"
#include "corpus_lens/tokenize.hpp"

namespace corpus_lens {

/// Polarity dictionary: (lemma, POS) -> score in [-1, +1], with a plain
/// surface fallback for tokens whose (lemma, POS) pair is not listed.
class PolarityLexicon {
public:
    void insert(const std::string& lemma, const std::string& pos, double score) {
        if (score < -1.0 || score > 1.0) throw InvalidArgument("polarity score out of [-1, 1]");
        entries_.emplace(key(lemma, pos), score);           // keep-first on duplicates
        surface_fallback_.emplace(lemma, score);
    }

    std::optional<double> lookup(std::string_view lemma, std::string_view pos) const {
        const auto it = entries_.find(key(lemma, pos));
        if (it == entries_.end()) return std::nullopt;
        return it->second;
    }

    std::optional<double> lookup_surface(std::string_view surface) const {
        const auto it = surface_fallback_.find(surface);
        if (it == surface_fallback_.end()) return std::nullopt;
        return it->second;
    }

    /// (lemma, pos) first, then surface fallback.
    std::optional<double> match(const Token& tok) const {
        if (const auto v = lookup(tok.lemma, tok.pos)) return v;
        return lookup_surface(tok.surface);
    }

    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    std::size_t skipped_records() const noexcept { return skipped_; }

    /// PN-table layout: `surface:reading:POS:score`, one record per line.
    /// Records with a malformed or out-of-range score are skipped and counted.
    static PolarityLexicon parse(std::string_view text) {
        if (!utf8::validate(text)) throw EncodingError("polarity lexicon is not valid UTF-8");
        PolarityLexicon lex;
        for (const auto& line : detail::split_lines(text)) {
            if (line.empty()) continue;
            const auto fields = detail::split_fields(line, ':');
            if (fields.size() != 4 || fields[0].empty()) {
                ++lex.skipped_;
                continue;
            }
            const auto score = parse_score(fields[3]);
            if (!score) {
                ++lex.skipped_;
                continue;
            }
            lex.entries_.emplace(key(fields[0], fields[2]), *score);
            lex.surface_fallback_.emplace(fields[0], *score);
        }
        if (lex.entries_.empty()) throw EmptyLexicon("polarity lexicon has no valid records");
        return lex;
    }

    static PolarityLexicon load(const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError("cannot open polarity lexicon: " + path.string());
        std::stringstream buf;
        buf << in.rdbuf();
        return parse(buf.str());
    }

private:
    static std::string key(std::string_view lemma, std::string_view pos) {
        std::string k(lemma);
        k.push_back('\x1f');
        k.append(pos);
        return k;
    }

    static std::optional<double> parse_score(const std::string& s) {
        if (s.empty()) return std::nullopt;
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (end != s.c_str() + s.size()) return std::nullopt;
        if (!std::isfinite(v) || v < -1.0 || v > 1.0) return std::nullopt;
        return v;
    }

    std::unordered_map<std::string, double, detail::StringHash, std::equal_to<>> entries_;
    std::unordered_map<std::string, double, detail::StringHash, std::equal_to<>> surface_fallback_;
    std::size_t skipped_ = 0;
};

enum class SentimentLabel { Positive, Negative, Neutral, Unscored };

inline std::string_view to_string(SentimentLabel label) {
    switch (label) {
        case SentimentLabel::Positive: return "positive";
        case SentimentLabel::Negative: return "negative";
        case SentimentLabel::Neutral: return "neutral";
        case SentimentLabel::Unscored: return "unscored";
    }
    return "unscored";
}

struct SentenceScore {
    int chapter_index = 0;
    std::size_t ordinal = 0;
    std::size_t matched_count = 0;
    std::optional<double> score;  // present iff matched_count >= 1
    SentimentLabel label = SentimentLabel::Unscored;
};

/// Mean of matched token values (zeros included). No matches -> Unscored.
/// The label follows the sign of the mean; exactly zero is Neutral.
inline SentenceScore score_sentence(std::span<const Token> tokens, const PolarityLexicon& lexicon,
                                    int chapter_index = 0, std::size_t ordinal = 0) {
    SentenceScore s;
    s.chapter_index = chapter_index;
    s.ordinal = ordinal;
    double sum = 0.0;
    for (const auto& tok : tokens) {
        if (const auto v = lexicon.match(tok)) {
            sum += *v;
            ++s.matched_count;
        }
    }
    if (s.matched_count == 0) return s;
    const double mean = sum / static_cast<double>(s.matched_count);
    s.score = mean;
    s.label = mean > 0.0   ? SentimentLabel::Positive
              : mean < 0.0 ? SentimentLabel::Negative
                           : SentimentLabel::Neutral;
    return s;
}

inline std::vector<SentenceScore> score_corpus(const TokenizedCorpus& tokens, const PolarityLexicon& lexicon) {
    std::vector<SentenceScore> scores;
    scores.reserve(tokens.sentence_count());
    for (const auto& ch : tokens.chapters)
        for (std::size_t i = 0; i < ch.sentences.size(); ++i)
            scores.push_back(score_sentence(ch.sentences[i], lexicon, ch.index, i));
    return scores;
}

struct SentimentHistogram {
    double bin_width = 0.025;
    std::vector<std::size_t> counts; // bins [lo, lo+w) over [-1, +1], last bin closed

    double bin_lo(std::size_t i) const { return -1.0 + bin_width * static_cast<double>(i); }
    std::size_t total() const {
        std::size_t n = 0;
        for (const auto c : counts) n += c;
        return n;
    }
};

/// 2/bin_width bins over [-1, +1]; +1 falls into the last (closed) bin.
/// Unscored sentences are excluded.
inline SentimentHistogram histogram(std::span<const SentenceScore> scores, double bin_width = 0.025) {
    if (!(bin_width > 0.0) || bin_width > 2.0) throw InvalidArgument("histogram: bin width must be in (0, 2]");
    SentimentHistogram h;
    h.bin_width = bin_width;
    const auto bins = static_cast<std::size_t>(std::llround(2.0 / bin_width));
    h.counts.assign(bins, 0);
    for (const auto& s : scores) {
        if (!s.score) continue;
        auto bin = static_cast<long long>(std::floor((*s.score + 1.0) / bin_width));
        if (bin < 0) bin = 0;
        if (bin >= static_cast<long long>(bins)) bin = static_cast<long long>(bins) - 1;
        ++h.counts[static_cast<std::size_t>(bin)];
    }
    return h;
}

struct ChapterSeriesRow {
    int chapter_index = 0;
    double mean_score = 0.0;
    std::size_t scored_count = 0; // 0 flags a chapter with no scored sentences
};

struct ChapterSeries {
    std::vector<ChapterSeriesRow> rows; // one per chapter, corpus order
};

/// Per-chapter mean of scored sentences. Chapters without any scored
/// sentence get mean 0 and count 0.
inline ChapterSeries chapter_series(std::span<const SentenceScore> scores,
                                    std::span<const int> chapter_indices) {
    ChapterSeries series;
    series.rows.reserve(chapter_indices.size());
    for (const auto index : chapter_indices) series.rows.push_back(ChapterSeriesRow{index, 0.0, 0});
    std::unordered_map<int, std::size_t> row_of;
    for (std::size_t i = 0; i < series.rows.size(); ++i) row_of.emplace(series.rows[i].chapter_index, i);

    std::vector<double> sums(series.rows.size(), 0.0);
    for (const auto& s : scores) {
        if (!s.score) continue;
        const auto it = row_of.find(s.chapter_index);
        if (it == row_of.end())
            throw InvalidArgument("chapter_series: score references unknown chapter " +
                                  std::to_string(s.chapter_index));
        sums[it->second] += *s.score;
        ++series.rows[it->second].scored_count;
    }
    for (std::size_t i = 0; i < series.rows.size(); ++i)
        if (series.rows[i].scored_count > 0)
            series.rows[i].mean_score = sums[i] / static_cast<double>(series.rows[i].scored_count);
    return series;
}

inline ChapterSeries chapter_series(const TokenizedCorpus& tokens, std::span<const SentenceScore> scores) {
    std::vector<int> indices;
    indices.reserve(tokens.chapters.size());
    for (const auto& ch : tokens.chapters) indices.push_back(ch.index);
    return chapter_series(scores, indices);
}

namespace detail {
inline std::size_t scored_count_or_throw(std::span<const SentenceScore> scores) {
    std::size_t n = 0;
    for (const auto& s : scores)
        if (s.score) ++n;
    if (n == 0) throw NoScoredSentences("no scored sentences");
    return n;
}
}  // namespace detail

/// Fraction of scored sentences with score < 0. Zero scores are Neutral.
inline double negativity_fraction(std::span<const SentenceScore> scores) {
    const auto total = detail::scored_count_or_throw(scores);
    std::size_t neg = 0;
    for (const auto& s : scores)
        if (s.score && *s.score < 0.0) ++neg;
    return static_cast<double>(neg) / static_cast<double>(total);
}

inline double positivity_fraction(std::span<const SentenceScore> scores) {
    const auto total = detail::scored_count_or_throw(scores);
    std::size_t pos = 0;
    for (const auto& s : scores)
        if (s.score && *s.score > 0.0) ++pos;
    return static_cast<double>(pos) / static_cast<double>(total);
}

inline double neutrality_fraction(std::span<const SentenceScore> scores) {
    const auto total = detail::scored_count_or_throw(scores);
    std::size_t neu = 0;
    for (const auto& s : scores)
        if (s.score && *s.score == 0.0) ++neu;
    return static_cast<double>(neu) / static_cast<double>(total);
}

struct WordPolarityCounts {
    std::size_t matched = 0;
    std::size_t negative = 0;
    std::size_t positive = 0;
    std::size_t neutral = 0;

    double negativity() const {
        return matched == 0 ? 0.0 : static_cast<double>(negative) / static_cast<double>(matched);
    }
};

/// Word-level polarity tallies over matched tokens; secondary statistic next
/// to the sentence-level fractions.
inline WordPolarityCounts word_polarity_counts(const TokenizedCorpus& tokens, const PolarityLexicon& lexicon) {
    WordPolarityCounts c;
    for (const auto& ch : tokens.chapters)
        for (const auto& sent : ch.sentences)
            for (const auto& tok : sent)
                if (const auto v = lexicon.match(tok)) {
                    ++c.matched;
                    if (*v < 0.0) ++c.negative;
                    else if (*v > 0.0) ++c.positive;
                    else ++c.neutral;
                }
    return c;
}

}  // namespace corpus_lens

#endif
