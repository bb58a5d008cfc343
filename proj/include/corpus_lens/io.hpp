#ifndef CORPUS_LENS_IO_HPP
#define CORPUS_LENS_IO_HPP

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "corpus_lens/corpus.hpp"
#include "corpus_lens/errors.hpp"
#include "corpus_lens/format.hpp"
#include "corpus_lens/mds.hpp"
#include "corpus_lens/sentiment.hpp"
#include "corpus_lens/stats.hpp"
#include "corpus_lens/tokenize.hpp"

namespace corpus_lens {

using Json = nlohmann::ordered_json; // stable key order in every emitted document

// ---------------------------------------------------------------- corpus json

inline Json corpus_to_json(const Corpus& corpus) {
    Json doc;
    doc["source_label"] = corpus.source_label;
    doc["chapters"] = Json::array();
    for (const auto& ch : corpus.chapters) {
        Json c;
        c["index"] = ch.index;
        c["title"] = ch.title;
        c["raw_text"] = ch.raw_text;
        c["sentences"] = Json::array();
        for (const auto& s : ch.sentences) c["sentences"].push_back(s.text);
        doc["chapters"].push_back(std::move(c));
    }
    return doc;
}

inline Corpus corpus_from_json(const Json& doc) {
    Corpus corpus;
    try {
        corpus.source_label = doc.value("source_label", "");
        for (const auto& c : doc.at("chapters")) {
            Chapter ch;
            ch.index = c.at("index").get<int>();
            ch.title = c.value("title", "");
            ch.raw_text = c.value("raw_text", "");
            std::size_t ordinal = 0;
            for (const auto& s : c.at("sentences"))
                ch.sentences.push_back(Sentence{s.get<std::string>(), ch.index, ordinal++});
            corpus.chapters.push_back(std::move(ch));
        }
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("malformed corpus document: ") + e.what());
    }
    if (corpus.chapters.empty()) throw EmptyCorpus("corpus document has no chapters");
    return corpus;
}

// ---------------------------------------------------------------- tokens json

inline Json tokens_to_json(const TokenizedCorpus& tokens) {
    Json doc;
    doc["source_label"] = tokens.source_label;
    doc["chapters"] = Json::array();
    for (const auto& ch : tokens.chapters) {
        Json c;
        c["index"] = ch.index;
        c["title"] = ch.title;
        c["sentences"] = Json::array();
        for (const auto& sent : ch.sentences) {
            Json s = Json::array();
            for (const auto& tok : sent)
                s.push_back(Json{{"surface", tok.surface}, {"pos", tok.pos}, {"lemma", tok.lemma}});
            c["sentences"].push_back(std::move(s));
        }
        doc["chapters"].push_back(std::move(c));
    }
    return doc;
}

inline TokenizedCorpus tokens_from_json(const Json& doc) {
    TokenizedCorpus tokens;
    try {
        tokens.source_label = doc.value("source_label", "");
        for (const auto& c : doc.at("chapters")) {
            TokenizedChapter ch;
            ch.index = c.at("index").get<int>();
            ch.title = c.value("title", "");
            for (const auto& s : c.at("sentences")) {
                std::vector<Token> sent;
                for (const auto& t : s)
                    sent.push_back(Token{t.at("surface").get<std::string>(), t.at("pos").get<std::string>(),
                                         t.at("lemma").get<std::string>()});
                ch.sentences.push_back(std::move(sent));
            }
            tokens.chapters.push_back(std::move(ch));
        }
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("malformed tokens document: ") + e.what());
    }
    return tokens;
}

// ----------------------------------------------------------------- file utils

inline void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed: " + path.string());
}

inline std::string dump_json(const Json& doc) { return doc.dump(2) + "\n"; }

inline Json read_json(const std::filesystem::path& path) {
    try {
        return Json::parse(detail::read_file_utf8(path));
    } catch (const nlohmann::json::exception& e) {
        throw IoError("cannot parse JSON " + path.string() + ": " + e.what());
    }
}

// ------------------------------------------------------------------ csv utils

namespace detail {
inline std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}
}  // namespace detail

inline std::string frequency_csv(const FrequencyTable& table) {
    std::string out = "rank,lemma,value\n";
    for (std::size_t i = 0; i < table.rows.size(); ++i)
        out += std::to_string(i + 1) + "," + detail::csv_field(table.rows[i].lemma) + "," +
               std::to_string(table.rows[i].count) + "\n";
    return out;
}

inline std::string keywords_csv(const std::vector<KeywordList>& lists) {
    std::string out = "chapter,rank,lemma,value\n";
    for (const auto& kl : lists)
        for (std::size_t i = 0; i < kl.rows.size(); ++i)
            out += std::to_string(kl.chapter_index) + "," + std::to_string(i + 1) + "," +
                   detail::csv_field(kl.rows[i].lemma) + "," + detail::fmt_double_full(kl.rows[i].score) + "\n";
    return out;
}

inline std::string histogram_csv(const SentimentHistogram& h) {
    std::string out = "bin_lo,bin_hi,count\n";
    for (std::size_t i = 0; i < h.counts.size(); ++i)
        out += detail::fmt_double_full(h.bin_lo(i)) + "," + detail::fmt_double_full(h.bin_lo(i + 1)) + "," +
               std::to_string(h.counts[i]) + "\n";
    return out;
}

inline std::string series_csv(const ChapterSeries& series) {
    std::string out = "chapter,mean_score,scored_sentences\n";
    for (const auto& row : series.rows)
        out += std::to_string(row.chapter_index) + "," + detail::fmt_double_full(row.mean_score) + "," +
               std::to_string(row.scored_count) + "\n";
    return out;
}

inline std::string coords_csv(const Embedding2D& emb) {
    std::string out = "label,x,y\n";
    for (std::size_t i = 0; i < emb.size(); ++i)
        out += detail::csv_field(emb.labels[i]) + "," + detail::fmt_double_full(emb.coords[i][0]) + "," +
               detail::fmt_double_full(emb.coords[i][1]) + "\n";
    return out;
}

inline Json mds_diagnostics_json(const Embedding2D& emb, bool refined) {
    Json doc;
    doc["points"] = emb.size();
    doc["eigenvalues"] = emb.eigenvalues;
    doc["negative_eigenvalue_mass"] = emb.negative_eigenvalue_mass;
    if (std::isfinite(emb.stress)) doc["stress"] = emb.stress;
    doc["iterations"] = emb.iterations;
    doc["refined"] = refined;
    if (!emb.stress_history.empty()) doc["stress_history"] = emb.stress_history;
    return doc;
}

inline Json sentiment_summary_json(std::size_t sentence_count, const std::vector<SentenceScore>& scores,
                                   const WordPolarityCounts& words, const PolarityLexicon& lexicon) {
    std::size_t scored = 0;
    for (const auto& s : scores)
        if (s.score) ++scored;
    Json doc;
    doc["sentences"] = sentence_count;
    doc["scored"] = scored;
    doc["unscored"] = sentence_count - scored;
    if (scored > 0) {
        doc["negativity_fraction"] = negativity_fraction(scores);
        doc["positivity_fraction"] = positivity_fraction(scores);
        doc["neutrality_fraction"] = neutrality_fraction(scores);
    }
    doc["word"] = Json{{"matched", words.matched},
                       {"negative", words.negative},
                       {"positive", words.positive},
                       {"neutral", words.neutral},
                       {"negativity_fraction", words.negativity()}};
    doc["lexicon_entries"] = lexicon.size();
    doc["lexicon_skipped_records"] = lexicon.skipped_records();
    return doc;
}

}  // namespace corpus_lens

#endif
