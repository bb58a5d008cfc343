#ifndef CORPUS_LENS_STATS_HPP
#define CORPUS_LENS_STATS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "corpus_lens/errors.hpp"
#include "corpus_lens/tokenize.hpp"

namespace corpus_lens {

struct FrequencyRow {
    std::string lemma;
    std::size_t count = 0;
};

struct FrequencyTable {
    std::string pos;
    std::vector<FrequencyRow> rows; // count-descending, ties by code-point order
};

/// Corpus-wide lemma frequencies for one POS, truncated to the top_n rows.
inline FrequencyTable pos_frequency(const TokenizedCorpus& tokens, std::string_view pos, std::size_t top_n) {
    if (top_n == 0) throw InvalidArgument("pos_frequency: top_n must be >= 1");
    std::map<std::string, std::size_t> counts; // ordered: code-point tie-break for free
    for (const auto& ch : tokens.chapters)
        for (const auto& sent : ch.sentences)
            for (const auto& tok : sent)
                if (tok.pos == pos) ++counts[tok.lemma];

    FrequencyTable table;
    table.pos = std::string(pos);
    table.rows.reserve(counts.size());
    for (auto& [lemma, count] : counts) table.rows.push_back(FrequencyRow{lemma, count});
    std::stable_sort(table.rows.begin(), table.rows.end(),
                     [](const FrequencyRow& a, const FrequencyRow& b) { return a.count > b.count; });
    if (table.rows.size() > top_n) table.rows.resize(top_n);
    return table;
}

/// Sparse term-by-chapter count matrix. Terms are lemmas of the configured
/// vocabulary POS set; documents are chapters in corpus order.
class TermDocMatrix {
public:
    static TermDocMatrix build(const TokenizedCorpus& tokens,
                               const std::set<std::string>& vocab_pos = content_pos_tags()) {
        if (vocab_pos.empty()) throw InvalidArgument("TermDocMatrix: vocabulary POS set must be non-empty");
        TermDocMatrix m;
        std::vector<std::map<std::string, std::size_t>> per_doc;
        per_doc.reserve(tokens.chapters.size());
        for (const auto& ch : tokens.chapters) {
            m.docs_.push_back(ch.index);
            auto& counts = per_doc.emplace_back();
            for (const auto& sent : ch.sentences)
                for (const auto& tok : sent)
                    if (vocab_pos.count(tok.pos)) ++counts[tok.lemma];
        }

        std::set<std::string> vocab;
        for (const auto& counts : per_doc)
            for (const auto& [lemma, _] : counts) vocab.insert(lemma);
        m.terms_.assign(vocab.begin(), vocab.end());
        for (std::size_t i = 0; i < m.terms_.size(); ++i) m.term_index_.emplace(m.terms_[i], i);

        m.doc_freq_.assign(m.terms_.size(), 0);
        m.cols_.resize(per_doc.size());
        m.col_sums_.assign(per_doc.size(), 0);
        for (std::size_t j = 0; j < per_doc.size(); ++j) {
            for (const auto& [lemma, count] : per_doc[j]) {
                const auto i = m.term_index_.at(lemma);
                m.cols_[j].emplace_back(i, count);
                m.col_sums_[j] += count;
                ++m.doc_freq_[i];
            }
            std::sort(m.cols_[j].begin(), m.cols_[j].end());
        }
        return m;
    }

    std::size_t term_count() const noexcept { return terms_.size(); }
    std::size_t doc_count() const noexcept { return docs_.size(); }
    const std::vector<std::string>& terms() const noexcept { return terms_; }
    const std::vector<int>& docs() const noexcept { return docs_; }
    const std::string& term(std::size_t i) const { return terms_.at(i); }
    int doc_label(std::size_t j) const { return docs_.at(j); }

    std::optional<std::size_t> term_id(std::string_view lemma) const {
        const auto it = term_index_.find(lemma);
        if (it == term_index_.end()) return std::nullopt;
        return it->second;
    }

    /// n_{i,j}: occurrences of term i in document j (0 when absent).
    std::size_t count(std::size_t term, std::size_t doc) const {
        const auto& col = cols_.at(doc);
        const auto it = std::lower_bound(col.begin(), col.end(), std::make_pair(term, std::size_t{0}));
        return (it != col.end() && it->first == term) ? it->second : 0;
    }

    std::size_t column_sum(std::size_t doc) const { return col_sums_.at(doc); }
    std::size_t document_frequency(std::size_t term) const { return doc_freq_.at(term); }

    /// Sparse column: (term id, count) pairs sorted by term id.
    const std::vector<std::pair<std::size_t, std::size_t>>& column(std::size_t doc) const { return cols_.at(doc); }

private:
    std::vector<std::string> terms_;
    std::unordered_map<std::string, std::size_t, detail::StringHash, std::equal_to<>> term_index_;
    std::vector<int> docs_;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> cols_;
    std::vector<std::size_t> col_sums_;
    std::vector<std::size_t> doc_freq_;
};

/// tf = n_{i,j} / sum_k n_{k,j}
inline double term_frequency(const TermDocMatrix& m, std::size_t term, std::size_t doc) {
    const auto total = m.column_sum(doc);
    if (total == 0) throw EmptyDocument("document " + std::to_string(m.doc_label(doc)) + " has no tokens");
    return static_cast<double>(m.count(term, doc)) / static_cast<double>(total);
}

inline double term_frequency(const TermDocMatrix& m, std::string_view lemma, std::size_t doc) {
    const auto id = m.term_id(lemma);
    if (!id) {
        if (m.column_sum(doc) == 0)
            throw EmptyDocument("document " + std::to_string(m.doc_label(doc)) + " has no tokens");
        return 0.0; // absent term
    }
    return term_frequency(m, *id, doc);
}

/// idf = ln(|D| / document-frequency); natural log.
inline double inverse_document_frequency(const TermDocMatrix& m, std::size_t term) {
    const auto df = m.document_frequency(term);
    if (df == 0) throw UnknownTerm("term occurs in no document: " + m.term(term));
    return std::log(static_cast<double>(m.doc_count()) / static_cast<double>(df));
}

inline double inverse_document_frequency(const TermDocMatrix& m, std::string_view lemma) {
    const auto id = m.term_id(lemma);
    if (!id) throw UnknownTerm("unknown term: " + std::string(lemma));
    return inverse_document_frequency(m, *id);
}

inline double tfidf(const TermDocMatrix& m, std::size_t term, std::size_t doc) {
    return term_frequency(m, term, doc) * inverse_document_frequency(m, term);
}

inline double tfidf(const TermDocMatrix& m, std::string_view lemma, std::size_t doc) {
    const auto id = m.term_id(lemma);
    if (!id) throw UnknownTerm("unknown term: " + std::string(lemma));
    return tfidf(m, *id, doc);
}

struct KeywordRow {
    std::string lemma;
    double score = 0.0;
};

struct KeywordList {
    int chapter_index = 0;
    std::vector<KeywordRow> rows; // score-descending, ties by code-point order
};

/// Per-chapter top-k terms by tf-idf; zero scores are excluded, so a chapter
/// may yield fewer than k rows (or none when every term is corpus-wide).
inline std::vector<KeywordList> chapter_keywords(const TermDocMatrix& m, std::size_t k) {
    if (k == 0) throw InvalidArgument("chapter_keywords: k must be >= 1");
    std::vector<KeywordList> lists;
    lists.reserve(m.doc_count());
    for (std::size_t j = 0; j < m.doc_count(); ++j) {
        KeywordList kl;
        kl.chapter_index = m.doc_label(j);
        if (m.column_sum(j) > 0) {
            for (const auto& [term, count] : m.column(j)) {
                const double score = tfidf(m, term, j);
                if (score > 0.0) kl.rows.push_back(KeywordRow{m.term(term), score});
            }
            std::sort(kl.rows.begin(), kl.rows.end(), [](const KeywordRow& a, const KeywordRow& b) {
                if (a.score != b.score) return a.score > b.score;
                return a.lemma < b.lemma;
            });
            if (kl.rows.size() > k) kl.rows.resize(k);
        }
        lists.push_back(std::move(kl));
    }
    return lists;
}

}  // namespace corpus_lens

#endif
