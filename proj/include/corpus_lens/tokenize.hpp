#ifndef CORPUS_LENS_TOKENIZE_HPP
#define CORPUS_LENS_TOKENIZE_HPP

#include <algorithm>
#include <filesystem>
#include <istream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "corpus_lens/corpus.hpp"
#include "corpus_lens/errors.hpp"
#include "corpus_lens/utf8.hpp"

namespace corpus_lens {

struct Token {
    std::string surface;
    std::string pos;   // coarse tag, member of the closed tag set
    std::string lemma; // dictionary form; equals surface when unknown
};

inline constexpr const char* kUnknownPos = "未知語";

/// Closed coarse tag set (IPA-style top-level tags plus 未知語).
inline const std::set<std::string>& default_pos_tags() {
    static const std::set<std::string> tags = {
        "名詞", "動詞", "形容詞", "副詞", "助詞", "助動詞", "接続詞",
        "連体詞", "感動詞", "接頭詞", "記号", "フィラー", "その他", "未知語",
    };
    return tags;
}

/// Content-word tags used as the default vocabulary filter downstream.
inline const std::set<std::string>& content_pos_tags() {
    static const std::set<std::string> tags = {"名詞", "動詞", "形容詞"};
    return tags;
}

/// Maps an incoming tag into the closed set; anything unrecognized
/// becomes 未知語 so the Token invariant always holds.
inline std::string coerce_pos(std::string pos) {
    return default_pos_tags().count(pos) ? pos : std::string(kUnknownPos);
}

namespace detail {
struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
    std::size_t operator()(const std::string& s) const noexcept { return std::hash<std::string_view>{}(s); }
};
}  // namespace detail

class SegmentationLexicon {
public:
    struct Entry {
        std::string pos;
        std::string lemma;
    };

    void insert(std::string surface, std::string pos, std::string lemma) {
        if (surface.empty()) throw InvalidArgument("lexicon surface must be non-empty");
        max_codepoints_ = std::max(max_codepoints_, utf8::codepoint_count(surface));
        entries_.emplace(std::move(surface), Entry{coerce_pos(std::move(pos)), std::move(lemma)});
    }

    const Entry* find(std::string_view surface) const {
        const auto it = entries_.find(surface);
        return it == entries_.end() ? nullptr : &it->second;
    }

    bool empty() const noexcept { return entries_.empty(); }
    std::size_t size() const noexcept { return entries_.size(); }
    std::size_t max_surface_codepoints() const noexcept { return max_codepoints_; }

    /// TSV format: surface<TAB>pos<TAB>lemma, one entry per line, UTF-8.
    static SegmentationLexicon load(const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError("cannot open lexicon: " + path.string());
        std::stringstream buf;
        buf << in.rdbuf();
        return parse(buf.str());
    }

    static SegmentationLexicon parse(std::string_view text) {
        if (!utf8::validate(text)) throw EncodingError("lexicon is not valid UTF-8");
        SegmentationLexicon lex;
        std::size_t lineno = 0;
        for (const auto& line : corpus_lens::detail::split_lines(text)) {
            ++lineno;
            if (line.empty() || line[0] == '#') continue;
            const auto t1 = line.find('\t');
            if (t1 == std::string::npos)
                throw MalformedRecord("lexicon line " + std::to_string(lineno) + ": expected TSV");
            const auto t2 = line.find('\t', t1 + 1);
            std::string surface = line.substr(0, t1);
            std::string pos = t2 == std::string::npos ? line.substr(t1 + 1) : line.substr(t1 + 1, t2 - t1 - 1);
            std::string lemma = t2 == std::string::npos ? surface : line.substr(t2 + 1);
            if (lemma.empty()) lemma = surface;
            lex.insert(std::move(surface), std::move(pos), std::move(lemma));
        }
        return lex;
    }

private:
    std::unordered_map<std::string, Entry, detail::StringHash, std::equal_to<>> entries_;
    std::size_t max_codepoints_ = 0;
};

/// Greedy longest-match segmentation. At each position the longest lexicon
/// entry starting there is emitted; where nothing matches, a single code
/// point becomes a 未知語 token. Surfaces concatenate back to the input.
inline std::vector<Token> tokenize_longest_match(std::string_view text, const SegmentationLexicon& lexicon) {
    if (lexicon.empty()) throw EmptyLexicon("tokenize_longest_match: empty lexicon");
    std::vector<Token> tokens;
    std::vector<std::size_t> ends; // byte offsets of code-point boundaries after `pos`
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::string_view rest = text.substr(pos);
        ends.clear();
        std::size_t p = 0;
        while (p < rest.size() && ends.size() < lexicon.max_surface_codepoints()) {
            const auto d = utf8::decode(rest, p);
            p += d ? d->bytes : 1;
            ends.push_back(p);
        }
        const SegmentationLexicon::Entry* hit = nullptr;
        std::size_t hit_len = 0;
        for (std::size_t i = ends.size(); i-- > 0;) {
            if ((hit = lexicon.find(rest.substr(0, ends[i]))) != nullptr) {
                hit_len = ends[i];
                break;
            }
        }
        if (hit) {
            tokens.push_back(Token{std::string(rest.substr(0, hit_len)), hit->pos, hit->lemma});
            pos += hit_len;
        } else {
            const std::size_t n = ends.empty() ? 1 : ends[0];
            std::string ch(rest.substr(0, n));
            tokens.push_back(Token{ch, kUnknownPos, ch});
            pos += n;
        }
    }
    return tokens;
}

struct TokenizedChapter {
    int index = 0;
    std::string title;
    std::vector<std::vector<Token>> sentences; // aligned with Chapter.sentences by ordinal
};

struct TokenizedCorpus {
    std::string source_label;
    std::vector<TokenizedChapter> chapters;

    std::size_t sentence_count() const {
        std::size_t n = 0;
        for (const auto& ch : chapters) n += ch.sentences.size();
        return n;
    }
    std::size_t token_count() const {
        std::size_t n = 0;
        for (const auto& ch : chapters)
            for (const auto& s : ch.sentences) n += s.size();
        return n;
    }
};

inline TokenizedCorpus tokenize_corpus(const Corpus& corpus, const SegmentationLexicon& lexicon) {
    TokenizedCorpus out;
    out.source_label = corpus.source_label;
    out.chapters.reserve(corpus.chapters.size());
    for (const auto& ch : corpus.chapters) {
        TokenizedChapter tc;
        tc.index = ch.index;
        tc.title = ch.title;
        tc.sentences.reserve(ch.sentences.size());
        for (const auto& s : ch.sentences) tc.sentences.push_back(tokenize_longest_match(s.text, lexicon));
        out.chapters.push_back(std::move(tc));
    }
    return out;
}

namespace detail {

inline std::vector<std::string> split_fields(std::string_view s, char sep) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const auto p = s.find(sep, start);
        if (p == std::string_view::npos) {
            fields.emplace_back(s.substr(start));
            return fields;
        }
        fields.emplace_back(s.substr(start, p - start));
        start = p + 1;
    }
}

inline Token parse_interchange_record(std::string_view line, std::size_t lineno) {
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos)
        throw MalformedRecord("line " + std::to_string(lineno) + ": no tab separator: " + std::string(line));
    Token tok;
    tok.surface = std::string(line.substr(0, tab));
    const auto fields = split_fields(line.substr(tab + 1), ',');
    tok.pos = coerce_pos(fields.empty() ? std::string() : fields[0]);
    if (fields.size() >= 7 && !fields[6].empty() && fields[6] != "*")
        tok.lemma = fields[6];
    else
        tok.lemma = tok.surface;
    return tok;
}

}  // namespace detail

/// Imports pre-tokenized analyzer output. One token per line
/// (`surface<TAB>f1,...,f6,lemma,reading,pron`), `EOS` ends a sentence, and an
/// optional `#CHAPTER <n>` comment line opens chapter n. Without markers the
/// stream is aligned against the corpus sentence list in order.
inline TokenizedCorpus import_tokens(std::string_view stream, const Corpus& corpus) {
    if (!utf8::validate(stream)) throw EncodingError("token stream is not valid UTF-8");

    struct StreamChapter {
        int index = 0;
        std::vector<std::vector<Token>> sentences;
    };
    std::vector<StreamChapter> parsed;
    bool explicit_markers = false;
    std::vector<Token> current;
    bool current_open = false;

    auto close_sentence = [&] {
        if (parsed.empty()) parsed.push_back(StreamChapter{0, {}});
        parsed.back().sentences.push_back(std::move(current));
        current.clear();
        current_open = false;
    };

    std::size_t lineno = 0;
    for (const auto& line : detail::split_lines(stream)) {
        ++lineno;
        if (line == "EOS") {
            close_sentence();
            continue;
        }
        if (line.rfind("#CHAPTER", 0) == 0) {
            if (current_open)
                throw AlignmentError("line " + std::to_string(lineno) + ": chapter marker inside a sentence");
            int idx = 0;
            try {
                idx = std::stoi(line.substr(8));
            } catch (const std::exception&) {
                throw MalformedRecord("line " + std::to_string(lineno) + ": bad chapter marker: " + line);
            }
            if (!parsed.empty() && !explicit_markers)
                throw AlignmentError("line " + std::to_string(lineno) + ": chapter marker after unmarked tokens");
            explicit_markers = true;
            parsed.push_back(StreamChapter{idx, {}});
            continue;
        }
        current.push_back(detail::parse_interchange_record(line, lineno));
        current_open = true;
    }
    if (current_open) close_sentence(); // trailing sentence without EOS

    TokenizedCorpus out;
    out.source_label = corpus.source_label;
    out.chapters.reserve(corpus.chapters.size());
    for (const auto& ch : corpus.chapters)
        out.chapters.push_back(TokenizedChapter{ch.index, ch.title, {}});

    if (explicit_markers) {
        std::set<int> seen;
        for (auto& sc : parsed) {
            if (!seen.insert(sc.index).second)
                throw AlignmentError("chapter " + std::to_string(sc.index) + " appears twice in stream");
            auto it = std::find_if(out.chapters.begin(), out.chapters.end(),
                                   [&](const TokenizedChapter& c) { return c.index == sc.index; });
            if (it == out.chapters.end())
                throw AlignmentError("chapter marker " + std::to_string(sc.index) + " not in corpus");
            const auto expected = corpus.chapters[static_cast<std::size_t>(it - out.chapters.begin())].sentences.size();
            if (sc.sentences.size() != expected)
                throw AlignmentError("chapter " + std::to_string(sc.index) + ": stream has " +
                                     std::to_string(sc.sentences.size()) + " sentences, corpus has " +
                                     std::to_string(expected));
            it->sentences = std::move(sc.sentences);
        }
        for (std::size_t i = 0; i < out.chapters.size(); ++i)
            if (out.chapters[i].sentences.size() != corpus.chapters[i].sentences.size())
                throw AlignmentError("chapter " + std::to_string(out.chapters[i].index) +
                                     " missing from token stream");
    } else {
        std::vector<std::vector<Token>> flat;
        if (!parsed.empty()) flat = std::move(parsed.front().sentences);
        std::size_t total = 0;
        for (const auto& ch : corpus.chapters) total += ch.sentences.size();
        if (flat.size() != total)
            throw AlignmentError("stream has " + std::to_string(flat.size()) + " sentences, corpus has " +
                                 std::to_string(total));
        std::size_t next = 0;
        for (std::size_t i = 0; i < out.chapters.size(); ++i) {
            const auto want = corpus.chapters[i].sentences.size();
            out.chapters[i].sentences.assign(std::make_move_iterator(flat.begin() + static_cast<long>(next)),
                                             std::make_move_iterator(flat.begin() + static_cast<long>(next + want)));
            next += want;
        }
    }
    return out;
}

/// Removes tokens whose POS is not in `keep`; sentence structure (possibly
/// empty lists) is preserved.
inline TokenizedCorpus filter_pos(const TokenizedCorpus& tokens, const std::set<std::string>& keep) {
    if (keep.empty()) throw InvalidArgument("filter_pos: keep set must be non-empty");
    TokenizedCorpus out;
    out.source_label = tokens.source_label;
    out.chapters.reserve(tokens.chapters.size());
    for (const auto& ch : tokens.chapters) {
        TokenizedChapter tc{ch.index, ch.title, {}};
        tc.sentences.reserve(ch.sentences.size());
        for (const auto& sent : ch.sentences) {
            std::vector<Token> kept;
            std::copy_if(sent.begin(), sent.end(), std::back_inserter(kept),
                         [&](const Token& t) { return keep.count(t.pos) > 0; });
            tc.sentences.push_back(std::move(kept));
        }
        out.chapters.push_back(std::move(tc));
    }
    return out;
}

}  // namespace corpus_lens

#endif
