#ifndef CORPUS_LENS_CORPUS_HPP
#define CORPUS_LENS_CORPUS_HPP

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "corpus_lens/errors.hpp"
#include "corpus_lens/utf8.hpp"

namespace corpus_lens {

struct Sentence {
    std::string text;
    int chapter_index = 0;   // 1-based
    std::size_t ordinal = 0; // 0-based position within the chapter
};

struct Chapter {
    int index = 0; // 1-based, contiguous
    std::string title;
    std::string raw_text;
    std::vector<Sentence> sentences;
};

struct Corpus {
    std::vector<Chapter> chapters;
    std::string source_label;
};

struct CorpusStats {
    std::size_t chapter_count = 0;
    std::size_t sentence_count = 0;
    std::size_t byte_size = 0;
};

enum class CorpusLayout { PerFile, SingleFile };

struct LoadOptions {
    CorpusLayout layout = CorpusLayout::PerFile;
    /// Single-file layout: line pattern that starts a new chapter. The first
    /// capture group (when present) becomes the title, otherwise the whole line.
    std::string delimiter_pattern = R"(^#\s*(.+)$)";
    /// Lines matching this pattern are dropped before segmentation. When unset,
    /// the default rule drops lines that equal the chapter title and are
    /// shorter than 20 code points.
    std::optional<std::string> header_pattern;
    /// Optional JSON manifest path: [{"index":1,"file":"01.txt","title":"..."}].
    std::optional<std::filesystem::path> manifest;
    std::string source_label;
};

/// Splits text into sentences on the terminator set {。！？}. Each terminator
/// ends its sentence and stays attached to it. A trailing fragment without a
/// terminator is a sentence of its own. Newlines are removed inside sentences;
/// fragments that are empty or whitespace-only are dropped.
inline std::vector<std::string> split_sentences(std::string_view text) {
    std::vector<std::string> out;
    std::string current;
    auto flush = [&] {
        if (!utf8::is_blank(current)) out.push_back(current);
        current.clear();
    };
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto d = utf8::decode(text, pos);
        if (!d) throw EncodingError("split_sentences: invalid UTF-8 at byte " + std::to_string(pos));
        const auto cp = d->cp;
        if (cp == U'\n' || cp == U'\r') {
            pos += d->bytes;
            continue; // formatting, not a boundary
        }
        current.append(text.substr(pos, d->bytes));
        pos += d->bytes;
        if (cp == 0x3002 || cp == 0xFF01 || cp == 0xFF1F) flush(); // 。 ！ ？
    }
    flush();
    return out;
}

namespace detail {

inline std::string read_file_utf8(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + p.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string data = buf.str();
    if (data.size() >= 3 && data.compare(0, 3, "\xEF\xBB\xBF") == 0) data.erase(0, 3);
    if (!utf8::validate(data)) throw EncodingError("invalid UTF-8 in file: " + p.string());
    return data;
}

inline std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            if (start < text.size()) lines.emplace_back(text.substr(start));
            break;
        }
        auto line = text.substr(start, nl - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.emplace_back(line);
        start = nl + 1;
    }
    return lines;
}

inline std::regex compile_pattern(const std::string& pattern, const char* what) {
    try {
        return std::regex(pattern);
    } catch (const std::regex_error& e) {
        throw ConfigError(std::string(what) + ": bad regex '" + pattern + "': " + e.what());
    }
}

/// Drops header lines, then joins the rest with '\n' to form raw_text.
inline std::string strip_headers(const std::vector<std::string>& lines,
                                 const std::string& title,
                                 const std::optional<std::string>& header_pattern) {
    std::optional<std::regex> re;
    if (header_pattern) re.emplace(compile_pattern(*header_pattern, "header pattern"));
    const bool short_title = utf8::codepoint_count(title) < 20;
    std::string out;
    for (const auto& line : lines) {
        bool drop = false;
        if (re) {
            drop = std::regex_search(line, *re);
        } else if (short_title && !title.empty()) {
            drop = utf8::trim(line) == utf8::trim(title);
        }
        if (drop) continue;
        if (!out.empty()) out.push_back('\n');
        out += line;
    }
    return out;
}

inline void finish_chapter(Chapter& ch) {
    const auto texts = split_sentences(ch.raw_text);
    ch.sentences.clear();
    ch.sentences.reserve(texts.size());
    for (std::size_t i = 0; i < texts.size(); ++i)
        ch.sentences.push_back(Sentence{texts[i], ch.index, i});
}

struct RawChapter {
    long long order_key; // numeric filename prefix or occurrence order
    std::string title;
    std::filesystem::path file;
    std::vector<std::string> lines;
};

inline std::vector<RawChapter> scan_per_file(const std::filesystem::path& root) {
    static const std::regex name_re(R"(^(\d+)[ _\-]?(.*)$)");
    std::vector<RawChapter> raw;
    for (const auto& entry : std::filesystem::directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        const auto path = entry.path();
        if (path.extension() != ".txt") continue;
        std::smatch m;
        const std::string stem = path.stem().string();
        if (!std::regex_match(stem, m, name_re)) continue;
        RawChapter rc;
        try {
            rc.order_key = std::stoll(m[1].str());
        } catch (const std::out_of_range&) {
            continue; // prefix too large to be a chapter number
        }
        rc.title = m[2].str().empty() ? stem : m[2].str();
        rc.file = path;
        raw.push_back(std::move(rc));
    }
    std::sort(raw.begin(), raw.end(), [](const RawChapter& a, const RawChapter& b) {
        if (a.order_key != b.order_key) return a.order_key < b.order_key;
        return a.file.filename().string() < b.file.filename().string();
    });
    for (std::size_t i = 1; i < raw.size(); ++i) {
        if (raw[i].order_key == raw[i - 1].order_key)
            throw DuplicateChapterIndex("duplicate chapter prefix " + std::to_string(raw[i].order_key) +
                                        ": " + raw[i - 1].file.filename().string() + " and " +
                                        raw[i].file.filename().string());
    }
    for (auto& rc : raw) rc.lines = split_lines(read_file_utf8(rc.file));
    return raw;
}

/// Manifest: JSON array of {"index": n, "file": "relative/path.txt", "title": "..."}.
inline std::vector<RawChapter> scan_manifest(const std::filesystem::path& root,
                                             const std::filesystem::path& manifest) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file_utf8(manifest));
    } catch (const nlohmann::json::exception& e) {
        throw IoError("cannot parse manifest " + manifest.string() + ": " + e.what());
    }
    if (!doc.is_array()) throw IoError("manifest must be a JSON array: " + manifest.string());
    std::vector<RawChapter> raw;
    for (const auto& item : doc) {
        RawChapter rc;
        rc.order_key = item.at("index").get<long long>();
        rc.file = root / item.at("file").get<std::string>();
        rc.title = item.value("title", rc.file.stem().string());
        raw.push_back(std::move(rc));
    }
    std::sort(raw.begin(), raw.end(),
              [](const RawChapter& a, const RawChapter& b) { return a.order_key < b.order_key; });
    for (std::size_t i = 1; i < raw.size(); ++i)
        if (raw[i].order_key == raw[i - 1].order_key)
            throw DuplicateChapterIndex("duplicate chapter index " + std::to_string(raw[i].order_key) +
                                        " in manifest " + manifest.string());
    for (auto& rc : raw) rc.lines = split_lines(read_file_utf8(rc.file));
    return raw;
}

inline std::vector<RawChapter> scan_single_file(const std::filesystem::path& root,
                                                const std::string& delimiter_pattern) {
    namespace fs = std::filesystem;
    fs::path file = root;
    if (fs::is_directory(root)) {
        std::vector<fs::path> txt;
        for (const auto& entry : fs::directory_iterator(root))
            if (entry.is_regular_file() && entry.path().extension() == ".txt")
                txt.push_back(entry.path());
        if (txt.empty()) throw EmptyCorpus("no .txt file under " + root.string());
        if (txt.size() > 1) throw Error("single-file layout expects exactly one .txt under " + root.string());
        file = txt.front();
    }
    const std::regex delim = compile_pattern(delimiter_pattern, "delimiter pattern");
    std::vector<RawChapter> raw;
    for (const auto& line : split_lines(read_file_utf8(file))) {
        std::smatch m;
        if (std::regex_search(line, m, delim)) {
            RawChapter rc;
            rc.order_key = static_cast<long long>(raw.size()) + 1;
            rc.title = (m.size() > 1 && m[1].matched) ? m[1].str() : std::string(utf8::trim(line));
            rc.file = file;
            raw.push_back(std::move(rc));
        } else if (!raw.empty()) {
            raw.back().lines.push_back(line);
        }
        // content before the first delimiter is front matter; skipped
    }
    return raw;
}

}  // namespace detail

/// Loads a chaptered corpus from local files. Chapters are renumbered
/// contiguously from 1 in prefix (or occurrence) order.
inline Corpus load_corpus(const std::filesystem::path& root, const LoadOptions& opts = {}) {
    if (!std::filesystem::exists(root)) throw IoError("corpus root does not exist: " + root.string());

    std::vector<detail::RawChapter> raw;
    if (opts.manifest) {
        raw = detail::scan_manifest(root, *opts.manifest);
    } else if (opts.layout == CorpusLayout::PerFile) {
        raw = detail::scan_per_file(root);
    } else {
        raw = detail::scan_single_file(root, opts.delimiter_pattern);
    }
    if (raw.empty()) throw EmptyCorpus("no chapters found under " + root.string());

    Corpus corpus;
    corpus.source_label = opts.source_label.empty() ? root.string() : opts.source_label;
    corpus.chapters.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        Chapter ch;
        ch.index = static_cast<int>(i) + 1;
        ch.title = raw[i].title;
        ch.raw_text = detail::strip_headers(raw[i].lines, raw[i].title, opts.header_pattern);
        detail::finish_chapter(ch);
        corpus.chapters.push_back(std::move(ch));
    }
    return corpus;
}

inline CorpusStats corpus_stats(const Corpus& corpus) {
    CorpusStats stats;
    stats.chapter_count = corpus.chapters.size();
    for (const auto& ch : corpus.chapters) {
        stats.sentence_count += ch.sentences.size();
        stats.byte_size += ch.raw_text.size();
    }
    return stats;
}

}  // namespace corpus_lens

#endif
