#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "corpus_lens/corpus.hpp"
#include "corpus_lens/io.hpp"
#include "test_util.hpp"

using namespace corpus_lens;

TEST_CASE("split_sentences splits on the terminator set") {
    CHECK(split_sentences("春が来た。鳥が鳴く。") == std::vector<std::string>{"春が来た。", "鳥が鳴く。"});
    CHECK(split_sentences("") == std::vector<std::string>{});
    CHECK(split_sentences("終わりなき文") == std::vector<std::string>{"終わりなき文"});
}

TEST_CASE("split_sentences handles all three terminators and newlines") {
    CHECK(split_sentences("行く！帰る？よし。") == std::vector<std::string>{"行く！", "帰る？", "よし。"});
    // newlines inside a sentence are formatting, not boundaries
    CHECK(split_sentences("春が\n来た。") == std::vector<std::string>{"春が来た。"});
    // ascii '.' is not a terminator
    CHECK(split_sentences("a.b。") == std::vector<std::string>{"a.b。"});
    // whitespace-only fragments are dropped; newline removal keeps both spaces
    CHECK(split_sentences("一。 \n 二。") == std::vector<std::string>{"一。", "  二。"});
    CHECK(split_sentences("一。 　 ") == std::vector<std::string>{"一。"});
}

TEST_CASE("split_sentences round-trip property") {
    // splitting discards nothing except newlines and whitespace-only
    // fragments: terminators only ever appear as a sentence's final character
    std::mt19937 rng(7);
    const std::vector<std::string> alphabet = {"a", "b", "。", "！", "？", "\n", " ", "春"};
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    std::uniform_int_distribution<std::size_t> len(0, 40);

    for (int trial = 0; trial < 300; ++trial) {
        std::string input;
        const auto n = len(rng);
        for (std::size_t i = 0; i < n; ++i) input += alphabet[pick(rng)];

        const auto sentences = split_sentences(input);

        std::string joined;
        for (const auto& s : sentences) joined += s;
        auto strip_ws = [](std::string_view s) {
            std::string out;
            for (const char c : s)
                if (c != '\n' && c != ' ') out.push_back(c);
            return out;
        };
        // U+3000 never generated here, so byte-level stripping is enough
        CHECK(strip_ws(joined) == strip_ws(input));

        for (std::size_t i = 0; i < sentences.size(); ++i) {
            const auto& s = sentences[i];
            CHECK_FALSE(utf8::is_blank(s));
            // terminators appear only as the final code point
            const auto inner = s.substr(0, s.size() >= 3 ? s.size() - 3 : 0);
            for (const char* term : {"。", "！", "？"})
                CHECK(inner.find(term) == std::string::npos);
            if (i + 1 < sentences.size()) {
                const bool ends_with_term = s.size() >= 3 && (s.compare(s.size() - 3, 3, "。") == 0 ||
                                                              s.compare(s.size() - 3, 3, "！") == 0 ||
                                                              s.compare(s.size() - 3, 3, "？") == 0);
                // every sentence except possibly the last ends with a terminator
                CHECK(ends_with_term);
            }
        }
    }
}

TEST_CASE("load_corpus per-file layout orders by numeric prefix") {
    test_util::TempDir dir;
    test_util::write_file(dir.path() / "02_hahakigi.txt", "二章。");
    test_util::write_file(dir.path() / "01_kiritsubo.txt", "一章。");
    const auto corpus = load_corpus(dir.path());
    REQUIRE(corpus.chapters.size() == 2);
    CHECK(corpus.chapters[0].index == 1);
    CHECK(corpus.chapters[0].title == "kiritsubo");
    CHECK(corpus.chapters[1].index == 2);
    CHECK(corpus.chapters[1].title == "hahakigi");
    CHECK(corpus.chapters[0].sentences.size() == 1);
    CHECK(corpus.chapters[0].sentences[0].text == "一章。");
    CHECK(corpus.chapters[0].sentences[0].chapter_index == 1);
    CHECK(corpus.chapters[0].sentences[0].ordinal == 0);
}

TEST_CASE("load_corpus error cases") {
    test_util::TempDir dir;
    SECTION("empty directory") {
        CHECK_THROWS_AS(load_corpus(dir.path()), EmptyCorpus);
    }
    SECTION("duplicate numeric prefix") {
        test_util::write_file(dir.path() / "01_a.txt", "a。");
        test_util::write_file(dir.path() / "1_b.txt", "b。");
        CHECK_THROWS_AS(load_corpus(dir.path()), DuplicateChapterIndex);
    }
    SECTION("invalid utf-8") {
        test_util::write_file(dir.path() / "01_bad.txt", "\xFF\xFE");
        CHECK_THROWS_AS(load_corpus(dir.path()), EncodingError);
    }
    SECTION("missing root") {
        CHECK_THROWS_AS(load_corpus(dir.path() / "nope"), IoError);
    }
}

TEST_CASE("load_corpus renumbers gapped prefixes contiguously") {
    test_util::TempDir dir;
    test_util::write_file(dir.path() / "03_c.txt", "c。");
    test_util::write_file(dir.path() / "10_d.txt", "d。");
    const auto corpus = load_corpus(dir.path());
    REQUIRE(corpus.chapters.size() == 2);
    CHECK(corpus.chapters[0].index == 1);
    CHECK(corpus.chapters[0].title == "c");
    CHECK(corpus.chapters[1].index == 2);
    CHECK(corpus.chapters[1].title == "d");
}

TEST_CASE("load_corpus drops title header lines by default") {
    test_util::TempDir dir;
    test_util::write_file(dir.path() / "01_桐壺.txt", "桐壺\n本文である。");
    const auto corpus = load_corpus(dir.path());
    REQUIRE(corpus.chapters.size() == 1);
    CHECK(corpus.chapters[0].raw_text == "本文である。");
    REQUIRE(corpus.chapters[0].sentences.size() == 1);
    CHECK(corpus.chapters[0].sentences[0].text == "本文である。");
}

TEST_CASE("load_corpus honors an explicit header pattern") {
    test_util::TempDir dir;
    test_util::write_file(dir.path() / "01_a.txt", "### meta\n本文。\n### more meta");
    LoadOptions opts;
    opts.header_pattern = "^###";
    const auto corpus = load_corpus(dir.path(), opts);
    CHECK(corpus.chapters[0].raw_text == "本文。");
}

TEST_CASE("load_corpus single-file layout splits on the delimiter pattern") {
    test_util::TempDir dir;
    test_util::write_file(dir.path() / "book.txt",
                          "front matter ignored\n# 桐壺\n一章の文。\n# 帚木\n二章の文。もう一つ。");
    LoadOptions opts;
    opts.layout = CorpusLayout::SingleFile;
    const auto corpus = load_corpus(dir.path(), opts);
    REQUIRE(corpus.chapters.size() == 2);
    CHECK(corpus.chapters[0].title == "桐壺");
    CHECK(corpus.chapters[0].sentences.size() == 1);
    CHECK(corpus.chapters[1].title == "帚木");
    CHECK(corpus.chapters[1].sentences.size() == 2);
}

TEST_CASE("load_corpus single-file layout accepts a file path as root") {
    test_util::TempDir dir;
    test_util::write_file(dir.path() / "book.txt", "# 一\n文。");
    LoadOptions opts;
    opts.layout = CorpusLayout::SingleFile;
    const auto corpus = load_corpus(dir.path() / "book.txt", opts);
    REQUIRE(corpus.chapters.size() == 1);
    CHECK(corpus.chapters[0].title == "一");
}

TEST_CASE("bad user patterns raise ConfigError") {
    test_util::TempDir dir;
    test_util::write_file(dir.path() / "01_a.txt", "a。");
    LoadOptions opts;
    opts.header_pattern = "([unclosed";
    CHECK_THROWS_AS(load_corpus(dir.path(), opts), ConfigError);

    LoadOptions sf;
    sf.layout = CorpusLayout::SingleFile;
    sf.delimiter_pattern = "([unclosed";
    test_util::TempDir dir2;
    test_util::write_file(dir2.path() / "b.txt", "x。");
    CHECK_THROWS_AS(load_corpus(dir2.path(), sf), ConfigError);
}

TEST_CASE("load_corpus accepts a JSON manifest") {
    test_util::TempDir dir;
    test_util::write_file(dir.path() / "x.txt", "甲。");
    test_util::write_file(dir.path() / "y.txt", "乙。");
    test_util::write_file(dir.path() / "manifest.json",
                          R"([{"index": 2, "file": "y.txt", "title": "乙巻"},
                              {"index": 1, "file": "x.txt", "title": "甲巻"}])");
    LoadOptions opts;
    opts.manifest = dir.path() / "manifest.json";
    const auto corpus = load_corpus(dir.path(), opts);
    REQUIRE(corpus.chapters.size() == 2);
    CHECK(corpus.chapters[0].title == "甲巻");
    CHECK(corpus.chapters[1].title == "乙巻");
}

TEST_CASE("load_corpus is deterministic") {
    test_util::TempDir dir;
    test_util::write_file(dir.path() / "01_a.txt", "一。二。");
    test_util::write_file(dir.path() / "02_b.txt", "三。");
    const auto a = load_corpus(dir.path());
    const auto b = load_corpus(dir.path());
    CHECK(dump_json(corpus_to_json(a)) == dump_json(corpus_to_json(b)));
}

TEST_CASE("corpus_stats counts chapters, sentences and bytes") {
    Corpus corpus;
    corpus.chapters.push_back(Chapter{1, "a", "0123456789", {}});
    corpus.chapters.push_back(Chapter{2, "b", "", {}});
    corpus.chapters[0].sentences = {Sentence{"x。", 1, 0}, Sentence{"y。", 1, 1}, Sentence{"z。", 1, 2}};
    corpus.chapters[1].sentences = {Sentence{"p。", 2, 0}, Sentence{"q。", 2, 1}, Sentence{"r。", 2, 2},
                                    Sentence{"s。", 2, 3}};
    const auto stats = corpus_stats(corpus);
    CHECK(stats.chapter_count == 2);
    CHECK(stats.sentence_count == 7);
    CHECK(stats.byte_size == 10);

    std::size_t flattened = 0;
    for (const auto& ch : corpus.chapters) flattened += ch.sentences.size();
    CHECK(stats.sentence_count == flattened);
}

TEST_CASE("corpus json round-trips") {
    test_util::TempDir dir;
    test_util::write_file(dir.path() / "01_a.txt", "一。二！三？");
    const auto corpus = load_corpus(dir.path());
    const auto doc = corpus_to_json(corpus);
    const auto back = corpus_from_json(doc);
    CHECK(dump_json(corpus_to_json(back)) == dump_json(doc));
    CHECK(back.chapters[0].sentences.size() == 3);
    CHECK(back.chapters[0].sentences[2].ordinal == 2);
}
