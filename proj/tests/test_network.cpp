#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>

#include <json.hpp>

#include "corpus_lens/network.hpp"
#include "test_util.hpp"

using namespace corpus_lens;

namespace {

TokenizedCorpus sentences_of(const std::vector<std::vector<std::string>>& sentences) {
    TokenizedCorpus tokens;
    TokenizedChapter ch;
    ch.index = 1;
    for (const auto& sent : sentences) {
        std::vector<Token> toks;
        for (const auto& w : sent) toks.push_back(Token{w, "名詞", w});
        ch.sentences.push_back(std::move(toks));
    }
    tokens.chapters.push_back(std::move(ch));
    return tokens;
}

}  // namespace

TEST_CASE("co-occurrence counts sentence-level pairs") {
    const auto g = build_cooccurrence(sentences_of({{"a", "b", "c"}, {"a", "b"}}), {"名詞"}, 1);
    CHECK(g.weight("a", "b") == 2);
    CHECK(g.weight("b", "a") == 2); // symmetric lookup
    CHECK(g.weight("a", "c") == 1);
    CHECK(g.weight("b", "c") == 1);
    CHECK(g.nodes.size() == 3);
    CHECK(g.nodes.at("a").freq == 2);
    CHECK(g.nodes.at("a").sentence_count == 2);
    CHECK(g.total_sentences == 2);
}

TEST_CASE("single-token sentences produce no edges") {
    const auto g = build_cooccurrence(sentences_of({{"a"}, {"b"}, {"c"}}), {"名詞"}, 1);
    CHECK(g.edges.empty());
    CHECK(g.nodes.size() == 3);
}

TEST_CASE("within-sentence duplicates are deduplicated and self-loops excluded") {
    const auto g = build_cooccurrence(sentences_of({{"a", "a", "b"}}), {"名詞"}, 1);
    CHECK(g.weight("a", "b") == 1);
    CHECK(g.edges.size() == 1);
    CHECK(g.weight("a", "a") == 0);
    CHECK(g.nodes.at("a").freq == 2); // token frequency still counts both
    CHECK(g.nodes.at("a").sentence_count == 1);
}

TEST_CASE("min_node_freq removes rare nodes and their edges") {
    const auto g = build_cooccurrence(sentences_of({{"a", "b"}, {"a", "b"}, {"a", "c"}}), {"名詞"}, 2);
    CHECK(g.nodes.count("c") == 0);
    CHECK(g.weight("a", "c") == 0);
    CHECK(g.weight("a", "b") == 2);
}

TEST_CASE("prune drops light edges and isolated nodes") {
    const auto g = build_cooccurrence(sentences_of({{"a", "b", "c"}, {"a", "b"}}), {"名詞"}, 1);

    const auto heavy = prune(g, 2);
    CHECK(heavy.edges.size() == 1);
    CHECK(heavy.weight("a", "b") == 2);
    CHECK(heavy.nodes.size() == 2); // c became isolated and was dropped

    const auto same = prune(g, 1);
    CHECK(same.edges == g.edges);
    CHECK(same.nodes.size() == g.nodes.size());

    const auto none = prune(g, 1, std::size_t{0});
    CHECK(none.nodes.empty());
    CHECK(none.edges.empty());

    SECTION("top_k keeps the most frequent nodes, ties lexicographic") {
        const auto top2 = prune(g, 1, std::size_t{2});
        // freqs: a=2, b=2, c=1 -> keep a and b
        CHECK(top2.nodes.size() == 2);
        CHECK(top2.nodes.count("a") == 1);
        CHECK(top2.nodes.count("b") == 1);
        CHECK(top2.edges.size() == 1);
    }
    SECTION("pruning never increases counts") {
        const auto p = prune(g, 2, std::size_t{5});
        CHECK(p.nodes.size() <= g.nodes.size());
        CHECK(p.edges.size() <= g.edges.size());
    }
}

TEST_CASE("edge weights match brute-force sentence pair counts") {
    std::mt19937 rng(41);
    std::uniform_int_distribution<std::size_t> n_sent(1, 50);
    std::uniform_int_distribution<std::size_t> sent_len(0, 6);
    std::uniform_int_distribution<std::size_t> vocab(0, 7);

    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::vector<std::string>> sentences(n_sent(rng));
        for (auto& sent : sentences) {
            const auto len = sent_len(rng);
            for (std::size_t i = 0; i < len; ++i) sent.push_back("w" + std::to_string(vocab(rng)));
        }
        const auto g = build_cooccurrence(sentences_of(sentences), {"名詞"}, 1);

        // brute force: for every pair, count sentences containing both
        for (int a = 0; a < 8; ++a) {
            for (int b = a + 1; b < 8; ++b) {
                const std::string wa = "w" + std::to_string(a);
                const std::string wb = "w" + std::to_string(b);
                std::size_t expected = 0;
                for (const auto& sent : sentences) {
                    const bool has_a = std::find(sent.begin(), sent.end(), wa) != sent.end();
                    const bool has_b = std::find(sent.begin(), sent.end(), wb) != sent.end();
                    if (has_a && has_b) ++expected;
                }
                CHECK(g.weight(wa, wb) == expected);
            }
        }
    }
}

TEST_CASE("DOT export is deterministic and quotes labels") {
    const auto g = build_cooccurrence(sentences_of({{"光", "影"}}), {"名詞"}, 1);
    const auto dot = export_graph(g, GraphFormat::Dot);
    CHECK(dot.find("graph G {") == 0);
    // canonical endpoint order: 光 (U+5149) precedes 影 (U+5F71)
    CHECK(dot.find("\"影\" -- \"光\"") == std::string::npos);
    CHECK(dot.find("\"光\" -- \"影\" [weight=1]") != std::string::npos);

    std::size_t edge_statements = 0;
    for (std::size_t pos = 0; (pos = dot.find("--", pos)) != std::string::npos; ++pos) ++edge_statements;
    CHECK(edge_statements == 1);

    CHECK(export_graph(g, GraphFormat::Dot) == dot); // byte identical across calls
}

TEST_CASE("empty graph exports are valid in every format") {
    const CooccurrenceGraph g;
    CHECK(export_graph(g, GraphFormat::Dot) == "graph G {\n}\n");
    CHECK(export_graph(g, GraphFormat::GraphML).find("<graphml") != std::string::npos);
    const auto parsed = nlohmann::json::parse(export_graph(g, GraphFormat::Json));
    CHECK(parsed["nodes"].empty());
    CHECK(parsed["edges"].empty());
}

TEST_CASE("every export format is byte-identical across calls") {
    const auto g = build_cooccurrence(sentences_of({{"a", "b", "c"}, {"b", "c"}}), {"名詞"}, 1);
    for (const auto format : {GraphFormat::Dot, GraphFormat::GraphML, GraphFormat::Json})
        CHECK(export_graph(g, format) == export_graph(g, format));
}

TEST_CASE("JSON export round-trips node and edge multisets") {
    const auto g = build_cooccurrence(sentences_of({{"a", "b", "c"}, {"a", "b"}}), {"名詞"}, 1);
    const auto parsed = nlohmann::json::parse(export_graph(g, GraphFormat::Json));
    REQUIRE(parsed["nodes"].size() == g.nodes.size());
    REQUIRE(parsed["edges"].size() == g.edges.size());
    std::map<std::pair<std::string, std::string>, std::size_t> seen;
    for (const auto& e : parsed["edges"])
        seen[{e["source"].get<std::string>(), e["target"].get<std::string>()}] = e["weight"].get<std::size_t>();
    for (const auto& [key, w] : g.edges) {
        REQUIRE(seen.count(key) == 1);
        CHECK(seen.at(key) == w);
    }
}

TEST_CASE("graphml export carries the weight key") {
    const auto g = build_cooccurrence(sentences_of({{"a", "b"}}), {"名詞"}, 1);
    const auto xml = export_graph(g, GraphFormat::GraphML);
    CHECK(xml.find("attr.name=\"weight\"") != std::string::npos);
    CHECK(xml.find("<data key=\"weight\">1</data>") != std::string::npos);
}

TEST_CASE("pmi and jaccard derived attributes") {
    // 3 sentences; a appears in 2, b in 2, together in 1
    const auto g = build_cooccurrence(sentences_of({{"a", "b"}, {"a"}, {"b"}}), {"名詞"}, 1);
    CHECK(edge_pmi(g, "a", "b") == Catch::Approx(std::log(1.0 * 3.0 / (2.0 * 2.0))).margin(1e-15));
    CHECK(edge_jaccard(g, "a", "b") == Catch::Approx(1.0 / 3.0).margin(1e-15));

    const auto dot = export_graph(g, GraphFormat::Dot, GraphExportOptions{true, true});
    CHECK(dot.find("pmi=") != std::string::npos);
    CHECK(dot.find("jaccard=") != std::string::npos);
}

TEST_CASE("unsupported format name") {
    CHECK_THROWS_AS(parse_graph_format("gexf"), UnsupportedFormat);
}
