#ifndef CORPUS_LENS_NETWORK_HPP
#define CORPUS_LENS_NETWORK_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "corpus_lens/errors.hpp"
#include "corpus_lens/format.hpp"
#include "corpus_lens/tokenize.hpp"

namespace corpus_lens {

/// Undirected word co-occurrence graph. Edge keys are stored with endpoints
/// in code-point order; node frequency is the token count after POS
/// filtering, sentence_count the number of sentences containing the lemma.
struct CooccurrenceGraph {
    struct Node {
        std::size_t freq = 0;
        std::size_t sentence_count = 0;
    };
    using EdgeKey = std::pair<std::string, std::string>;

    std::map<std::string, Node> nodes;
    std::map<EdgeKey, std::size_t> edges;
    std::size_t total_sentences = 0;

    static EdgeKey edge_key(std::string_view a, std::string_view b) {
        return a <= b ? EdgeKey{std::string(a), std::string(b)} : EdgeKey{std::string(b), std::string(a)};
    }

    std::size_t weight(std::string_view a, std::string_view b) const {
        const auto it = edges.find(edge_key(a, b));
        return it == edges.end() ? 0 : it->second;
    }
};

/// Sentence-window co-occurrence: within each sentence, every unordered pair
/// of distinct lemmas (POS-filtered, deduplicated) gains weight 1. Nodes with
/// frequency below min_node_freq are removed together with incident edges.
inline CooccurrenceGraph build_cooccurrence(const TokenizedCorpus& tokens,
                                            const std::set<std::string>& keep_pos = content_pos_tags(),
                                            std::size_t min_node_freq = 1) {
    if (min_node_freq == 0) throw InvalidArgument("build_cooccurrence: min_node_freq must be >= 1");
    if (keep_pos.empty()) throw InvalidArgument("build_cooccurrence: keep_pos must be non-empty");

    CooccurrenceGraph g;
    std::vector<std::string> uniq;
    for (const auto& ch : tokens.chapters) {
        for (const auto& sent : ch.sentences) {
            ++g.total_sentences;
            uniq.clear();
            for (const auto& tok : sent) {
                if (!keep_pos.count(tok.pos)) continue;
                ++g.nodes[tok.lemma].freq;
                uniq.push_back(tok.lemma);
            }
            std::sort(uniq.begin(), uniq.end());
            uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
            for (const auto& lemma : uniq) ++g.nodes[lemma].sentence_count;
            for (std::size_t i = 0; i < uniq.size(); ++i)
                for (std::size_t j = i + 1; j < uniq.size(); ++j)
                    ++g.edges[CooccurrenceGraph::EdgeKey{uniq[i], uniq[j]}];
        }
    }

    if (min_node_freq > 1) {
        for (auto it = g.nodes.begin(); it != g.nodes.end();) {
            if (it->second.freq < min_node_freq) it = g.nodes.erase(it);
            else ++it;
        }
        for (auto it = g.edges.begin(); it != g.edges.end();) {
            if (!g.nodes.count(it->first.first) || !g.nodes.count(it->first.second)) it = g.edges.erase(it);
            else ++it;
        }
    }
    return g;
}

/// Drops edges below min_edge_weight, optionally restricts to the top_k nodes
/// by frequency (ties by code-point order), and removes nodes left isolated.
inline CooccurrenceGraph prune(const CooccurrenceGraph& g, std::size_t min_edge_weight,
                               std::optional<std::size_t> top_k_nodes = std::nullopt) {
    if (min_edge_weight == 0) throw InvalidArgument("prune: min_edge_weight must be >= 1");

    CooccurrenceGraph out;
    out.total_sentences = g.total_sentences;
    out.nodes = g.nodes;

    if (top_k_nodes) {
        std::vector<std::pair<std::string, CooccurrenceGraph::Node>> ranked(g.nodes.begin(), g.nodes.end());
        std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
            if (a.second.freq != b.second.freq) return a.second.freq > b.second.freq;
            return a.first < b.first;
        });
        if (ranked.size() > *top_k_nodes) ranked.resize(*top_k_nodes);
        out.nodes.clear();
        for (auto& [lemma, node] : ranked) out.nodes.emplace(lemma, node);
    }

    for (const auto& [key, w] : g.edges) {
        if (w < min_edge_weight) continue;
        if (!out.nodes.count(key.first) || !out.nodes.count(key.second)) continue;
        out.edges.emplace(key, w);
    }

    std::set<std::string> connected;
    for (const auto& [key, _] : out.edges) {
        connected.insert(key.first);
        connected.insert(key.second);
    }
    for (auto it = out.nodes.begin(); it != out.nodes.end();) {
        if (!connected.count(it->first)) it = out.nodes.erase(it);
        else ++it;
    }
    return out;
}

/// Pointwise mutual information of an edge under the sentence-occurrence model.
inline double edge_pmi(const CooccurrenceGraph& g, std::string_view a, std::string_view b) {
    const auto w = g.weight(a, b);
    if (w == 0 || g.total_sentences == 0) throw InvalidArgument("edge_pmi: no such edge");
    const auto& na = g.nodes.at(std::string(a));
    const auto& nb = g.nodes.at(std::string(b));
    return std::log(static_cast<double>(w) * static_cast<double>(g.total_sentences) /
                    (static_cast<double>(na.sentence_count) * static_cast<double>(nb.sentence_count)));
}

inline double edge_jaccard(const CooccurrenceGraph& g, std::string_view a, std::string_view b) {
    const auto w = g.weight(a, b);
    if (w == 0) throw InvalidArgument("edge_jaccard: no such edge");
    const auto& na = g.nodes.at(std::string(a));
    const auto& nb = g.nodes.at(std::string(b));
    return static_cast<double>(w) /
           static_cast<double>(na.sentence_count + nb.sentence_count - w);
}

enum class GraphFormat { Dot, GraphML, Json };

inline GraphFormat parse_graph_format(std::string_view name) {
    if (name == "dot") return GraphFormat::Dot;
    if (name == "graphml") return GraphFormat::GraphML;
    if (name == "json") return GraphFormat::Json;
    throw UnsupportedFormat("unsupported graph format: " + std::string(name));
}

struct GraphExportOptions {
    bool pmi = false;     // derived edge attribute
    bool jaccard = false; // derived edge attribute
};

namespace detail {

inline std::string dot_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (const char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

inline std::string xml_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (const char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

}  // namespace detail

/// Deterministic serialization: nodes then edges, both in code-point order.
inline std::string export_graph(const CooccurrenceGraph& g, GraphFormat format,
                                const GraphExportOptions& opts = {}) {
    switch (format) {
        case GraphFormat::Dot: {
            std::string out = "graph G {\n";
            for (const auto& [lemma, node] : g.nodes)
                out += "  \"" + detail::dot_escape(lemma) + "\" [freq=" + std::to_string(node.freq) + "];\n";
            for (const auto& [key, w] : g.edges) {
                out += "  \"" + detail::dot_escape(key.first) + "\" -- \"" + detail::dot_escape(key.second) +
                       "\" [weight=" + std::to_string(w);
                if (opts.pmi) out += ",pmi=" + detail::fmt_double(edge_pmi(g, key.first, key.second));
                if (opts.jaccard) out += ",jaccard=" + detail::fmt_double(edge_jaccard(g, key.first, key.second));
                out += "];\n";
            }
            out += "}\n";
            return out;
        }
        case GraphFormat::GraphML: {
            std::string out =
                "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
                "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
                "  <key id=\"freq\" for=\"node\" attr.name=\"freq\" attr.type=\"long\"/>\n"
                "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"long\"/>\n";
            if (opts.pmi)
                out += "  <key id=\"pmi\" for=\"edge\" attr.name=\"pmi\" attr.type=\"double\"/>\n";
            if (opts.jaccard)
                out += "  <key id=\"jaccard\" for=\"edge\" attr.name=\"jaccard\" attr.type=\"double\"/>\n";
            out += "  <graph id=\"G\" edgedefault=\"undirected\">\n";
            for (const auto& [lemma, node] : g.nodes) {
                out += "    <node id=\"" + detail::xml_escape(lemma) + "\"><data key=\"freq\">" +
                       std::to_string(node.freq) + "</data></node>\n";
            }
            std::size_t eid = 0;
            for (const auto& [key, w] : g.edges) {
                out += "    <edge id=\"e" + std::to_string(eid++) + "\" source=\"" +
                       detail::xml_escape(key.first) + "\" target=\"" + detail::xml_escape(key.second) +
                       "\"><data key=\"weight\">" + std::to_string(w) + "</data>";
                if (opts.pmi)
                    out += "<data key=\"pmi\">" + detail::fmt_double(edge_pmi(g, key.first, key.second)) + "</data>";
                if (opts.jaccard)
                    out += "<data key=\"jaccard\">" + detail::fmt_double(edge_jaccard(g, key.first, key.second)) +
                           "</data>";
                out += "</edge>\n";
            }
            out += "  </graph>\n</graphml>\n";
            return out;
        }
        case GraphFormat::Json: {
            nlohmann::ordered_json doc;
            doc["nodes"] = nlohmann::ordered_json::array();
            doc["edges"] = nlohmann::ordered_json::array();
            for (const auto& [lemma, node] : g.nodes)
                doc["nodes"].push_back({{"id", lemma}, {"freq", node.freq}, {"sentences", node.sentence_count}});
            for (const auto& [key, w] : g.edges) {
                nlohmann::ordered_json e = {{"source", key.first}, {"target", key.second}, {"weight", w}};
                if (opts.pmi) e["pmi"] = edge_pmi(g, key.first, key.second);
                if (opts.jaccard) e["jaccard"] = edge_jaccard(g, key.first, key.second);
                doc["edges"].push_back(std::move(e));
            }
            doc["total_sentences"] = g.total_sentences;
            return doc.dump(2) + "\n";
        }
    }
    throw UnsupportedFormat("unsupported graph format");
}

}  // namespace corpus_lens

#endif
