#ifndef CORPUS_LENS_REPORT_HPP
#define CORPUS_LENS_REPORT_HPP

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "corpus_lens/chart.hpp"
#include "corpus_lens/corpus.hpp"
#include "corpus_lens/errors.hpp"
#include "corpus_lens/hash.hpp"
#include "corpus_lens/io.hpp"
#include "corpus_lens/mds.hpp"
#include "corpus_lens/network.hpp"
#include "corpus_lens/sentiment.hpp"
#include "corpus_lens/stats.hpp"
#include "corpus_lens/tokenize.hpp"
#include "corpus_lens/toml.hpp"

namespace corpus_lens {

enum class TokenizerMode { Lexicon, Import };
enum class MdsMode { Chapters, Terms };

struct RunConfig {
    // corpus
    std::filesystem::path root;
    CorpusLayout layout = CorpusLayout::PerFile;
    std::string delimiter_pattern = R"(^#\s*(.+)$)";
    std::optional<std::string> header_pattern;
    std::optional<std::filesystem::path> manifest;
    std::string source_label;

    // tokenize
    TokenizerMode tokenizer_mode = TokenizerMode::Lexicon;
    std::filesystem::path segmentation_lexicon;
    std::filesystem::path import_path;

    // stats
    std::string freq_pos = "名詞";
    std::size_t freq_top = 30;
    std::size_t keywords_k = 10;
    std::vector<std::string> content_pos = {"名詞", "動詞", "形容詞"};

    // sentiment
    std::filesystem::path polarity_lexicon;
    double bin_width = 0.025;

    // network
    std::size_t min_node_freq = 5;
    std::size_t min_edge_weight = 2;
    std::optional<std::size_t> top_k_nodes;
    GraphFormat graph_format = GraphFormat::Dot;
    bool graph_pmi = false;
    bool graph_jaccard = false;

    // mds
    DistanceMetric mds_metric = DistanceMetric::Cosine;
    VectorWeighting mds_weighting = VectorWeighting::Tfidf;
    bool mds_refine = true;
    MdsMode mds_mode = MdsMode::Chapters;
    std::size_t mds_top_n = 50;

    // output
    std::filesystem::path out_dir;

    std::set<std::string> content_pos_set() const {
        return std::set<std::string>(content_pos.begin(), content_pos.end());
    }
};

inline std::filesystem::path default_out_dir() {
    if (const char* env = std::getenv("CORPUS_LENS_OUT"); env && *env) return env;
    return ".";
}

/// Builds a RunConfig from a parsed TOML table. Relative paths are resolved
/// against base_dir (the config file's directory).
inline RunConfig run_config_from_toml(const toml::Table& t, const std::filesystem::path& base_dir) {
    RunConfig cfg;
    const auto resolve = [&](const std::string& p) -> std::filesystem::path {
        const std::filesystem::path path(p);
        return path.is_absolute() ? path : base_dir / path;
    };

    if (const auto v = t.get_string("source_label")) cfg.source_label = *v;

    if (const auto v = t.get_string("corpus.root")) cfg.root = resolve(*v);
    if (const auto v = t.get_string("corpus.layout")) {
        if (*v == "per-file") cfg.layout = CorpusLayout::PerFile;
        else if (*v == "single-file") cfg.layout = CorpusLayout::SingleFile;
        else throw ConfigError("corpus.layout must be per-file or single-file");
    }
    if (const auto v = t.get_string("corpus.delimiter_pattern")) cfg.delimiter_pattern = *v;
    if (const auto v = t.get_string("corpus.header_pattern")) cfg.header_pattern = *v;
    if (const auto v = t.get_string("corpus.manifest")) cfg.manifest = resolve(*v);

    if (const auto v = t.get_string("tokenize.mode")) {
        if (*v == "lexicon") cfg.tokenizer_mode = TokenizerMode::Lexicon;
        else if (*v == "import") cfg.tokenizer_mode = TokenizerMode::Import;
        else throw ConfigError("tokenize.mode must be lexicon or import");
    }
    if (const auto v = t.get_string("tokenize.lexicon")) cfg.segmentation_lexicon = resolve(*v);
    if (const auto v = t.get_string("tokenize.import")) cfg.import_path = resolve(*v);

    if (const auto v = t.get_string("stats.freq_pos")) cfg.freq_pos = *v;
    if (const auto v = t.get_int("stats.freq_top")) cfg.freq_top = static_cast<std::size_t>(*v);
    if (const auto v = t.get_int("stats.keywords_k")) cfg.keywords_k = static_cast<std::size_t>(*v);
    if (const auto v = t.get_string_array("stats.content_pos")) cfg.content_pos = *v;

    if (const auto v = t.get_string("sentiment.lexicon")) cfg.polarity_lexicon = resolve(*v);
    if (const auto v = t.get_float("sentiment.bin_width")) cfg.bin_width = *v;

    if (const auto v = t.get_int("network.min_node_freq")) cfg.min_node_freq = static_cast<std::size_t>(*v);
    if (const auto v = t.get_int("network.min_edge_weight")) cfg.min_edge_weight = static_cast<std::size_t>(*v);
    if (const auto v = t.get_int("network.top_k_nodes")) cfg.top_k_nodes = static_cast<std::size_t>(*v);
    if (const auto v = t.get_string("network.format")) cfg.graph_format = parse_graph_format(*v);
    if (const auto v = t.get_bool("network.pmi")) cfg.graph_pmi = *v;
    if (const auto v = t.get_bool("network.jaccard")) cfg.graph_jaccard = *v;

    if (const auto v = t.get_string("mds.metric")) cfg.mds_metric = parse_metric(*v);
    if (const auto v = t.get_string("mds.weighting")) {
        if (*v == "tfidf") cfg.mds_weighting = VectorWeighting::Tfidf;
        else if (*v == "counts") cfg.mds_weighting = VectorWeighting::Counts;
        else throw ConfigError("mds.weighting must be tfidf or counts");
    }
    if (const auto v = t.get_bool("mds.refine")) cfg.mds_refine = *v;
    if (const auto v = t.get_string("mds.mode")) {
        if (*v == "chapters") cfg.mds_mode = MdsMode::Chapters;
        else if (*v == "terms") cfg.mds_mode = MdsMode::Terms;
        else throw ConfigError("mds.mode must be chapters or terms");
    }
    if (const auto v = t.get_int("mds.top_n")) cfg.mds_top_n = static_cast<std::size_t>(*v);

    if (const auto v = t.get_string("output.dir")) cfg.out_dir = resolve(*v);
    if (cfg.out_dir.empty()) cfg.out_dir = default_out_dir();
    return cfg;
}

inline RunConfig load_run_config(const std::filesystem::path& config_path) {
    const auto table = toml::Table::parse_file(config_path);
    return run_config_from_toml(table, config_path.parent_path());
}

/// Full validation up front: every referenced path must exist and every
/// numeric parameter must be in range before any stage runs.
inline void validate_config(const RunConfig& cfg) {
    namespace fs = std::filesystem;
    std::vector<std::string> problems;
    if (cfg.root.empty()) problems.push_back("corpus.root is required");
    else if (!fs::exists(cfg.root)) problems.push_back("corpus root does not exist: " + cfg.root.string());
    if (cfg.manifest && !fs::exists(*cfg.manifest))
        problems.push_back("corpus manifest does not exist: " + cfg.manifest->string());

    if (cfg.tokenizer_mode == TokenizerMode::Lexicon) {
        if (cfg.segmentation_lexicon.empty()) problems.push_back("tokenize.lexicon is required in lexicon mode");
        else if (!fs::exists(cfg.segmentation_lexicon))
            problems.push_back("segmentation lexicon does not exist: " + cfg.segmentation_lexicon.string());
    } else {
        if (cfg.import_path.empty()) problems.push_back("tokenize.import is required in import mode");
        else if (!fs::exists(cfg.import_path))
            problems.push_back("token stream does not exist: " + cfg.import_path.string());
    }

    if (cfg.polarity_lexicon.empty()) problems.push_back("sentiment.lexicon is required");
    else if (!fs::exists(cfg.polarity_lexicon))
        problems.push_back("polarity lexicon does not exist: " + cfg.polarity_lexicon.string());

    if (cfg.freq_pos.empty()) problems.push_back("stats.freq_pos must be non-empty");
    if (cfg.freq_top == 0) problems.push_back("stats.freq_top must be >= 1");
    if (cfg.keywords_k == 0) problems.push_back("stats.keywords_k must be >= 1");
    if (cfg.content_pos.empty()) problems.push_back("stats.content_pos must be non-empty");
    if (!(cfg.bin_width > 0.0) || cfg.bin_width > 2.0)
        problems.push_back("sentiment.bin_width must be in (0, 2]");
    if (cfg.min_node_freq == 0) problems.push_back("network.min_node_freq must be >= 1");
    if (cfg.min_edge_weight == 0) problems.push_back("network.min_edge_weight must be >= 1");
    if (cfg.mds_top_n == 0) problems.push_back("mds.top_n must be >= 1");
    if (cfg.out_dir.empty()) problems.push_back("output.dir must be non-empty");

    if (!problems.empty()) {
        std::string msg = "invalid run configuration:";
        for (const auto& p : problems) msg += "\n  - " + p;
        throw ConfigError(msg);
    }
}

struct ManifestEntry {
    std::string path; // relative to out_dir
    std::size_t bytes = 0;
    std::string sha256;
};

struct RunManifest {
    std::vector<ManifestEntry> entries; // sorted by path
};

inline Json manifest_to_json(const RunManifest& m) {
    Json doc;
    doc["artifacts"] = Json::array();
    for (const auto& e : m.entries)
        doc["artifacts"].push_back(Json{{"path", e.path}, {"bytes", e.bytes}, {"sha256", e.sha256}});
    return doc;
}

namespace detail {

class ArtifactWriter {
public:
    explicit ArtifactWriter(std::filesystem::path out_dir, std::ostream* log)
        : out_dir_(std::move(out_dir)), log_(log) {}

    void emit(const std::string& name, std::string_view content) {
        write_file(out_dir_ / name, content);
        manifest_.entries.push_back(ManifestEntry{name, content.size(), sha256_hex(content)});
        if (log_) *log_ << "wrote " << (out_dir_ / name).string() << " (" << content.size() << " bytes)\n";
    }

    RunManifest finish() {
        std::sort(manifest_.entries.begin(), manifest_.entries.end(),
                  [](const ManifestEntry& a, const ManifestEntry& b) { return a.path < b.path; });
        // the manifest lists every artifact but not itself
        const auto content = dump_json(manifest_to_json(manifest_));
        write_file(out_dir_ / "manifest.json", content);
        if (log_) *log_ << "wrote " << (out_dir_ / "manifest.json").string() << " (" << content.size()
                        << " bytes)\n";
        return std::move(manifest_);
    }

private:
    std::filesystem::path out_dir_;
    std::ostream* log_;
    RunManifest manifest_;
};

template <typename Fn>
auto stage(const char* name, Fn&& fn) {
    try {
        return fn();
    } catch (const PipelineError&) {
        throw;
    } catch (const std::exception& e) {
        throw PipelineError(name, e.what());
    }
}

inline std::string graph_file_name(GraphFormat format) {
    switch (format) {
        case GraphFormat::Dot: return "graph.dot";
        case GraphFormat::GraphML: return "graph.graphml";
        case GraphFormat::Json: return "graph.json";
    }
    return "graph.dot";
}

}  // namespace detail

/// Executes ingest -> tokenize -> {freq, tfidf, sentiment, network, mds} ->
/// charts and writes every artifact plus manifest.json into cfg.out_dir.
/// Any stage failure aborts with the stage named in the error.
inline RunManifest run_pipeline(const RunConfig& cfg, std::ostream* log = nullptr) {
    validate_config(cfg);
    std::filesystem::create_directories(cfg.out_dir);
    detail::ArtifactWriter out(cfg.out_dir, log);

    const Corpus corpus = detail::stage("ingest", [&] {
        LoadOptions opts;
        opts.layout = cfg.layout;
        opts.delimiter_pattern = cfg.delimiter_pattern;
        opts.header_pattern = cfg.header_pattern;
        opts.manifest = cfg.manifest;
        opts.source_label = cfg.source_label;
        auto c = load_corpus(cfg.root, opts);
        out.emit("corpus.json", dump_json(corpus_to_json(c)));
        return c;
    });

    const TokenizedCorpus tokens = detail::stage("tokenize", [&] {
        TokenizedCorpus t;
        if (cfg.tokenizer_mode == TokenizerMode::Lexicon) {
            const auto lexicon = SegmentationLexicon::load(cfg.segmentation_lexicon);
            t = tokenize_corpus(corpus, lexicon);
        } else {
            t = import_tokens(corpus_lens::detail::read_file_utf8(cfg.import_path), corpus);
        }
        out.emit("tokens.json", dump_json(tokens_to_json(t)));
        return t;
    });

    detail::stage("freq", [&] {
        const auto table = pos_frequency(tokens, cfg.freq_pos, cfg.freq_top);
        out.emit("freq.csv", frequency_csv(table));
        ChartSpec spec;
        spec.kind = ChartKind::Bar;
        spec.title = cfg.freq_pos + " frequency (top " + std::to_string(cfg.freq_top) + ")";
        spec.x_label = "lemma";
        spec.y_label = "count";
        for (const auto& row : table.rows) {
            spec.categories.push_back(row.lemma);
            spec.values.push_back(static_cast<double>(row.count));
        }
        out.emit("freq.svg", render_chart(spec));
        return 0;
    });

    const TermDocMatrix matrix = detail::stage("tfidf", [&] {
        auto m = TermDocMatrix::build(tokens, cfg.content_pos_set());
        out.emit("keywords.csv", keywords_csv(chapter_keywords(m, cfg.keywords_k)));
        return m;
    });

    detail::stage("sentiment", [&] {
        const auto lexicon = PolarityLexicon::load(cfg.polarity_lexicon);
        const auto scores = score_corpus(tokens, lexicon);
        const auto hist = histogram(scores, cfg.bin_width);
        const auto series = chapter_series(tokens, scores);
        out.emit("hist.csv", histogram_csv(hist));
        out.emit("series.csv", series_csv(series));
        out.emit("summary.json",
                 dump_json(sentiment_summary_json(tokens.sentence_count(), scores,
                                                  word_polarity_counts(tokens, lexicon), lexicon)));

        ChartSpec hist_spec;
        hist_spec.kind = ChartKind::Histogram;
        hist_spec.title = "Sentence polarity distribution";
        hist_spec.x_label = "P/N score";
        hist_spec.y_label = "sentences";
        hist_spec.bin_lo = -1.0;
        hist_spec.bin_width = hist.bin_width;
        for (const auto c : hist.counts) hist_spec.values.push_back(static_cast<double>(c));
        out.emit("hist.svg", render_chart(hist_spec));

        ChartSpec series_spec;
        series_spec.kind = ChartKind::Line;
        series_spec.title = "Chapter mean polarity";
        series_spec.x_label = "chapter";
        series_spec.y_label = "mean P/N score";
        for (const auto& row : series.rows) {
            series_spec.xs.push_back(static_cast<double>(row.chapter_index));
            series_spec.ys.push_back(row.mean_score);
        }
        out.emit("series.svg", render_chart(series_spec));
        return 0;
    });

    detail::stage("network", [&] {
        auto graph = build_cooccurrence(tokens, cfg.content_pos_set(), cfg.min_node_freq);
        graph = prune(graph, cfg.min_edge_weight, cfg.top_k_nodes);
        GraphExportOptions gopts;
        gopts.pmi = cfg.graph_pmi;
        gopts.jaccard = cfg.graph_jaccard;
        out.emit(detail::graph_file_name(cfg.graph_format), export_graph(graph, cfg.graph_format, gopts));
        return 0;
    });

    detail::stage("mds", [&] {
        const auto dm = cfg.mds_mode == MdsMode::Chapters
                            ? chapter_dissimilarity(matrix, cfg.mds_metric, cfg.mds_weighting)
                            : term_dissimilarity(matrix, cfg.mds_top_n, cfg.mds_metric, cfg.mds_weighting);
        const auto classical = classical_mds(dm);
        Embedding2D embedding = classical;
        if (cfg.mds_refine && dm.size() >= 2) embedding = smacof(dm, classical);
        out.emit("coords.csv", coords_csv(embedding));

        Json diag;
        diag["points"] = dm.size();
        diag["eigenvalues"] = classical.eigenvalues;
        diag["negative_eigenvalue_mass"] = classical.negative_eigenvalue_mass;
        diag["classical_stress"] = stress(dm, classical);
        diag["refined"] = cfg.mds_refine;
        diag["stress"] = cfg.mds_refine ? embedding.stress : stress(dm, classical);
        diag["iterations"] = embedding.iterations;
        out.emit("diagnostics.json", dump_json(diag));

        ChartSpec spec;
        spec.kind = ChartKind::Scatter;
        spec.title = cfg.mds_mode == MdsMode::Chapters ? "Chapter MDS map" : "Term MDS map";
        spec.x_label = "dimension 1";
        spec.y_label = "dimension 2";
        for (std::size_t i = 0; i < embedding.size(); ++i) {
            spec.xs.push_back(embedding.coords[i][0]);
            spec.ys.push_back(embedding.coords[i][1]);
            spec.point_labels.push_back(embedding.labels[i]);
        }
        out.emit("coords.svg", render_chart(spec));
        return 0;
    });

    return detail::stage("manifest", [&] { return out.finish(); });
}

}  // namespace corpus_lens

#endif
