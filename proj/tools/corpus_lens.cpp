// corpus-lens: corpus analytics CLI (ingest, tokenize, frequency/TF-IDF,
// sentiment, co-occurrence network, MDS, full pipeline runs).

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "corpus_lens/corpus_lens.hpp"

namespace fs = std::filesystem;
using namespace corpus_lens;

namespace {

struct GlobalFlags {
    bool quiet = false;
};

std::ostream* log_stream(const GlobalFlags& g) { return g.quiet ? nullptr : &std::cerr; }

void info(const GlobalFlags& g, const std::string& msg) {
    if (!g.quiet) std::cerr << msg << "\n";
}

/// Relative output paths land under $CORPUS_LENS_OUT when it is set.
fs::path out_path(const std::string& p) {
    fs::path path(p);
    if (path.is_absolute()) return path;
    if (const char* env = std::getenv("CORPUS_LENS_OUT"); env && *env) {
        fs::create_directories(env);
        return fs::path(env) / path;
    }
    return path;
}

int exit_code_for(const Error& e) {
    if (dynamic_cast<const PipelineError*>(&e) != nullptr) return 2;
    if (dynamic_cast<const NonConvergence*>(&e) != nullptr) return 2;
    if (dynamic_cast<const EmptyDocument*>(&e) != nullptr) return 2;
    if (dynamic_cast<const NoScoredSentences*>(&e) != nullptr) return 2;
    if (dynamic_cast<const EmptySeries*>(&e) != nullptr) return 2;
    return 1; // input/validation problem
}

TokenizedCorpus load_tokens_file(const std::string& path) {
    return tokens_from_json(read_json(path));
}

std::set<std::string> pos_set(const std::vector<std::string>& list) {
    return list.empty() ? content_pos_tags() : std::set<std::string>(list.begin(), list.end());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"corpus-lens: chaptered-corpus analytics"};
    app.set_version_flag("--version", std::string("corpus-lens ") + kVersion);
    GlobalFlags global;
    app.add_flag("--quiet,-q", global.quiet, "Suppress progress output");
    app.require_subcommand(1);

    // ---------------------------------------------------------------- ingest
    auto* ingest = app.add_subcommand("ingest", "Load a corpus directory into corpus.json");
    std::string ingest_root, ingest_layout = "per-file", ingest_out = "corpus.json";
    std::string ingest_delim, ingest_header, ingest_manifest, ingest_label;
    ingest->add_option("--root", ingest_root, "Corpus root (directory, or file for single-file layout)")
        ->required();
    ingest->add_option("--layout", ingest_layout, "per-file | single-file")
        ->check(CLI::IsMember({"per-file", "single-file"}));
    ingest->add_option("--delimiter-pattern", ingest_delim, "Chapter delimiter line regex (single-file layout)");
    ingest->add_option("--header-pattern", ingest_header, "Regex for header lines to drop");
    ingest->add_option("--manifest", ingest_manifest, "JSON manifest mapping index -> file -> title");
    ingest->add_option("--label", ingest_label, "Source label stored in the corpus");
    ingest->add_option("--out", ingest_out, "Output corpus JSON path");

    // -------------------------------------------------------------- tokenize
    auto* tokenize = app.add_subcommand("tokenize", "Produce tokens.json from a corpus");
    std::string tok_corpus, tok_lexicon, tok_import, tok_out = "tokens.json";
    tokenize->add_option("--corpus", tok_corpus, "corpus.json from ingest")->required();
    auto* opt_lex = tokenize->add_option("--lexicon", tok_lexicon, "Segmentation lexicon TSV (longest match)");
    auto* opt_imp = tokenize->add_option("--import", tok_import, "Pre-tokenized interchange stream");
    opt_lex->excludes(opt_imp);
    tokenize->add_option("--out", tok_out, "Output tokens JSON path");

    // ------------------------------------------------------------------ freq
    auto* freq = app.add_subcommand("freq", "Per-POS lemma frequency table");
    std::string freq_tokens, freq_pos = "名詞", freq_out = "freq.csv", freq_svg;
    std::size_t freq_top = 30;
    freq->add_option("--tokens", freq_tokens, "tokens.json")->required();
    freq->add_option("--pos", freq_pos, "POS tag to count");
    freq->add_option("--top", freq_top, "Number of rows");
    freq->add_option("--out", freq_out, "Output CSV path");
    freq->add_option("--svg", freq_svg, "Also render a bar chart to this path");

    // ----------------------------------------------------------------- tfidf
    auto* tfidf_cmd = app.add_subcommand("tfidf", "Per-chapter TF-IDF keywords");
    std::string tfidf_tokens, tfidf_out = "keywords.csv";
    std::size_t tfidf_k = 10;
    std::vector<std::string> tfidf_pos;
    tfidf_cmd->add_option("--tokens", tfidf_tokens, "tokens.json")->required();
    tfidf_cmd->add_option("--k", tfidf_k, "Keywords per chapter");
    tfidf_cmd->add_option("--pos", tfidf_pos, "Vocabulary POS tags (default 名詞 動詞 形容詞)");
    tfidf_cmd->add_option("--out", tfidf_out, "Output CSV path");

    // ------------------------------------------------------------- sentiment
    auto* senti = app.add_subcommand("sentiment", "Polarity scoring, histogram and chapter series");
    std::string senti_tokens, senti_lexicon;
    std::string senti_hist = "hist.csv", senti_series = "series.csv", senti_summary = "summary.json";
    std::string senti_hist_svg, senti_series_svg;
    double senti_bin_width = 0.025;
    senti->add_option("--tokens", senti_tokens, "tokens.json")->required();
    senti->add_option("--lexicon", senti_lexicon, "Polarity lexicon (surface:reading:POS:score)")->required();
    senti->add_option("--bin-width", senti_bin_width, "Histogram bin width");
    senti->add_option("--out-hist", senti_hist, "Histogram CSV path");
    senti->add_option("--out-series", senti_series, "Chapter series CSV path");
    senti->add_option("--out-summary", senti_summary, "Summary JSON path");
    senti->add_option("--svg-hist", senti_hist_svg, "Also render the histogram to this path");
    senti->add_option("--svg-series", senti_series_svg, "Also render the chapter curve to this path");

    // --------------------------------------------------------------- network
    auto* net = app.add_subcommand("network", "Word co-occurrence graph export");
    std::string net_tokens, net_format = "dot", net_out = "graph.dot";
    std::size_t net_min_node = 5, net_min_edge = 2;
    std::optional<std::size_t> net_top_k;
    std::vector<std::string> net_pos;
    bool net_pmi = false, net_jaccard = false;
    net->add_option("--tokens", net_tokens, "tokens.json")->required();
    net->add_option("--min-node-freq", net_min_node, "Minimum lemma frequency");
    net->add_option("--min-edge-weight", net_min_edge, "Minimum co-occurrence count");
    net->add_option("--top-k-nodes", net_top_k, "Keep only the k most frequent nodes");
    net->add_option("--pos", net_pos, "POS tags to keep (default 名詞 動詞 形容詞)");
    net->add_option("--format", net_format, "dot | graphml | json")
        ->check(CLI::IsMember({"dot", "graphml", "json"}));
    net->add_flag("--pmi", net_pmi, "Attach PMI edge attributes");
    net->add_flag("--jaccard", net_jaccard, "Attach Jaccard edge attributes");
    net->add_option("--out", net_out, "Output graph path");

    // ------------------------------------------------------------------- mds
    auto* mds = app.add_subcommand("mds", "2-D embedding of chapters (or terms)");
    std::string mds_tokens, mds_metric = "cosine", mds_weighting = "tfidf", mds_refine = "smacof";
    std::string mds_mode = "chapters", mds_out = "coords.csv", mds_svg;
    std::size_t mds_top_n = 50;
    mds->add_option("--tokens", mds_tokens, "tokens.json")->required();
    mds->add_option("--metric", mds_metric, "cosine | euclidean")
        ->check(CLI::IsMember({"cosine", "euclidean"}));
    mds->add_option("--weighting", mds_weighting, "tfidf | counts")
        ->check(CLI::IsMember({"tfidf", "counts"}));
    mds->add_option("--refine", mds_refine, "smacof | none")->check(CLI::IsMember({"smacof", "none"}));
    mds->add_option("--mode", mds_mode, "chapters | terms")->check(CLI::IsMember({"chapters", "terms"}));
    mds->add_option("--top-n", mds_top_n, "Terms to embed in terms mode");
    mds->add_option("--out", mds_out, "Output coordinates CSV (diagnostics.json written alongside)");
    mds->add_option("--svg", mds_svg, "Also render the scatter to this path");

    // ------------------------------------------------------------------- run
    auto* run = app.add_subcommand("run", "Full pipeline from a TOML config");
    std::string run_config;
    std::string run_root, run_layout, run_lexicon, run_import, run_pn, run_out_dir, run_label;
    std::string run_freq_pos, run_graph_format, run_metric, run_weighting, run_mds_mode, run_delim;
    std::vector<std::string> run_content_pos;
    std::optional<std::size_t> run_freq_top, run_k, run_min_node, run_min_edge, run_top_k, run_mds_top_n;
    std::optional<double> run_bin_width;
    std::optional<bool> run_refine;
    std::string run_header, run_manifest;
    std::optional<bool> run_pmi, run_jaccard;
    run->add_option("--config", run_config, "Run configuration (TOML)")->required();
    run->add_option("--root", run_root, "Override corpus root");
    run->add_option("--layout", run_layout, "Override corpus layout")
        ->check(CLI::IsMember({"per-file", "single-file"}));
    run->add_option("--delimiter-pattern", run_delim, "Override chapter delimiter regex");
    run->add_option("--header-pattern", run_header, "Override header-line regex");
    run->add_option("--manifest", run_manifest, "Override corpus manifest path");
    run->add_option("--pmi", run_pmi, "Override PMI edge attribute emission (true/false)");
    run->add_option("--jaccard", run_jaccard, "Override Jaccard edge attribute emission (true/false)");
    run->add_option("--lexicon", run_lexicon, "Override segmentation lexicon");
    run->add_option("--import", run_import, "Override token import stream (switches mode to import)");
    run->add_option("--pn-lexicon", run_pn, "Override polarity lexicon");
    run->add_option("--freq-pos", run_freq_pos, "Override frequency POS");
    run->add_option("--freq-top", run_freq_top, "Override frequency top-N");
    run->add_option("--k", run_k, "Override keywords per chapter");
    run->add_option("--content-pos", run_content_pos, "Override content POS set");
    run->add_option("--bin-width", run_bin_width, "Override histogram bin width");
    run->add_option("--min-node-freq", run_min_node, "Override network node threshold");
    run->add_option("--min-edge-weight", run_min_edge, "Override network edge threshold");
    run->add_option("--top-k-nodes", run_top_k, "Override network top-k nodes");
    run->add_option("--graph-format", run_graph_format, "Override graph format")
        ->check(CLI::IsMember({"dot", "graphml", "json"}));
    run->add_option("--metric", run_metric, "Override MDS metric")
        ->check(CLI::IsMember({"cosine", "euclidean"}));
    run->add_option("--weighting", run_weighting, "Override MDS weighting")
        ->check(CLI::IsMember({"tfidf", "counts"}));
    run->add_option("--refine", run_refine, "Override MDS refinement (true/false)");
    run->add_option("--mds-mode", run_mds_mode, "Override MDS mode")
        ->check(CLI::IsMember({"chapters", "terms"}));
    run->add_option("--mds-top-n", run_mds_top_n, "Override MDS terms top-N");
    run->add_option("--out-dir", run_out_dir, "Override output directory");
    run->add_option("--label", run_label, "Override source label");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e); // 0 for --help / --version
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*ingest) {
            LoadOptions opts;
            opts.layout = ingest_layout == "single-file" ? CorpusLayout::SingleFile : CorpusLayout::PerFile;
            if (!ingest_delim.empty()) opts.delimiter_pattern = ingest_delim;
            if (!ingest_header.empty()) opts.header_pattern = ingest_header;
            if (!ingest_manifest.empty()) opts.manifest = ingest_manifest;
            opts.source_label = ingest_label;
            const auto corpus = load_corpus(ingest_root, opts);
            write_file(out_path(ingest_out), dump_json(corpus_to_json(corpus)));
            const auto stats = corpus_stats(corpus);
            info(global, "ingested " + std::to_string(stats.chapter_count) + " chapters, " +
                             std::to_string(stats.sentence_count) + " sentences, " +
                             std::to_string(stats.byte_size) + " bytes -> " + ingest_out);
        } else if (*tokenize) {
            if (tok_lexicon.empty() && tok_import.empty())
                throw ConfigError("tokenize: one of --lexicon or --import is required");
            const auto corpus = corpus_from_json(read_json(tok_corpus));
            TokenizedCorpus tokens;
            if (!tok_lexicon.empty()) {
                tokens = tokenize_corpus(corpus, SegmentationLexicon::load(tok_lexicon));
            } else {
                tokens = import_tokens(detail::read_file_utf8(tok_import), corpus);
            }
            write_file(out_path(tok_out), dump_json(tokens_to_json(tokens)));
            info(global, "tokenized " + std::to_string(tokens.sentence_count()) + " sentences, " +
                             std::to_string(tokens.token_count()) + " tokens -> " + tok_out);
        } else if (*freq) {
            const auto tokens = load_tokens_file(freq_tokens);
            const auto table = pos_frequency(tokens, freq_pos, freq_top);
            write_file(out_path(freq_out), frequency_csv(table));
            if (!freq_svg.empty()) {
                ChartSpec spec;
                spec.kind = ChartKind::Bar;
                spec.title = freq_pos + " frequency (top " + std::to_string(freq_top) + ")";
                spec.x_label = "lemma";
                spec.y_label = "count";
                for (const auto& row : table.rows) {
                    spec.categories.push_back(row.lemma);
                    spec.values.push_back(static_cast<double>(row.count));
                }
                write_file(out_path(freq_svg), render_chart(spec));
            }
            info(global, "wrote " + std::to_string(table.rows.size()) + " rows -> " + freq_out);
        } else if (*tfidf_cmd) {
            const auto tokens = load_tokens_file(tfidf_tokens);
            const auto matrix = TermDocMatrix::build(tokens, pos_set(tfidf_pos));
            const auto lists = chapter_keywords(matrix, tfidf_k);
            write_file(out_path(tfidf_out), keywords_csv(lists));
            info(global, "wrote keywords for " + std::to_string(lists.size()) + " chapters -> " + tfidf_out);
        } else if (*senti) {
            const auto tokens = load_tokens_file(senti_tokens);
            const auto lexicon = PolarityLexicon::load(senti_lexicon);
            const auto scores = score_corpus(tokens, lexicon);
            const auto hist = histogram(scores, senti_bin_width);
            const auto series = chapter_series(tokens, scores);
            write_file(out_path(senti_hist), histogram_csv(hist));
            write_file(out_path(senti_series), series_csv(series));
            write_file(out_path(senti_summary),
                       dump_json(sentiment_summary_json(tokens.sentence_count(), scores,
                                                        word_polarity_counts(tokens, lexicon), lexicon)));
            if (!senti_hist_svg.empty()) {
                ChartSpec spec;
                spec.kind = ChartKind::Histogram;
                spec.title = "Sentence polarity distribution";
                spec.x_label = "P/N score";
                spec.y_label = "sentences";
                spec.bin_lo = -1.0;
                spec.bin_width = hist.bin_width;
                for (const auto c : hist.counts) spec.values.push_back(static_cast<double>(c));
                write_file(out_path(senti_hist_svg), render_chart(spec));
            }
            if (!senti_series_svg.empty()) {
                ChartSpec spec;
                spec.kind = ChartKind::Line;
                spec.title = "Chapter mean polarity";
                spec.x_label = "chapter";
                spec.y_label = "mean P/N score";
                for (const auto& row : series.rows) {
                    spec.xs.push_back(static_cast<double>(row.chapter_index));
                    spec.ys.push_back(row.mean_score);
                }
                write_file(out_path(senti_series_svg), render_chart(spec));
            }
            info(global, "scored " + std::to_string(hist.total()) + " of " +
                             std::to_string(tokens.sentence_count()) + " sentences");
        } else if (*net) {
            const auto tokens = load_tokens_file(net_tokens);
            auto graph = build_cooccurrence(tokens, pos_set(net_pos), net_min_node);
            graph = prune(graph, net_min_edge, net_top_k);
            GraphExportOptions gopts;
            gopts.pmi = net_pmi;
            gopts.jaccard = net_jaccard;
            write_file(out_path(net_out), export_graph(graph, parse_graph_format(net_format), gopts));
            info(global, "graph: " + std::to_string(graph.nodes.size()) + " nodes, " +
                             std::to_string(graph.edges.size()) + " edges -> " + net_out);
        } else if (*mds) {
            const auto tokens = load_tokens_file(mds_tokens);
            const auto matrix = TermDocMatrix::build(tokens);
            const auto metric = parse_metric(mds_metric);
            const auto weighting = mds_weighting == "counts" ? VectorWeighting::Counts : VectorWeighting::Tfidf;
            const auto dm = mds_mode == "terms" ? term_dissimilarity(matrix, mds_top_n, metric, weighting)
                                                : chapter_dissimilarity(matrix, metric, weighting);
            const auto classical = classical_mds(dm);
            Embedding2D embedding = classical;
            const bool refine = mds_refine == "smacof";
            if (refine) embedding = smacof(dm, classical);
            const auto out_file = out_path(mds_out);
            write_file(out_file, coords_csv(embedding));

            Json diag;
            diag["points"] = dm.size();
            diag["eigenvalues"] = classical.eigenvalues;
            diag["negative_eigenvalue_mass"] = classical.negative_eigenvalue_mass;
            diag["classical_stress"] = stress(dm, classical);
            diag["refined"] = refine;
            diag["stress"] = refine ? embedding.stress : stress(dm, classical);
            diag["iterations"] = embedding.iterations;
            write_file(out_file.parent_path() / "diagnostics.json", dump_json(diag));

            if (!mds_svg.empty()) {
                ChartSpec spec;
                spec.kind = ChartKind::Scatter;
                spec.title = mds_mode == "terms" ? "Term MDS map" : "Chapter MDS map";
                spec.x_label = "dimension 1";
                spec.y_label = "dimension 2";
                for (std::size_t i = 0; i < embedding.size(); ++i) {
                    spec.xs.push_back(embedding.coords[i][0]);
                    spec.ys.push_back(embedding.coords[i][1]);
                    spec.point_labels.push_back(embedding.labels[i]);
                }
                write_file(out_path(mds_svg), render_chart(spec));
            }
            info(global, "embedded " + std::to_string(embedding.size()) + " points -> " + mds_out);
        } else if (*run) {
            auto cfg = load_run_config(run_config);
            if (!run_root.empty()) cfg.root = run_root;
            if (!run_layout.empty())
                cfg.layout = run_layout == "single-file" ? CorpusLayout::SingleFile : CorpusLayout::PerFile;
            if (!run_delim.empty()) cfg.delimiter_pattern = run_delim;
            if (!run_header.empty()) cfg.header_pattern = run_header;
            if (!run_manifest.empty()) cfg.manifest = run_manifest;
            if (run_pmi) cfg.graph_pmi = *run_pmi;
            if (run_jaccard) cfg.graph_jaccard = *run_jaccard;
            if (!run_lexicon.empty()) {
                cfg.segmentation_lexicon = run_lexicon;
                cfg.tokenizer_mode = TokenizerMode::Lexicon;
            }
            if (!run_import.empty()) {
                cfg.import_path = run_import;
                cfg.tokenizer_mode = TokenizerMode::Import;
            }
            if (!run_pn.empty()) cfg.polarity_lexicon = run_pn;
            if (!run_freq_pos.empty()) cfg.freq_pos = run_freq_pos;
            if (run_freq_top) cfg.freq_top = *run_freq_top;
            if (run_k) cfg.keywords_k = *run_k;
            if (!run_content_pos.empty()) cfg.content_pos = run_content_pos;
            if (run_bin_width) cfg.bin_width = *run_bin_width;
            if (run_min_node) cfg.min_node_freq = *run_min_node;
            if (run_min_edge) cfg.min_edge_weight = *run_min_edge;
            if (run_top_k) cfg.top_k_nodes = *run_top_k;
            if (!run_graph_format.empty()) cfg.graph_format = parse_graph_format(run_graph_format);
            if (!run_metric.empty()) cfg.mds_metric = parse_metric(run_metric);
            if (!run_weighting.empty())
                cfg.mds_weighting = run_weighting == "counts" ? VectorWeighting::Counts : VectorWeighting::Tfidf;
            if (run_refine) cfg.mds_refine = *run_refine;
            if (!run_mds_mode.empty()) cfg.mds_mode = run_mds_mode == "terms" ? MdsMode::Terms : MdsMode::Chapters;
            if (run_mds_top_n) cfg.mds_top_n = *run_mds_top_n;
            if (!run_out_dir.empty()) cfg.out_dir = run_out_dir;
            if (!run_label.empty()) cfg.source_label = run_label;

            const auto manifest = run_pipeline(cfg, log_stream(global));
            info(global, "pipeline complete: " + std::to_string(manifest.entries.size()) +
                             " artifacts in " + cfg.out_dir.string());
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
