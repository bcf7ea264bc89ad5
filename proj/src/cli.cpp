#include "newsclust/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "newsclust/engine.hpp"
#include "newsclust/errors.hpp"
#include "newsclust/io.hpp"
#include "newsclust/metrics.hpp"
#include "newsclust/training.hpp"

namespace newsclust {
namespace {

struct CorpusArgs {
    std::string path;
    std::string format = "miranda";
    std::string split = "all";
    bool all_languages = false;
    std::string tfidf;
    std::string embeddings;
};

struct HyperArgs {
    double C = 1.0;
    double mu = 0.0;
    double sigma = 7.0;
    std::size_t smote_k = 5;
    std::uint64_t seed = 1;
    std::string features = "all";
    bool hard_negatives = false;
};

void add_corpus_options(CLI::App* sub, CorpusArgs& a, bool with_embeddings) {
    sub->add_option("--corpus", a.path, "Corpus file (JSON lines)")->required();
    sub->add_option("--format", a.format, "Corpus format")->check(CLI::IsMember({"miranda", "tdt"}))->capture_default_str();
    sub->add_option("--split", a.split, "TDT split: train, test, all or a file listing events")->capture_default_str();
    sub->add_flag("--all-languages", a.all_languages, "Keep non-English Miranda records");
    sub->add_option("--tfidf", a.tfidf, "TF-IDF models from fit-tfidf (default: fit on the corpus)");
    if (with_embeddings) sub->add_option("--embeddings", a.embeddings, "Embedding file (.txt for the text form)");
}

void add_hyper_options(CLI::App* sub, HyperArgs& h) {
    sub->add_option("--C", h.C, "SVM regularization")->capture_default_str();
    sub->add_option("--mu", h.mu, "Temporal similarity centre in days")->capture_default_str();
    sub->add_option("--sigma", h.sigma, "Temporal similarity width in days")->capture_default_str();
    sub->add_option("--smote-k", h.smote_k, "SMOTE neighbours")->capture_default_str();
    sub->add_option("--seed", h.seed, "Random seed")->capture_default_str();
    sub->add_option("--features", h.features, "Feature set, e.g. all, tfidf+time, tfidf+dense+time")->capture_default_str();
    sub->add_flag("--hard-negatives", h.hard_negatives, "Pick the most similar wrong cluster as the negative");
}

struct LoadedCorpus {
    std::vector<Document> docs;
    TfidfModels models;
};

LoadedCorpus load_corpus(const CorpusArgs& a) {
    LoadedCorpus out;
    std::optional<TfidfModels> provided;
    if (a.format == "miranda") {
        Corpus c = load_miranda(a.path, MirandaOptions{.english_only = !a.all_languages});
        out.docs = std::move(c.documents);
        provided = std::move(c.provided_models);
    } else {
        if (a.split == "train") out.docs = load_tdt(a.path, TdtSplit::Train);
        else if (a.split == "test") out.docs = load_tdt(a.path, TdtSplit::Test);
        else if (a.split == "all") out.docs = load_tdt(a.path, TdtSplit::All);
        else out.docs = load_tdt(a.path, TdtSplit::Custom, std::filesystem::path(a.split));
    }
    if (out.docs.empty()) throw EmptyCorpus("no documents loaded from '" + a.path + "'");
    if (provided) out.models = std::move(*provided);
    else if (!a.tfidf.empty()) out.models = deserialize_tfidf(read_file(a.tfidf), a.tfidf);
    else out.models = fit_tfidf_all(out.docs);
    return out;
}

std::optional<EmbeddingStore> load_store(const std::string& path, std::optional<std::size_t> dim = std::nullopt) {
    if (path.empty()) return std::nullopt;
    if (path.ends_with(".txt")) {
        EmbeddingStore s = parse_embeddings_text(read_file(path));
        if (dim && s.dim() != *dim)
            throw DimensionMismatch("'" + path + "' has dimension " + std::to_string(s.dim()) + ", expected " +
                                    std::to_string(*dim));
        return s;
    }
    try {
        return load_embeddings(path, dim);
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

void emit(const std::string& out_path, const std::string& content, std::ostream& out) {
    if (out_path.empty() || out_path == "-") out << content;
    else write_file(out_path, content);
}

HyperParams to_hyper(const HyperArgs& h) { return HyperParams{h.C, h.mu, h.sigma, h.smote_k}; }

TrainOptions to_train_options(const HyperArgs& h) {
    TrainOptions o;
    o.features = parse_feature_set(h.features);
    o.seed = h.seed;
    o.hard_negatives = h.hard_negatives;
    return o;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Online news stream clustering", "newsclust"};
    app.set_config("--config", "", "Defaults file: key = value lines, [subcommand] sections");
    app.require_subcommand(1);

    // train
    CorpusArgs train_corpus;
    HyperArgs train_hyper;
    std::string train_out, grid_spec;
    std::size_t cv_folds = 0;
    auto* train = app.add_subcommand("train", "Train a model bundle on a labelled corpus");
    add_corpus_options(train, train_corpus, true);
    add_hyper_options(train, train_hyper);
    train->add_option("--out", train_out, "Bundle output path")->required();
    train->add_option("--cv-folds", cv_folds, "Cross-validation folds over gold clusters (0 skips the search)")
        ->capture_default_str();
    train->add_option("--grid", grid_spec, "Search grid, e.g. \"C=0.1,1,10;mu=0;sigma=1,3,7,14;k=5\"");

    // cluster
    CorpusArgs cluster_corpus;
    std::string bundle_path, cluster_out, order = "timestamp";
    auto* cluster = app.add_subcommand("cluster", "Cluster a corpus stream with a trained bundle");
    add_corpus_options(cluster, cluster_corpus, true);
    cluster->add_option("--bundle", bundle_path, "Model bundle")->required();
    cluster->add_option("--out", cluster_out, "Assignments output (default stdout)");
    cluster->add_option("--order", order, "Stream order")->check(CLI::IsMember({"timestamp", "given"}))->capture_default_str();

    // evaluate
    std::string assignments_path, gold_path, metrics_list, eval_out;
    CorpusArgs gold_corpus;
    std::optional<std::size_t> baseline_count;
    auto* evaluate = app.add_subcommand("evaluate", "Score assignments against gold clusters");
    evaluate->add_option("--assignments", assignments_path, "Assignments from cluster")->required();
    auto* gold_opt = evaluate->add_option("--gold", gold_path, "Gold TSV: doc_id<TAB>label");
    auto* gold_corpus_opt = evaluate->add_option("--gold-corpus", gold_corpus.path, "Corpus carrying gold labels");
    gold_opt->excludes(gold_corpus_opt);
    evaluate->add_option("--format", gold_corpus.format, "Gold corpus format")
        ->check(CLI::IsMember({"miranda", "tdt"}))->capture_default_str();
    evaluate->add_option("--split", gold_corpus.split, "TDT split of the gold corpus")->capture_default_str();
    evaluate->add_flag("--all-languages", gold_corpus.all_languages, "Keep non-English Miranda records");
    evaluate->add_option("--metrics", metrics_list, "Comma-separated metric names (default: all)");
    evaluate->add_option("--baseline-count", baseline_count, "Baseline cluster count for the excess-reduction line");
    evaluate->add_option("--out", eval_out, "Report output (default stdout)");

    // fit-tfidf
    CorpusArgs fit_corpus;
    std::string fit_out;
    auto* fit = app.add_subcommand("fit-tfidf", "Fit TF-IDF models on a corpus");
    add_corpus_options(fit, fit_corpus, false);
    fit->add_option("--out", fit_out, "Models output (default stdout)");

    // export-features
    CorpusArgs export_corpus;
    HyperArgs export_hyper;
    std::string kind = "svm", export_bundle, export_out;
    auto* exportf = app.add_subcommand("export-features", "Write SVM-triplet or creation training samples");
    add_corpus_options(exportf, export_corpus, true);
    add_hyper_options(exportf, export_hyper);
    exportf->add_option("--kind", kind, "Sample kind")->check(CLI::IsMember({"svm", "creation"}))->capture_default_str();
    exportf->add_option("--bundle", export_bundle, "Take weights, mu, sigma and features from a bundle");
    exportf->add_option("--out", export_out, "Samples output (default stdout)");

    // inspect-bundle
    std::string inspect_path;
    auto* inspect = app.add_subcommand("inspect-bundle", "Print the contents of a model bundle");
    inspect->add_option("--bundle", inspect_path, "Model bundle")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (*train) {
            LoadedCorpus c = load_corpus(train_corpus);
            const auto store = load_store(train_corpus.embeddings);
            sort_stream_order(c.docs);
            const auto stream = encode_labeled(c.docs, c.models, store ? &*store : nullptr);
            const TrainOptions options = to_train_options(train_hyper);
            HyperParams chosen = to_hyper(train_hyper);
            if (cv_folds > 0) {
                const HyperGrid grid = grid_spec.empty() ? HyperGrid{} : parse_grid(grid_spec);
                const CvResult cv = cross_validate(stream, grid, cv_folds, options);
                for (const auto& s : cv.scores) {
                    char buf[64];
                    std::snprintf(buf, sizeof buf, "\tmean_bcubed_f1=%.6f\tfailed_folds=%zu\n", s.mean_f1, s.failed_folds);
                    err << "cv\t" << format_hyper_params(s.params) << buf;
                }
                chosen = cv.best;
            }
            const TrainedPipeline p = train_pipeline(stream, chosen, options);
            save_bundle(p.bundle, train_out);
            err << "trained\t" << format_hyper_params(chosen) << "\ttriplets=" << p.triplet_count
                << "\tcreation_samples=" << p.creation_count << "\tcreation_positives=" << p.creation_positives << "\n";
        } else if (*cluster) {
            const ModelBundle bundle = load_bundle(bundle_path);
            LoadedCorpus c = load_corpus(cluster_corpus);
            std::optional<EmbeddingStore> store;
            if (bundle.uses_dense()) {
                if (cluster_corpus.embeddings.empty())
                    throw MissingEmbedding("bundle '" + bundle_path + "' uses dense vectors; pass --embeddings");
                store = load_store(cluster_corpus.embeddings, bundle.embedding_dim);
            }
            const StreamResult r = cluster_stream(std::move(c.docs), bundle, c.models, store ? &*store : nullptr,
                                                  order == "given" ? StreamOrder::Given : StreamOrder::Timestamp);
            emit(cluster_out, format_assignments(r.assignments), out);
        } else if (*evaluate) {
            const Partition pred =
                partition_from_assignments(parse_assignments(read_file(assignments_path), assignments_path));
            Partition gold;
            if (!gold_path.empty()) {
                gold = parse_gold_tsv(read_file(gold_path), gold_path);
            } else if (!gold_corpus.path.empty()) {
                if (gold_corpus.format == "miranda")
                    gold = partition_from_gold(
                        load_miranda(gold_corpus.path, MirandaOptions{.english_only = !gold_corpus.all_languages}).documents);
                else
                    gold = partition_from_gold(load_tdt(gold_corpus.path,
                                                        gold_corpus.split == "train"  ? TdtSplit::Train
                                                        : gold_corpus.split == "test" ? TdtSplit::Test
                                                        : gold_corpus.split == "all"  ? TdtSplit::All
                                                                                      : TdtSplit::Custom,
                                                        std::filesystem::path(gold_corpus.split)));
            } else {
                err << "error: evaluate needs --gold or --gold-corpus\n";
                return 1;
            }
            std::string report = format_report(evaluate_metrics(pred, gold, split_list(metrics_list)));
            if (baseline_count) {
                const FragmentationReport f = fragmentation_report(pred, gold, baseline_count);
                char buf[64];
                std::snprintf(buf, sizeof buf, "excess_reduction\t%.6f\n", f.excess_reduction.value_or(0.0));
                report += buf;
            }
            emit(eval_out, report, out);
        } else if (*fit) {
            LoadedCorpus c = load_corpus(fit_corpus);
            emit(fit_out, serialize_tfidf(c.models), out);
        } else if (*exportf) {
            LoadedCorpus c = load_corpus(export_corpus);
            const auto store = load_store(export_corpus.embeddings);
            sort_stream_order(c.docs);
            const auto stream = encode_labeled(c.docs, c.models, store ? &*store : nullptr);
            const GoldStreamTrace trace = simulate_gold_stream(stream);
            TrainOptions options = to_train_options(export_hyper);
            SimilarityParams p{export_hyper.mu, export_hyper.sigma};
            std::optional<ModelBundle> bundle;
            if (!export_bundle.empty()) {
                bundle = load_bundle(export_bundle);
                p = bundle->sim_params;
                options.features = bundle->features;
            }
            validate(p);
            const TripletOptions topt{options.seed, options.features, options.hard_negatives};
            if (kind == "svm") {
                emit(export_out, format_samples(std::span<const SvmTripletSample>(make_svm_triplets(trace, p, topt))), out);
            } else {
                const WeightVector w = bundle ? bundle->weights
                                              : train_linear_svm(make_svm_triplets(trace, p, topt), export_hyper.C).weights;
                emit(export_out, format_samples(std::span<const CreationSample>(make_creation_samples(trace, w, p, options.features))),
                     out);
            }
        } else if (*inspect) {
            out << describe_bundle(load_bundle(inspect_path));
        }
    } catch (const DataError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const LineSearchFailure& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace newsclust
