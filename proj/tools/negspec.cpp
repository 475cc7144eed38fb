// negspec: negativity diagnostics, single-cell clustering and experiment
// grids over cosine-similarity spectral clustering.
//
// Exit codes: 0 ran (failure-status rows included), 2 config error, 3 IO or
// malformed-data error, 1 anything else.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "negspec.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct InputFlags {
    std::string input;
    std::optional<std::string> labels;
    std::optional<std::string> word_vectors;
    std::string vectorizer = "tfidf";

    void add_to(CLI::App* cmd) {
        cmd->add_option("--input", input, "corpus CSV (id,text[,label]) or embedding CSV (id,d0,...)")->required();
        cmd->add_option("--labels", labels, "labels CSV (id,label)");
        cmd->add_option("--word-vectors", word_vectors, "pretrained word vectors (token v1 ... vm)");
        cmd->add_option("--vectorizer", vectorizer, "count | tf | tfidf, for corpus input without word vectors")
            ->check(CLI::IsMember({"count", "tf", "tfidf"}));
    }
};

int run_stats(const InputFlags& in, const std::optional<std::string>& similarity_out) {
    const auto ds = negspec::load_dataset(in.input, in.labels, in.word_vectors, in.vectorizer);
    const auto s = negspec::cosine_similarity(ds.embedding);
    std::cout << negspec::format_negativity(negspec::negativity_stats(s), s.size());
    if (similarity_out) negspec::io::write_similarity(*similarity_out, s);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral clustering of document embeddings with negative-similarity repair"};
    app.require_subcommand(1);

    InputFlags stats_in;
    std::optional<std::string> similarity_out;
    auto* stats = app.add_subcommand("stats", "count negative similarities and negative row sums");
    stats_in.add_to(stats);
    stats->add_option("--similarity-out", similarity_out, "also write the cosine similarity matrix as CSV");

    InputFlags cluster_in;
    std::string transform, laplacian, cluster_out;
    std::optional<std::string> embedding_tag, spectral_out;
    double c = 0.0, alpha = 1.0;
    std::size_t k = 0, runs = 30, restarts = 10;
    std::uint64_t seed = 0;
    auto* cluster = app.add_subcommand("cluster", "run one grid cell and write a result CSV");
    cluster_in.add_to(cluster);
    cluster->add_option("--transform", transform, "none | zero | add | add_norm | angle_max | angle_div | exp")
        ->required();
    cluster->add_option("--c", c, "shift constant (>= 0)")->required();
    cluster->add_option("--laplacian", laplacian,
                        "combinatorial | normalized | rationormalized | signed | perturbed")
        ->required();
    cluster->add_option("--k", k, "number of clusters")->required();
    cluster->add_option("--runs", runs, "repetitions with seeds seed, seed+1, ...");
    cluster->add_option("--seed", seed, "base seed");
    cluster->add_option("--restarts", restarts, "k-means++ restarts per run");
    cluster->add_option("--alpha", alpha, "diagonal shift of the perturbed Laplacian");
    cluster->add_option("--embedding", embedding_tag, "embedding tag written to the result row");
    cluster->add_option("--spectral-out", spectral_out, "also write the spectral embedding as CSV");
    cluster->add_option("--out", cluster_out, "result CSV")->required();

    std::string config_path, experiment_out;
    std::optional<std::size_t> workers, override_runs;
    std::optional<std::uint64_t> override_seed;
    auto* experiment = app.add_subcommand("experiment", "run the full grid described by a config file");
    experiment->add_option("--config", config_path, "key = value config file")->required();
    experiment->add_option("--out", experiment_out, "result CSV")->required();
    experiment->add_option("--workers", workers, "parallel grid cells (overrides config)");
    experiment->add_option("--runs", override_runs, "runs per cell (overrides config)");
    experiment->add_option("--seed", override_seed, "base seed (overrides config)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (*stats) return run_stats(stats_in, similarity_out);

        if (*cluster) {
            negspec::ExperimentConfig cfg;
            cfg.input = cluster_in.input;
            cfg.labels = cluster_in.labels;
            cfg.word_vectors = cluster_in.word_vectors;
            cfg.vectorizer = cluster_in.vectorizer;
            cfg.embedding_tag = embedding_tag;
            cfg.transforms = {negspec::parse_transform(transform)};
            cfg.c_values = {c};
            cfg.laplacians = {negspec::parse_laplacian(laplacian)};
            cfg.k = k;
            cfg.runs = runs;
            cfg.base_seed = seed;
            cfg.restarts = restarts;
            cfg.alpha = alpha;
            cfg.validate();
            const auto ds = negspec::load_dataset(cfg.input, cfg.labels, cfg.word_vectors, cfg.vectorizer);
            const auto rows = negspec::run_grid(cfg, ds);
            negspec::io::write_file(cluster_out, negspec::format_results(rows));
            if (spectral_out && rows.front().status == negspec::CellStatus::ok) {
                const auto s = negspec::apply_transform(negspec::cosine_similarity(ds.embedding),
                                                        cfg.transforms.front(), c);
                negspec::io::write_spectral_embedding(
                    *spectral_out,
                    negspec::spectral_embed(s, cfg.laplacians.front(), static_cast<Eigen::Index>(k), alpha));
            }
            return 0;
        }

        if (*experiment) {
            auto cfg = negspec::read_config(config_path);
            if (workers) cfg.workers = *workers;
            if (override_runs) cfg.runs = *override_runs;
            if (override_seed) cfg.base_seed = *override_seed;
            cfg.validate();
            const auto ds = negspec::load_dataset(cfg.input, cfg.labels, cfg.word_vectors, cfg.vectorizer);
            negspec::io::write_file(experiment_out, negspec::format_results(negspec::run_grid(cfg, ds)));
            return 0;
        }
    } catch (const negspec::ConfigError& e) {
        std::cerr << "negspec: config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const negspec::IoError& e) {
        std::cerr << "negspec: io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const negspec::Error& e) {
        std::cerr << "negspec: invalid data: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "negspec: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
