#pragma once

// Experiment grid: transforms x shift constants x Laplacian kinds, each cell
// clustered `runs` times with seeds base_seed + run and scored against
// ground-truth labels.
//
// Seeding: run r of every cell uses seed base_seed + r. Cells that differ
// only in ways that leave the spectral embedding unchanged therefore yield
// identical partitions, and a cell's rows never depend on which other cells
// are in the grid or in what order workers finish.

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "negspec/criteria.hpp"
#include "negspec/error.hpp"
#include "negspec/io.hpp"
#include "negspec/kmeans.hpp"
#include "negspec/laplacian.hpp"
#include "negspec/metrics.hpp"
#include "negspec/similarity.hpp"
#include "negspec/spectral.hpp"
#include "negspec/vectorize.hpp"

namespace negspec {

enum class CellStatus { ok, negative_degree_error, negative_volume_error };

inline std::string_view to_string(CellStatus s) {
    switch (s) {
        case CellStatus::ok: return "ok";
        case CellStatus::negative_degree_error: return "negative_degree_error";
        case CellStatus::negative_volume_error: return "negative_volume_error";
    }
    return "?";
}

struct ExperimentConfig {
    std::string input;
    std::optional<std::string> labels;
    std::optional<std::string> word_vectors;
    std::string vectorizer = "tfidf";  // count | tf | tfidf, for corpus input without word vectors
    std::optional<std::string> embedding_tag;
    std::vector<Transform> transforms;
    std::vector<double> c_values{0.0, 1.0, 2.0, 3.0};
    std::vector<LaplacianKind> laplacians;
    std::size_t k = 0;
    std::size_t runs = 30;
    std::uint64_t base_seed = 0;
    std::size_t restarts = 10;
    double alpha = 1.0;  // perturbed Laplacian shift
    std::size_t workers = 1;

    void validate() const {
        if (input.empty()) throw ConfigError("config: input is required");
        if (transforms.empty()) throw ConfigError("config: at least one transform is required");
        if (laplacians.empty()) throw ConfigError("config: at least one laplacian is required");
        if (c_values.empty()) throw ConfigError("config: at least one c value is required");
        for (double c : c_values)
            if (!(c >= 0.0) || !std::isfinite(c)) throw ConfigError("config: c values must be finite and >= 0");
        if (k < 1) throw ConfigError("config: k must be >= 1");
        if (runs < 1) throw ConfigError("config: runs must be >= 1");
        if (restarts < 1) throw ConfigError("config: restarts must be >= 1");
        if (workers < 1) throw ConfigError("config: workers must be >= 1");
        if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("config: alpha must be finite and > 0");
        if (vectorizer != "count" && vectorizer != "tf" && vectorizer != "tfidf")
            throw ConfigError("config: vectorizer must be count, tf or tfidf");
    }
};

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

inline std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto comma = s.find(',', start);
        const auto end = comma == std::string_view::npos ? s.size() : comma;
        if (auto item = trim(s.substr(start, end - start)); !item.empty()) out.push_back(std::move(item));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

template <typename T>
T parse_unsigned(const std::string& value, std::string_view key) {
    T out{};
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size() || value.empty())
        throw ConfigError("config: " + std::string(key) + " must be a non-negative integer, got '" + value + "'");
    return out;
}

inline double parse_real(const std::string& value, std::string_view key) {
    try {
        return io::parse_double(value, "config: " + std::string(key));
    } catch (const IoError& e) {
        throw ConfigError(e.what());
    }
}

}  // namespace detail

/// Applies one `key = value` setting. Shared by the config file reader and
/// command-line overrides.
inline void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "input") cfg.input = value;
    else if (key == "labels") cfg.labels = value;
    else if (key == "word_vectors") cfg.word_vectors = value;
    else if (key == "vectorizer") cfg.vectorizer = value;
    else if (key == "embedding") cfg.embedding_tag = value;
    else if (key == "transforms") {
        cfg.transforms.clear();
        for (const auto& t : detail::split_list(value)) cfg.transforms.push_back(parse_transform(t));
    } else if (key == "c_values") {
        cfg.c_values.clear();
        for (const auto& c : detail::split_list(value)) cfg.c_values.push_back(detail::parse_real(c, key));
    } else if (key == "laplacians") {
        cfg.laplacians.clear();
        for (const auto& l : detail::split_list(value)) cfg.laplacians.push_back(parse_laplacian(l));
    } else if (key == "k") cfg.k = detail::parse_unsigned<std::size_t>(value, key);
    else if (key == "runs") cfg.runs = detail::parse_unsigned<std::size_t>(value, key);
    else if (key == "base_seed" || key == "seed") cfg.base_seed = detail::parse_unsigned<std::uint64_t>(value, key);
    else if (key == "restarts") cfg.restarts = detail::parse_unsigned<std::size_t>(value, key);
    else if (key == "alpha") cfg.alpha = detail::parse_real(value, key);
    else if (key == "workers") cfg.workers = detail::parse_unsigned<std::size_t>(value, key);
    else throw ConfigError("config: unknown key '" + key + "'");
}

/// Flat `key = value` text, one setting per line; `#` starts a comment.
/// Relative paths are resolved against `base_dir`.
inline ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {}) {
    ExperimentConfig cfg;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto stripped = detail::trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        apply_setting(cfg, detail::trim(std::string_view(stripped).substr(0, eq)),
                      detail::trim(std::string_view(stripped).substr(eq + 1)));
    }
    auto resolve = [&](std::string& p) {
        if (!p.empty() && std::filesystem::path(p).is_relative() && !base_dir.empty()) p = (base_dir / p).string();
    };
    resolve(cfg.input);
    if (cfg.labels) resolve(*cfg.labels);
    if (cfg.word_vectors) resolve(*cfg.word_vectors);
    return cfg;
}

inline ExperimentConfig read_config(const std::string& path) {
    std::string text;
    try {
        text = io::read_file(path);
    } catch (const IoError& e) {
        throw ConfigError(e.what());
    }
    return parse_config(text, std::filesystem::path(path).parent_path());
}

/// Embedding plus aligned ground-truth labels, ready for the grid.
struct Dataset {
    std::string tag;
    EmbeddingMatrix embedding;
    std::optional<std::vector<std::string>> labels;
};

/// Loads a corpus CSV (`id,text[,label]`) or a precomputed embedding CSV
/// (`id,d0,...`), told apart by the second header field. Labels from
/// `labels_path` take precedence over a corpus label column.
inline Dataset load_dataset(const std::string& input, const std::optional<std::string>& labels_path = std::nullopt,
                            const std::optional<std::string>& word_vectors_path = std::nullopt,
                            const std::string& vectorizer = "tfidf") {
    const auto header = io::parse_csv(io::read_file(input));
    if (header.empty() || header[0].size() < 2) throw IoError("'" + input + "': missing or short header");

    Dataset ds;
    std::optional<Corpus::LabelMap> label_map;
    if (labels_path) label_map = io::read_labels(*labels_path);

    if (header[0][1] == "text") {
        const Corpus corpus = io::read_corpus(input);
        if (!label_map && corpus.labels()) label_map = corpus.labels();
        try {
            if (word_vectors_path) {
                ds.embedding = embed_documents(corpus, io::read_word_vectors(*word_vectors_path));
                ds.tag = "wordvec";
            } else if (vectorizer == "count") {
                ds.embedding = count_matrix(corpus);
                ds.tag = "count";
            } else if (vectorizer == "tf") {
                ds.embedding = tf_matrix(corpus);
                ds.tag = "tf";
            } else {
                ds.embedding = tfidf_matrix(corpus);
                ds.tag = "tfidf";
            }
        } catch (const IoError&) {
            throw;
        } catch (const Error& e) {
            throw IoError("'" + input + "': " + e.what());
        }
    } else {
        if (word_vectors_path) throw ConfigError("word vectors apply only to corpus input");
        ds.embedding = io::read_embeddings(input);
        ds.tag = "precomputed";
    }

    if (label_map) {
        std::vector<std::string> labels;
        for (const auto& id : ds.embedding.ids()) {
            auto it = label_map->find(id);
            if (it == label_map->end()) throw IoError("no label for document '" + id + "'");
            labels.push_back(it->second);
        }
        ds.labels = std::move(labels);
    }
    return ds;
}

struct CellSpec {
    Transform transform = Transform::none;
    double c = 0.0;
    LaplacianKind laplacian = LaplacianKind::combinatorial;
};

struct CellResult {
    std::string embedding;
    CellSpec spec;
    std::size_t k = 0;
    std::size_t runs = 0;
    CellStatus status = CellStatus::ok;
    std::string message;                 // error text for failed cells
    std::optional<RunScores> f_pairwise;  // absent without labels or on failure
    std::optional<RunScores> f_matched;
    std::optional<double> rcut, ncut, nrcut;  // means over runs
    std::vector<Partition> partitions;        // one per run
};

struct RunOptions {
    std::size_t k = 2;
    std::size_t runs = 30;
    std::uint64_t base_seed = 0;
    std::size_t restarts = 10;
    double alpha = 1.0;
};

/// Transform, embed and cluster one grid cell. NegativeDegree and
/// NegativeVolume become status values; other errors propagate.
inline CellResult run_cell(const SimilarityMatrix& raw, const std::optional<std::vector<std::string>>& labels,
                           const std::string& tag, const CellSpec& spec, const RunOptions& opt) {
    CellResult out;
    out.embedding = tag;
    out.spec = spec;
    out.k = opt.k;
    out.runs = opt.runs;

    const SimilarityMatrix s = apply_transform(raw, spec.transform, spec.c);
    SpectralEmbedding emb;
    try {
        emb = spectral_embed(s, spec.laplacian, static_cast<Eigen::Index>(opt.k), opt.alpha);
    } catch (const NegativeDegree& e) {
        out.status = CellStatus::negative_degree_error;
        out.message = e.what();
        return out;
    }

    std::optional<std::vector<std::size_t>> truth;
    if (labels) truth = encode_labels(*labels);
    std::vector<double> fp, fm;
    double rc = 0.0, nc = 0.0, nrc = 0.0;
    for (std::size_t r = 0; r < opt.runs; ++r) {
        Partition p = kmeans(emb.coords, opt.k, opt.base_seed + r, opt.restarts);
        try {
            const CutReport rep = cut_report(s, p);
            rc += rep.rcut;
            nc += rep.ncut;
            nrc += rep.nrcut;
        } catch (const NegativeVolume& e) {
            CellResult failed;
            failed.embedding = tag;
            failed.spec = spec;
            failed.k = opt.k;
            failed.runs = opt.runs;
            failed.status = CellStatus::negative_volume_error;
            failed.message = e.what();
            return failed;
        }
        if (truth) {
            fp.push_back(pairwise_f1(p, *truth));
            fm.push_back(matched_f1(p, *truth));
        }
        out.partitions.push_back(std::move(p));
    }
    const auto runs = static_cast<double>(opt.runs);
    out.rcut = rc / runs;
    out.ncut = nc / runs;
    out.nrcut = nrc / runs;
    if (truth) {
        out.f_pairwise = aggregate(std::move(fp));
        out.f_matched = aggregate(std::move(fm));
    }
    return out;
}

/// All cells in grid order: transforms outermost, then c values, then
/// Laplacian kinds. Cells run on `workers` threads; the result order does
/// not depend on scheduling.
inline std::vector<CellResult> run_grid(const ExperimentConfig& cfg, const Dataset& ds) {
    cfg.validate();
    const SimilarityMatrix raw = cosine_similarity(ds.embedding);
    const std::string tag = cfg.embedding_tag.value_or(ds.tag);
    const RunOptions opt{cfg.k, cfg.runs, cfg.base_seed, cfg.restarts, cfg.alpha};

    std::vector<CellSpec> cells;
    for (auto t : cfg.transforms)
        for (double c : cfg.c_values)
            for (auto l : cfg.laplacians) cells.push_back({t, c, l});

    std::vector<std::optional<CellResult>> results(cells.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            try {
                results[i] = run_cell(raw, ds.labels, tag, cells[i], opt);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = cells.size();
            }
        }
    };
    const std::size_t threads = std::min(cfg.workers, std::max<std::size_t>(cells.size(), 1));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<CellResult> out;
    out.reserve(results.size());
    for (auto& r : results) out.push_back(std::move(*r));
    return out;
}

inline constexpr std::string_view kResultHeader =
    "embedding,transform,c,laplacian,k,runs,f_pairwise_mean,f_pairwise_sd,f_matched_mean,f_matched_sd,rcut,ncut,"
    "nrcut,status";

namespace detail {

inline std::string fixed6(const std::optional<double>& v) {
    if (!v) return "";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", *v);
    return buf;
}

}  // namespace detail

inline std::string format_result_row(const CellResult& r) {
    auto mean = [](const std::optional<RunScores>& s) { return s ? std::optional<double>(s->mean) : std::nullopt; };
    auto sd = [](const std::optional<RunScores>& s) { return s ? std::optional<double>(s->sd) : std::nullopt; };
    std::string row;
    row += io::quote_csv(r.embedding) + ",";
    row += std::string(to_string(r.spec.transform)) + ",";
    row += io::format_double(r.spec.c) + ",";
    row += std::string(to_string(r.spec.laplacian)) + ",";
    row += std::to_string(r.k) + "," + std::to_string(r.runs) + ",";
    row += detail::fixed6(mean(r.f_pairwise)) + "," + detail::fixed6(sd(r.f_pairwise)) + ",";
    row += detail::fixed6(mean(r.f_matched)) + "," + detail::fixed6(sd(r.f_matched)) + ",";
    row += detail::fixed6(r.rcut) + "," + detail::fixed6(r.ncut) + "," + detail::fixed6(r.nrcut) + ",";
    row += std::string(to_string(r.status));
    return row;
}

inline std::string format_results(const std::vector<CellResult>& rows) {
    std::string out(kResultHeader);
    out += "\n";
    for (const auto& r : rows) out += format_result_row(r) + "\n";
    return out;
}

/// Lines printed by `negspec stats`.
inline std::string format_negativity(const NegativityReport& r, Eigen::Index n) {
    std::ostringstream out;
    out << "documents: " << n << "\n";
    out << "negative S entries: " << r.negative_s_entries << ", negative D entries: " << r.negative_d_entries << "\n";
    out << "min S entry: " << io::format_double(r.min_s) << ", min D entry: " << io::format_double(r.min_d) << "\n";
    return out.str();
}

}  // namespace negspec
