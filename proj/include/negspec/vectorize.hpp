#pragma once

// Document vectorization: term-vector space (count / tf / tfidf) and
// dense documents built by averaging pretrained word vectors.

#include <Eigen/Dense>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "negspec/error.hpp"

namespace negspec {

struct Document {
    std::string id;
    std::string text;
};

/// Ordered documents with optional ground-truth labels keyed by doc id.
class Corpus {
public:
    using LabelMap = std::map<std::string, std::string>;

    Corpus() = default;

    explicit Corpus(std::vector<Document> docs, std::optional<LabelMap> labels = std::nullopt)
        : docs_(std::move(docs)), labels_(std::move(labels)) {
        std::set<std::string_view> seen;
        for (const auto& d : docs_) {
            if (d.id.empty()) throw Error("corpus: empty document id");
            if (!seen.insert(d.id).second) throw Error("corpus: duplicate document id '" + d.id + "'");
        }
        if (labels_) {
            for (const auto& d : docs_)
                if (!labels_->count(d.id)) throw Error("corpus: no label for document '" + d.id + "'");
        }
    }

    const std::vector<Document>& docs() const noexcept { return docs_; }
    const std::optional<LabelMap>& labels() const noexcept { return labels_; }
    std::size_t size() const noexcept { return docs_.size(); }
    bool empty() const noexcept { return docs_.empty(); }

    std::vector<std::string> ids() const {
        std::vector<std::string> out;
        out.reserve(docs_.size());
        for (const auto& d : docs_) out.push_back(d.id);
        return out;
    }

    /// Labels in document order; nullopt when the corpus is unlabeled.
    std::optional<std::vector<std::string>> label_vector() const {
        if (!labels_) return std::nullopt;
        std::vector<std::string> out;
        out.reserve(docs_.size());
        for (const auto& d : docs_) out.push_back(labels_->at(d.id));
        return out;
    }

private:
    std::vector<Document> docs_;
    std::optional<LabelMap> labels_;
};

/// n x m document vectors. Row i belongs to ids()[i].
class EmbeddingMatrix {
public:
    static constexpr double kUnitTolerance = 1e-9;

    EmbeddingMatrix() = default;

    /// Empty `ids` are replaced by "0", "1", ...; empty `columns` by "d0", "d1", ...
    EmbeddingMatrix(Eigen::MatrixXd values, std::vector<std::string> ids = {}, bool normalized = false,
                    std::vector<std::string> columns = {})
        : values_(std::move(values)), ids_(std::move(ids)), columns_(std::move(columns)),
          normalized_(normalized) {
        if (ids_.empty())
            for (Eigen::Index i = 0; i < values_.rows(); ++i) ids_.push_back(std::to_string(i));
        if (columns_.empty())
            for (Eigen::Index j = 0; j < values_.cols(); ++j) columns_.push_back("d" + std::to_string(j));
        if (static_cast<Eigen::Index>(ids_.size()) != values_.rows())
            throw Error("embedding: " + std::to_string(ids_.size()) + " ids for " +
                        std::to_string(values_.rows()) + " rows");
        if (static_cast<Eigen::Index>(columns_.size()) != values_.cols())
            throw Error("embedding: column name count does not match dimensions");
        if (normalized_) {
            for (Eigen::Index i = 0; i < values_.rows(); ++i) {
                const double norm = values_.row(i).norm();
                if (!(std::abs(norm - 1.0) <= kUnitTolerance))
                    throw Error("embedding: row " + std::to_string(i) +
                                " is flagged normalized but has norm " + std::to_string(norm));
            }
        }
    }

    const Eigen::MatrixXd& values() const noexcept { return values_; }
    const std::vector<std::string>& ids() const noexcept { return ids_; }
    const std::vector<std::string>& columns() const noexcept { return columns_; }
    bool normalized() const noexcept { return normalized_; }
    Eigen::Index rows() const noexcept { return values_.rows(); }
    Eigen::Index dims() const noexcept { return values_.cols(); }

private:
    Eigen::MatrixXd values_;
    std::vector<std::string> ids_;
    std::vector<std::string> columns_;
    bool normalized_ = false;
};

using WordVectors = std::unordered_map<std::string, Eigen::VectorXd>;

/// Lowercases ASCII letters and splits on every ASCII character that is not
/// a letter or digit. Bytes >= 0x80 are kept so UTF-8 words survive intact.
inline std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (const char ch : text) {
        const auto u = static_cast<unsigned char>(ch);
        if (u >= 0x80 || std::isalnum(u)) {
            cur.push_back(static_cast<char>(std::tolower(u)));
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

namespace detail {

struct TermCounts {
    std::vector<std::string> vocab;  // lexicographic
    Eigen::MatrixXd counts;          // docs x vocab
};

inline TermCounts term_counts(const Corpus& corpus) {
    if (corpus.empty()) throw Error("vectorize: empty corpus");
    std::vector<std::map<std::string, double>> per_doc;
    std::map<std::string, Eigen::Index> vocab_index;
    per_doc.reserve(corpus.size());
    for (const auto& doc : corpus.docs()) {
        auto& m = per_doc.emplace_back();
        for (auto& tok : tokenize(doc.text)) {
            m[tok] += 1.0;
            vocab_index.emplace(std::move(tok), 0);
        }
    }
    if (vocab_index.empty()) throw Error("empty vocabulary");

    TermCounts out;
    Eigen::Index col = 0;
    for (auto& [term, idx] : vocab_index) {
        idx = col++;
        out.vocab.push_back(term);
    }
    out.counts = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(corpus.size()), col);
    for (std::size_t i = 0; i < per_doc.size(); ++i)
        for (const auto& [term, count] : per_doc[i])
            out.counts(static_cast<Eigen::Index>(i), vocab_index.at(term)) = count;
    return out;
}

inline Eigen::MatrixXd row_proportions(const Eigen::MatrixXd& counts) {
    Eigen::MatrixXd tf = counts;
    for (Eigen::Index i = 0; i < tf.rows(); ++i) {
        const double total = tf.row(i).sum();
        if (total > 0.0) tf.row(i) /= total;
    }
    return tf;
}

}  // namespace detail

/// Raw term counts, one column per vocabulary term in lexicographic order.
inline EmbeddingMatrix count_matrix(const Corpus& corpus) {
    auto tc = detail::term_counts(corpus);
    return EmbeddingMatrix(std::move(tc.counts), corpus.ids(), false, std::move(tc.vocab));
}

/// Term frequencies: counts divided by the document's token count. Empty
/// documents keep an all-zero row.
inline EmbeddingMatrix tf_matrix(const Corpus& corpus) {
    auto tc = detail::term_counts(corpus);
    return EmbeddingMatrix(detail::row_proportions(tc.counts), corpus.ids(), false, std::move(tc.vocab));
}

/// tf x idf with the smoothed idf(t) = ln((1 + n) / (1 + df(t))) + 1.
inline EmbeddingMatrix tfidf_matrix(const Corpus& corpus) {
    auto tc = detail::term_counts(corpus);
    const auto n = static_cast<double>(tc.counts.rows());
    Eigen::MatrixXd tf = detail::row_proportions(tc.counts);
    for (Eigen::Index j = 0; j < tf.cols(); ++j) {
        const double df = static_cast<double>((tc.counts.col(j).array() > 0.0).count());
        tf.col(j) *= std::log((1.0 + n) / (1.0 + df)) + 1.0;
    }
    return EmbeddingMatrix(std::move(tf), corpus.ids(), false, std::move(tc.vocab));
}

/// Scales each row to unit Euclidean norm.
inline EmbeddingMatrix l2_normalize(const EmbeddingMatrix& emb) {
    Eigen::MatrixXd out = emb.values();
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        const double norm = out.row(i).norm();
        if (norm == 0.0 || !std::isfinite(norm))
            throw Error("l2_normalize: row " + std::to_string(i) + " ('" + emb.ids()[static_cast<std::size_t>(i)] +
                        "') has zero or non-finite norm");
        out.row(i) /= norm;
    }
    return EmbeddingMatrix(std::move(out), emb.ids(), true, emb.columns());
}

/// Mean of the word vectors of a document's in-vocabulary tokens, then L2
/// normalized. Repeated tokens count once per occurrence.
inline EmbeddingMatrix embed_documents(const Corpus& corpus, const WordVectors& words) {
    if (corpus.empty()) throw Error("embed_documents: empty corpus");
    if (words.empty()) throw Error("embed_documents: no word vectors");
    const Eigen::Index dims = words.begin()->second.size();
    if (dims == 0) throw Error("embed_documents: zero-dimensional word vectors");
    for (const auto& [tok, vec] : words)
        if (vec.size() != dims)
            throw Error("embed_documents: word vector for '" + tok + "' has " + std::to_string(vec.size()) +
                        " dimensions, expected " + std::to_string(dims));

    Eigen::MatrixXd out(static_cast<Eigen::Index>(corpus.size()), dims);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& doc = corpus.docs()[i];
        Eigen::VectorXd sum = Eigen::VectorXd::Zero(dims);
        double largest = 0.0;
        std::size_t hits = 0;
        for (const auto& tok : tokenize(doc.text)) {
            auto it = words.find(tok);
            if (it == words.end()) continue;
            sum += it->second;
            largest = std::max(largest, it->second.norm());
            ++hits;
        }
        if (hits == 0) throw Error("embed_documents: document '" + doc.id + "' has no in-vocabulary tokens");
        Eigen::VectorXd mean = sum / static_cast<double>(hits);
        const double norm = mean.norm();
        if (!(norm > 1e-12 * largest))
            throw Error("embed_documents: document '" + doc.id + "' averages to the zero vector");
        out.row(static_cast<Eigen::Index>(i)) = (mean / norm).transpose();
    }
    return EmbeddingMatrix(std::move(out), corpus.ids(), true);
}

}  // namespace negspec
