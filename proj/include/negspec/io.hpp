#pragma once

// File formats: RFC 4180 CSV (corpus, labels, embeddings, matrices) and the
// whitespace-separated pretrained word-vector text format.

#include <Eigen/Dense>

#include <charconv>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "negspec/error.hpp"
#include "negspec/similarity.hpp"
#include "negspec/spectral.hpp"
#include "negspec/vectorize.hpp"

namespace negspec::io {

using CsvRow = std::vector<std::string>;

/// Parses RFC 4180 text: comma separated, double-quoted fields with ""
/// escapes, embedded line breaks inside quotes, LF or CRLF records. Blank
/// lines are skipped.
inline std::vector<CsvRow> parse_csv(std::string_view text) {
    std::vector<CsvRow> rows;
    CsvRow row;
    std::string field;
    bool in_quotes = false, field_started = false;
    std::size_t line = 1;

    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_row = [&] {
        if (!(row.empty() && field.empty() && !field_started)) {
            end_field();
            rows.push_back(std::move(row));
        }
        row.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (in_quotes) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (ch == '\n') ++line;
                field.push_back(ch);
            }
            continue;
        }
        switch (ch) {
            case '"':
                if (!field.empty())
                    throw IoError("csv line " + std::to_string(line) + ": quote inside unquoted field");
                in_quotes = true;
                field_started = true;
                break;
            case ',': end_field(); break;
            case '\r':
                if (i + 1 < text.size() && text[i + 1] == '\n') break;
                end_row();
                ++line;
                break;
            case '\n':
                end_row();
                ++line;
                break;
            default: field.push_back(ch);
        }
    }
    if (in_quotes) throw IoError("csv: unterminated quoted field");
    end_row();
    return rows;
}

inline std::string quote_csv(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out.push_back('"');
        out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("error reading '" + path + "'");
    return ss.str();
}

inline void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("error writing '" + path + "'");
}

inline double parse_double(std::string_view s, std::string_view context) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw IoError(std::string(context) + ": '" + std::string(s) + "' is not a number");
    return v;
}

/// Shortest text that parses back to the same double.
inline std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) throw Error("format_double failed");
    return std::string(buf, ptr);
}

namespace detail {

inline std::vector<CsvRow> read_csv_with_header(const std::string& path, std::size_t min_columns) {
    auto rows = parse_csv(read_file(path));
    if (rows.empty()) throw IoError("'" + path + "' is empty");
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != rows[0].size())
            throw IoError("'" + path + "' record " + std::to_string(r + 1) + " has " + std::to_string(rows[r].size()) +
                          " fields, header has " + std::to_string(rows[0].size()));
    }
    if (rows[0].size() < min_columns) throw IoError("'" + path + "' has too few columns");
    return rows;
}

}  // namespace detail

/// CSV with header `id,text[,label]`.
inline Corpus read_corpus(const std::string& path) {
    const auto rows = detail::read_csv_with_header(path, 2);
    const auto& h = rows[0];
    const bool labeled = h.size() == 3 && h[2] == "label";
    if (h[0] != "id" || h[1] != "text" || (h.size() == 3 && !labeled) || h.size() > 3)
        throw IoError("'" + path + "': corpus header must be id,text[,label]");
    std::vector<Document> docs;
    Corpus::LabelMap labels;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        docs.push_back({rows[r][0], rows[r][1]});
        if (labeled) labels[rows[r][0]] = rows[r][2];
    }
    try {
        return labeled ? Corpus(std::move(docs), std::move(labels)) : Corpus(std::move(docs));
    } catch (const Error& e) {
        throw IoError("'" + path + "': " + e.what());
    }
}

/// CSV with header `id,label`.
inline Corpus::LabelMap read_labels(const std::string& path) {
    const auto rows = detail::read_csv_with_header(path, 2);
    if (rows[0].size() != 2 || rows[0][0] != "id" || rows[0][1] != "label")
        throw IoError("'" + path + "': labels header must be id,label");
    Corpus::LabelMap out;
    for (std::size_t r = 1; r < rows.size(); ++r)
        if (!out.emplace(rows[r][0], rows[r][1]).second)
            throw IoError("'" + path + "': duplicate id '" + rows[r][0] + "'");
    return out;
}

/// CSV with header `id,d0,d1,...`; one row per document.
inline EmbeddingMatrix read_embeddings(const std::string& path) {
    const auto rows = detail::read_csv_with_header(path, 2);
    if (rows[0][0] != "id") throw IoError("'" + path + "': embedding header must start with id");
    const auto n = static_cast<Eigen::Index>(rows.size() - 1);
    const auto m = static_cast<Eigen::Index>(rows[0].size() - 1);
    Eigen::MatrixXd values(n, m);
    std::vector<std::string> ids;
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = rows[static_cast<std::size_t>(i + 1)];
        ids.push_back(row[0]);
        for (Eigen::Index j = 0; j < m; ++j)
            values(i, j) = parse_double(row[static_cast<std::size_t>(j + 1)],
                                        "'" + path + "' record " + std::to_string(i + 2));
    }
    std::vector<std::string> columns(rows[0].begin() + 1, rows[0].end());
    try {
        return EmbeddingMatrix(std::move(values), std::move(ids), false, std::move(columns));
    } catch (const Error& e) {
        throw IoError("'" + path + "': " + e.what());
    }
}

inline std::string embeddings_to_csv(const EmbeddingMatrix& emb) {
    std::string out = "id";
    for (const auto& c : emb.columns()) out += "," + quote_csv(c);
    out += "\n";
    for (Eigen::Index i = 0; i < emb.rows(); ++i) {
        out += quote_csv(emb.ids()[static_cast<std::size_t>(i)]);
        for (Eigen::Index j = 0; j < emb.dims(); ++j) out += "," + format_double(emb.values()(i, j));
        out += "\n";
    }
    return out;
}

/// One token per line followed by its space-separated components. Every
/// vector must have the same dimension. A leading `<count> <dims>` header
/// line (word2vec text style) is skipped.
inline WordVectors read_word_vectors(const std::string& path) {
    std::istringstream in(read_file(path));
    WordVectors out;
    std::string line;
    std::size_t lineno = 0;
    Eigen::Index dims = -1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ls(line);
        std::string token;
        if (!(ls >> token)) continue;
        std::vector<double> comps;
        std::string part;
        const std::string where = "'" + path + "' line " + std::to_string(lineno);
        while (ls >> part) comps.push_back(parse_double(part, where));
        if (lineno == 1 && comps.size() == 1 && token.find_first_not_of("0123456789") == std::string::npos) continue;
        if (comps.empty()) throw IoError(where + ": token '" + token + "' has no components");
        if (dims < 0) dims = static_cast<Eigen::Index>(comps.size());
        if (static_cast<Eigen::Index>(comps.size()) != dims)
            throw IoError(where + ": expected " + std::to_string(dims) + " components, got " +
                          std::to_string(comps.size()));
        out[token] = Eigen::Map<const Eigen::VectorXd>(comps.data(), dims);
    }
    if (out.empty()) throw IoError("'" + path + "' contains no word vectors");
    return out;
}

/// Header-less CSV, one matrix row per record.
inline std::string matrix_to_csv(const Eigen::MatrixXd& m) {
    std::string out;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out += ",";
            out += format_double(m(i, j));
        }
        out += "\n";
    }
    return out;
}

inline Eigen::MatrixXd parse_matrix_csv(std::string_view text, std::string_view context = "matrix csv") {
    const auto rows = parse_csv(text);
    if (rows.empty()) return Eigen::MatrixXd(0, 0);
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != rows[0].size())
            throw IoError(std::string(context) + ": ragged row " + std::to_string(r + 1));
        for (std::size_t c = 0; c < rows[r].size(); ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                parse_double(rows[r][c], std::string(context) + " row " + std::to_string(r + 1));
    }
    return m;
}

inline void write_similarity(const std::string& path, const SimilarityMatrix& s) {
    write_file(path, matrix_to_csv(s.values()));
}

inline SimilarityMatrix read_similarity(const std::string& path) {
    auto m = parse_matrix_csv(read_file(path), "'" + path + "'");
    try {
        return SimilarityMatrix(std::move(m));
    } catch (const Error& e) {
        throw IoError("'" + path + "': " + e.what());
    }
}

inline void write_spectral_embedding(const std::string& path, const SpectralEmbedding& e) {
    write_file(path, matrix_to_csv(e.coords));
}

}  // namespace negspec::io
