#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace negspec {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A degree (row sum of S, possibly shifted) that is not strictly positive
/// where a square root or division by it is required.
class NegativeDegree : public Error {
public:
    NegativeDegree(std::string what, std::vector<std::size_t> indices)
        : Error(std::move(what)), indices_(std::move(indices)) {}

    const std::vector<std::size_t>& indices() const noexcept { return indices_; }

private:
    std::vector<std::size_t> indices_;
};

/// A cluster whose volume is not strictly positive.
class NegativeVolume : public Error {
public:
    NegativeVolume(std::string what, std::vector<std::size_t> clusters)
        : Error(std::move(what)), clusters_(std::move(clusters)) {}

    const std::vector<std::size_t>& clusters() const noexcept { return clusters_; }

private:
    std::vector<std::size_t> clusters_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Unreadable or malformed input files.
class IoError : public Error {
public:
    using Error::Error;
};

namespace detail {

inline std::string join_indices(const std::vector<std::size_t>& idx, std::size_t limit = 10) {
    std::string out;
    for (std::size_t i = 0; i < idx.size() && i < limit; ++i) {
        if (i) out += ", ";
        out += std::to_string(idx[i]);
    }
    if (idx.size() > limit) out += ", ... (" + std::to_string(idx.size()) + " total)";
    return out;
}

}  // namespace detail
}  // namespace negspec
