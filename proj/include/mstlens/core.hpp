#pragma once

#include "mstlens/types.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mstlens {

/// An n x p numeric matrix with unique row identifiers and feature names.
///
/// Invariants: n >= 2, p >= 1, all values finite, row ids unique. Immutable once built.
class Dataset {
public:
    Dataset(std::vector<std::string> rows, std::vector<std::string> features, Matrix values);

    /// Rows named "0".."n-1" and features "x1".."xp".
    static Dataset from_matrix(Matrix values);

    const std::vector<std::string>& rows() const noexcept { return rows_; }
    const std::vector<std::string>& features() const noexcept { return features_; }
    const Matrix& values() const noexcept { return values_; }
    std::size_t n() const noexcept { return static_cast<std::size_t>(values_.rows()); }
    std::size_t p() const noexcept { return static_cast<std::size_t>(values_.cols()); }

    /// Row index of an id; throws InputError for unknown ids.
    std::size_t row_index(std::string_view id) const;

private:
    std::vector<std::string> rows_;
    std::vector<std::string> features_;
    Matrix values_;
};

/// Two-dimensional coordinates, row-aligned with a Dataset.
class Embedding {
public:
    explicit Embedding(Matrix coords);
    const Matrix& coords() const noexcept { return coords_; }
    std::size_t n() const noexcept { return static_cast<std::size_t>(coords_.rows()); }

private:
    Matrix coords_;
};

/// Cluster labels. Classes are numbered in order of first appearance.
class Clustering {
public:
    explicit Clustering(const std::vector<std::string>& labels);

    std::size_t n() const noexcept { return codes_.size(); }
    std::size_t k() const noexcept { return classes_.size(); }
    const std::vector<std::string>& classes() const noexcept { return classes_; }
    const std::vector<std::size_t>& codes() const noexcept { return codes_; }
    const std::string& label_of(std::size_t row) const { return classes_.at(codes_.at(row)); }

    /// Class index for a label name; throws InputError when absent.
    std::size_t class_index(std::string_view label) const;
    /// Ascending row indices of one class.
    std::vector<VertexId> members(std::size_t class_index) const;

    /// Same class names, labels reassigned per row. Used by the permutation arm.
    std::vector<std::string> labels() const;

private:
    std::vector<std::string> classes_;
    std::vector<std::size_t> codes_;
};

class MetaTable {
public:
    struct Column {
        std::string name;
        bool numeric = false;
        std::vector<std::string> text;   // categorical levels per row (empty when numeric)
        std::vector<double> values;      // numeric values per row (empty when categorical)
    };

    explicit MetaTable(std::vector<Column> columns);
    const std::vector<Column>& columns() const noexcept { return columns_; }
    std::size_t n() const noexcept { return n_; }

private:
    std::vector<Column> columns_;
    std::size_t n_ = 0;
};

struct LoadedSession {
    Dataset data;
    Embedding embedding;
    Clustering clustering;
    std::optional<MetaTable> meta;
};

// Ingestion. Every file is a headered CSV; a first column named `id` carries row ids.
Dataset parse_dataset(std::string_view csv_text, std::string_view source = "data");
Embedding parse_embedding(std::string_view csv_text, std::string_view source = "embedding");
std::vector<std::string> parse_labels(std::string_view csv_text, std::string_view source = "labels");
MetaTable parse_meta(std::string_view csv_text, std::string_view source = "meta");

/// Parses and cross-validates all session inputs. When two files both carry an `id`
/// column their ids must agree row for row.
LoadedSession assemble_session(std::string_view data_csv, std::string_view embedding_csv,
                               std::string_view labels_csv, std::optional<std::string_view> meta_csv);

LoadedSession load_session(const std::string& data_path, const std::string& embedding_path,
                           const std::string& labels_path, const std::optional<std::string>& meta_path);

std::string read_text_file(const std::string& path);

/// Header `id,<features...>`, shortest round-trip decimals.
std::string dataset_to_csv(const Dataset& data);

/// Centered (not scaled) principal components of the rows of a matrix.
struct PcaModel {
    Vector mean;             // p
    Matrix components;       // p x dims, orthonormal columns, largest-magnitude loading positive
    Vector eigenvalues;      // all covariance eigenvalues, descending
    double variance_retained = 0.0;

    Matrix transform(const Matrix& rows) const;
};

/// Requires 1 <= dims <= min(n - 1, p).
PcaModel fit_pca(const Matrix& x, std::size_t dims);

struct PcaResult {
    Dataset scores;
    double variance_retained;
};

PcaResult global_pca(const Dataset& data, std::size_t dims);

/// Rows of `x` selected by index, in the given order.
Matrix select_rows(const Matrix& x, const std::vector<VertexId>& rows);

} // namespace mstlens
