#include "mstlens/core.hpp"
#include "mstlens/csv.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace mstlens {

namespace {

bool has_id_column(const csv::Table& table) {
    return !table.header.empty() && table.header.front() == "id";
}

std::vector<std::string> id_column(const csv::Table& table) {
    std::vector<std::string> ids;
    ids.reserve(table.rows.size());
    if (has_id_column(table)) {
        for (const auto& row : table.rows) ids.push_back(row.front());
    } else {
        for (std::size_t i = 0; i < table.rows.size(); ++i) ids.push_back(std::to_string(i));
    }
    return ids;
}

std::string cell_name(std::string_view source, std::size_t row, const std::string& column) {
    return std::string(source) + ": row " + std::to_string(row + 1) + ", column '" + column + "'";
}

Matrix numeric_block(const csv::Table& table, std::size_t first_col, std::string_view source) {
    const std::size_t n = table.rows.size();
    const std::size_t p = table.header.size() - first_col;
    Matrix values(n, p);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < p; ++c) {
            const std::string& cell = table.rows[r][first_col + c];
            const auto& column = table.header[first_col + c];
            if (cell.find_first_not_of(" \t") == std::string::npos)
                throw InputError(cell_name(source, r, column) + ": missing value");
            auto value = csv::parse_number(cell);
            if (!value || !std::isfinite(*value))
                throw InputError(cell_name(source, r, column) + ": cannot parse '" + cell + "' as a number");
            values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = *value;
        }
    }
    return values;
}

void check_alignment(const csv::Table& data, const csv::Table& other, std::string_view what) {
    if (other.rows.size() != data.rows.size())
        throw InputError(std::string(what) + " has " + std::to_string(other.rows.size()) +
                         " rows but data has " + std::to_string(data.rows.size()));
    if (has_id_column(data) && has_id_column(other)) {
        for (std::size_t r = 0; r < data.rows.size(); ++r) {
            if (data.rows[r].front() != other.rows[r].front())
                throw InputError(std::string(what) + ": row " + std::to_string(r + 1) + " has id '" +
                                 other.rows[r].front() + "' but data has '" + data.rows[r].front() + "'");
        }
    }
}

} // namespace

// ---------------------------------------------------------------------------------------

Dataset::Dataset(std::vector<std::string> rows, std::vector<std::string> features, Matrix values)
    : rows_(std::move(rows)), features_(std::move(features)), values_(std::move(values)) {
    if (values_.rows() < 2) throw InputError("dataset needs at least 2 rows");
    if (values_.cols() < 1) throw InputError("dataset needs at least 1 feature");
    if (rows_.size() != n() || features_.size() != p())
        throw InputError("dataset ids/feature names do not match the value matrix shape");
    if (!values_.allFinite()) throw InputError("dataset contains non-finite values");
    std::unordered_set<std::string> seen;
    for (const auto& id : rows_)
        if (!seen.insert(id).second) throw InputError("duplicate row id '" + id + "'");
}

Dataset Dataset::from_matrix(Matrix values) {
    std::vector<std::string> rows(static_cast<std::size_t>(values.rows()));
    std::vector<std::string> features(static_cast<std::size_t>(values.cols()));
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = std::to_string(i);
    for (std::size_t j = 0; j < features.size(); ++j) features[j] = "x" + std::to_string(j + 1);
    return Dataset(std::move(rows), std::move(features), std::move(values));
}

std::size_t Dataset::row_index(std::string_view id) const {
    auto it = std::find(rows_.begin(), rows_.end(), id);
    if (it == rows_.end()) throw InputError("unknown row id '" + std::string(id) + "'");
    return static_cast<std::size_t>(it - rows_.begin());
}

Embedding::Embedding(Matrix coords) : coords_(std::move(coords)) {
    if (coords_.cols() != 2) throw InputError("embedding must have exactly 2 coordinate columns");
    if (!coords_.allFinite()) throw InputError("embedding contains non-finite values");
}

Clustering::Clustering(const std::vector<std::string>& labels) {
    std::unordered_map<std::string, std::size_t> lookup;
    codes_.reserve(labels.size());
    for (const auto& label : labels) {
        if (label.empty()) throw InputError("empty cluster label");
        auto [it, inserted] = lookup.emplace(label, classes_.size());
        if (inserted) classes_.push_back(label);
        codes_.push_back(it->second);
    }
    if (classes_.size() < 2) throw InputError("clustering needs at least 2 classes");
}

std::size_t Clustering::class_index(std::string_view label) const {
    auto it = std::find(classes_.begin(), classes_.end(), label);
    if (it == classes_.end()) throw InputError("unknown cluster label '" + std::string(label) + "'");
    return static_cast<std::size_t>(it - classes_.begin());
}

std::vector<VertexId> Clustering::members(std::size_t class_index) const {
    std::vector<VertexId> out;
    for (std::size_t i = 0; i < codes_.size(); ++i)
        if (codes_[i] == class_index) out.push_back(i);
    return out;
}

std::vector<std::string> Clustering::labels() const {
    std::vector<std::string> out;
    out.reserve(codes_.size());
    for (auto code : codes_) out.push_back(classes_[code]);
    return out;
}

MetaTable::MetaTable(std::vector<Column> columns) : columns_(std::move(columns)) {
    if (columns_.empty()) return;
    auto size_of = [](const Column& c) { return c.numeric ? c.values.size() : c.text.size(); };
    n_ = size_of(columns_.front());
    for (const auto& c : columns_)
        if (size_of(c) != n_) throw InputError("meta column '" + c.name + "' has a different length");
}

// ---------------------------------------------------------------------------------------

Dataset parse_dataset(std::string_view csv_text, std::string_view source) {
    auto table = csv::parse(csv_text, source);
    const std::size_t first = has_id_column(table) ? 1 : 0;
    if (table.header.size() <= first) throw InputError(std::string(source) + ": no feature columns");
    if (table.rows.size() < 2) throw InputError(std::string(source) + ": need at least 2 rows");
    std::vector<std::string> features(table.header.begin() + static_cast<std::ptrdiff_t>(first), table.header.end());
    Matrix values = numeric_block(table, first, source);
    return Dataset(id_column(table), std::move(features), std::move(values));
}

Embedding parse_embedding(std::string_view csv_text, std::string_view source) {
    auto table = csv::parse(csv_text, source);
    const std::size_t first = has_id_column(table) ? 1 : 0;
    if (table.header.size() - first != 2)
        throw InputError(std::string(source) + ": expected exactly 2 coordinate columns");
    return Embedding(numeric_block(table, first, source));
}

std::vector<std::string> parse_labels(std::string_view csv_text, std::string_view source) {
    auto table = csv::parse(csv_text, source);
    const std::size_t first = has_id_column(table) ? 1 : 0;
    if (table.header.size() - first != 1) throw InputError(std::string(source) + ": expected exactly 1 label column");
    std::vector<std::string> labels;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& cell = table.rows[r][first];
        if (cell.empty()) throw InputError(cell_name(source, r, table.header[first]) + ": missing label");
        labels.push_back(cell);
    }
    return labels;
}

MetaTable parse_meta(std::string_view csv_text, std::string_view source) {
    auto table = csv::parse(csv_text, source);
    const std::size_t first = has_id_column(table) ? 1 : 0;
    std::vector<MetaTable::Column> columns;
    for (std::size_t c = first; c < table.header.size(); ++c) {
        MetaTable::Column column;
        column.name = table.header[c];
        std::vector<double> values;
        bool numeric = true;
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            const auto& cell = table.rows[r][c];
            if (cell.empty()) throw InputError(cell_name(source, r, column.name) + ": missing value");
            auto v = csv::parse_number(cell);
            if (!v || !std::isfinite(*v)) numeric = false;
            else values.push_back(*v);
        }
        column.numeric = numeric && !table.rows.empty();
        if (column.numeric) {
            column.values = std::move(values);
        } else {
            for (const auto& row : table.rows) column.text.push_back(row[c]);
        }
        columns.push_back(std::move(column));
    }
    MetaTable meta(std::move(columns));
    return meta;
}

LoadedSession assemble_session(std::string_view data_csv, std::string_view embedding_csv,
                               std::string_view labels_csv, std::optional<std::string_view> meta_csv) {
    auto data_table = csv::parse(data_csv, "data");
    check_alignment(data_table, csv::parse(embedding_csv, "embedding"), "embedding");
    check_alignment(data_table, csv::parse(labels_csv, "labels"), "labels");
    if (meta_csv) check_alignment(data_table, csv::parse(*meta_csv, "meta"), "meta");

    Dataset data = parse_dataset(data_csv);
    Embedding embedding = parse_embedding(embedding_csv);
    Clustering clustering(parse_labels(labels_csv));
    std::optional<MetaTable> meta;
    if (meta_csv) meta = parse_meta(*meta_csv);
    return LoadedSession{std::move(data), std::move(embedding), std::move(clustering), std::move(meta)};
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

LoadedSession load_session(const std::string& data_path, const std::string& embedding_path,
                           const std::string& labels_path, const std::optional<std::string>& meta_path) {
    const std::string data = read_text_file(data_path);
    const std::string embedding = read_text_file(embedding_path);
    const std::string labels = read_text_file(labels_path);
    std::optional<std::string> meta;
    if (meta_path) meta = read_text_file(*meta_path);
    return assemble_session(data, embedding, labels,
                            meta ? std::optional<std::string_view>(*meta) : std::nullopt);
}

std::string dataset_to_csv(const Dataset& data) {
    std::ostringstream out;
    std::vector<std::string> cells{"id"};
    cells.insert(cells.end(), data.features().begin(), data.features().end());
    csv::write_row(out, cells);
    for (std::size_t r = 0; r < data.n(); ++r) {
        cells.assign(1, data.rows()[r]);
        for (std::size_t c = 0; c < data.p(); ++c)
            cells.push_back(csv::format_number(data.values()(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c))));
        csv::write_row(out, cells);
    }
    return out.str();
}

// ---------------------------------------------------------------------------------------

Matrix PcaModel::transform(const Matrix& rows) const {
    return (rows.rowwise() - mean.transpose()) * components;
}

PcaModel fit_pca(const Matrix& x, std::size_t dims) {
    const auto n = static_cast<std::size_t>(x.rows());
    const auto p = static_cast<std::size_t>(x.cols());
    if (n < 2) throw InputError("PCA needs at least 2 rows");
    if (dims < 1 || dims > std::min(n - 1, p))
        throw InputError("PCA dims must lie in [1, " + std::to_string(std::min(n - 1, p)) + "], got " +
                         std::to_string(dims));

    PcaModel model;
    model.mean = x.colwise().mean().transpose();
    const Matrix centered = x.rowwise() - model.mean.transpose();

    Eigen::BDCSVD<Matrix> svd(centered, Eigen::ComputeThinV);
    const Vector& s = svd.singularValues();
    model.eigenvalues = s.array().square() / static_cast<double>(n - 1);

    const auto d = static_cast<Eigen::Index>(dims);
    model.components = svd.matrixV().leftCols(d);
    for (Eigen::Index j = 0; j < d; ++j) {
        Eigen::Index arg = 0;
        model.components.col(j).cwiseAbs().maxCoeff(&arg);
        if (model.components(arg, j) < 0) model.components.col(j) *= -1.0;
    }

    const double total = model.eigenvalues.sum();
    model.variance_retained = total > 0 ? model.eigenvalues.head(d).sum() / total : 1.0;
    model.variance_retained = std::clamp(model.variance_retained, 0.0, 1.0);
    return model;
}

PcaResult global_pca(const Dataset& data, std::size_t dims) {
    PcaModel model = fit_pca(data.values(), dims);
    std::vector<std::string> names(dims);
    for (std::size_t j = 0; j < dims; ++j) names[j] = "PC" + std::to_string(j + 1);
    Dataset scores(data.rows(), std::move(names), model.transform(data.values()));
    return PcaResult{std::move(scores), model.variance_retained};
}

Matrix select_rows(const Matrix& x, const std::vector<VertexId>& rows) {
    Matrix out(static_cast<Eigen::Index>(rows.size()), x.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] >= static_cast<std::size_t>(x.rows())) throw InputError("row index out of range");
        out.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(rows[i]));
    }
    return out;
}

} // namespace mstlens
