#include "eode/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace eode {

int popcount(const Mask& mask) {
    int n = 0;
    for (auto b : mask) n += b ? 1 : 0;
    return n;
}

void Dataset::validate() const {
    if (rows() != static_cast<int>(labels.size()))
        throw ValidationError("row count does not match label count");
    if (cols() < 1) throw ValidationError("dataset needs at least one feature");
    if (rows() < 2) throw ValidationError("dataset needs at least two samples");
    if (class_count < 2) throw ValidationError("dataset needs at least two classes");
    if (static_cast<int>(feature_names.size()) != cols())
        throw ValidationError("feature name count does not match column count");
    std::vector<char> seen(static_cast<std::size_t>(class_count), 0);
    for (int y : labels) {
        if (y < 0 || y >= class_count)
            throw ValidationError("label outside [0, class_count)");
        seen[static_cast<std::size_t>(y)] = 1;
    }
    for (int c = 0; c < class_count; ++c)
        if (!seen[static_cast<std::size_t>(c)])
            throw ValidationError("class id " + std::to_string(c) + " has no samples");
    if (!samples.allFinite())
        throw ValidationError("dataset contains NaN or infinite entries");
}

std::vector<int> Dataset::class_counts() const {
    std::vector<int> counts(static_cast<std::size_t>(class_count), 0);
    for (int y : labels) counts[static_cast<std::size_t>(y)]++;
    return counts;
}

std::vector<std::vector<int>> Dataset::rows_by_class() const {
    std::vector<std::vector<int>> groups(static_cast<std::size_t>(class_count));
    for (int i = 0; i < rows(); ++i)
        groups[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])].push_back(i);
    return groups;
}

Dataset Dataset::subset_rows(const std::vector<int>& row_indices) const {
    Dataset out;
    out.samples.resize(static_cast<Eigen::Index>(row_indices.size()), samples.cols());
    out.labels.reserve(row_indices.size());
    for (std::size_t i = 0; i < row_indices.size(); ++i) {
        int r = row_indices[i];
        out.samples.row(static_cast<Eigen::Index>(i)) = samples.row(r);
        out.labels.push_back(labels[static_cast<std::size_t>(r)]);
    }
    out.feature_names = feature_names;
    out.class_count = class_count;
    return out;
}

Dataset make_dataset(Eigen::MatrixXd samples, const std::vector<double>& raw_labels,
                     std::vector<std::string> feature_names) {
    if (samples.rows() != static_cast<Eigen::Index>(raw_labels.size()))
        throw ValidationError("row count does not match label count");

    // Re-encode labels to contiguous 0..c-1 by first appearance.
    std::vector<double> distinct;
    std::vector<int> labels;
    labels.reserve(raw_labels.size());
    for (double raw : raw_labels) {
        if (!std::isfinite(raw)) throw ValidationError("non-finite label value");
        int id = -1;
        for (std::size_t j = 0; j < distinct.size(); ++j) {
            if (distinct[j] == raw) {
                id = static_cast<int>(j);
                break;
            }
        }
        if (id < 0) {
            id = static_cast<int>(distinct.size());
            distinct.push_back(raw);
        }
        labels.push_back(id);
    }

    Dataset ds;
    ds.samples = std::move(samples);
    ds.labels = std::move(labels);
    ds.feature_names = std::move(feature_names);
    ds.class_count = static_cast<int>(distinct.size());
    ds.validate();
    return ds;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_cell(const std::string& raw, int row, int col) {
    std::string s = trim(raw);
    double value = 0.0;
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || s.empty())
        throw ParseError("malformed cell at row " + std::to_string(row) + ", column " +
                         std::to_string(col));
    return value;
}

}  // namespace

Dataset load_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open dataset file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty file: " + path);
    auto header = split_csv_line(line);
    if (header.size() < 2)
        throw ParseError("header needs at least one feature column and a label column");
    for (auto& h : header) h = trim(h);
    if (header.back() != "label")
        throw ParseError("last header column must be named \"label\"");

    const std::size_t width = header.size();
    std::vector<std::string> names(header.begin(), header.end() - 1);

    std::vector<std::vector<double>> rows;
    std::vector<double> raw_labels;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != width)
            throw ParseError("row " + std::to_string(lineno) + " has " +
                             std::to_string(cells.size()) + " cells, expected " +
                             std::to_string(width));
        std::vector<double> values;
        values.reserve(width - 1);
        for (std::size_t c = 0; c + 1 < width; ++c) {
            double v = parse_cell(cells[c], lineno, static_cast<int>(c) + 1);
            if (!std::isfinite(v))
                throw ValidationError("non-finite value at row " + std::to_string(lineno) +
                                      ", column " + std::to_string(c + 1));
            values.push_back(v);
        }
        double label = parse_cell(cells.back(), lineno, static_cast<int>(width));
        rows.push_back(std::move(values));
        raw_labels.push_back(label);
    }
    if (rows.size() < 2) throw ValidationError("dataset needs at least two samples");

    Eigen::MatrixXd samples(static_cast<Eigen::Index>(rows.size()),
                            static_cast<Eigen::Index>(width - 1));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j + 1 < width; ++j)
            samples(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];

    return make_dataset(std::move(samples), raw_labels, std::move(names));
}

SplitPair stratified_split(const Dataset& ds, double test_fraction, std::uint64_t seed) {
    ds.validate();
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw ConfigError("test_fraction must be in (0, 1)");

    Rng rng(derive_seed(seed, "stratified-split"));
    std::vector<int> train_rows, test_rows;
    for (auto& group : ds.rows_by_class()) {
        const int n = static_cast<int>(group.size());
        if (n < 2)
            throw ValidationError("stratified split needs at least 2 samples per class");
        std::vector<int> idx = group;
        shuffle_in_place(idx, rng);
        int take = static_cast<int>(std::llround(test_fraction * n));
        take = std::clamp(take, 1, n - 1);
        for (int i = 0; i < n; ++i)
            (i < take ? test_rows : train_rows).push_back(idx[static_cast<std::size_t>(i)]);
    }
    std::sort(train_rows.begin(), train_rows.end());
    std::sort(test_rows.begin(), test_rows.end());

    SplitPair out;
    out.train = ds.subset_rows(train_rows);
    out.test = ds.subset_rows(test_rows);
    out.seed = seed;
    return out;
}

FoldSet stratified_kfold(const Dataset& ds, int k, std::uint64_t seed) {
    if (k < 2) throw ConfigError("k must be >= 2");

    FoldSet out;
    out.seed = seed;
    out.folds.assign(static_cast<std::size_t>(k), {});

    Rng rng(derive_seed(seed, "stratified-kfold"));
    auto groups = ds.rows_by_class();
    for (std::size_t c = 0; c < groups.size(); ++c) {
        std::vector<int> idx = groups[c];
        if (static_cast<int>(idx.size()) < k && !idx.empty())
            out.warnings.push_back("class " + std::to_string(c) + " has " +
                                   std::to_string(idx.size()) +
                                   " samples, fewer than k=" + std::to_string(k) +
                                   "; distributing round-robin");
        shuffle_in_place(idx, rng);
        for (std::size_t i = 0; i < idx.size(); ++i)
            out.folds[i % static_cast<std::size_t>(k)].push_back(idx[i]);
    }
    for (auto& fold : out.folds) std::sort(fold.begin(), fold.end());
    return out;
}

Dataset apply_mask(const Dataset& ds, const Mask& mask) {
    if (static_cast<int>(mask.size()) != ds.cols())
        throw ValidationError("mask length does not match feature count");
    const int kept = popcount(mask);
    if (kept == 0) throw ValidationError("mask selects no features");

    Dataset out;
    out.samples.resize(ds.samples.rows(), kept);
    out.feature_names.reserve(static_cast<std::size_t>(kept));
    int j = 0;
    for (int c = 0; c < ds.cols(); ++c) {
        if (!mask[static_cast<std::size_t>(c)]) continue;
        out.samples.col(j) = ds.samples.col(c);
        out.feature_names.push_back(ds.feature_names[static_cast<std::size_t>(c)]);
        ++j;
    }
    out.labels = ds.labels;
    out.class_count = ds.class_count;
    return out;
}

}  // namespace eode
