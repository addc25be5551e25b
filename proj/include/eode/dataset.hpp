#ifndef EODE_DATASET_HPP
#define EODE_DATASET_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "eode/common.hpp"

namespace eode {

/// Binary vector over feature (or pool) indices; the decoded form of a wolf
/// position.
using Mask = std::vector<std::uint8_t>;

int popcount(const Mask& mask);

/// Dense numeric matrix with contiguous integer class labels.
///
/// `validate()` enforces the ingestion invariants (n >= 2, c >= 2, finite
/// cells, every class id present). Row subsets taken during training may
/// legitimately contain fewer classes and are not re-validated.
struct Dataset {
    Eigen::MatrixXd samples;  // n rows x dim columns
    std::vector<int> labels;  // one id in [0, class_count) per row
    std::vector<std::string> feature_names;
    int class_count = 0;

    int rows() const { return static_cast<int>(samples.rows()); }
    int cols() const { return static_cast<int>(samples.cols()); }

    void validate() const;

    /// Rows per class id, indexed 0..class_count-1 (over labels actually
    /// present; absent ids count 0).
    std::vector<int> class_counts() const;

    /// Row indices grouped by class id, preserving row order.
    std::vector<std::vector<int>> rows_by_class() const;

    /// New dataset with the given rows (order as given). Feature names and
    /// class_count carry over; the subset may be single-class.
    Dataset subset_rows(const std::vector<int>& row_indices) const;
};

struct SplitPair {
    Dataset train;
    Dataset test;
    std::uint64_t seed = 0;
};

struct FoldSet {
    std::vector<std::vector<int>> folds;
    std::uint64_t seed = 0;
    std::vector<std::string> warnings;
};

/// Builds a Dataset from raw parts, re-encoding labels to contiguous
/// 0..c-1 by first appearance, and validates it.
Dataset make_dataset(Eigen::MatrixXd samples, const std::vector<double>& raw_labels,
                     std::vector<std::string> feature_names);

/// CSV contract: UTF-8, comma-separated, first row header, last column
/// literally named "label", all cells numeric with '.' decimal point.
Dataset load_dataset_csv(const std::string& path);

/// Per class, round(test_fraction * class_n) rows go to test, clamped to
/// [1, class_n - 1] so both partitions keep every class.
SplitPair stratified_split(const Dataset& ds, double test_fraction, std::uint64_t seed);

/// Stratified k folds; per class the fold sizes differ by at most one.
/// Classes smaller than k are distributed round-robin with a warning record.
FoldSet stratified_kfold(const Dataset& ds, int k, std::uint64_t seed);

/// Keeps exactly the columns whose mask bit is 1, order preserved.
Dataset apply_mask(const Dataset& ds, const Mask& mask);

}  // namespace eode

#endif
