#ifndef EODE_FIXTURES_HPP
#define EODE_FIXTURES_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "eode/dataset.hpp"

namespace eode::fixtures {

/// Well-separated Gaussian blobs, one center per class.
Dataset make_blobs(int per_class, int dim, int classes, double separation,
                   std::uint64_t seed);

struct InformativeFixture {
    Dataset data;
    std::vector<int> informative;  // ground-truth feature indices, sorted
};

/// 100 i.i.d. standard-normal features of which 10 (chosen by the seed)
/// separate the two classes: each informative feature gets its own mean
/// shift, up for class 1 and down for class 0. The rest is pure noise.
InformativeFixture make_informative_noise(int rows, std::uint64_t seed);

struct NoisyMulticlassConfig {
    int rows = 60;
    int dim = 500;
    int classes = 3;
    int markers_per_class = 8;    // feature block that responds to one class
    int modes_per_class = 2;      // regulation patterns within a class
    double marker_shift = 1.6;    // per-marker mean offset when responding
    double noise_sd = 1.0;
    double label_noise = 0.08;
    double batch_fraction = 0.0;  // share of rows from a corrupted batch
    std::uint64_t seed = 0;
};

/// Small-sample, high-dimensional, multimodal classes with label noise: the
/// regime where a single classifier overfits and an ensemble should not.
/// Each class owns a block of marker features; a row activates its class
/// block with one of several sign patterns (up/down regulation modes), so
/// class means carry little signal and no single decision boundary is easy.
/// A batch_fraction share of rows simulates a corrupted acquisition batch:
/// their markers are wiped, their labels are uniform random, and they carry
/// a strong shared signature on a reserved block of batch features, so the
/// corruption is spatially coherent and a clustering step can isolate it.
Dataset make_noisy_multiclass(const NoisyMulticlassConfig& cfg);

/// Log-scale expression-like matrix: 179 samples x 85 genes, two classes of
/// 104 and 75 samples, with a block of class-shifted genes.
Dataset make_expression_surrogate(std::uint64_t seed);

void write_csv(const Dataset& ds, const std::string& path);

}  // namespace eode::fixtures

#endif
