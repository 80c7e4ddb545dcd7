#pragma once

#include "vqocc/encoding.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace vqocc {

enum class DatasetSource { Digits8x8, FashionMnist16x16 };

struct LabeledSample {
    PixelVector pixels;
    int label = 0;
};

struct LabeledDataset {
    std::vector<LabeledSample> samples;
    DatasetSource source = DatasetSource::Digits8x8;
    double pixel_max = 16.0;

    std::vector<int> class_counts() const;
};

// Number of training samples drawn per split.
inline constexpr int kTrainSamples = 100;

// Test samples per class: 70 for the digits corpus, 100 for Fashion-MNIST.
int test_samples_per_class(DatasetSource source);

// Reads the 8x8 digits corpus from CSV: 64 integer pixels in [0, 16] plus a
// label in [0, 9] per row. Parse errors report the 1-based line number.
LabeledDataset load_digits(const std::string& path);

// Reads idx-format images/labels (optionally gzip-compressed, detected by
// magic bytes), downsampling each 28x28 image to 16x16.
LabeledDataset load_fashion_mnist(const std::string& images_path,
                                  const std::string& labels_path);

// Area-weighted box resampling of a 28x28 image to 16x16; output pixel (r, c)
// averages the input over [r*28/16, (r+1)*28/16) x [c*28/16, (c+1)*28/16)
// with fractional-overlap weights.
std::vector<double> downsample_16(std::span<const double> img);

struct TestSample {
    PixelVector pixels;
    bool is_anomalous = false;
};

struct Split {
    std::vector<PixelVector> train; // normal-class only
    std::vector<TestSample> test;
    int normal_class = 0;
    std::uint64_t seed = 0;
};

// Seeded draw without replacement: kTrainSamples normal-class training
// samples, then an equal per-class test set disjoint from them.
Split make_split(const LabeledDataset& ds, int normal_class, std::uint64_t seed);

// Variant with a separate test corpus (Fashion-MNIST draws its test samples
// from the official test split).
Split make_split(const LabeledDataset& train_corpus, const LabeledDataset& test_corpus,
                 int normal_class, std::uint64_t seed);

struct HoldoutSplit {
    std::vector<TestSample> holdout;
    std::vector<TestSample> remainder;
};

// Stratified seeded draw of `fraction` of the test samples (both classes
// represented); the remainder is what final AUCs are computed on.
HoldoutSplit holdout(const Split& split, double fraction, std::uint64_t seed);

// x / ||x||.
PixelVector normalize_unit(std::span<const double> x);

} // namespace vqocc
