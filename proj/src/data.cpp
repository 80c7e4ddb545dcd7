#include "vqocc/data.hpp"

#include "vqocc/errors.hpp"
#include "vqocc/rng.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

namespace vqocc {

namespace {

constexpr int kNumClasses = 10;
constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;

std::vector<unsigned char> read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FormatError("cannot open file: " + path);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    return bytes;
}

std::vector<unsigned char> gunzip(const std::vector<unsigned char>& compressed,
                                  const std::string& path) {
    z_stream strm{};
    // 15 + 16: max window with gzip header handling.
    if (inflateInit2(&strm, 15 + 16) != Z_OK)
        throw FormatError("zlib initialization failed for " + path);
    std::vector<unsigned char> out;
    out.reserve(compressed.size() * 4);
    unsigned char buffer[1 << 16];
    strm.next_in = const_cast<unsigned char*>(compressed.data());
    strm.avail_in = static_cast<uInt>(compressed.size());
    int rc = Z_OK;
    do {
        strm.next_out = buffer;
        strm.avail_out = sizeof(buffer);
        rc = inflate(&strm, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&strm);
            throw FormatError("corrupt gzip stream in " + path);
        }
        out.insert(out.end(), buffer, buffer + (sizeof(buffer) - strm.avail_out));
    } while (rc != Z_STREAM_END && strm.avail_in > 0);
    inflateEnd(&strm);
    if (rc != Z_STREAM_END)
        throw FormatError("truncated gzip stream in " + path);
    return out;
}

std::vector<unsigned char> read_maybe_gzipped(const std::string& path) {
    auto bytes = read_file_bytes(path);
    if (bytes.size() >= 2 && bytes[0] == 0x1F && bytes[1] == 0x8B)
        return gunzip(bytes, path);
    return bytes;
}

std::uint32_t read_u32_be(const std::vector<unsigned char>& bytes, std::size_t offset,
                          const std::string& path) {
    if (offset + 4 > bytes.size())
        throw FormatError("truncated idx header in " + path);
    return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
           (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

} // namespace

std::vector<int> LabeledDataset::class_counts() const {
    std::vector<int> counts(kNumClasses, 0);
    for (const auto& s : samples)
        ++counts[static_cast<std::size_t>(s.label)];
    return counts;
}

int test_samples_per_class(DatasetSource source) {
    return source == DatasetSource::Digits8x8 ? 70 : 100;
}

LabeledDataset load_digits(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open digits CSV: " + path);

    LabeledDataset ds;
    ds.source = DatasetSource::Digits8x8;
    ds.pixel_max = 16.0;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        std::istringstream row(line);
        std::string field;
        std::vector<double> values;
        while (std::getline(row, field, ','))
            values.push_back([&] {
                try {
                    std::size_t pos = 0;
                    const double v = std::stod(field, &pos);
                    while (pos < field.size() && std::isspace(static_cast<unsigned char>(field[pos])))
                        ++pos;
                    if (pos != field.size())
                        throw std::invalid_argument(field);
                    return v;
                } catch (const std::exception&) {
                    throw ParseError(path + ":" + std::to_string(line_no) +
                                     ": not a number: '" + field + "'");
                }
            }());
        if (values.size() != 65)
            throw ParseError(path + ":" + std::to_string(line_no) + ": expected 65 fields, got " +
                             std::to_string(values.size()));
        LabeledSample sample;
        sample.pixels.assign(values.begin(), values.begin() + 64);
        for (std::size_t i = 0; i < 64; ++i) {
            if (sample.pixels[i] < 0.0 || sample.pixels[i] > 16.0)
                throw ParseError(path + ":" + std::to_string(line_no) + ": pixel value " +
                                 std::to_string(sample.pixels[i]) + " outside [0, 16]");
        }
        const double label = values[64];
        if (label != std::floor(label) || label < 0.0 || label > 9.0)
            throw ParseError(path + ":" + std::to_string(line_no) + ": label " +
                             std::to_string(label) + " outside [0, 9]");
        sample.label = static_cast<int>(label);
        ds.samples.push_back(std::move(sample));
    }
    return ds;
}

LabeledDataset load_fashion_mnist(const std::string& images_path,
                                  const std::string& labels_path) {
    const auto image_bytes = read_maybe_gzipped(images_path);
    const auto label_bytes = read_maybe_gzipped(labels_path);

    if (read_u32_be(image_bytes, 0, images_path) != kIdxImagesMagic)
        throw FormatError("bad idx magic in " + images_path + " (expected image file 0x803)");
    if (read_u32_be(label_bytes, 0, labels_path) != kIdxLabelsMagic)
        throw FormatError("bad idx magic in " + labels_path + " (expected label file 0x801)");

    const std::uint32_t n_images = read_u32_be(image_bytes, 4, images_path);
    const std::uint32_t rows = read_u32_be(image_bytes, 8, images_path);
    const std::uint32_t cols = read_u32_be(image_bytes, 12, images_path);
    const std::uint32_t n_labels = read_u32_be(label_bytes, 4, labels_path);

    if (rows != 28 || cols != 28)
        throw FormatError(images_path + ": expected 28x28 images, got " +
                          std::to_string(rows) + "x" + std::to_string(cols));
    if (n_images != n_labels)
        throw FormatError("image/label count mismatch: " + std::to_string(n_images) + " vs " +
                          std::to_string(n_labels));
    const std::size_t pixel_count = std::size_t{rows} * cols;
    if (image_bytes.size() != 16 + std::size_t{n_images} * pixel_count)
        throw FormatError("truncated image payload in " + images_path);
    if (label_bytes.size() != 8 + std::size_t{n_labels})
        throw FormatError("truncated label payload in " + labels_path);

    LabeledDataset ds;
    ds.source = DatasetSource::FashionMnist16x16;
    ds.pixel_max = 255.0;
    ds.samples.reserve(n_images);
    std::vector<double> img(pixel_count);
    for (std::uint32_t i = 0; i < n_images; ++i) {
        const unsigned char* src = image_bytes.data() + 16 + std::size_t{i} * pixel_count;
        for (std::size_t p = 0; p < pixel_count; ++p)
            img[p] = static_cast<double>(src[p]);
        const unsigned char label = label_bytes[8 + i];
        if (label > 9)
            throw FormatError(labels_path + ": label " + std::to_string(int{label}) +
                              " outside [0, 9] at index " + std::to_string(i));
        ds.samples.push_back(LabeledSample{downsample_16(img), int{label}});
    }
    return ds;
}

std::vector<double> downsample_16(std::span<const double> img) {
    constexpr int kIn = 28;
    constexpr int kOut = 16;
    constexpr double kScale = static_cast<double>(kIn) / kOut; // 1.75

    if (img.size() != std::size_t{kIn} * kIn)
        throw InvalidArgument("downsample_16: expected 784 values, got " +
                              std::to_string(img.size()));

    // 1D fractional-overlap weights of input cell i against output cell o.
    struct Overlap {
        int first;
        double w[3]; // at most ceil(1.75) + 1 = 3 input cells touch one output cell
        int count;
    };
    Overlap overlaps[kOut];
    for (int o = 0; o < kOut; ++o) {
        const double lo = o * kScale;
        const double hi = (o + 1) * kScale;
        const int first = static_cast<int>(std::floor(lo));
        const int last = std::min(kIn - 1, static_cast<int>(std::ceil(hi)) - 1);
        overlaps[o].first = first;
        overlaps[o].count = last - first + 1;
        for (int i = first; i <= last; ++i)
            overlaps[o].w[i - first] =
                std::max(0.0, std::min(hi, static_cast<double>(i + 1)) -
                                  std::max(lo, static_cast<double>(i)));
    }

    std::vector<double> out(std::size_t{kOut} * kOut, 0.0);
    const double inv_area = 1.0 / (kScale * kScale);
    for (int r = 0; r < kOut; ++r) {
        for (int c = 0; c < kOut; ++c) {
            double acc = 0.0;
            for (int a = 0; a < overlaps[r].count; ++a) {
                const int ir = overlaps[r].first + a;
                for (int b = 0; b < overlaps[c].count; ++b) {
                    const int ic = overlaps[c].first + b;
                    acc += overlaps[r].w[a] * overlaps[c].w[b] *
                           img[std::size_t{static_cast<std::size_t>(ir)} * kIn +
                               static_cast<std::size_t>(ic)];
                }
            }
            out[std::size_t{static_cast<std::size_t>(r)} * kOut +
                static_cast<std::size_t>(c)] = acc * inv_area;
        }
    }
    return out;
}

namespace {

std::vector<std::size_t> indices_of_class(const LabeledDataset& ds, int cls) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < ds.samples.size(); ++i)
        if (ds.samples[i].label == cls)
            idx.push_back(i);
    return idx;
}

Split make_split_impl(const LabeledDataset& train_corpus, const LabeledDataset& test_corpus,
                      bool same_corpus, int normal_class, std::uint64_t seed) {
    if (normal_class < 0 || normal_class >= kNumClasses)
        throw InvalidArgument("make_split: normal_class must be in [0, 9]");

    Split split;
    split.normal_class = normal_class;
    split.seed = seed;

    auto normal_idx = indices_of_class(train_corpus, normal_class);
    if (static_cast<int>(normal_idx.size()) < kTrainSamples)
        throw CapacityError("make_split: class " + std::to_string(normal_class) + " has only " +
                            std::to_string(normal_idx.size()) + " samples, need " +
                            std::to_string(kTrainSamples) + " for training");

    Rng train_rng(derive_seed(seed, "split-train"));
    train_rng.shuffle(normal_idx);
    std::vector<std::size_t> train_taken(normal_idx.begin(),
                                         normal_idx.begin() + kTrainSamples);
    for (std::size_t i : train_taken)
        split.train.push_back(train_corpus.samples[i].pixels);

    std::vector<bool> in_train(train_corpus.samples.size(), false);
    for (std::size_t i : train_taken)
        in_train[i] = true;

    const int per_class = test_samples_per_class(test_corpus.source);
    Rng test_rng(derive_seed(seed, "split-test"));
    for (int cls = 0; cls < kNumClasses; ++cls) {
        auto candidates = indices_of_class(test_corpus, cls);
        if (same_corpus)
            std::erase_if(candidates, [&](std::size_t i) { return in_train[i]; });
        if (static_cast<int>(candidates.size()) < per_class)
            throw CapacityError("make_split: class " + std::to_string(cls) + " has only " +
                                std::to_string(candidates.size()) +
                                " test candidates, need " + std::to_string(per_class));
        test_rng.shuffle(candidates);
        for (int k = 0; k < per_class; ++k)
            split.test.push_back(TestSample{test_corpus.samples[candidates[static_cast<std::size_t>(k)]].pixels,
                                            cls != normal_class});
    }
    return split;
}

} // namespace

Split make_split(const LabeledDataset& ds, int normal_class, std::uint64_t seed) {
    return make_split_impl(ds, ds, /*same_corpus=*/true, normal_class, seed);
}

Split make_split(const LabeledDataset& train_corpus, const LabeledDataset& test_corpus,
                 int normal_class, std::uint64_t seed) {
    if (train_corpus.source != test_corpus.source)
        throw InvalidArgument("make_split: train and test corpora come from different sources");
    return make_split_impl(train_corpus, test_corpus, /*same_corpus=*/false, normal_class,
                           seed);
}

HoldoutSplit holdout(const Split& split, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction < 1.0))
        throw InvalidArgument("holdout: fraction must be in (0, 1)");

    std::vector<std::size_t> normal_idx, anomalous_idx;
    for (std::size_t i = 0; i < split.test.size(); ++i)
        (split.test[i].is_anomalous ? anomalous_idx : normal_idx).push_back(i);
    if (normal_idx.empty() || anomalous_idx.empty())
        throw InvalidArgument("holdout: test set must contain both classes");

    Rng rng(derive_seed(seed, "holdout"));
    std::vector<bool> held(split.test.size(), false);
    for (auto* group : {&normal_idx, &anomalous_idx}) {
        rng.shuffle(*group);
        const std::size_t take = std::max<std::size_t>(
            1, static_cast<std::size_t>(
                   std::llround(fraction * static_cast<double>(group->size()))));
        for (std::size_t k = 0; k < take; ++k)
            held[(*group)[k]] = true;
    }

    HoldoutSplit result;
    for (std::size_t i = 0; i < split.test.size(); ++i)
        (held[i] ? result.holdout : result.remainder).push_back(split.test[i]);
    return result;
}

PixelVector normalize_unit(std::span<const double> x) {
    double sq = 0.0;
    for (double v : x)
        sq += v * v;
    if (sq <= 0.0)
        throw DegenerateInput("normalize_unit: zero vector");
    const double inv = 1.0 / std::sqrt(sq);
    PixelVector out(x.begin(), x.end());
    for (double& v : out)
        v *= inv;
    return out;
}

} // namespace vqocc
