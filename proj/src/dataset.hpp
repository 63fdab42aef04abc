#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rng.hpp"
#include "tensor.hpp"

namespace snn {

struct Sample {
    Tensor image;  // [3, H, W], values in [0, 1]
    int label = 0;
};

struct LabeledDataset {
    std::vector<Sample> samples;
    std::vector<std::string> class_names;
    std::string split = "all";

    int64_t size() const { return static_cast<int64_t>(samples.size()); }
    int n_classes() const { return static_cast<int>(class_names.size()); }
    std::vector<int64_t> image_shape() const;
    std::vector<int64_t> class_counts() const;
};

struct SplitResult {
    LabeledDataset train, val, test;
};

/// Directory-per-class loader for binary PPM (P6) images. Class index is the
/// sorted directory order. Unreadable files are skipped with a warning to
/// stderr and counted; an empty class directory is an error.
LabeledDataset load_image_folder(const std::string& path, int target_size = 224,
                                 int* skipped = nullptr);

/// Synthetic stand-in dataset: each class is a parametric ellipse texture
/// (distinct axis ratio, wall thickness and interior speckle density) with
/// per-sample jitter in position, size and rotation.
LabeledDataset synth_generate(int n_classes, int n_per_class, int image_size, uint64_t seed);

/// Stratified 72/8/20 train/val/test split (20% test, then 10% of the
/// remainder as validation), deterministic under seed.
SplitResult stratified_split(const LabeledDataset& ds, uint64_t seed);

struct AugmentParams {
    bool flip = false;
    float angle_deg = 0.0f;  // [-20, 20]
    float brightness = 1.0f, contrast = 1.0f, saturation = 1.0f;  // [0.8, 1.2]
};

AugmentParams sample_augment_params(Rng& rng);
Tensor augment_with(const Tensor& image, const AugmentParams& p);
Tensor augment(const Tensor& image, Rng& rng);

Tensor resize_bilinear(const Tensor& image, int out_h, int out_w);

/// Binary PPM (P6, maxval 255) round trip.
Tensor read_ppm(const std::string& path);
void write_ppm(const Tensor& image, const std::string& path);

/// Writes the directory-per-class layout plus a manifest.csv
/// (path,class,split).
void materialize_dataset(const LabeledDataset& ds, const std::string& dir);
void write_manifest(const SplitResult& splits, const std::string& csv_path,
                    const std::string& source);

}  // namespace snn
