#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace snn {

/// Dense row-major float32 tensor. Image batches use [N, C, H, W].
struct Tensor {
    std::vector<int64_t> shape;
    std::vector<float> data;

    Tensor() = default;
    explicit Tensor(std::vector<int64_t> s);
    Tensor(std::vector<int64_t> s, float fill);

    static Tensor zeros(std::vector<int64_t> s) { return Tensor(std::move(s)); }

    int64_t numel() const { return static_cast<int64_t>(data.size()); }
    int ndim() const { return static_cast<int>(shape.size()); }
    int64_t dim(int i) const { return shape[static_cast<size_t>(i)]; }

    float* ptr() { return data.data(); }
    const float* ptr() const { return data.data(); }
    float& operator[](int64_t i) { return data[static_cast<size_t>(i)]; }
    float operator[](int64_t i) const { return data[static_cast<size_t>(i)]; }

    bool same_shape(const Tensor& o) const { return shape == o.shape; }
    bool all_finite() const;
    void fill(float v);

    /// Same data, new shape; element count must match.
    Tensor reshaped(std::vector<int64_t> s) const;
};

int64_t shape_numel(const std::vector<int64_t>& s);
std::string shape_str(const std::vector<int64_t>& s);

}  // namespace snn
