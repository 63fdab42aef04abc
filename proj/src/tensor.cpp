#include "tensor.hpp"

#include <cmath>
#include <sstream>

#include "error.hpp"

namespace snn {

int64_t shape_numel(const std::vector<int64_t>& s) {
    int64_t n = 1;
    for (int64_t d : s) {
        if (d < 0) throw DataError("negative tensor extent in shape " + shape_str(s));
        n *= d;
    }
    return n;
}

std::string shape_str(const std::vector<int64_t>& s) {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < s.size(); ++i) {
        if (i) os << ", ";
        os << s[i];
    }
    os << "]";
    return os.str();
}

Tensor::Tensor(std::vector<int64_t> s) : shape(std::move(s)) {
    data.assign(static_cast<size_t>(shape_numel(shape)), 0.0f);
}

Tensor::Tensor(std::vector<int64_t> s, float fillv) : shape(std::move(s)) {
    data.assign(static_cast<size_t>(shape_numel(shape)), fillv);
}

bool Tensor::all_finite() const {
    for (float v : data) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

void Tensor::fill(float v) {
    for (auto& x : data) x = v;
}

Tensor Tensor::reshaped(std::vector<int64_t> s) const {
    if (shape_numel(s) != numel()) {
        throw DataError("reshape " + shape_str(shape) + " -> " + shape_str(s) +
                        ": element count mismatch");
    }
    Tensor out;
    out.shape = std::move(s);
    out.data = data;
    return out;
}

}  // namespace snn
