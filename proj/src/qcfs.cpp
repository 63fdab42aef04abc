#include "qcfs.hpp"

#include <cmath>

#include "error.hpp"

namespace snn {

Tensor qcfs_forward(const Tensor& x, float lambda, int levels, float shift) {
    if (lambda <= 0.0f) throw DataError("qcfs: lambda must be > 0");
    if (levels < 1) throw DataError("qcfs: levels must be >= 1");
    const float lf = static_cast<float>(levels);
    const float step = lambda / lf;  // computed once; outputs are exact multiples
    Tensor y;
    y.shape = x.shape;
    y.data.resize(x.data.size());
    for (size_t i = 0; i < x.data.size(); ++i) {
        float k = std::floor(x.data[i] * lf / lambda + shift);
        if (k < 0.0f) k = 0.0f;
        if (k > lf) k = lf;
        y.data[i] = step * k;
    }
    return y;
}

QcfsGrads qcfs_backward(const Tensor& x, const Tensor& grad_out, float lambda, int levels,
                        float shift) {
    if (!x.same_shape(grad_out))
        throw DataError("qcfs backward: shape mismatch " + shape_str(x.shape) + " vs " +
                        shape_str(grad_out.shape));
    const float lf = static_cast<float>(levels);
    const float step = lambda / lf;
    QcfsGrads g;
    g.grad_x.shape = x.shape;
    g.grad_x.data.resize(x.data.size());
    float grad_lambda = 0.0f;
    for (size_t i = 0; i < x.data.size(); ++i) {
        const float xv = x.data[i];
        const float go = grad_out.data[i];
        g.grad_x.data[i] = (xv >= 0.0f && xv <= lambda) ? go : 0.0f;
        float k = std::floor(xv * lf / lambda + shift);
        if (k < 0.0f) k = 0.0f;
        if (k > lf) k = lf;
        const float y = step * k;
        float dydl = y / lambda;
        if (xv > 0.0f && xv < lambda) dydl -= xv / lambda;
        grad_lambda += go * dydl;
    }
    g.grad_lambda = grad_lambda;
    return g;
}

}  // namespace snn
