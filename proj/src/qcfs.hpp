#pragma once

#include "tensor.hpp"

namespace snn {

// Quantization clip-floor-shift activation:
//   y = (lambda / levels) * clip(floor(x * levels / lambda + shift), 0, levels)
// The step size lambda/levels is computed once per call so outputs are exact
// multiples of it.
Tensor qcfs_forward(const Tensor& x, float lambda, int levels, float shift = 0.5f);

struct QcfsGrads {
    Tensor grad_x;
    float grad_lambda = 0.0f;
};

// Straight-through surrogate: grad_x passes inside [0, lambda], is blocked
// outside. grad_lambda treats the staircase as its linear interpolant:
// dy/dlambda = y/lambda - (x/lambda) * 1[0 < x < lambda].
QcfsGrads qcfs_backward(const Tensor& x, const Tensor& grad_out, float lambda, int levels,
                        float shift = 0.5f);

}  // namespace snn
