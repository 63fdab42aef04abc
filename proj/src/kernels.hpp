#pragma once

#include <cstdint>
#include <vector>

namespace snn::kernels {

// Every kernel comes in two flavours: a *_serial reference used by the tests
// and an OpenMP version. The unsuffixed entry points dispatch on the runtime
// switch below. Work is partitioned so that each output element is written by
// exactly one thread with a fixed inner summation order, so results are
// bit-identical to the serial path for any thread count.

bool parallel_enabled();
void set_parallel(bool on);

struct Conv2dShape {
    int64_t n = 0, c_in = 0, h_in = 0, w_in = 0;
    int64_t c_out = 0, k = 0, stride = 1, pad = 0;
    int64_t h_out() const { return (h_in + 2 * pad - k) / stride + 1; }
    int64_t w_out() const { return (w_in + 2 * pad - k) / stride + 1; }
};

struct Pool2dShape {
    int64_t n = 0, c = 0, h_in = 0, w_in = 0;
    int64_t k = 0, stride = 0;
    int64_t h_out() const { return (h_in - k) / stride + 1; }
    int64_t w_out() const { return (w_in - k) / stride + 1; }
};

// x: [n, c_in, h_in, w_in], w: [c_out, c_in, k, k], b: [c_out] (may be null),
// y: [n, c_out, h_out, w_out]. Zero padding.
void conv2d_forward(const float* x, const float* w, const float* b, float* y,
                    const Conv2dShape& s);
void conv2d_forward_serial(const float* x, const float* w, const float* b, float* y,
                           const Conv2dShape& s);

void conv2d_backward_input(const float* gy, const float* w, float* gx, const Conv2dShape& s);
void conv2d_backward_input_serial(const float* gy, const float* w, float* gx,
                                  const Conv2dShape& s);

void conv2d_backward_params(const float* x, const float* gy, float* gw, float* gb,
                            const Conv2dShape& s);
void conv2d_backward_params_serial(const float* x, const float* gy, float* gw, float* gb,
                                   const Conv2dShape& s);

// x: [n, in], w: [out, in], b: [out] (may be null), y: [n, out].
void linear_forward(const float* x, const float* w, const float* b, float* y, int64_t n,
                    int64_t in, int64_t out);
void linear_forward_serial(const float* x, const float* w, const float* b, float* y, int64_t n,
                           int64_t in, int64_t out);

void linear_backward_input(const float* gy, const float* w, float* gx, int64_t n, int64_t in,
                           int64_t out);
void linear_backward_input_serial(const float* gy, const float* w, float* gx, int64_t n,
                                  int64_t in, int64_t out);

void linear_backward_params(const float* x, const float* gy, float* gw, float* gb, int64_t n,
                            int64_t in, int64_t out);
void linear_backward_params_serial(const float* x, const float* gy, float* gw, float* gb,
                                   int64_t n, int64_t in, int64_t out);

// y[cell] = mean of the k*k window.
void avgpool2d_forward(const float* x, float* y, const Pool2dShape& s);
void avgpool2d_forward_serial(const float* x, float* y, const Pool2dShape& s);
void avgpool2d_backward(const float* gy, float* gx, const Pool2dShape& s);

// argmax: index into the flattened input, one per output cell.
void maxpool2d_forward(const float* x, float* y, int64_t* argmax, const Pool2dShape& s);
void maxpool2d_backward(const float* gy, const int64_t* argmax, float* gx, int64_t n_out,
                        int64_t n_in);

}  // namespace snn::kernels
