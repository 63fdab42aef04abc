#include "kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cstring>
#include <limits>

namespace snn::kernels {

namespace {
std::atomic<bool> g_parallel{true};
}

bool parallel_enabled() { return g_parallel.load(std::memory_order_relaxed); }
void set_parallel(bool on) { g_parallel.store(on, std::memory_order_relaxed); }

// ---------------------------------------------------------------- conv2d ---

static inline void conv2d_forward_one(const float* x, const float* w, const float* b, float* y,
                                      const Conv2dShape& s, int64_t n, int64_t co) {
    const int64_t ho = s.h_out(), wo = s.w_out();
    const float* xn = x + n * s.c_in * s.h_in * s.w_in;
    const float* wco = w + co * s.c_in * s.k * s.k;
    float* yp = y + (n * s.c_out + co) * ho * wo;
    const float bias = b ? b[co] : 0.0f;
    for (int64_t oh = 0; oh < ho; ++oh) {
        for (int64_t ow = 0; ow < wo; ++ow) {
            float acc = bias;
            for (int64_t ci = 0; ci < s.c_in; ++ci) {
                const float* xc = xn + ci * s.h_in * s.w_in;
                const float* wc = wco + ci * s.k * s.k;
                for (int64_t kh = 0; kh < s.k; ++kh) {
                    const int64_t ih = oh * s.stride - s.pad + kh;
                    if (ih < 0 || ih >= s.h_in) continue;
                    for (int64_t kw = 0; kw < s.k; ++kw) {
                        const int64_t iw = ow * s.stride - s.pad + kw;
                        if (iw < 0 || iw >= s.w_in) continue;
                        acc += xc[ih * s.w_in + iw] * wc[kh * s.k + kw];
                    }
                }
            }
            yp[oh * wo + ow] = acc;
        }
    }
}

void conv2d_forward_serial(const float* x, const float* w, const float* b, float* y,
                           const Conv2dShape& s) {
    for (int64_t n = 0; n < s.n; ++n)
        for (int64_t co = 0; co < s.c_out; ++co) conv2d_forward_one(x, w, b, y, s, n, co);
}

void conv2d_forward(const float* x, const float* w, const float* b, float* y,
                    const Conv2dShape& s) {
    if (!parallel_enabled()) {
        conv2d_forward_serial(x, w, b, y, s);
        return;
    }
#pragma omp parallel for collapse(2) schedule(static)
    for (int64_t n = 0; n < s.n; ++n)
        for (int64_t co = 0; co < s.c_out; ++co) conv2d_forward_one(x, w, b, y, s, n, co);
}

static inline void conv2d_backward_input_one(const float* gy, const float* w, float* gx,
                                             const Conv2dShape& s, int64_t n, int64_t ci) {
    const int64_t ho = s.h_out(), wo = s.w_out();
    float* gxp = gx + (n * s.c_in + ci) * s.h_in * s.w_in;
    for (int64_t ih = 0; ih < s.h_in; ++ih) {
        for (int64_t iw = 0; iw < s.w_in; ++iw) {
            float acc = 0.0f;
            for (int64_t co = 0; co < s.c_out; ++co) {
                const float* gyp = gy + (n * s.c_out + co) * ho * wo;
                const float* wc = w + (co * s.c_in + ci) * s.k * s.k;
                for (int64_t kh = 0; kh < s.k; ++kh) {
                    const int64_t num_h = ih + s.pad - kh;
                    if (num_h < 0 || num_h % s.stride) continue;
                    const int64_t oh = num_h / s.stride;
                    if (oh >= ho) continue;
                    for (int64_t kw = 0; kw < s.k; ++kw) {
                        const int64_t num_w = iw + s.pad - kw;
                        if (num_w < 0 || num_w % s.stride) continue;
                        const int64_t ow = num_w / s.stride;
                        if (ow >= wo) continue;
                        acc += gyp[oh * wo + ow] * wc[kh * s.k + kw];
                    }
                }
            }
            gxp[ih * s.w_in + iw] = acc;
        }
    }
}

void conv2d_backward_input_serial(const float* gy, const float* w, float* gx,
                                  const Conv2dShape& s) {
    for (int64_t n = 0; n < s.n; ++n)
        for (int64_t ci = 0; ci < s.c_in; ++ci) conv2d_backward_input_one(gy, w, gx, s, n, ci);
}

void conv2d_backward_input(const float* gy, const float* w, float* gx, const Conv2dShape& s) {
    if (!parallel_enabled()) {
        conv2d_backward_input_serial(gy, w, gx, s);
        return;
    }
#pragma omp parallel for collapse(2) schedule(static)
    for (int64_t n = 0; n < s.n; ++n)
        for (int64_t ci = 0; ci < s.c_in; ++ci) conv2d_backward_input_one(gy, w, gx, s, n, ci);
}

static inline void conv2d_backward_weight_one(const float* x, const float* gy, float* gw,
                                              const Conv2dShape& s, int64_t co, int64_t ci) {
    const int64_t ho = s.h_out(), wo = s.w_out();
    float* gwc = gw + (co * s.c_in + ci) * s.k * s.k;
    for (int64_t kh = 0; kh < s.k; ++kh) {
        for (int64_t kw = 0; kw < s.k; ++kw) {
            float acc = 0.0f;
            for (int64_t n = 0; n < s.n; ++n) {
                const float* xc = x + (n * s.c_in + ci) * s.h_in * s.w_in;
                const float* gyp = gy + (n * s.c_out + co) * ho * wo;
                for (int64_t oh = 0; oh < ho; ++oh) {
                    const int64_t ih = oh * s.stride - s.pad + kh;
                    if (ih < 0 || ih >= s.h_in) continue;
                    for (int64_t ow = 0; ow < wo; ++ow) {
                        const int64_t iw = ow * s.stride - s.pad + kw;
                        if (iw < 0 || iw >= s.w_in) continue;
                        acc += gyp[oh * wo + ow] * xc[ih * s.w_in + iw];
                    }
                }
            }
            gwc[kh * s.k + kw] = acc;
        }
    }
}

void conv2d_backward_params_serial(const float* x, const float* gy, float* gw, float* gb,
                                   const Conv2dShape& s) {
    for (int64_t co = 0; co < s.c_out; ++co)
        for (int64_t ci = 0; ci < s.c_in; ++ci) conv2d_backward_weight_one(x, gy, gw, s, co, ci);
    if (!gb) return;
    const int64_t per = s.h_out() * s.w_out();
    for (int64_t co = 0; co < s.c_out; ++co) {
        float acc = 0.0f;
        for (int64_t n = 0; n < s.n; ++n) {
            const float* gyp = gy + (n * s.c_out + co) * per;
            for (int64_t i = 0; i < per; ++i) acc += gyp[i];
        }
        gb[co] = acc;
    }
}

void conv2d_backward_params(const float* x, const float* gy, float* gw, float* gb,
                            const Conv2dShape& s) {
    if (!parallel_enabled()) {
        conv2d_backward_params_serial(x, gy, gw, gb, s);
        return;
    }
#pragma omp parallel for collapse(2) schedule(static)
    for (int64_t co = 0; co < s.c_out; ++co)
        for (int64_t ci = 0; ci < s.c_in; ++ci) conv2d_backward_weight_one(x, gy, gw, s, co, ci);
    if (!gb) return;
    const int64_t per = s.h_out() * s.w_out();
#pragma omp parallel for schedule(static)
    for (int64_t co = 0; co < s.c_out; ++co) {
        float acc = 0.0f;
        for (int64_t n = 0; n < s.n; ++n) {
            const float* gyp = gy + (n * s.c_out + co) * per;
            for (int64_t i = 0; i < per; ++i) acc += gyp[i];
        }
        gb[co] = acc;
    }
}

// ---------------------------------------------------------------- linear ---

void linear_forward_serial(const float* x, const float* w, const float* b, float* y, int64_t n,
                           int64_t in, int64_t out) {
    for (int64_t i = 0; i < n; ++i) {
        const float* xr = x + i * in;
        float* yr = y + i * out;
        for (int64_t o = 0; o < out; ++o) {
            float acc = b ? b[o] : 0.0f;
            const float* wr = w + o * in;
            for (int64_t j = 0; j < in; ++j) acc += xr[j] * wr[j];
            yr[o] = acc;
        }
    }
}

void linear_forward(const float* x, const float* w, const float* b, float* y, int64_t n,
                    int64_t in, int64_t out) {
    if (!parallel_enabled()) {
        linear_forward_serial(x, w, b, y, n, in, out);
        return;
    }
#pragma omp parallel for collapse(2) schedule(static)
    for (int64_t i = 0; i < n; ++i) {
        for (int64_t o = 0; o < out; ++o) {
            const float* xr = x + i * in;
            const float* wr = w + o * in;
            float acc = b ? b[o] : 0.0f;
            for (int64_t j = 0; j < in; ++j) acc += xr[j] * wr[j];
            y[i * out + o] = acc;
        }
    }
}

void linear_backward_input_serial(const float* gy, const float* w, float* gx, int64_t n,
                                  int64_t in, int64_t out) {
    for (int64_t i = 0; i < n; ++i) {
        const float* gyr = gy + i * out;
        float* gxr = gx + i * in;
        for (int64_t j = 0; j < in; ++j) {
            float acc = 0.0f;
            for (int64_t o = 0; o < out; ++o) acc += gyr[o] * w[o * in + j];
            gxr[j] = acc;
        }
    }
}

void linear_backward_input(const float* gy, const float* w, float* gx, int64_t n, int64_t in,
                           int64_t out) {
    if (!parallel_enabled()) {
        linear_backward_input_serial(gy, w, gx, n, in, out);
        return;
    }
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < n; ++i) {
        const float* gyr = gy + i * out;
        float* gxr = gx + i * in;
        for (int64_t j = 0; j < in; ++j) {
            float acc = 0.0f;
            for (int64_t o = 0; o < out; ++o) acc += gyr[o] * w[o * in + j];
            gxr[j] = acc;
        }
    }
}

void linear_backward_params_serial(const float* x, const float* gy, float* gw, float* gb,
                                   int64_t n, int64_t in, int64_t out) {
    for (int64_t o = 0; o < out; ++o) {
        float* gwr = gw + o * in;
        for (int64_t j = 0; j < in; ++j) {
            float acc = 0.0f;
            for (int64_t i = 0; i < n; ++i) acc += gy[i * out + o] * x[i * in + j];
            gwr[j] = acc;
        }
        if (gb) {
            float acc = 0.0f;
            for (int64_t i = 0; i < n; ++i) acc += gy[i * out + o];
            gb[o] = acc;
        }
    }
}

void linear_backward_params(const float* x, const float* gy, float* gw, float* gb, int64_t n,
                            int64_t in, int64_t out) {
    if (!parallel_enabled()) {
        linear_backward_params_serial(x, gy, gw, gb, n, in, out);
        return;
    }
#pragma omp parallel for schedule(static)
    for (int64_t o = 0; o < out; ++o) {
        float* gwr = gw + o * in;
        for (int64_t j = 0; j < in; ++j) {
            float acc = 0.0f;
            for (int64_t i = 0; i < n; ++i) acc += gy[i * out + o] * x[i * in + j];
            gwr[j] = acc;
        }
        if (gb) {
            float acc = 0.0f;
            for (int64_t i = 0; i < n; ++i) acc += gy[i * out + o];
            gb[o] = acc;
        }
    }
}

// ----------------------------------------------------------------- pools ---

static inline void avgpool_one(const float* x, float* y, const Pool2dShape& s, int64_t n,
                               int64_t c) {
    const int64_t ho = s.h_out(), wo = s.w_out();
    const float* xc = x + (n * s.c + c) * s.h_in * s.w_in;
    float* yc = y + (n * s.c + c) * ho * wo;
    const float inv = 1.0f / static_cast<float>(s.k * s.k);
    for (int64_t oh = 0; oh < ho; ++oh) {
        for (int64_t ow = 0; ow < wo; ++ow) {
            float acc = 0.0f;
            for (int64_t kh = 0; kh < s.k; ++kh)
                for (int64_t kw = 0; kw < s.k; ++kw)
                    acc += xc[(oh * s.stride + kh) * s.w_in + (ow * s.stride + kw)];
            yc[oh * wo + ow] = acc * inv;
        }
    }
}

void avgpool2d_forward_serial(const float* x, float* y, const Pool2dShape& s) {
    for (int64_t n = 0; n < s.n; ++n)
        for (int64_t c = 0; c < s.c; ++c) avgpool_one(x, y, s, n, c);
}

void avgpool2d_forward(const float* x, float* y, const Pool2dShape& s) {
    if (!parallel_enabled()) {
        avgpool2d_forward_serial(x, y, s);
        return;
    }
#pragma omp parallel for collapse(2) schedule(static)
    for (int64_t n = 0; n < s.n; ++n)
        for (int64_t c = 0; c < s.c; ++c) avgpool_one(x, y, s, n, c);
}

void avgpool2d_backward(const float* gy, float* gx, const Pool2dShape& s) {
    const int64_t ho = s.h_out(), wo = s.w_out();
    const float inv = 1.0f / static_cast<float>(s.k * s.k);
    std::memset(gx, 0, sizeof(float) * static_cast<size_t>(s.n * s.c * s.h_in * s.w_in));
#pragma omp parallel for collapse(2) schedule(static) if (parallel_enabled())
    for (int64_t n = 0; n < s.n; ++n) {
        for (int64_t c = 0; c < s.c; ++c) {
            const float* gyc = gy + (n * s.c + c) * ho * wo;
            float* gxc = gx + (n * s.c + c) * s.h_in * s.w_in;
            for (int64_t oh = 0; oh < ho; ++oh)
                for (int64_t ow = 0; ow < wo; ++ow) {
                    const float g = gyc[oh * wo + ow] * inv;
                    for (int64_t kh = 0; kh < s.k; ++kh)
                        for (int64_t kw = 0; kw < s.k; ++kw)
                            gxc[(oh * s.stride + kh) * s.w_in + (ow * s.stride + kw)] += g;
                }
        }
    }
}

void maxpool2d_forward(const float* x, float* y, int64_t* argmax, const Pool2dShape& s) {
    const int64_t ho = s.h_out(), wo = s.w_out();
#pragma omp parallel for collapse(2) schedule(static) if (parallel_enabled())
    for (int64_t n = 0; n < s.n; ++n) {
        for (int64_t c = 0; c < s.c; ++c) {
            const int64_t base = (n * s.c + c) * s.h_in * s.w_in;
            const float* xc = x + base;
            float* yc = y + (n * s.c + c) * ho * wo;
            int64_t* ac = argmax + (n * s.c + c) * ho * wo;
            for (int64_t oh = 0; oh < ho; ++oh)
                for (int64_t ow = 0; ow < wo; ++ow) {
                    float best = -std::numeric_limits<float>::infinity();
                    int64_t besti = 0;
                    for (int64_t kh = 0; kh < s.k; ++kh)
                        for (int64_t kw = 0; kw < s.k; ++kw) {
                            const int64_t idx =
                                (oh * s.stride + kh) * s.w_in + (ow * s.stride + kw);
                            if (xc[idx] > best) {
                                best = xc[idx];
                                besti = idx;
                            }
                        }
                    yc[oh * wo + ow] = best;
                    ac[oh * wo + ow] = base + besti;
                }
        }
    }
}

void maxpool2d_backward(const float* gy, const int64_t* argmax, float* gx, int64_t n_out,
                        int64_t n_in) {
    std::memset(gx, 0, sizeof(float) * static_cast<size_t>(n_in));
    for (int64_t i = 0; i < n_out; ++i) gx[argmax[i]] += gy[i];
}

}  // namespace snn::kernels
