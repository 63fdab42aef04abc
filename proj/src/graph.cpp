#include "graph.hpp"

#include <cmath>
#include <cstring>

#include "error.hpp"
#include "kernels.hpp"
#include "qcfs.hpp"

namespace snn {

const char* layer_kind_name(LayerKind k) {
    switch (k) {
        case LayerKind::Conv2d: return "conv2d";
        case LayerKind::Linear: return "linear";
        case LayerKind::AvgPool2d: return "avgpool2d";
        case LayerKind::MaxPool2d: return "maxpool2d";
        case LayerKind::Flatten: return "flatten";
        case LayerKind::BatchNorm2d: return "batchnorm2d";
        case LayerKind::ReLU: return "relu";
        case LayerKind::QCFS: return "qcfs";
        case LayerKind::IF: return "if";
    }
    return "unknown";
}

Layer Layer::conv2d(int64_t in_ch, int64_t out_ch, int64_t k, int64_t stride, int64_t pad) {
    Layer l;
    l.kind = LayerKind::Conv2d;
    l.in_ch = in_ch;
    l.out_ch = out_ch;
    l.kernel = k;
    l.stride = stride;
    l.pad = pad;
    l.weight = Tensor({out_ch, in_ch, k, k});
    l.bias = Tensor({out_ch});
    return l;
}

Layer Layer::linear(int64_t in, int64_t out) {
    Layer l;
    l.kind = LayerKind::Linear;
    l.in_features = in;
    l.out_features = out;
    l.weight = Tensor({out, in});
    l.bias = Tensor({out});
    return l;
}

Layer Layer::avgpool(int64_t k, int64_t stride) {
    Layer l;
    l.kind = LayerKind::AvgPool2d;
    l.pool = k;
    l.pool_stride = stride > 0 ? stride : k;
    return l;
}

Layer Layer::maxpool(int64_t k, int64_t stride) {
    Layer l = avgpool(k, stride);
    l.kind = LayerKind::MaxPool2d;
    return l;
}

Layer Layer::flatten() {
    Layer l;
    l.kind = LayerKind::Flatten;
    return l;
}

Layer Layer::batchnorm(int64_t channels) {
    Layer l;
    l.kind = LayerKind::BatchNorm2d;
    l.out_ch = l.in_ch = channels;
    l.gamma = Tensor({channels}, 1.0f);
    l.beta = Tensor({channels});
    l.running_mean = Tensor({channels});
    l.running_var = Tensor({channels}, 1.0f);
    return l;
}

Layer Layer::relu() {
    Layer l;
    l.kind = LayerKind::ReLU;
    return l;
}

Layer Layer::qcfs(float lambda, int levels, float shift) {
    if (lambda <= 0.0f) throw DataError("qcfs layer: lambda must be > 0");
    if (levels < 1) throw DataError("qcfs layer: levels must be >= 1");
    Layer l;
    l.kind = LayerKind::QCFS;
    l.lambda = lambda;
    l.levels = levels;
    l.shift = shift;
    return l;
}

static std::string at_layer(int idx) {
    return idx >= 0 ? " at layer " + std::to_string(idx) : "";
}

static void require_image(const std::vector<int64_t>& in, const Layer& l, int idx) {
    if (in.size() != 4)
        throw DataError(std::string(layer_kind_name(l.kind)) + at_layer(idx) +
                        ": expected [N,C,H,W] input, got " + shape_str(in));
}

std::vector<int64_t> layer_output_shape(const Layer& l, const std::vector<int64_t>& in,
                                        int idx) {
    switch (l.kind) {
        case LayerKind::Conv2d: {
            require_image(in, l, idx);
            if (in[1] != l.in_ch)
                throw DataError("conv2d" + at_layer(idx) + ": input " + shape_str(in) +
                                " does not match declared input channels " +
                                std::to_string(l.in_ch));
            const int64_t ho = (in[2] + 2 * l.pad - l.kernel) / l.stride + 1;
            const int64_t wo = (in[3] + 2 * l.pad - l.kernel) / l.stride + 1;
            if (ho < 1 || wo < 1)
                throw DataError("conv2d" + at_layer(idx) + ": input " + shape_str(in) +
                                " too small for kernel " + std::to_string(l.kernel));
            return {in[0], l.out_ch, ho, wo};
        }
        case LayerKind::Linear: {
            if (in.size() != 2 || in[1] != l.in_features)
                throw DataError("linear" + at_layer(idx) + ": input " + shape_str(in) +
                                " does not match declared shape [N, " +
                                std::to_string(l.in_features) + "]");
            return {in[0], l.out_features};
        }
        case LayerKind::AvgPool2d:
        case LayerKind::MaxPool2d: {
            require_image(in, l, idx);
            const int64_t ho = (in[2] - l.pool) / l.pool_stride + 1;
            const int64_t wo = (in[3] - l.pool) / l.pool_stride + 1;
            if (ho < 1 || wo < 1)
                throw DataError("pool" + at_layer(idx) + ": input " + shape_str(in) +
                                " too small for window " + std::to_string(l.pool));
            return {in[0], in[1], ho, wo};
        }
        case LayerKind::Flatten: {
            int64_t f = 1;
            for (size_t i = 1; i < in.size(); ++i) f *= in[i];
            return {in[0], f};
        }
        case LayerKind::BatchNorm2d: {
            require_image(in, l, idx);
            if (in[1] != l.in_ch)
                throw DataError("batchnorm2d" + at_layer(idx) + ": input " + shape_str(in) +
                                " does not match declared channels " + std::to_string(l.in_ch));
            return in;
        }
        case LayerKind::ReLU:
        case LayerKind::QCFS:
        case LayerKind::IF:
            return in;
    }
    throw DataError("unknown layer kind");
}

static kernels::Conv2dShape conv_shape(const Layer& l, const std::vector<int64_t>& in) {
    kernels::Conv2dShape s;
    s.n = in[0];
    s.c_in = in[1];
    s.h_in = in[2];
    s.w_in = in[3];
    s.c_out = l.out_ch;
    s.k = l.kernel;
    s.stride = l.stride;
    s.pad = l.pad;
    return s;
}

static kernels::Pool2dShape pool_shape(const Layer& l, const std::vector<int64_t>& in) {
    kernels::Pool2dShape s;
    s.n = in[0];
    s.c = in[1];
    s.h_in = in[2];
    s.w_in = in[3];
    s.k = l.pool;
    s.stride = l.pool_stride;
    return s;
}

static Tensor batchnorm_eval(const Layer& l, const Tensor& x) {
    Tensor y;
    y.shape = x.shape;
    y.data.resize(x.data.size());
    const int64_t n = x.dim(0), c = x.dim(1), hw = x.dim(2) * x.dim(3);
    for (int64_t i = 0; i < n; ++i)
        for (int64_t ch = 0; ch < c; ++ch) {
            const float inv = 1.0f / std::sqrt(l.running_var[ch] + l.bn_eps);
            const float scale = l.gamma[ch] * inv;
            const float off = l.beta[ch] - l.running_mean[ch] * scale;
            const float* xp = x.ptr() + (i * c + ch) * hw;
            float* yp = y.ptr() + (i * c + ch) * hw;
            for (int64_t j = 0; j < hw; ++j) yp[j] = xp[j] * scale + off;
        }
    return y;
}

Tensor layer_forward(const Layer& l, const Tensor& x, int idx) {
    const auto out_shape = layer_output_shape(l, x.shape, idx);
    switch (l.kind) {
        case LayerKind::Conv2d: {
            Tensor y(out_shape);
            kernels::conv2d_forward(x.ptr(), l.weight.ptr(), l.bias.ptr(), y.ptr(),
                                    conv_shape(l, x.shape));
            return y;
        }
        case LayerKind::Linear: {
            Tensor y(out_shape);
            kernels::linear_forward(x.ptr(), l.weight.ptr(), l.bias.ptr(), y.ptr(), x.dim(0),
                                    l.in_features, l.out_features);
            return y;
        }
        case LayerKind::AvgPool2d: {
            Tensor y(out_shape);
            kernels::avgpool2d_forward(x.ptr(), y.ptr(), pool_shape(l, x.shape));
            return y;
        }
        case LayerKind::MaxPool2d: {
            Tensor y(out_shape);
            std::vector<int64_t> argmax(static_cast<size_t>(y.numel()));
            kernels::maxpool2d_forward(x.ptr(), y.ptr(), argmax.data(), pool_shape(l, x.shape));
            return y;
        }
        case LayerKind::Flatten:
            return x.reshaped(out_shape);
        case LayerKind::BatchNorm2d:
            return batchnorm_eval(l, x);
        case LayerKind::ReLU: {
            Tensor y;
            y.shape = x.shape;
            y.data.resize(x.data.size());
            for (size_t i = 0; i < x.data.size(); ++i)
                y.data[i] = x.data[i] > 0.0f ? x.data[i] : 0.0f;
            return y;
        }
        case LayerKind::QCFS:
            return qcfs_forward(x, l.lambda, l.levels, l.shift);
        case LayerKind::IF:
            // ANN-mode view of a converted layer (the T=0 baseline): the IF
            // neuron's rate transfer function is the QCFS staircase at theta.
            return qcfs_forward(x, l.theta, l.levels, l.shift);
    }
    throw DataError("unknown layer kind");
}

Tensor layer_forward_train(Layer& l, const Tensor& x, LayerCtx& ctx, int idx) {
    if (l.kind == LayerKind::IF)
        throw DataError("if layer" + at_layer(idx) + " cannot be trained; train the QCFS graph");
    ctx.cached = true;
    ctx.input = x;
    if (l.kind == LayerKind::MaxPool2d) {
        const auto out_shape = layer_output_shape(l, x.shape, idx);
        Tensor y(out_shape);
        ctx.argmax.resize(static_cast<size_t>(y.numel()));
        kernels::maxpool2d_forward(x.ptr(), y.ptr(), ctx.argmax.data(), pool_shape(l, x.shape));
        return y;
    }
    if (l.kind != LayerKind::BatchNorm2d) return layer_forward(l, x, idx);

    layer_output_shape(l, x.shape, idx);
    const int64_t n = x.dim(0), c = x.dim(1), hw = x.dim(2) * x.dim(3);
    const int64_t m = n * hw;
    ctx.bn_mean = Tensor({c});
    ctx.bn_var = Tensor({c});
    for (int64_t ch = 0; ch < c; ++ch) {
        float mean = 0.0f;
        for (int64_t i = 0; i < n; ++i) {
            const float* xp = x.ptr() + (i * c + ch) * hw;
            for (int64_t j = 0; j < hw; ++j) mean += xp[j];
        }
        mean /= static_cast<float>(m);
        float var = 0.0f;
        for (int64_t i = 0; i < n; ++i) {
            const float* xp = x.ptr() + (i * c + ch) * hw;
            for (int64_t j = 0; j < hw; ++j) {
                const float d = xp[j] - mean;
                var += d * d;
            }
        }
        var /= static_cast<float>(m);
        ctx.bn_mean[ch] = mean;
        ctx.bn_var[ch] = var;
        // torch-style running update (unbiased variance in the running stat)
        const float unbiased = m > 1 ? var * static_cast<float>(m) / static_cast<float>(m - 1)
                                     : var;
        l.running_mean[ch] = (1.0f - l.bn_momentum) * l.running_mean[ch] + l.bn_momentum * mean;
        l.running_var[ch] = (1.0f - l.bn_momentum) * l.running_var[ch] + l.bn_momentum * unbiased;
    }
    ctx.bn_xhat = Tensor(x.shape);
    Tensor y(x.shape);
    for (int64_t i = 0; i < n; ++i)
        for (int64_t ch = 0; ch < c; ++ch) {
            const float inv = 1.0f / std::sqrt(ctx.bn_var[ch] + l.bn_eps);
            const float* xp = x.ptr() + (i * c + ch) * hw;
            float* hp = ctx.bn_xhat.ptr() + (i * c + ch) * hw;
            float* yp = y.ptr() + (i * c + ch) * hw;
            for (int64_t j = 0; j < hw; ++j) {
                hp[j] = (xp[j] - ctx.bn_mean[ch]) * inv;
                yp[j] = hp[j] * l.gamma[ch] + l.beta[ch];
            }
        }
    return y;
}

Tensor layer_backward(const Layer& l, const LayerCtx& ctx, const Tensor& grad_out,
                      LayerGrads& grads, int idx) {
    if (!ctx.cached)
        throw DataError(std::string(layer_kind_name(l.kind)) + at_layer(idx) +
                        ": backward called without cached forward activations");
    const Tensor& x = ctx.input;
    const auto out_shape = layer_output_shape(l, x.shape, idx);
    if (grad_out.shape != out_shape)
        throw DataError(std::string(layer_kind_name(l.kind)) + at_layer(idx) +
                        ": grad_out shape " + shape_str(grad_out.shape) +
                        " does not match output shape " + shape_str(out_shape));
    switch (l.kind) {
        case LayerKind::Conv2d: {
            const auto s = conv_shape(l, x.shape);
            Tensor gx(x.shape);
            grads.weight = Tensor(l.weight.shape);
            grads.bias = Tensor(l.bias.shape);
            kernels::conv2d_backward_input(grad_out.ptr(), l.weight.ptr(), gx.ptr(), s);
            kernels::conv2d_backward_params(x.ptr(), grad_out.ptr(), grads.weight.ptr(),
                                            grads.bias.ptr(), s);
            return gx;
        }
        case LayerKind::Linear: {
            Tensor gx(x.shape);
            grads.weight = Tensor(l.weight.shape);
            grads.bias = Tensor(l.bias.shape);
            kernels::linear_backward_input(grad_out.ptr(), l.weight.ptr(), gx.ptr(), x.dim(0),
                                           l.in_features, l.out_features);
            kernels::linear_backward_params(x.ptr(), grad_out.ptr(), grads.weight.ptr(),
                                            grads.bias.ptr(), x.dim(0), l.in_features,
                                            l.out_features);
            return gx;
        }
        case LayerKind::AvgPool2d: {
            Tensor gx(x.shape);
            kernels::avgpool2d_backward(grad_out.ptr(), gx.ptr(), pool_shape(l, x.shape));
            return gx;
        }
        case LayerKind::MaxPool2d: {
            Tensor gx(x.shape);
            kernels::maxpool2d_backward(grad_out.ptr(), ctx.argmax.data(), gx.ptr(),
                                        grad_out.numel(), x.numel());
            return gx;
        }
        case LayerKind::Flatten:
            return grad_out.reshaped(x.shape);
        case LayerKind::BatchNorm2d: {
            const int64_t n = x.dim(0), c = x.dim(1), hw = x.dim(2) * x.dim(3);
            const float m = static_cast<float>(n * hw);
            grads.gamma = Tensor({c});
            grads.beta = Tensor({c});
            Tensor gx(x.shape);
            for (int64_t ch = 0; ch < c; ++ch) {
                const float inv = 1.0f / std::sqrt(ctx.bn_var[ch] + l.bn_eps);
                float sum_gy = 0.0f, sum_gy_xhat = 0.0f;
                for (int64_t i = 0; i < n; ++i) {
                    const float* gp = grad_out.ptr() + (i * c + ch) * hw;
                    const float* hp = ctx.bn_xhat.ptr() + (i * c + ch) * hw;
                    for (int64_t j = 0; j < hw; ++j) {
                        sum_gy += gp[j];
                        sum_gy_xhat += gp[j] * hp[j];
                    }
                }
                grads.beta[ch] = sum_gy;
                grads.gamma[ch] = sum_gy_xhat;
                const float k = l.gamma[ch] * inv / m;
                for (int64_t i = 0; i < n; ++i) {
                    const float* gp = grad_out.ptr() + (i * c + ch) * hw;
                    const float* hp = ctx.bn_xhat.ptr() + (i * c + ch) * hw;
                    float* op = gx.ptr() + (i * c + ch) * hw;
                    for (int64_t j = 0; j < hw; ++j)
                        op[j] = k * (m * gp[j] - sum_gy - hp[j] * sum_gy_xhat);
                }
            }
            return gx;
        }
        case LayerKind::ReLU: {
            Tensor gx(x.shape);
            for (size_t i = 0; i < x.data.size(); ++i)
                gx.data[i] = x.data[i] > 0.0f ? grad_out.data[i] : 0.0f;
            return gx;
        }
        case LayerKind::QCFS: {
            auto g = qcfs_backward(x, grad_out, l.lambda, l.levels, l.shift);
            grads.lambda = g.grad_lambda;
            return std::move(g.grad_x);
        }
        case LayerKind::IF:
            throw DataError("if layer" + at_layer(idx) + " has no training backward");
    }
    throw DataError("unknown layer kind");
}

Tensor graph_forward(const NetworkGraph& g, const Tensor& x) {
    Tensor h = x;
    for (size_t i = 0; i < g.layers.size(); ++i)
        h = layer_forward(g.layers[i], h, static_cast<int>(i));
    return h;
}

std::vector<std::vector<int64_t>> graph_shape_trace(const NetworkGraph& g) {
    std::vector<std::vector<int64_t>> trace;
    std::vector<int64_t> cur;
    cur.push_back(1);
    for (int64_t d : g.input_shape) cur.push_back(d);
    trace.push_back(cur);
    for (size_t i = 0; i < g.layers.size(); ++i) {
        cur = layer_output_shape(g.layers[i], cur, static_cast<int>(i));
        trace.push_back(cur);
    }
    return trace;
}

int64_t graph_param_count(const NetworkGraph& g) {
    int64_t n = 0;
    for (const auto& l : g.layers) {
        n += l.weight.numel() + l.bias.numel() + l.gamma.numel() + l.beta.numel();
        if (l.kind == LayerKind::QCFS) n += 1;
    }
    return n;
}

NetworkGraph fold_batchnorm(const NetworkGraph& g) {
    NetworkGraph out;
    out.input_shape = g.input_shape;
    out.snn_mode = g.snn_mode;
    int folded_before_head = 0;
    for (size_t i = 0; i < g.layers.size(); ++i) {
        const Layer& l = g.layers[i];
        if (l.kind != LayerKind::BatchNorm2d) {
            out.layers.push_back(l);
            continue;
        }
        if (out.layers.empty() || (out.layers.back().kind != LayerKind::Conv2d &&
                                   out.layers.back().kind != LayerKind::Linear))
            throw DataError("batchnorm2d at layer " + std::to_string(i) +
                            " is not preceded by an affine layer; cannot fold");
        Layer& prev = out.layers.back();
        const int64_t c = l.in_ch;
        const int64_t per = prev.weight.numel() / c;
        for (int64_t ch = 0; ch < c; ++ch) {
            const float scale = l.gamma[ch] / std::sqrt(l.running_var[ch] + l.bn_eps);
            float* wp = prev.weight.ptr() + ch * per;
            for (int64_t j = 0; j < per; ++j) wp[j] *= scale;
            prev.bias[ch] = (prev.bias[ch] - l.running_mean[ch]) * scale + l.beta[ch];
        }
        if (g.head_start >= 0 && i < static_cast<size_t>(g.head_start)) ++folded_before_head;
    }
    if (g.head_start >= 0) out.head_start = g.head_start - folded_before_head;
    return out;
}

NetworkGraph strip_head(const NetworkGraph& g) {
    if (g.head_start < 0) return g;
    NetworkGraph out;
    out.input_shape = g.input_shape;
    out.snn_mode = g.snn_mode;
    out.head_start = -1;
    out.layers.assign(g.layers.begin(), g.layers.begin() + g.head_start);
    return out;
}

}  // namespace snn
