#pragma once

#include <string>
#include <vector>

#include "tensor.hpp"

namespace snn {

enum class LayerKind : uint32_t {
    Conv2d = 0,
    Linear = 1,
    AvgPool2d = 2,
    MaxPool2d = 3,
    Flatten = 4,
    BatchNorm2d = 5,
    ReLU = 6,
    QCFS = 7,
    IF = 8,
};

const char* layer_kind_name(LayerKind k);

/// One layer of a NetworkGraph. Which fields are meaningful depends on kind.
struct Layer {
    LayerKind kind = LayerKind::ReLU;

    // Conv2d / Linear
    Tensor weight;  // conv: [c_out, c_in, k, k]; linear: [out, in]
    Tensor bias;    // [c_out] / [out]
    int64_t in_ch = 0, out_ch = 0, kernel = 0, stride = 1, pad = 0;
    int64_t in_features = 0, out_features = 0;

    // AvgPool2d / MaxPool2d
    int64_t pool = 0, pool_stride = 0;

    // BatchNorm2d (per channel)
    Tensor gamma, beta, running_mean, running_var;
    float bn_eps = 1e-5f;
    float bn_momentum = 0.1f;

    // QCFS / IF. lambda is the trainable firing threshold of a QCFS layer;
    // theta is the IF threshold set from lambda at conversion.
    float lambda = 2.0f;
    int levels = 8;
    float shift = 0.5f;
    float theta = 0.0f;

    static Layer conv2d(int64_t in_ch, int64_t out_ch, int64_t k, int64_t stride = 1,
                        int64_t pad = 0);
    static Layer linear(int64_t in, int64_t out);
    static Layer avgpool(int64_t k, int64_t stride = 0);
    static Layer maxpool(int64_t k, int64_t stride = 0);
    static Layer flatten();
    static Layer batchnorm(int64_t channels);
    static Layer relu();
    static Layer qcfs(float lambda, int levels, float shift = 0.5f);
};

/// Ordered layer list. head_start marks where the supervised classification
/// head begins (-1 when the graph has no head); the stage-2 feature vector is
/// the output of layer head_start-1.
struct NetworkGraph {
    std::vector<Layer> layers;
    std::vector<int64_t> input_shape;  // per sample, e.g. [3, 64, 64]
    bool snn_mode = false;
    int head_start = -1;

    int64_t feature_end() const {
        return head_start >= 0 ? head_start : static_cast<int64_t>(layers.size());
    }
};

/// Per-layer cache written by the training forward pass and consumed by
/// backward.
struct LayerCtx {
    bool cached = false;
    Tensor input;
    Tensor bn_xhat, bn_mean, bn_var;  // batch statistics actually used
    std::vector<int64_t> argmax;      // maxpool winners
};

/// Parameter gradients for one layer; tensors are empty when the layer has no
/// such parameter.
struct LayerGrads {
    Tensor weight, bias, gamma, beta;
    float lambda = 0.0f;
};

std::vector<int64_t> layer_output_shape(const Layer& layer, const std::vector<int64_t>& in,
                                        int layer_index = -1);

/// Inference forward (uses running statistics for batch norm).
Tensor layer_forward(const Layer& layer, const Tensor& x, int layer_index = -1);

/// Training forward: caches whatever backward needs. Batch norm uses batch
/// statistics and updates the running ones.
Tensor layer_forward_train(Layer& layer, const Tensor& x, LayerCtx& ctx, int layer_index = -1);

/// Gradients w.r.t. input and parameters. Requires the ctx filled by
/// layer_forward_train for the same input.
Tensor layer_backward(const Layer& layer, const LayerCtx& ctx, const Tensor& grad_out,
                      LayerGrads& grads, int layer_index = -1);

/// Whole-graph inference forward, batched input [N, ...].
Tensor graph_forward(const NetworkGraph& g, const Tensor& x);

/// Shape trace through the graph, starting from g.input_shape (per sample).
std::vector<std::vector<int64_t>> graph_shape_trace(const NetworkGraph& g);

int64_t graph_param_count(const NetworkGraph& g);

/// Folds every BatchNorm2d into the preceding conv/linear layer and removes
/// it. Inference outputs are unchanged.
NetworkGraph fold_batchnorm(const NetworkGraph& g);

/// Drops the classification head; the result ends at the stage-2 feature
/// layer.
NetworkGraph strip_head(const NetworkGraph& g);

}  // namespace snn
