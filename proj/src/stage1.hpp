#pragma once

#include <string>
#include <vector>

#include "dataset.hpp"
#include "graph.hpp"

namespace snn {

/// Defaults follow the supervised-adaptation hyperparameter table: Adam at
/// 1e-3 with cosine annealing over t_max, batch 32, L=8 quantization levels,
/// initial firing threshold 2.0. head_hidden falls back to the stage-2
/// classifier width when left at 0.
struct Stage1Config {
    int epochs = 100;
    int batch_size = 32;
    float learning_rate = 1e-3f;
    int t_max = 100;
    int levels = 8;
    float lambda0 = 2.0f;
    float shift = 0.5f;
    int head_hidden = 0;  // 0 -> default width (500)
    bool augment = true;
    uint64_t seed = 0;

    int hidden_or_default() const { return head_hidden > 0 ? head_hidden : 500; }
};

/// Replaces every activation with a QCFS layer (fresh lambda) and every
/// max-pool with an average pool of identical window/stride. Everything else
/// is copied untouched.
NetworkGraph surgery(const NetworkGraph& g, float lambda0 = 2.0f, int levels = 8,
                     float shift = 0.5f);

/// Appends the supervised head (Linear -> QCFS -> Linear) and marks
/// head_start.
void attach_head(NetworkGraph& g, int64_t n_features, int64_t hidden, int64_t n_classes,
                 float lambda0, int levels, float shift = 0.5f);

/// He-normal weights, zero biases; deterministic under seed.
void init_parameters(NetworkGraph& g, uint64_t seed);

/// Builds an ANN-mode backbone (with ReLU/max-pool, pre-surgery) from a spec
/// string like "conv:8k3s1p1,relu,avgpool:2,conv:16k3s1p1,relu,maxpool:2,flatten".
NetworkGraph parse_backbone_arch(const std::string& arch, std::vector<int64_t> input_shape);

void clamp_qcfs_lambdas(NetworkGraph& g, float min_lambda = 1e-4f);

struct EpochMetrics {
    int epoch = 0;
    float train_loss = 0.0f;
    float train_acc = 0.0f;
    float val_acc = 0.0f;
    float lr = 0.0f;
};

struct Stage1Result {
    NetworkGraph best;
    std::vector<EpochMetrics> log;
    int best_epoch = -1;
    float best_val_acc = 0.0f;
};

/// Cross-entropy training of weights and QCFS lambdas; returns the checkpoint
/// with the highest validation accuracy plus the per-epoch metric log.
/// Throws NumericalError when the loss goes non-finite.
Stage1Result train_stage1(const NetworkGraph& g, const LabeledDataset& train,
                          const LabeledDataset& val, const Stage1Config& cfg);

/// ANN-mode accuracy (works on both QCFS graphs and converted ones, where the
/// IF layers evaluate as their rate transfer staircase).
float evaluate_ann(const NetworkGraph& g, const LabeledDataset& ds, int batch_size = 32);

/// Mean softmax cross-entropy plus gradient w.r.t. logits.
float softmax_cross_entropy(const Tensor& logits, const std::vector<int>& labels,
                            Tensor* grad = nullptr);

void write_metrics_csv(const std::vector<EpochMetrics>& log, const std::string& path);

}  // namespace snn
