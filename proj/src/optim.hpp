#pragma once

#include <cstdint>
#include <vector>

#include "graph.hpp"

namespace snn {

struct AdamConfig {
    float beta1 = 0.9f;
    float beta2 = 0.999f;
    float eps = 1e-8f;
};

/// Cosine annealing: lr(e) = base * (1 + cos(pi * e / t_max)) / 2.
struct CosineSchedule {
    float base_lr = 1e-3f;
    int t_max = 100;
    float lr(int epoch) const;
};

/// Adam over the trainable tensors of a NetworkGraph (conv/linear weights and
/// biases, batch-norm affine parameters, QCFS lambdas). Moments persist
/// across steps; a parameter tensor whose gradient contains a non-finite
/// value is skipped for that step and counted in skipped_updates().
class Adam {
public:
    explicit Adam(AdamConfig cfg = {}) : cfg_(cfg) {}

    void attach(const NetworkGraph& g);
    void step(NetworkGraph& g, const std::vector<LayerGrads>& grads, float lr);

    int64_t step_count() const { return step_; }
    int64_t skipped_updates() const { return skipped_; }

private:
    struct Slot {
        std::vector<float> m, v;
    };
    void update(Slot& slot, float* p, const float* g, int64_t n, float lr);

    AdamConfig cfg_;
    std::vector<Slot> slots_;
    int64_t step_ = 0;
    int64_t skipped_ = 0;
};

}  // namespace snn
