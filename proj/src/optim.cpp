#include "optim.hpp"

#include <cmath>

#include "error.hpp"

namespace snn {

float CosineSchedule::lr(int epoch) const {
    const double phase = M_PI * static_cast<double>(epoch) / static_cast<double>(t_max);
    return static_cast<float>(0.5 * static_cast<double>(base_lr) * (1.0 + std::cos(phase)));
}

void Adam::attach(const NetworkGraph& g) {
    slots_.clear();
    step_ = 0;
    skipped_ = 0;
    auto add = [this](int64_t n) {
        Slot s;
        s.m.assign(static_cast<size_t>(n), 0.0f);
        s.v.assign(static_cast<size_t>(n), 0.0f);
        slots_.push_back(std::move(s));
    };
    for (const auto& l : g.layers) {
        if (l.weight.numel()) add(l.weight.numel());
        if (l.bias.numel()) add(l.bias.numel());
        if (l.gamma.numel()) add(l.gamma.numel());
        if (l.beta.numel()) add(l.beta.numel());
        if (l.kind == LayerKind::QCFS) add(1);
    }
}

void Adam::update(Slot& slot, float* p, const float* g, int64_t n, float lr) {
    for (int64_t i = 0; i < n; ++i) {
        if (!std::isfinite(g[i])) {
            ++skipped_;
            return;
        }
    }
    const float b1 = cfg_.beta1, b2 = cfg_.beta2;
    const float bc1 = 1.0f - std::pow(b1, static_cast<float>(step_));
    const float bc2 = 1.0f - std::pow(b2, static_cast<float>(step_));
    for (int64_t i = 0; i < n; ++i) {
        slot.m[i] = b1 * slot.m[i] + (1.0f - b1) * g[i];
        slot.v[i] = b2 * slot.v[i] + (1.0f - b2) * g[i] * g[i];
        const float mhat = slot.m[i] / bc1;
        const float vhat = slot.v[i] / bc2;
        p[i] -= lr * mhat / (std::sqrt(vhat) + cfg_.eps);
    }
}

void Adam::step(NetworkGraph& g, const std::vector<LayerGrads>& grads, float lr) {
    if (grads.size() != g.layers.size())
        throw DataError("adam: gradient list does not match graph layer count");
    ++step_;
    size_t slot = 0;
    for (size_t i = 0; i < g.layers.size(); ++i) {
        Layer& l = g.layers[i];
        const LayerGrads& lg = grads[i];
        if (l.weight.numel()) {
            if (lg.weight.numel() != l.weight.numel())
                throw DataError("adam: weight gradient shape mismatch at layer " +
                                std::to_string(i));
            update(slots_[slot++], l.weight.ptr(), lg.weight.ptr(), l.weight.numel(), lr);
        }
        if (l.bias.numel()) {
            if (lg.bias.numel() != l.bias.numel())
                throw DataError("adam: bias gradient shape mismatch at layer " +
                                std::to_string(i));
            update(slots_[slot++], l.bias.ptr(), lg.bias.ptr(), l.bias.numel(), lr);
        }
        if (l.gamma.numel()) {
            if (lg.gamma.numel() != l.gamma.numel() || lg.beta.numel() != l.beta.numel())
                throw DataError("adam: batch-norm gradient shape mismatch at layer " +
                                std::to_string(i));
            update(slots_[slot++], l.gamma.ptr(), lg.gamma.ptr(), l.gamma.numel(), lr);
        }
        if (l.beta.numel()) {
            update(slots_[slot++], l.beta.ptr(), lg.beta.ptr(), l.beta.numel(), lr);
        }
        if (l.kind == LayerKind::QCFS) {
            update(slots_[slot++], &l.lambda, &lg.lambda, 1, lr);
        }
    }
}

}  // namespace snn
