#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "graph.hpp"

namespace snn {

/// ANN -> SNN conversion: weights are inherited unchanged, every QCFS layer
/// becomes an IF layer with theta = lambda, and the membrane potential starts
/// at theta/2 for every presentation. Batch-norm layers must be folded first.
NetworkGraph convert(const NetworkGraph& ann);

/// Membrane state of one IF layer (soft reset: v -= theta on spike).
struct IFLayerState {
    float theta = 0.0f;
    Tensor v;
    uint64_t spike_count = 0;

    void reset(const std::vector<int64_t>& shape) {
        v = Tensor(shape, theta / 2.0f);
        spike_count = 0;
    }
};

/// One integration step: v += input, spike where v >= theta, then subtract
/// theta at the spiking units. Returns the binary spike tensor.
Tensor if_step(IFLayerState& state, const Tensor& input);

struct SnnRunRecord {
    int t_b = 0;
    std::vector<uint64_t> spikes_per_layer;  // indexed by graph layer, IF layers only
    std::vector<float> r_f;                  // firing rates of the pre-head output
    std::vector<float> logits;               // accumulated head output (when present)
    int predicted = -1;

    uint64_t total_spikes() const {
        uint64_t n = 0;
        for (uint64_t s : spikes_per_layer) n += s;
        return n;
    }
};

/// Simulates t_b timesteps of the converted graph under direct input
/// encoding (the normalized image is injected as a constant current each
/// step). t_b = 0 is rejected; use the ANN-mode forward for the baseline.
SnnRunRecord forward_snn(const NetworkGraph& g, const Tensor& image, int t_b);

struct SnnEvalResult {
    float accuracy = 0.0f;
    int64_t n_samples = 0;
    uint64_t total_sops = 0;
    std::vector<uint64_t> spikes_per_layer;
    std::vector<std::vector<int64_t>> confusion;  // [true][pred]
};

/// Parallel over samples; deterministic (the simulation has no randomness).
SnnEvalResult evaluate_snn(const NetworkGraph& g, const LabeledDataset& ds, int t_b);

/// Firing-rate feature vectors for the stage-2 classifier.
struct RateDataset {
    std::vector<std::vector<float>> rates;
    std::vector<int> labels;
    int n_classes = 0;
    uint64_t backbone_sops = 0;  // spikes spent extracting these features

    int64_t size() const { return static_cast<int64_t>(rates.size()); }
    int64_t dim() const { return rates.empty() ? 0 : static_cast<int64_t>(rates[0].size()); }
};

RateDataset extract_features(const NetworkGraph& g, const LabeledDataset& ds, int t_b);

struct TimestepAccuracy {
    int t_b = 0;  // 0 is the ANN-mode baseline
    float accuracy = 0.0f;
    uint64_t total_sops = 0;
};

/// One row per entry of t_list plus the T=0 ANN-mode baseline of the same
/// checkpoint.
std::vector<TimestepAccuracy> accuracy_vs_timesteps(const NetworkGraph& g,
                                                    const LabeledDataset& ds,
                                                    const std::vector<int>& t_list);

void write_timestep_csv(const std::vector<TimestepAccuracy>& rows, const std::string& path);

}  // namespace snn
