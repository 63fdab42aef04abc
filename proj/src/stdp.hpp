#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "snn.hpp"
#include "tensor.hpp"

namespace snn {

struct PoissonEncoderConfig {
    int t_c = 300;
    uint64_t seed = 0;
    float rate_scale = 1.0f;
};

/// Binary spike train, shape [timesteps, width], row-major.
struct SpikeTrain {
    int64_t timesteps = 0;
    int64_t width = 0;
    std::vector<uint8_t> bits;

    uint8_t at(int64_t t, int64_t i) const { return bits[static_cast<size_t>(t * width + i)]; }
    const uint8_t* row(int64_t t) const { return bits.data() + t * width; }
    uint8_t* row(int64_t t) { return bits.data() + t * width; }
    uint64_t total_spikes() const {
        uint64_t n = 0;
        for (uint8_t b : bits) n += b;
        return n;
    }
};

/// Independent Bernoulli draws per (t, i) with p_i = clip(rate_i * scale, 0, 1),
/// deterministic under the config seed. Negative rates are rejected.
SpikeTrain poisson_encode(const std::vector<float>& rates, const PoissonEncoderConfig& cfg);

/// Stage-2 hyperparameters. exc/inh/theta_plus defaults sit at the midpoint
/// of their search ranges ([20,50], [150,250], [0.001,0.02]); the STDP rates
/// are the (pre, post) pair (1e-5, 1e-3). The remaining constants are not
/// fixed by the search space and are documented defaults.
struct Stage2Config {
    int n_neurons = 500;
    float exc = 35.0f;
    float inh = 200.0f;
    float theta_plus = 0.0105f;
    int batch_size = 32;
    int epochs = 10;
    int patience = 3;
    float eta_pre = 1e-5f;
    float eta_post = 1e-3f;
    int t_c = 300;
    float w_max = 1.0f;
    float w_init_max = 0.3f;
    float tau_pre = 20.0f;
    float tau_post = 20.0f;
    float tau_theta = 1e5f;
    float theta_exc_base = 20.0f;
    float theta_inh = 10.0f;
    bool leak_enabled = false;
    float leak_tau = 100.0f;
    // rate_scale 0 = auto: calibrate once from the training rates so the
    // expected input spike count per timestep equals input_target, keeping
    // the membrane dynamics in the same regime for any feature width.
    float rate_scale = 0.0f;
    float input_target = 12.0f;
    uint64_t seed = 0;
};

/// The trained classifier: feed-forward weights, adaptive thresholds, per-
/// neuron labels/specializations and the (neuron, class) firing-count matrix.
/// The all-but-self inhibition mask is implicit: mask(i,j) = (i != j).
struct ClassifierState {
    int64_t n_features = 0;
    int64_t n_neurons = 0;
    int n_classes = 0;
    Stage2Config cfg;

    Tensor w;                          // [n_features, n_neurons], entries in [0, w_max]
    std::vector<float> theta_adapt;    // adaptive threshold component, >= 0
    std::vector<int> labels;           // -1 = unassigned
    std::vector<float> specialization; // in [0, 1]
    std::vector<uint64_t> counts;      // [n_neurons * n_classes] calibration spike counts

    uint64_t count(int64_t neuron, int cls) const {
        return counts[static_cast<size_t>(neuron) * static_cast<size_t>(n_classes) +
                      static_cast<size_t>(cls)];
    }
    static float inhibition_mask(int64_t from, int64_t to) { return from == to ? 0.0f : 1.0f; }
};

ClassifierState make_classifier(int64_t n_features, int n_classes, const Stage2Config& cfg);

/// Transient per-presentation state (potentials, traces, last spikes).
struct SimState {
    std::vector<float> v_exc, v_inh;
    std::vector<float> x_pre, x_post;
    std::vector<uint8_t> s_exc, s_inh;
    std::vector<float> theta_adapt;  // starts from the persistent component
    uint64_t exc_spikes = 0, inh_spikes = 0;

    void reset(const ClassifierState& c);
};

/// One membrane step: integrate input, threshold, drive the paired inhibitory
/// units, apply all-but-self lateral inhibition, reset spiking units, floor
/// v_exc at zero.
void classifier_step(const ClassifierState& c, SimState& s, const uint8_t* s_in);

/// Trace-based pair STDP. Decays both traces, folds in the current spikes,
/// then accumulates into dw ([n_features * n_neurons]): +eta_post * x_pre on
/// post spikes, -eta_pre * x_post on pre spikes.
void stdp_update(const ClassifierState& c, SimState& s, const uint8_t* s_in, float* dw);

/// Homeostasis: decay the adaptive component toward zero, then add theta_plus
/// where the neuron fired.
void adapt_thresholds(const ClassifierState& c, SimState& s);

struct PresentationResult {
    std::vector<uint64_t> spike_counts;  // per neuron
    uint64_t exc_spikes = 0, inh_spikes = 0, input_spikes = 0;
};

/// Runs one full presentation. When learn is true, STDP deltas are
/// accumulated into dw against frozen weights and thresholds adapt live
/// (their final values are returned through sim.theta_adapt).
PresentationResult run_presentation(const ClassifierState& c, const SpikeTrain& train,
                                    SimState& sim, bool learn, float* dw);

struct Stage2EpochMetrics {
    int epoch = 0;
    float val_acc = 0.0f;
    int64_t val_abstain = 0;
    uint64_t train_exc_spikes = 0;
};

struct Stage2Result {
    ClassifierState best;
    std::vector<Stage2EpochMetrics> log;
    int best_epoch = -1;
    float best_val_acc = 0.0f;
    int epochs_run = 0;
};

/// Minibatch STDP training with elementwise-max reduction of the per-sample
/// weight deltas, per-epoch label assignment and validation, and early
/// stopping. Aborts when the classifier stays silent through epoch 1.
Stage2Result train_stage2(ClassifierState classifier, const RateDataset& train,
                          const RateDataset& val, const Stage2Config& cfg);

/// Convenience overload: extracts firing-rate features from the frozen
/// backbone first.
Stage2Result train_stage2(const NetworkGraph& backbone, ClassifierState classifier,
                          const LabeledDataset& train, const LabeledDataset& val, int t_b,
                          const Stage2Config& cfg);

/// Calibration: per neuron, label = class that most frequently made it fire;
/// specialization = that fraction of its total activity. Silent neurons stay
/// unassigned with specialization 0.
void assign_labels(ClassifierState& c, const RateDataset& data, uint64_t seed_stream = 2);

/// Specialization-weighted vote; -1 = abstain (no labeled neuron fired).
int predict_from_counts(const ClassifierState& c, const std::vector<uint64_t>& counts_per_neuron,
                        std::vector<float>* class_scores = nullptr);

struct ClassifyResult {
    int predicted = -1;
    std::vector<uint64_t> counts;
    std::vector<float> scores;
    uint64_t input_spikes = 0, exc_spikes = 0, inh_spikes = 0;
};

ClassifyResult classify(const ClassifierState& c, const std::vector<float>& rates,
                        uint64_t sample_seed);

struct Stage2EvalResult {
    float accuracy = 0.0f;
    int64_t abstained = 0;
    int64_t n_samples = 0;
    uint64_t input_spikes = 0, exc_spikes = 0, inh_spikes = 0;
    std::vector<std::vector<int64_t>> confusion;    // [true][pred]
    std::vector<uint64_t> per_neuron_counts;        // summed over samples
    std::vector<double> activity_map;               // [n_neurons * n_classes] mean rate
};

Stage2EvalResult evaluate_stage2(const ClassifierState& c, const RateDataset& data,
                                 uint64_t seed_stream = 3);

void save_classifier(const ClassifierState& c, const std::string& path);
ClassifierState load_classifier(const std::string& path);

}  // namespace snn
