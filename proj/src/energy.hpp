#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "graph.hpp"

namespace snn {

/// ROLLS neuromorphic-processor baselines: 77 fJ per synaptic operation,
/// 12.5 pJ per floating-point operation.
struct EnergyConstants {
    double joules_per_flop = 12.5e-12;
    double joules_per_sop = 77e-15;
};

/// Analytic per-sample FLOP count (multiply-accumulate = 2 FLOPs). Shape-only:
/// conv 2*K*K*Cin*Cout*Hout*Wout, linear 2*in*out, pooling and activations one
/// op per output element, batch norm two, flatten free.
uint64_t count_flops(const NetworkGraph& g);
uint64_t layer_flops(const Layer& l, const std::vector<int64_t>& in_shape);

/// Total spikes across layers and timesteps; one spike = one SOP.
uint64_t count_sops(const std::vector<uint64_t>& spikes_per_layer);

struct EnergyReport {
    uint64_t flops = 0;
    uint64_t sops = 0;
    uint64_t sops_backbone = 0, sops_input = 0, sops_classifier = 0;
    double e_ann = 0.0;
    double e_snn = 0.0;
    double improvement = 0.0;  // +inf when sops == 0 and flops > 0

    EnergyReport& operator+=(const EnergyReport& o);
};

EnergyReport energy_report(uint64_t flops, uint64_t sops, const EnergyConstants& k = {});

/// Breakdown variant used by the two-stage pipeline; include_input_spikes
/// controls whether the Poisson encoder's spikes are billed to the SNN.
EnergyReport energy_report_pipeline(uint64_t flops, uint64_t sops_backbone,
                                    uint64_t sops_input, uint64_t sops_classifier,
                                    bool include_input_spikes = true,
                                    const EnergyConstants& k = {});

struct EnergyRow {
    std::string backbone;
    double ann_accuracy = 0.0;
    double snn_accuracy = 0.0;
    EnergyReport report;
};

/// CSV shaped like the per-backbone comparison table:
/// backbone,ann_accuracy,snn_accuracy,e_ann,e_snn,improvement.
void write_energy_csv(const std::vector<EnergyRow>& rows, const std::string& path);

}  // namespace snn
