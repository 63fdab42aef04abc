#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "energy.hpp"
#include "stage1.hpp"
#include "stdp.hpp"

namespace snn {

/// Everything a full experiment needs; round-trips through the key = value
/// config format (schema in docs/config.md). A run archives its config
/// verbatim next to its outputs.
struct ExperimentConfig {
    std::string dataset = "synthetic";  // "synthetic" | "folder"
    std::string data_dir;
    int image_size = 64;
    int synth_classes = 4;
    int synth_per_class = 100;
    uint64_t seed = 0;
    std::string arch =
        "conv:8k3s1p1,batchnorm,relu,avgpool:2,conv:16k3s1p1,batchnorm,relu,avgpool:2,"
        "conv:32k3s1p1,batchnorm,relu,avgpool:2,flatten";

    Stage1Config stage1;
    Stage2Config stage2;

    int t_b = 128;  // backbone presentation time for feature extraction
    std::vector<int> t_b_list = {4, 8, 16, 32, 64, 128, 256};
    std::vector<int> t_c_list = {100, 150, 200, 250, 300};

    EnergyConstants energy;
    bool energy_include_input_spikes = true;

    std::string out_dir = "runs/out";

    // seeded random search over the stage-2 ranges
    int search_trials = 10;
    uint64_t search_seed = 0;
    float search_exc_min = 20.0f, search_exc_max = 50.0f;
    float search_inh_min = 150.0f, search_inh_max = 250.0f;
    float search_theta_plus_min = 0.001f, search_theta_plus_max = 0.02f;

    // raw file text when the config came from disk; archived verbatim
    std::string raw_text;
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);
std::string serialize_config(const ExperimentConfig& cfg);

/// Copies the exact config used into <out_dir>/config.txt.
void archive_config(const ExperimentConfig& cfg, const std::string& out_dir);

std::vector<int> parse_int_list(const std::string& s);

}  // namespace snn
