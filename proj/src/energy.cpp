#include "energy.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "csvio.hpp"
#include "error.hpp"

namespace snn {

uint64_t layer_flops(const Layer& l, const std::vector<int64_t>& in_shape) {
    const auto out = layer_output_shape(l, in_shape);
    auto elems = [](const std::vector<int64_t>& s) {
        uint64_t n = 1;
        for (size_t i = 1; i < s.size(); ++i) n *= static_cast<uint64_t>(s[i]);
        return n;  // per sample: batch dimension excluded
    };
    switch (l.kind) {
        case LayerKind::Conv2d:
            return 2ull * static_cast<uint64_t>(l.kernel) * static_cast<uint64_t>(l.kernel) *
                   static_cast<uint64_t>(l.in_ch) * static_cast<uint64_t>(l.out_ch) *
                   static_cast<uint64_t>(out[2]) * static_cast<uint64_t>(out[3]);
        case LayerKind::Linear:
            return 2ull * static_cast<uint64_t>(l.in_features) *
                   static_cast<uint64_t>(l.out_features);
        case LayerKind::AvgPool2d:
        case LayerKind::MaxPool2d:
        case LayerKind::ReLU:
        case LayerKind::QCFS:
        case LayerKind::IF:
            return elems(out);
        case LayerKind::BatchNorm2d:
            return 2ull * elems(out);
        case LayerKind::Flatten:
            return 0;
    }
    return 0;
}

uint64_t count_flops(const NetworkGraph& g) {
    if (g.input_shape.empty())
        throw DataError("count_flops: graph has no static input shape");
    uint64_t total = 0;
    std::vector<int64_t> cur;
    cur.push_back(1);
    for (int64_t d : g.input_shape) cur.push_back(d);
    for (size_t i = 0; i < g.layers.size(); ++i) {
        total += layer_flops(g.layers[i], cur);
        cur = layer_output_shape(g.layers[i], cur, static_cast<int>(i));
    }
    return total;
}

uint64_t count_sops(const std::vector<uint64_t>& spikes_per_layer) {
    uint64_t total = 0;
    for (uint64_t s : spikes_per_layer) total += s;
    return total;
}

EnergyReport& EnergyReport::operator+=(const EnergyReport& o) {
    flops += o.flops;
    sops += o.sops;
    sops_backbone += o.sops_backbone;
    sops_input += o.sops_input;
    sops_classifier += o.sops_classifier;
    e_ann += o.e_ann;
    e_snn += o.e_snn;
    improvement = e_snn > 0.0 ? e_ann / e_snn
                              : (e_ann > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    return *this;
}

EnergyReport energy_report(uint64_t flops, uint64_t sops, const EnergyConstants& k) {
    EnergyReport r;
    r.flops = flops;
    r.sops = sops;
    r.e_ann = static_cast<double>(flops) * k.joules_per_flop;
    r.e_snn = static_cast<double>(sops) * k.joules_per_sop;
    r.improvement = r.e_snn > 0.0
                        ? r.e_ann / r.e_snn
                        : (r.e_ann > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    return r;
}

EnergyReport energy_report_pipeline(uint64_t flops, uint64_t sops_backbone,
                                    uint64_t sops_input, uint64_t sops_classifier,
                                    bool include_input_spikes, const EnergyConstants& k) {
    const uint64_t sops =
        sops_backbone + sops_classifier + (include_input_spikes ? sops_input : 0ull);
    EnergyReport r = energy_report(flops, sops, k);
    r.sops_backbone = sops_backbone;
    r.sops_input = sops_input;
    r.sops_classifier = sops_classifier;
    return r;
}

void write_energy_csv(const std::vector<EnergyRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open " + path + " for writing");
    out << "backbone,ann_accuracy,snn_accuracy,e_ann,e_snn,improvement\n";
    for (const auto& r : rows) {
        out << r.backbone << "," << csv_double(r.ann_accuracy) << ","
            << csv_double(r.snn_accuracy) << "," << csv_double(r.report.e_ann) << ","
            << csv_double(r.report.e_snn) << ",";
        if (std::isinf(r.report.improvement))
            out << "inf";
        else
            out << csv_double(r.report.improvement);
        out << "\n";
    }
}

}  // namespace snn
