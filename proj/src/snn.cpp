#include "snn.hpp"

#include <algorithm>
#include <fstream>

#include "csvio.hpp"
#include "error.hpp"
#include "stage1.hpp"

namespace snn {

NetworkGraph convert(const NetworkGraph& ann) {
    if (ann.snn_mode) throw DataError("convert: graph is already in SNN mode");
    NetworkGraph out;
    out.input_shape = ann.input_shape;
    out.head_start = ann.head_start;
    out.snn_mode = true;
    for (size_t i = 0; i < ann.layers.size(); ++i) {
        const Layer& l = ann.layers[i];
        switch (l.kind) {
            case LayerKind::QCFS: {
                Layer ifl;
                ifl.kind = LayerKind::IF;
                ifl.theta = l.lambda;
                ifl.levels = l.levels;
                ifl.shift = l.shift;
                out.layers.push_back(ifl);
                break;
            }
            case LayerKind::Conv2d:
            case LayerKind::Linear:
            case LayerKind::AvgPool2d:
            case LayerKind::Flatten:
                out.layers.push_back(l);
                break;
            default:
                throw DataError("convert: unsupported layer '" +
                                std::string(layer_kind_name(l.kind)) + "' at layer " +
                                std::to_string(i) +
                                " (run surgery and fold batch norm first)");
        }
    }
    return out;
}

Tensor if_step(IFLayerState& state, const Tensor& input) {
    if (!input.same_shape(state.v))
        throw DataError("if_step: input shape " + shape_str(input.shape) +
                        " does not match membrane shape " + shape_str(state.v.shape));
    Tensor spikes;
    spikes.shape = input.shape;
    spikes.data.resize(input.data.size());
    uint64_t count = 0;
    float* v = state.v.ptr();
    const float theta = state.theta;
    for (size_t i = 0; i < input.data.size(); ++i) {
        v[i] += input.data[i];
        if (v[i] >= theta) {
            v[i] -= theta;
            spikes.data[i] = 1.0f;
            ++count;
        } else {
            spikes.data[i] = 0.0f;
        }
    }
    state.spike_count += count;
    return spikes;
}

SnnRunRecord forward_snn(const NetworkGraph& g, const Tensor& image, int t_b) {
    if (!g.snn_mode) throw DataError("forward_snn: graph is not in SNN mode");
    if (t_b < 1)
        throw DataError("forward_snn: t_b must be >= 1 (T=0 is the ANN-mode baseline)");

    Tensor x = image;
    if (x.ndim() == 3) {
        std::vector<int64_t> s = {1};
        for (int64_t d : image.shape) s.push_back(d);
        x = image.reshaped(s);
    }

    const size_t n_layers = g.layers.size();
    size_t first_if = n_layers;
    for (size_t i = 0; i < n_layers; ++i)
        if (g.layers[i].kind == LayerKind::IF) {
            first_if = i;
            break;
        }

    // Layers before the first IF see the same constant current every step.
    Tensor constant_current = x;
    for (size_t i = 0; i < first_if; ++i)
        constant_current =
            layer_forward(g.layers[i], constant_current, static_cast<int>(i));

    std::vector<IFLayerState> states(n_layers);
    const int64_t feature_end = g.feature_end();

    SnnRunRecord rec;
    rec.t_b = t_b;
    rec.spikes_per_layer.assign(n_layers, 0);

    // A spike transmits theta downstream (rate * theta is the value an IF
    // layer represents), so the feature tap is rescaled back to plain rates
    // by the theta of the last spiking layer ahead of it.
    float tap_scale = 1.0f;
    for (int64_t i = 0; i < feature_end; ++i)
        if (g.layers[static_cast<size_t>(i)].kind == LayerKind::IF)
            tap_scale = g.layers[static_cast<size_t>(i)].theta;

    std::vector<float> feature_accum;
    std::vector<float> logit_accum;
    const bool has_head = g.head_start >= 0;

    for (int t = 0; t < t_b; ++t) {
        Tensor h = constant_current;
        for (size_t i = first_if; i < n_layers; ++i) {
            const Layer& l = g.layers[i];
            if (l.kind == LayerKind::IF) {
                IFLayerState& st = states[i];
                if (t == 0) {
                    st.theta = l.theta;
                    st.reset(h.shape);
                }
                h = if_step(st, h);
                for (auto& v : h.data) v *= l.theta;
            } else {
                h = layer_forward(l, h, static_cast<int>(i));
            }
            if (static_cast<int64_t>(i) == feature_end - 1) {
                if (feature_accum.empty()) feature_accum.assign(h.data.size(), 0.0f);
                for (size_t j = 0; j < h.data.size(); ++j) feature_accum[j] += h.data[j];
            }
        }
        if (has_head) {
            if (logit_accum.empty()) logit_accum.assign(h.data.size(), 0.0f);
            for (size_t j = 0; j < h.data.size(); ++j) logit_accum[j] += h.data[j];
        }
    }

    for (size_t i = 0; i < n_layers; ++i) rec.spikes_per_layer[i] = states[i].spike_count;
    rec.r_f.resize(feature_accum.size());
    for (size_t j = 0; j < feature_accum.size(); ++j)
        rec.r_f[j] = feature_accum[j] / (static_cast<float>(t_b) * tap_scale);
    if (has_head) {
        rec.logits = logit_accum;
        int arg = 0;
        for (size_t j = 1; j < logit_accum.size(); ++j)
            if (logit_accum[j] > logit_accum[static_cast<size_t>(arg)])
                arg = static_cast<int>(j);
        rec.predicted = arg;
    }
    return rec;
}

SnnEvalResult evaluate_snn(const NetworkGraph& g, const LabeledDataset& ds, int t_b) {
    if (ds.samples.empty()) throw DataError("evaluate_snn: empty dataset");
    if (g.head_start < 0)
        throw DataError("evaluate_snn: graph has no classification head");
    const int64_t n = ds.size();
    std::vector<int> preds(static_cast<size_t>(n), -1);
    std::vector<uint64_t> sops(static_cast<size_t>(n), 0);
    std::vector<std::vector<uint64_t>> per_layer(static_cast<size_t>(n));

#pragma omp parallel for schedule(dynamic)
    for (int64_t i = 0; i < n; ++i) {
        SnnRunRecord rec = forward_snn(g, ds.samples[static_cast<size_t>(i)].image, t_b);
        preds[static_cast<size_t>(i)] = rec.predicted;
        sops[static_cast<size_t>(i)] = rec.total_spikes();
        per_layer[static_cast<size_t>(i)] = rec.spikes_per_layer;
    }

    SnnEvalResult res;
    res.n_samples = n;
    res.spikes_per_layer.assign(g.layers.size(), 0);
    const int nc = ds.n_classes();
    res.confusion.assign(static_cast<size_t>(nc), std::vector<int64_t>(static_cast<size_t>(nc), 0));
    int64_t correct = 0;
    for (int64_t i = 0; i < n; ++i) {
        const int truth = ds.samples[static_cast<size_t>(i)].label;
        const int pred = preds[static_cast<size_t>(i)];
        if (pred == truth) ++correct;
        if (pred >= 0 && pred < nc)
            res.confusion[static_cast<size_t>(truth)][static_cast<size_t>(pred)]++;
        res.total_sops += sops[static_cast<size_t>(i)];
        for (size_t li = 0; li < per_layer[static_cast<size_t>(i)].size(); ++li)
            res.spikes_per_layer[li] += per_layer[static_cast<size_t>(i)][li];
    }
    res.accuracy = static_cast<float>(correct) / static_cast<float>(n);
    return res;
}

RateDataset extract_features(const NetworkGraph& g, const LabeledDataset& ds, int t_b) {
    if (ds.samples.empty()) throw DataError("extract_features: empty dataset");
    const int64_t n = ds.size();
    RateDataset out;
    out.rates.resize(static_cast<size_t>(n));
    out.labels.resize(static_cast<size_t>(n));
    out.n_classes = ds.n_classes();
    std::vector<uint64_t> sops(static_cast<size_t>(n), 0);

#pragma omp parallel for schedule(dynamic)
    for (int64_t i = 0; i < n; ++i) {
        SnnRunRecord rec = forward_snn(g, ds.samples[static_cast<size_t>(i)].image, t_b);
        out.rates[static_cast<size_t>(i)] = std::move(rec.r_f);
        out.labels[static_cast<size_t>(i)] = ds.samples[static_cast<size_t>(i)].label;
        sops[static_cast<size_t>(i)] = rec.total_spikes();
    }
    for (uint64_t s : sops) out.backbone_sops += s;
    return out;
}

std::vector<TimestepAccuracy> accuracy_vs_timesteps(const NetworkGraph& g,
                                                    const LabeledDataset& ds,
                                                    const std::vector<int>& t_list) {
    if (t_list.empty()) throw DataError("accuracy_vs_timesteps: t_list must be non-empty");
    for (size_t i = 1; i < t_list.size(); ++i)
        if (t_list[i] <= t_list[i - 1])
            throw DataError("accuracy_vs_timesteps: t_list must be ascending");
    std::vector<TimestepAccuracy> rows;
    TimestepAccuracy base;
    base.t_b = 0;
    base.accuracy = evaluate_ann(g, ds);
    rows.push_back(base);
    for (int t : t_list) {
        SnnEvalResult r = evaluate_snn(g, ds, t);
        rows.push_back({t, r.accuracy, r.total_sops});
    }
    return rows;
}

void write_timestep_csv(const std::vector<TimestepAccuracy>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open " + path + " for writing");
    out << "t_b,accuracy,total_sops\n";
    for (const auto& r : rows)
        out << r.t_b << "," << csv_float(r.accuracy) << "," << r.total_sops << "\n";
}

}  // namespace snn
