#pragma once

#include <cmath>
#include <vector>

#include "graph.hpp"
#include "rng.hpp"
#include "snn.hpp"

namespace snn::test {

inline Tensor random_tensor(std::vector<int64_t> shape, Rng& rng, float lo = -1.0f,
                            float hi = 1.0f) {
    Tensor t(std::move(shape));
    std::uniform_real_distribution<float> dist(lo, hi);
    for (auto& v : t.data) v = dist(rng);
    return t;
}

// Probe loss sum(r * f(x)) so scalar finite differences exercise every output.
inline double probe_loss(const Tensor& y, const Tensor& r) {
    double s = 0.0;
    for (size_t i = 0; i < y.data.size(); ++i)
        s += static_cast<double>(y.data[i]) * static_cast<double>(r.data[i]);
    return s;
}

struct FdCheck {
    double max_rel_err = 0.0;
    double worst_analytic = 0.0, worst_numeric = 0.0;
};

// Central finite differences of probe_loss w.r.t. the elements of `target`
// (which must alias either the layer input or a parameter tensor), compared
// against the analytic gradient. Relative error is measured against
// max(|analytic|, |numeric|, floor).
template <typename ForwardFn>
FdCheck fd_compare(ForwardFn&& forward, Tensor& target, const Tensor& analytic,
                   const Tensor& probe, float h = 1e-3f, double floor_scale = 1e-2) {
    FdCheck res;
    double scale = 0.0;
    for (size_t i = 0; i < analytic.data.size(); ++i)
        scale = std::max(scale, std::abs(static_cast<double>(analytic.data[i])));
    const double floor = std::max(scale * floor_scale, 1e-6);
    for (size_t i = 0; i < target.data.size(); ++i) {
        const float orig = target.data[i];
        target.data[i] = orig + h;
        const double lp = probe_loss(forward(), probe);
        target.data[i] = orig - h;
        const double lm = probe_loss(forward(), probe);
        target.data[i] = orig;
        const double numeric = (lp - lm) / (2.0 * static_cast<double>(h));
        const double a = static_cast<double>(analytic.data[i]);
        const double denom = std::max({std::abs(a), std::abs(numeric), floor});
        const double rel = std::abs(a - numeric) / denom;
        if (rel > res.max_rel_err) {
            res.max_rel_err = rel;
            res.worst_analytic = a;
            res.worst_numeric = numeric;
        }
    }
    return res;
}

// Well-separated 4-class rate vectors: each class activates its own block of
// dimensions; used as the synthetic embedding set for classifier tests.
inline RateDataset make_rate_clusters(int n_classes, int per_class, int dim, uint64_t seed,
                                      float hi_lo = 0.55f, float hi_hi = 0.85f,
                                      float bg = 0.05f) {
    RateDataset ds;
    ds.n_classes = n_classes;
    Rng rng = make_rng(seed);
    std::uniform_real_distribution<float> hi(hi_lo, hi_hi);
    std::uniform_real_distribution<float> noise(-0.04f, 0.04f);
    const int block = dim / n_classes;
    for (int c = 0; c < n_classes; ++c) {
        for (int i = 0; i < per_class; ++i) {
            std::vector<float> r(static_cast<size_t>(dim));
            for (int d = 0; d < dim; ++d) {
                const bool active = d >= c * block && d < (c + 1) * block;
                float v = (active ? hi(rng) : bg) + noise(rng);
                r[static_cast<size_t>(d)] = std::min(1.0f, std::max(0.0f, v));
            }
            ds.rates.push_back(std::move(r));
            ds.labels.push_back(c);
        }
    }
    return ds;
}

}  // namespace snn::test
