#include "stdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "error.hpp"
#include "model_io.hpp"
#include "rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace snn {

// canonical float in [0,1) from the top 24 bits; keeps the draw sequence
// independent of the standard library's distribution implementation
static inline float unit_draw(Rng& rng) {
    return static_cast<float>(rng() >> 8) * (1.0f / 16777216.0f);
}

SpikeTrain poisson_encode(const std::vector<float>& rates, const PoissonEncoderConfig& cfg) {
    if (cfg.t_c < 1) throw DataError("poisson_encode: t_c must be >= 1");
    for (float r : rates)
        if (r < 0.0f) throw DataError("poisson_encode: negative rate");
    const int64_t f = static_cast<int64_t>(rates.size());
    SpikeTrain st;
    st.timesteps = cfg.t_c;
    st.width = f;
    st.bits.assign(static_cast<size_t>(cfg.t_c) * static_cast<size_t>(f), 0);
    std::vector<float> p(rates.size());
    for (size_t i = 0; i < rates.size(); ++i)
        p[i] = std::min(1.0f, std::max(0.0f, rates[i] * cfg.rate_scale));
    Rng rng = make_rng(cfg.seed);
    for (int64_t t = 0; t < cfg.t_c; ++t) {
        uint8_t* row = st.row(t);
        for (int64_t i = 0; i < f; ++i) row[i] = unit_draw(rng) < p[static_cast<size_t>(i)];
    }
    return st;
}

ClassifierState make_classifier(int64_t n_features, int n_classes, const Stage2Config& cfg) {
    if (n_features < 1) throw DataError("classifier: need at least one input feature");
    if (cfg.n_neurons < 1) throw DataError("classifier: need at least one neuron");
    ClassifierState c;
    c.n_features = n_features;
    c.n_neurons = cfg.n_neurons;
    c.n_classes = n_classes;
    c.cfg = cfg;
    c.w = Tensor({n_features, cfg.n_neurons});
    Rng rng = make_rng(derive_seed(cfg.seed, 0x57d9ull));
    for (auto& v : c.w.data) v = unit_draw(rng) * cfg.w_init_max;
    c.theta_adapt.assign(static_cast<size_t>(cfg.n_neurons), 0.0f);
    c.labels.assign(static_cast<size_t>(cfg.n_neurons), -1);
    c.specialization.assign(static_cast<size_t>(cfg.n_neurons), 0.0f);
    c.counts.assign(static_cast<size_t>(cfg.n_neurons) * static_cast<size_t>(n_classes), 0);
    return c;
}

void SimState::reset(const ClassifierState& c) {
    const size_t n = static_cast<size_t>(c.n_neurons);
    const size_t f = static_cast<size_t>(c.n_features);
    v_exc.assign(n, 0.0f);
    v_inh.assign(n, 0.0f);
    x_pre.assign(f, 0.0f);
    x_post.assign(n, 0.0f);
    s_exc.assign(n, 0);
    s_inh.assign(n, 0);
    theta_adapt = c.theta_adapt;
    exc_spikes = inh_spikes = 0;
}

void classifier_step(const ClassifierState& c, SimState& s, const uint8_t* s_in) {
    const int64_t n = c.n_neurons;
    const int64_t f = c.n_features;
    float* ve = s.v_exc.data();
    float* vi = s.v_inh.data();

    if (c.cfg.leak_enabled) {
        const float d = std::exp(-1.0f / c.cfg.leak_tau);
        for (int64_t j = 0; j < n; ++j) ve[j] *= d;
    }

    for (int64_t i = 0; i < f; ++i) {
        if (!s_in[i]) continue;
        const float* wrow = c.w.ptr() + i * n;
        for (int64_t j = 0; j < n; ++j) ve[j] += wrow[j];
    }

    int64_t n_inh = 0;
    for (int64_t j = 0; j < n; ++j) {
        const bool fire = ve[j] >= c.cfg.theta_exc_base + s.theta_adapt[static_cast<size_t>(j)];
        s.s_exc[static_cast<size_t>(j)] = fire;
        if (fire) {
            ++s.exc_spikes;
            vi[j] += c.cfg.exc;
        }
        const bool fire_inh = vi[j] >= c.cfg.theta_inh;
        s.s_inh[static_cast<size_t>(j)] = fire_inh;
        if (fire_inh) {
            ++s.inh_spikes;
            ++n_inh;
        }
    }

    // Lateral inhibition: every inhibitory spike suppresses all excitatory
    // units except its paired one (all-but-self mask).
    if (n_inh > 0) {
        const float total = c.cfg.inh * static_cast<float>(n_inh);
        for (int64_t j = 0; j < n; ++j)
            ve[j] -= total - (s.s_inh[static_cast<size_t>(j)] ? c.cfg.inh : 0.0f);
    }

    for (int64_t j = 0; j < n; ++j) {
        if (s.s_exc[static_cast<size_t>(j)]) ve[j] = 0.0f;
        if (s.s_inh[static_cast<size_t>(j)]) vi[j] = 0.0f;
        if (ve[j] < 0.0f) ve[j] = 0.0f;
    }
}

void stdp_update(const ClassifierState& c, SimState& s, const uint8_t* s_in, float* dw) {
    const int64_t n = c.n_neurons;
    const int64_t f = c.n_features;
    const float d_pre = std::exp(-1.0f / c.cfg.tau_pre);
    const float d_post = std::exp(-1.0f / c.cfg.tau_post);
    float* xpre = s.x_pre.data();
    float* xpost = s.x_post.data();

    for (int64_t i = 0; i < f; ++i) {
        xpre[i] *= d_pre;
        if (s_in[i]) xpre[i] += 1.0f;
    }
    for (int64_t j = 0; j < n; ++j) xpost[j] *= d_post;

    // Post spike: potentiate by the presynaptic trace (causal pairs, the
    // current pre spike included). Pre spike: depress by the postsynaptic
    // trace (strictly anti-causal pairs).
    for (int64_t j = 0; j < n; ++j) {
        if (!s.s_exc[static_cast<size_t>(j)]) continue;
        for (int64_t i = 0; i < f; ++i) dw[i * n + j] += c.cfg.eta_post * xpre[i];
    }
    for (int64_t i = 0; i < f; ++i) {
        if (!s_in[i]) continue;
        float* drow = dw + i * n;
        for (int64_t j = 0; j < n; ++j) drow[j] -= c.cfg.eta_pre * xpost[j];
    }

    for (int64_t j = 0; j < n; ++j)
        if (s.s_exc[static_cast<size_t>(j)]) xpost[j] += 1.0f;
}

void adapt_thresholds(const ClassifierState& c, SimState& s) {
    const float d = std::exp(-1.0f / c.cfg.tau_theta);
    for (int64_t j = 0; j < c.n_neurons; ++j) {
        float& a = s.theta_adapt[static_cast<size_t>(j)];
        a *= d;
        if (s.s_exc[static_cast<size_t>(j)]) a += c.cfg.theta_plus;
    }
}

PresentationResult run_presentation(const ClassifierState& c, const SpikeTrain& train,
                                    SimState& sim, bool learn, float* dw) {
    if (train.width != c.n_features)
        throw DataError("presentation: spike train width " + std::to_string(train.width) +
                        " does not match feature count " + std::to_string(c.n_features));
    PresentationResult res;
    res.spike_counts.assign(static_cast<size_t>(c.n_neurons), 0);
    for (int64_t t = 0; t < train.timesteps; ++t) {
        const uint8_t* s_in = train.row(t);
        classifier_step(c, sim, s_in);
        if (learn) {
            stdp_update(c, sim, s_in, dw);
            adapt_thresholds(c, sim);
        }
        for (int64_t j = 0; j < c.n_neurons; ++j)
            res.spike_counts[static_cast<size_t>(j)] += sim.s_exc[static_cast<size_t>(j)];
    }
    res.exc_spikes = sim.exc_spikes;
    res.inh_spikes = sim.inh_spikes;
    res.input_spikes = train.total_spikes();
    return res;
}

static void labels_from_counts(ClassifierState& c) {
    for (int64_t nrn = 0; nrn < c.n_neurons; ++nrn) {
        uint64_t total = 0;
        uint64_t best = 0;
        int best_cls = -1;
        for (int cls = 0; cls < c.n_classes; ++cls) {
            const uint64_t cnt = c.count(nrn, cls);
            total += cnt;
            if (cnt > best) {
                best = cnt;
                best_cls = cls;
            }
        }
        if (total == 0) {
            c.labels[static_cast<size_t>(nrn)] = -1;
            c.specialization[static_cast<size_t>(nrn)] = 0.0f;
        } else {
            c.labels[static_cast<size_t>(nrn)] = best_cls;
            c.specialization[static_cast<size_t>(nrn)] =
                static_cast<float>(static_cast<double>(best) / static_cast<double>(total));
        }
    }
}

int predict_from_counts(const ClassifierState& c, const std::vector<uint64_t>& counts_per_neuron,
                        std::vector<float>* class_scores) {
    std::vector<float> scores(static_cast<size_t>(c.n_classes), 0.0f);
    for (int64_t nrn = 0; nrn < c.n_neurons; ++nrn) {
        const int lbl = c.labels[static_cast<size_t>(nrn)];
        if (lbl < 0) continue;  // unassigned neurons do not vote
        scores[static_cast<size_t>(lbl)] +=
            static_cast<float>(counts_per_neuron[static_cast<size_t>(nrn)]) *
            c.specialization[static_cast<size_t>(nrn)];
    }
    if (class_scores) *class_scores = scores;
    int best = -1;
    float best_score = 0.0f;
    for (int cls = 0; cls < c.n_classes; ++cls) {
        if (scores[static_cast<size_t>(cls)] > best_score) {
            best_score = scores[static_cast<size_t>(cls)];
            best = cls;  // ties keep the lowest class index
        }
    }
    return best;
}

ClassifyResult classify(const ClassifierState& c, const std::vector<float>& rates,
                        uint64_t sample_seed) {
    PoissonEncoderConfig pc{c.cfg.t_c, sample_seed, c.cfg.rate_scale};
    const SpikeTrain st = poisson_encode(rates, pc);
    SimState sim;
    sim.reset(c);
    PresentationResult pres = run_presentation(c, st, sim, false, nullptr);
    ClassifyResult out;
    out.counts = std::move(pres.spike_counts);
    out.predicted = predict_from_counts(c, out.counts, &out.scores);
    out.input_spikes = pres.input_spikes;
    out.exc_spikes = pres.exc_spikes;
    out.inh_spikes = pres.inh_spikes;
    return out;
}

void assign_labels(ClassifierState& c, const RateDataset& data, uint64_t seed_stream) {
    if (data.rates.empty()) throw DataError("assign_labels: empty calibration set");
    const int64_t n = data.size();
    std::fill(c.counts.begin(), c.counts.end(), 0);
    std::vector<std::vector<uint64_t>> per(static_cast<size_t>(n));
#pragma omp parallel for schedule(dynamic)
    for (int64_t i = 0; i < n; ++i) {
        const uint64_t seed = derive_seed(c.cfg.seed, 0xca11b000ull + seed_stream,
                                          static_cast<uint64_t>(i));
        ClassifyResult r = classify(c, data.rates[static_cast<size_t>(i)], seed);
        per[static_cast<size_t>(i)] = std::move(r.counts);
    }
    for (int64_t i = 0; i < n; ++i) {
        const int cls = data.labels[static_cast<size_t>(i)];
        for (int64_t nrn = 0; nrn < c.n_neurons; ++nrn)
            c.counts[static_cast<size_t>(nrn) * static_cast<size_t>(c.n_classes) +
                     static_cast<size_t>(cls)] += per[static_cast<size_t>(i)][static_cast<size_t>(nrn)];
    }
    labels_from_counts(c);
}

Stage2EvalResult evaluate_stage2(const ClassifierState& c, const RateDataset& data,
                                 uint64_t seed_stream) {
    if (data.rates.empty()) throw DataError("evaluate_stage2: empty dataset");
    const int64_t n = data.size();
    const int nc = c.n_classes;
    Stage2EvalResult res;
    res.n_samples = n;
    // one extra confusion column for abstentions
    res.confusion.assign(static_cast<size_t>(nc),
                         std::vector<int64_t>(static_cast<size_t>(nc) + 1, 0));
    res.per_neuron_counts.assign(static_cast<size_t>(c.n_neurons), 0);
    res.activity_map.assign(static_cast<size_t>(c.n_neurons) * static_cast<size_t>(nc), 0.0);

    std::vector<ClassifyResult> results(static_cast<size_t>(n));
#pragma omp parallel for schedule(dynamic)
    for (int64_t i = 0; i < n; ++i) {
        const uint64_t seed =
            derive_seed(c.cfg.seed, 0xeba1000ull + seed_stream, static_cast<uint64_t>(i));
        results[static_cast<size_t>(i)] = classify(c, data.rates[static_cast<size_t>(i)], seed);
    }

    std::vector<int64_t> class_counts(static_cast<size_t>(nc), 0);
    int64_t correct = 0;
    for (int64_t i = 0; i < n; ++i) {
        const auto& r = results[static_cast<size_t>(i)];
        const int truth = data.labels[static_cast<size_t>(i)];
        class_counts[static_cast<size_t>(truth)]++;
        const int col = r.predicted < 0 ? nc : r.predicted;
        res.confusion[static_cast<size_t>(truth)][static_cast<size_t>(col)]++;
        if (r.predicted == truth) ++correct;
        if (r.predicted < 0) ++res.abstained;
        res.input_spikes += r.input_spikes;
        res.exc_spikes += r.exc_spikes;
        res.inh_spikes += r.inh_spikes;
        for (int64_t nrn = 0; nrn < c.n_neurons; ++nrn) {
            res.per_neuron_counts[static_cast<size_t>(nrn)] += r.counts[static_cast<size_t>(nrn)];
            res.activity_map[static_cast<size_t>(nrn) * static_cast<size_t>(nc) +
                             static_cast<size_t>(truth)] +=
                static_cast<double>(r.counts[static_cast<size_t>(nrn)]);
        }
    }
    for (int64_t nrn = 0; nrn < c.n_neurons; ++nrn)
        for (int cls = 0; cls < nc; ++cls) {
            const int64_t cnt = class_counts[static_cast<size_t>(cls)];
            if (cnt > 0)
                res.activity_map[static_cast<size_t>(nrn) * static_cast<size_t>(nc) +
                                 static_cast<size_t>(cls)] /=
                    static_cast<double>(cnt) * static_cast<double>(c.cfg.t_c);
        }
    res.accuracy = static_cast<float>(correct) / static_cast<float>(n);
    return res;
}

Stage2Result train_stage2(ClassifierState classifier, const RateDataset& train,
                          const RateDataset& val, const Stage2Config& cfg) {
    if (train.rates.empty() || val.rates.empty())
        throw DataError("train_stage2: empty dataset");
    ClassifierState& c = classifier;
    c.cfg = cfg;
    if (c.n_classes != train.n_classes)
        throw DataError("train_stage2: classifier class count does not match dataset");
    if (c.cfg.rate_scale <= 0.0f) {
        double total = 0.0;
        for (const auto& r : train.rates)
            for (float v : r) total += v;
        const double mean_per_step = total / static_cast<double>(train.size());
        if (mean_per_step <= 0.0)
            throw NumericalError("train_stage2: training rates are all zero");
        c.cfg.rate_scale = static_cast<float>(c.cfg.input_target / mean_per_step);
    }

    const int64_t n_train = train.size();
    const int64_t fxn = c.n_features * c.n_neurons;
    Stage2Result res;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::vector<int64_t> order(static_cast<size_t>(n_train));
        for (int64_t i = 0; i < n_train; ++i) order[static_cast<size_t>(i)] = i;
        Rng shuffle_rng =
            make_rng(derive_seed(cfg.seed, 0x2b57ull, static_cast<uint64_t>(epoch)));
        std::shuffle(order.begin(), order.end(), shuffle_rng);

        std::fill(c.counts.begin(), c.counts.end(), 0);
        uint64_t epoch_exc_spikes = 0;

        for (int64_t b = 0; b < n_train; b += cfg.batch_size) {
            const int64_t e = std::min<int64_t>(b + cfg.batch_size, n_train);
            const int64_t bs = e - b;

            // Per-sample simulations all start from the batch-start state;
            // their weight deltas are reduced by elementwise max and applied
            // once. Max is order-independent, so the parallel reduction is
            // deterministic.
            std::vector<float> dw_max(static_cast<size_t>(fxn), 0.0f);
            std::vector<float> theta_max = c.theta_adapt;
            std::vector<std::vector<uint64_t>> batch_counts(static_cast<size_t>(bs));
            std::vector<int> batch_cls(static_cast<size_t>(bs));
            uint64_t batch_exc = 0;

#ifdef _OPENMP
            const int max_threads = omp_get_max_threads();
#else
            const int max_threads = 1;
#endif
            std::vector<std::vector<float>> dw_local(
                static_cast<size_t>(max_threads));
            std::vector<std::vector<float>> theta_local(static_cast<size_t>(max_threads));

#pragma omp parallel reduction(+ : batch_exc)
            {
#ifdef _OPENMP
                const int tid = omp_get_thread_num();
#else
                const int tid = 0;
#endif
                auto& dw = dw_local[static_cast<size_t>(tid)];
                auto& th = theta_local[static_cast<size_t>(tid)];

#pragma omp for schedule(static)
                for (int64_t k = 0; k < bs; ++k) {
                    const int64_t idx = order[static_cast<size_t>(b + k)];
                    const uint64_t seed = derive_seed(
                        cfg.seed, 0xe2c0deull,
                        static_cast<uint64_t>(epoch) * 1000003ull + static_cast<uint64_t>(idx));
                    PoissonEncoderConfig pc{cfg.t_c, seed, c.cfg.rate_scale};
                    SpikeTrain st = poisson_encode(train.rates[static_cast<size_t>(idx)], pc);

                    std::vector<float> dw_sample(static_cast<size_t>(fxn), 0.0f);
                    SimState sim;
                    sim.reset(c);
                    PresentationResult pres =
                        run_presentation(c, st, sim, true, dw_sample.data());

                    if (dw.empty()) {
                        dw = std::move(dw_sample);
                        th = sim.theta_adapt;
                    } else {
                        for (int64_t j = 0; j < fxn; ++j)
                            dw[static_cast<size_t>(j)] =
                                std::max(dw[static_cast<size_t>(j)],
                                         dw_sample[static_cast<size_t>(j)]);
                        for (int64_t j = 0; j < c.n_neurons; ++j)
                            th[static_cast<size_t>(j)] =
                                std::max(th[static_cast<size_t>(j)],
                                         sim.theta_adapt[static_cast<size_t>(j)]);
                    }
                    batch_counts[static_cast<size_t>(k)] = std::move(pres.spike_counts);
                    batch_cls[static_cast<size_t>(k)] =
                        train.labels[static_cast<size_t>(idx)];
                    batch_exc += pres.exc_spikes;
                }
            }

            for (int t = 0; t < max_threads; ++t) {
                if (dw_local[static_cast<size_t>(t)].empty()) continue;
                for (int64_t j = 0; j < fxn; ++j)
                    dw_max[static_cast<size_t>(j)] =
                        std::max(dw_max[static_cast<size_t>(j)],
                                 dw_local[static_cast<size_t>(t)][static_cast<size_t>(j)]);
                for (int64_t j = 0; j < c.n_neurons; ++j)
                    theta_max[static_cast<size_t>(j)] =
                        std::max(theta_max[static_cast<size_t>(j)],
                                 theta_local[static_cast<size_t>(t)][static_cast<size_t>(j)]);
            }

            float* w = c.w.ptr();
            for (int64_t j = 0; j < fxn; ++j) {
                w[j] += dw_max[static_cast<size_t>(j)];
                if (w[j] < 0.0f) w[j] = 0.0f;
                if (w[j] > cfg.w_max) w[j] = cfg.w_max;
            }
            c.theta_adapt = theta_max;

            for (int64_t k = 0; k < bs; ++k) {
                const int cls = batch_cls[static_cast<size_t>(k)];
                for (int64_t nrn = 0; nrn < c.n_neurons; ++nrn)
                    c.counts[static_cast<size_t>(nrn) * static_cast<size_t>(c.n_classes) +
                             static_cast<size_t>(cls)] +=
                        batch_counts[static_cast<size_t>(k)][static_cast<size_t>(nrn)];
            }
            epoch_exc_spikes += batch_exc;
        }

        if (epoch == 0 && epoch_exc_spikes == 0)
            throw NumericalError(
                "classifier silent through epoch 1 (degenerate hyperparameters: no excitatory "
                "spikes)");

        // label assignment from this epoch's firing responses, then validation
        labels_from_counts(c);
        Stage2EvalResult v = evaluate_stage2(c, val, 1000 + static_cast<uint64_t>(epoch));

        Stage2EpochMetrics m;
        m.epoch = epoch;
        m.val_acc = v.accuracy;
        m.val_abstain = v.abstained;
        m.train_exc_spikes = epoch_exc_spikes;
        res.log.push_back(m);
        res.epochs_run = epoch + 1;

        if (res.best_epoch < 0 || v.accuracy > res.best_val_acc) {
            res.best_val_acc = v.accuracy;
            res.best_epoch = epoch;
            res.best = c;
        }
        if (epoch - res.best_epoch >= cfg.patience) break;
    }
    return res;
}

Stage2Result train_stage2(const NetworkGraph& backbone, ClassifierState classifier,
                          const LabeledDataset& train, const LabeledDataset& val, int t_b,
                          const Stage2Config& cfg) {
    RateDataset train_rates = extract_features(backbone, train, t_b);
    RateDataset val_rates = extract_features(backbone, val, t_b);
    return train_stage2(std::move(classifier), train_rates, val_rates, cfg);
}

// ------------------------------------------------------------- checkpoint ---

void save_classifier(const ClassifierState& c, const std::string& path) {
    BinWriter w(path);
    write_header(w, kModeClassifier);
    w.i64(c.n_features);
    w.i64(c.n_neurons);
    w.i32(c.n_classes);
    const Stage2Config& k = c.cfg;
    w.i64(k.n_neurons);
    w.f32(k.exc);
    w.f32(k.inh);
    w.f32(k.theta_plus);
    w.i64(k.batch_size);
    w.i64(k.epochs);
    w.i64(k.patience);
    w.f32(k.eta_pre);
    w.f32(k.eta_post);
    w.i64(k.t_c);
    w.f32(k.w_max);
    w.f32(k.w_init_max);
    w.f32(k.tau_pre);
    w.f32(k.tau_post);
    w.f32(k.tau_theta);
    w.f32(k.theta_exc_base);
    w.f32(k.theta_inh);
    w.u8(k.leak_enabled ? 1 : 0);
    w.f32(k.leak_tau);
    w.f32(k.rate_scale);
    w.f32(k.input_target);
    w.u64(k.seed);
    w.tensor(c.w);
    for (float v : c.theta_adapt) w.f32(v);
    for (int v : c.labels) w.i32(v);
    for (float v : c.specialization) w.f32(v);
    for (uint64_t v : c.counts) w.u64(v);
    w.close();
}

ClassifierState load_classifier(const std::string& path) {
    BinReader r(path);
    const uint32_t mode = read_header(r);
    if (mode != kModeClassifier)
        throw DataError(path + " is not a classifier checkpoint (mode " +
                        std::to_string(mode) + ")");
    ClassifierState c;
    c.n_features = r.i64();
    c.n_neurons = r.i64();
    c.n_classes = r.i32();
    Stage2Config& k = c.cfg;
    k.n_neurons = static_cast<int>(r.i64());
    k.exc = r.f32();
    k.inh = r.f32();
    k.theta_plus = r.f32();
    k.batch_size = static_cast<int>(r.i64());
    k.epochs = static_cast<int>(r.i64());
    k.patience = static_cast<int>(r.i64());
    k.eta_pre = r.f32();
    k.eta_post = r.f32();
    k.t_c = static_cast<int>(r.i64());
    k.w_max = r.f32();
    k.w_init_max = r.f32();
    k.tau_pre = r.f32();
    k.tau_post = r.f32();
    k.tau_theta = r.f32();
    k.theta_exc_base = r.f32();
    k.theta_inh = r.f32();
    k.leak_enabled = r.u8() != 0;
    k.leak_tau = r.f32();
    k.rate_scale = r.f32();
    k.input_target = r.f32();
    k.seed = r.u64();
    c.w = r.tensor();
    c.theta_adapt.resize(static_cast<size_t>(c.n_neurons));
    for (auto& v : c.theta_adapt) v = r.f32();
    c.labels.resize(static_cast<size_t>(c.n_neurons));
    for (auto& v : c.labels) v = r.i32();
    c.specialization.resize(static_cast<size_t>(c.n_neurons));
    for (auto& v : c.specialization) v = r.f32();
    c.counts.resize(static_cast<size_t>(c.n_neurons) * static_cast<size_t>(c.n_classes));
    for (auto& v : c.counts) v = r.u64();
    return c;
}

}  // namespace snn
