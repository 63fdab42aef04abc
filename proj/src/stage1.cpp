#include "stage1.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "csvio.hpp"
#include "error.hpp"
#include "optim.hpp"
#include "rng.hpp"

namespace snn {

NetworkGraph surgery(const NetworkGraph& g, float lambda0, int levels, float shift) {
    NetworkGraph out;
    out.input_shape = g.input_shape;
    out.snn_mode = g.snn_mode;
    out.head_start = g.head_start;
    for (size_t i = 0; i < g.layers.size(); ++i) {
        const Layer& l = g.layers[i];
        switch (l.kind) {
            case LayerKind::ReLU:
                out.layers.push_back(Layer::qcfs(lambda0, levels, shift));
                break;
            case LayerKind::MaxPool2d:
                out.layers.push_back(Layer::avgpool(l.pool, l.pool_stride));
                break;
            case LayerKind::Conv2d:
            case LayerKind::Linear:
            case LayerKind::AvgPool2d:
            case LayerKind::Flatten:
            case LayerKind::BatchNorm2d:
            case LayerKind::QCFS:
                out.layers.push_back(l);
                break;
            default:
                throw DataError("surgery: unsupported layer kind '" +
                                std::string(layer_kind_name(l.kind)) + "' at layer " +
                                std::to_string(i));
        }
    }
    return out;
}

void attach_head(NetworkGraph& g, int64_t n_features, int64_t hidden, int64_t n_classes,
                 float lambda0, int levels, float shift) {
    g.head_start = static_cast<int>(g.layers.size());
    g.layers.push_back(Layer::linear(n_features, hidden));
    g.layers.push_back(Layer::qcfs(lambda0, levels, shift));
    g.layers.push_back(Layer::linear(hidden, n_classes));
}

void init_parameters(NetworkGraph& g, uint64_t seed) {
    Rng rng = make_rng(derive_seed(seed, 0x1417ull));
    for (auto& l : g.layers) {
        if (l.kind == LayerKind::Conv2d) {
            const float fan_in = static_cast<float>(l.in_ch * l.kernel * l.kernel);
            std::normal_distribution<float> dist(0.0f, std::sqrt(2.0f / fan_in));
            for (auto& w : l.weight.data) w = dist(rng);
            l.bias.fill(0.0f);
        } else if (l.kind == LayerKind::Linear) {
            std::normal_distribution<float> dist(
                0.0f, std::sqrt(2.0f / static_cast<float>(l.in_features)));
            for (auto& w : l.weight.data) w = dist(rng);
            l.bias.fill(0.0f);
        }
    }
}

NetworkGraph parse_backbone_arch(const std::string& arch, std::vector<int64_t> input_shape) {
    if (input_shape.size() != 3)
        throw DataError("backbone input shape must be [C,H,W], got " + shape_str(input_shape));
    NetworkGraph g;
    g.input_shape = input_shape;
    std::vector<int64_t> cur = {1, input_shape[0], input_shape[1], input_shape[2]};
    std::stringstream ss(arch);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        const auto colon = tok.find(':');
        const std::string name = tok.substr(0, colon);
        const std::string arg = colon == std::string::npos ? "" : tok.substr(colon + 1);
        if (name == "conv") {
            // conv:<out>k<kernel>s<stride>p<pad>, e.g. conv:16k3s1p1
            int64_t out_ch = 0, k = 3, s = 1, p = 0;
            if (std::sscanf(arg.c_str(), "%ldk%lds%ldp%ld", &out_ch, &k, &s, &p) < 2)
                throw DataError("bad conv spec '" + tok + "' (want conv:<out>k<k>s<s>p<p>)");
            g.layers.push_back(Layer::conv2d(cur[1], out_ch, k, s, p));
        } else if (name == "relu") {
            g.layers.push_back(Layer::relu());
        } else if (name == "qcfs") {
            g.layers.push_back(Layer::qcfs(2.0f, 8));
        } else if (name == "maxpool") {
            g.layers.push_back(Layer::maxpool(arg.empty() ? 2 : std::stol(arg)));
        } else if (name == "avgpool") {
            g.layers.push_back(Layer::avgpool(arg.empty() ? 2 : std::stol(arg)));
        } else if (name == "batchnorm") {
            g.layers.push_back(Layer::batchnorm(cur[1]));
        } else if (name == "flatten") {
            g.layers.push_back(Layer::flatten());
        } else if (name == "linear") {
            if (cur.size() != 2) throw DataError("linear before flatten in arch string");
            g.layers.push_back(Layer::linear(cur[1], std::stol(arg)));
        } else {
            throw DataError("unknown arch token '" + tok + "'");
        }
        cur = layer_output_shape(g.layers.back(), cur, static_cast<int>(g.layers.size()) - 1);
    }
    return g;
}

void clamp_qcfs_lambdas(NetworkGraph& g, float min_lambda) {
    for (auto& l : g.layers)
        if (l.kind == LayerKind::QCFS && l.lambda < min_lambda) l.lambda = min_lambda;
}

float softmax_cross_entropy(const Tensor& logits, const std::vector<int>& labels,
                            Tensor* grad) {
    const int64_t n = logits.dim(0), k = logits.dim(1);
    if (static_cast<int64_t>(labels.size()) != n)
        throw DataError("cross entropy: label count does not match batch");
    if (grad) *grad = Tensor(logits.shape);
    float loss = 0.0f;
    for (int64_t i = 0; i < n; ++i) {
        const float* row = logits.ptr() + i * k;
        float mx = row[0];
        for (int64_t j = 1; j < k; ++j) mx = std::max(mx, row[j]);
        float denom = 0.0f;
        for (int64_t j = 0; j < k; ++j) denom += std::exp(row[j] - mx);
        const int y = labels[static_cast<size_t>(i)];
        loss += -(row[y] - mx - std::log(denom));
        if (grad) {
            float* grow = grad->ptr() + i * k;
            for (int64_t j = 0; j < k; ++j) {
                const float p = std::exp(row[j] - mx) / denom;
                grow[j] = (p - (j == y ? 1.0f : 0.0f)) / static_cast<float>(n);
            }
        }
    }
    return loss / static_cast<float>(n);
}

static Tensor make_batch(const LabeledDataset& ds, const std::vector<int64_t>& order,
                         int64_t begin, int64_t end, std::vector<int>& labels, bool do_augment,
                         uint64_t seed, int epoch) {
    const auto& s0 = ds.samples[static_cast<size_t>(order[static_cast<size_t>(begin)])];
    std::vector<int64_t> shape = {end - begin};
    for (int64_t d : s0.image.shape) shape.push_back(d);
    Tensor batch(shape);
    labels.resize(static_cast<size_t>(end - begin));
    const int64_t per = s0.image.numel();
    for (int64_t i = begin; i < end; ++i) {
        const int64_t src = order[static_cast<size_t>(i)];
        const Sample& s = ds.samples[static_cast<size_t>(src)];
        labels[static_cast<size_t>(i - begin)] = s.label;
        if (do_augment) {
            Rng rng = make_rng(derive_seed(seed, 0xa06ull,
                                           static_cast<uint64_t>(epoch) * 1000003ull +
                                               static_cast<uint64_t>(src)));
            Tensor aug = augment(s.image, rng);
            std::copy(aug.data.begin(), aug.data.end(),
                      batch.data.begin() + (i - begin) * per);
        } else {
            std::copy(s.image.data.begin(), s.image.data.end(),
                      batch.data.begin() + (i - begin) * per);
        }
    }
    return batch;
}

float evaluate_ann(const NetworkGraph& g, const LabeledDataset& ds, int batch_size) {
    if (ds.samples.empty()) throw DataError("evaluate_ann: empty dataset");
    std::vector<int64_t> order(static_cast<size_t>(ds.size()));
    std::iota(order.begin(), order.end(), 0);
    int64_t correct = 0;
    std::vector<int> labels;
    for (int64_t b = 0; b < ds.size(); b += batch_size) {
        const int64_t e = std::min<int64_t>(b + batch_size, ds.size());
        Tensor batch = make_batch(ds, order, b, e, labels, false, 0, 0);
        Tensor logits = graph_forward(g, batch);
        const int64_t k = logits.dim(1);
        for (int64_t i = 0; i < e - b; ++i) {
            const float* row = logits.ptr() + i * k;
            int64_t arg = 0;
            for (int64_t j = 1; j < k; ++j)
                if (row[j] > row[arg]) arg = j;
            if (arg == labels[static_cast<size_t>(i)]) ++correct;
        }
    }
    return static_cast<float>(correct) / static_cast<float>(ds.size());
}

Stage1Result train_stage1(const NetworkGraph& g0, const LabeledDataset& train,
                          const LabeledDataset& val, const Stage1Config& cfg) {
    if (train.samples.empty() || val.samples.empty())
        throw DataError("train_stage1: empty dataset");
    Stage1Result res;
    res.best = g0;
    if (cfg.epochs == 0) return res;

    NetworkGraph g = g0;
    Adam adam;
    adam.attach(g);
    CosineSchedule sched{cfg.learning_rate, cfg.t_max};
    const size_t n_layers = g.layers.size();

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const float lr = sched.lr(epoch);
        std::vector<int64_t> order(static_cast<size_t>(train.size()));
        std::iota(order.begin(), order.end(), 0);
        Rng shuffle_rng =
            make_rng(derive_seed(cfg.seed, 0x5caff1eull, static_cast<uint64_t>(epoch)));
        std::shuffle(order.begin(), order.end(), shuffle_rng);

        float loss_sum = 0.0f;
        int64_t correct = 0;
        std::vector<int> labels;
        for (int64_t b = 0; b < train.size(); b += cfg.batch_size) {
            const int64_t e = std::min<int64_t>(b + cfg.batch_size, train.size());
            Tensor x =
                make_batch(train, order, b, e, labels, cfg.augment, cfg.seed, epoch);
            std::vector<LayerCtx> ctx(n_layers);
            for (size_t li = 0; li < n_layers; ++li)
                x = layer_forward_train(g.layers[li], x, ctx[li], static_cast<int>(li));

            Tensor grad;
            const float loss = softmax_cross_entropy(x, labels, &grad);
            if (!std::isfinite(loss))
                throw NumericalError("training diverged (non-finite loss) at epoch " +
                                     std::to_string(epoch));
            loss_sum += loss * static_cast<float>(e - b);
            const int64_t k = x.dim(1);
            for (int64_t i = 0; i < e - b; ++i) {
                const float* row = x.ptr() + i * k;
                int64_t arg = 0;
                for (int64_t j = 1; j < k; ++j)
                    if (row[j] > row[arg]) arg = j;
                if (arg == labels[static_cast<size_t>(i)]) ++correct;
            }

            std::vector<LayerGrads> grads(n_layers);
            for (size_t li = n_layers; li-- > 0;)
                grad = layer_backward(g.layers[li], ctx[li], grad, grads[li],
                                      static_cast<int>(li));
            adam.step(g, grads, lr);
            clamp_qcfs_lambdas(g);
        }

        EpochMetrics m;
        m.epoch = epoch;
        m.train_loss = loss_sum / static_cast<float>(train.size());
        m.train_acc = static_cast<float>(correct) / static_cast<float>(train.size());
        m.val_acc = evaluate_ann(g, val, cfg.batch_size);
        m.lr = lr;
        res.log.push_back(m);
        if (m.val_acc > res.best_val_acc || res.best_epoch < 0) {
            res.best_val_acc = m.val_acc;
            res.best_epoch = epoch;
            res.best = g;
        }
    }
    return res;
}

void write_metrics_csv(const std::vector<EpochMetrics>& log, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open " + path + " for writing");
    out << "epoch,train_loss,train_acc,val_acc,lr\n";
    for (const auto& m : log)
        out << m.epoch << "," << csv_float(m.train_loss) << "," << csv_float(m.train_acc)
            << "," << csv_float(m.val_acc) << "," << csv_float(m.lr) << "\n";
}

}  // namespace snn
