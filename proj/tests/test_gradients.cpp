#include <doctest.h>

#include "common.hpp"
#include "error.hpp"
#include "graph.hpp"
#include "qcfs.hpp"

using namespace snn;
using namespace snn::test;

namespace {

// Runs layer_forward_train once for the cache, layer_backward for the
// analytic gradients, then finite-differences the eval-mode forward.
// These layers are affine in input and parameters, so central differences
// carry no truncation error; a wide step (1/16, exact in binary) keeps the
// float32 rounding noise far below the tolerance.
void check_layer_gradients(Layer layer, std::vector<int64_t> in_shape, Rng& rng,
                           double tol = 1e-3, float h = 0.0625f) {
    Tensor x = random_tensor(in_shape, rng);
    LayerCtx ctx;
    Layer train_layer = layer;
    Tensor y = layer_forward_train(train_layer, x, ctx);
    Tensor probe = random_tensor(y.shape, rng);

    LayerGrads grads;
    Tensor gx = layer_backward(train_layer, ctx, probe, grads);

    auto fwd_x = [&]() { return layer_forward(train_layer, x); };
    auto rx = fd_compare(fwd_x, x, gx, probe, h);
    INFO("input gradient, worst analytic=" << rx.worst_analytic
                                           << " numeric=" << rx.worst_numeric);
    CHECK(rx.max_rel_err < tol);

    if (train_layer.weight.numel()) {
        auto rw = fd_compare(fwd_x, train_layer.weight, grads.weight, probe, h);
        INFO("weight gradient, worst analytic=" << rw.worst_analytic
                                                << " numeric=" << rw.worst_numeric);
        CHECK(rw.max_rel_err < tol);
        auto rb = fd_compare(fwd_x, train_layer.bias, grads.bias, probe, h);
        CHECK(rb.max_rel_err < tol);
    }
}

}  // namespace

TEST_CASE("conv2d gradients match central finite differences") {
    Rng rng = make_rng(11);
    for (int rep = 0; rep < 6; ++rep) {
        Layer conv = Layer::conv2d(2, 3, 3, 1, 1);
        for (auto& w : conv.weight.data) w = random_tensor({1}, rng)[0] * 0.5f;
        for (auto& b : conv.bias.data) b = random_tensor({1}, rng)[0] * 0.1f;
        check_layer_gradients(conv, {2, 2, 5, 5}, rng);
    }
}

TEST_CASE("conv2d stride-2 gradients") {
    Rng rng = make_rng(12);
    Layer conv = Layer::conv2d(1, 2, 3, 2, 1);
    for (auto& w : conv.weight.data) w = random_tensor({1}, rng)[0] * 0.5f;
    check_layer_gradients(conv, {1, 1, 6, 6}, rng);
}

TEST_CASE("linear gradients match central finite differences") {
    Rng rng = make_rng(13);
    for (int rep = 0; rep < 6; ++rep) {
        Layer lin = Layer::linear(7, 4);
        for (auto& w : lin.weight.data) w = random_tensor({1}, rng)[0] * 0.5f;
        for (auto& b : lin.bias.data) b = random_tensor({1}, rng)[0] * 0.1f;
        check_layer_gradients(lin, {3, 7}, rng);
    }
}

TEST_CASE("avgpool and batchnorm gradients") {
    Rng rng = make_rng(14);
    check_layer_gradients(Layer::avgpool(2), {2, 3, 6, 6}, rng);

    Layer bn = Layer::batchnorm(3);
    for (auto& g : bn.gamma.data) g = 0.5f + random_tensor({1}, rng, 0.0f, 1.0f)[0];
    for (auto& b : bn.beta.data) b = random_tensor({1}, rng)[0] * 0.2f;
    // batch statistics change under perturbation, so compare against the
    // training-mode forward
    Tensor x = random_tensor({4, 3, 5, 5}, rng);
    LayerCtx ctx;
    Layer bn_train = bn;
    Tensor y = layer_forward_train(bn_train, x, ctx);
    Tensor probe = random_tensor(y.shape, rng);
    LayerGrads grads;
    Tensor gx = layer_backward(bn_train, ctx, probe, grads);
    auto fwd = [&]() {
        Layer tmp = bn;  // fresh running stats each probe call
        LayerCtx c2;
        return layer_forward_train(tmp, x, c2);
    };
    auto rx = fd_compare(fwd, x, gx, probe, 1e-2f);
    INFO("bn input gradient, worst analytic=" << rx.worst_analytic
                                              << " numeric=" << rx.worst_numeric);
    CHECK(rx.max_rel_err < 5e-3);
    auto rg = fd_compare(fwd, bn.gamma, grads.gamma, probe, 1e-2f);
    CHECK(rg.max_rel_err < 2e-3);
    auto rb = fd_compare(fwd, bn.beta, grads.beta, probe, 1e-2f);
    CHECK(rb.max_rel_err < 2e-3);
}

TEST_CASE("relu and flatten backward") {
    Rng rng = make_rng(15);
    // piecewise linear: keep the step small so no unit crosses its kink
    check_layer_gradients(Layer::relu(), {2, 3, 4, 4}, rng, 1e-3, 1e-3f);
    check_layer_gradients(Layer::flatten(), {2, 3, 4, 4}, rng);
}

TEST_CASE("maxpool backward routes gradient to the argmax") {
    Rng rng = make_rng(16);
    check_layer_gradients(Layer::maxpool(2), {2, 2, 6, 6}, rng, 1e-3, 1e-3f);
}

TEST_CASE("qcfs pass-through region matches finite differences at step lambda/L") {
    // Central differences with h = lambda/L span exactly one staircase period,
    // so the difference quotient of the staircase equals the straight-through
    // surrogate inside (0, lambda).
    Rng rng = make_rng(17);
    const float lambda = 2.0f;
    const int levels = 8;
    const float h = lambda / static_cast<float>(levels);
    for (int rep = 0; rep < 20; ++rep) {
        std::uniform_real_distribution<float> inside(2.5f * h, lambda - 2.5f * h);
        const float xv = inside(rng);
        Tensor x({1});
        x[0] = xv;
        Tensor go({1});
        go[0] = 1.0f;
        auto g = qcfs_backward(x, go, lambda, levels);
        Tensor xp = x, xm = x;
        xp[0] += h;
        xm[0] -= h;
        const float fd = (qcfs_forward(xp, lambda, levels)[0] -
                          qcfs_forward(xm, lambda, levels)[0]) /
                         (2.0f * h);
        CHECK(g.grad_x[0] == doctest::Approx(fd).epsilon(1e-3));
    }
    // blocked region: both the surrogate and the (saturated) staircase are flat
    Tensor x({2});
    x[0] = -1.0f;
    x[1] = 3.5f;
    Tensor go({2});
    go.fill(1.0f);
    auto g = qcfs_backward(x, go, lambda, levels);
    CHECK(g.grad_x[0] == 0.0f);
    CHECK(g.grad_x[1] == 0.0f);
}

TEST_CASE("qcfs lambda gradient: saturated region matches finite differences") {
    // For x > lambda the output is exactly lambda, smooth in lambda.
    const float lambda = 2.0f;
    Tensor x({3});
    x[0] = 2.8f;
    x[1] = 3.3f;
    x[2] = 5.0f;
    Tensor go({3});
    go.fill(1.0f);
    auto g = qcfs_backward(x, go, lambda, 8);
    const float h = 1e-3f;
    const auto yp = qcfs_forward(x, lambda + h, 8);
    const auto ym = qcfs_forward(x, lambda - h, 8);
    float fd = 0.0f;
    for (int i = 0; i < 3; ++i) fd += (yp[i] - ym[i]) / (2.0f * h);
    CHECK(g.grad_lambda == doctest::Approx(fd).epsilon(1e-3));
    CHECK(g.grad_lambda == doctest::Approx(3.0f).epsilon(1e-4));  // dy/dlambda = 1 each
}

TEST_CASE("qcfs lambda gradient follows the interpolant inside the pass band") {
    const float lambda = 2.0f;
    const int levels = 8;
    Tensor x({1});
    x[0] = 0.8f;
    Tensor go({1});
    go[0] = 2.0f;
    auto g = qcfs_backward(x, go, lambda, levels);
    const float y = qcfs_forward(x, lambda, levels)[0];
    CHECK(g.grad_lambda == doctest::Approx(2.0f * (y / lambda - x[0] / lambda)));
}

TEST_CASE("zero upstream gradient yields zero parameter gradients") {
    Rng rng = make_rng(18);
    Layer conv = Layer::conv2d(1, 2, 3, 1, 1);
    for (auto& w : conv.weight.data) w = 0.3f;
    Tensor x = random_tensor({1, 1, 4, 4}, rng);
    LayerCtx ctx;
    Tensor y = layer_forward_train(conv, x, ctx);
    Tensor zero(y.shape);
    LayerGrads grads;
    Tensor gx = layer_backward(conv, ctx, zero, grads);
    for (float v : gx.data) CHECK(v == 0.0f);
    for (float v : grads.weight.data) CHECK(v == 0.0f);
    for (float v : grads.bias.data) CHECK(v == 0.0f);
}

TEST_CASE("backward without cached forward is rejected") {
    Layer lin = Layer::linear(3, 2);
    LayerCtx ctx;  // never filled
    LayerGrads grads;
    Tensor go({1, 2});
    CHECK_THROWS_AS(layer_backward(lin, ctx, go, grads), DataError);
}

TEST_CASE("scalar linear layer: y = w*x, grad_w = x") {
    Layer lin = Layer::linear(1, 1);
    lin.weight[0] = 2.0f;
    lin.bias[0] = 0.0f;
    Tensor x({1, 1});
    x[0] = 3.0f;
    LayerCtx ctx;
    Tensor y = layer_forward_train(lin, x, ctx);
    CHECK(y[0] == 6.0f);
    Tensor go({1, 1});
    go[0] = 1.0f;
    LayerGrads grads;
    Tensor gx = layer_backward(lin, ctx, go, grads);
    CHECK(grads.weight[0] == 3.0f);
    CHECK(grads.bias[0] == 1.0f);
    CHECK(gx[0] == 2.0f);
}
