#include <cmath>
#include <sstream>

#include <doctest.h>

#include "funbench/errors.hpp"
#include "funbench/neuro/gradcheck.hpp"
#include "funbench/neuro/network.hpp"
#include "funbench/neuro/serialize.hpp"
#include "funbench/neuro/train.hpp"
#include "funbench/simgen.hpp"
#include "support.hpp"

using namespace funbench;
using namespace funbench::nn;

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

Tensor random_tensor(Shape shape, std::uint64_t seed, double sd = 1.0) {
    Rng rng(seed, 11);
    Tensor t(std::move(shape));
    for (auto& v : t.data()) v = rng.normal(0.0, sd);
    return t;
}

void zero_parameters(Network& net) {
    for (auto block : net.parameters())
        for (auto& v : block) v = 0.0;
}

ArchitectureSizes toy_sizes() {
    ArchitectureSizes s;
    s.recurrent_units = 3;
    s.dense_units = 4;
    s.cr_hidden_units = 4;
    return s;
}

}  // namespace

TEST_SUITE("neuro") {

// ---------------------------------------------------------------------------
// Dense layer

TEST_CASE("dense forward with zero weights and identity weights") {
    DenseLayer zero(3, 2, Activation::Identity);
    zero.weights.setZero();
    zero.bias.setZero();
    const Tensor x = random_tensor({4, 3}, 1);
    CHECK(dense_forward(zero, x) == Tensor({4, 2}));

    DenseLayer eye(3, 3, Activation::Identity);
    eye.weights.setIdentity();
    eye.bias.setZero();
    CHECK(dense_forward(eye, x) == x);
}

TEST_CASE("dense forward 2x2 tanh hand instance") {
    DenseLayer layer(2, 2, Activation::Tanh);
    layer.weights << 0.5, -1.0, 2.0, 0.25;
    layer.bias << 0.1, -0.2;
    const Tensor x({1, 2}, {0.3, 0.8});
    const Tensor y = dense_forward(layer, x);
    CHECK(y[0] == doctest::Approx(std::tanh(0.5 * 0.3 - 1.0 * 0.8 + 0.1)).epsilon(1e-15));
    CHECK(y[1] == doctest::Approx(std::tanh(2.0 * 0.3 + 0.25 * 0.8 - 0.2)).epsilon(1e-15));
}

TEST_CASE("dense layer is applied time-distributed on rank-3 input") {
    DenseLayer layer(2, 1, Activation::Identity);
    layer.weights << 1.0, 2.0;
    layer.bias << 0.5;
    const Tensor x({1, 3, 2}, {1, 0, 0, 1, 1, 1});
    const Tensor y = dense_forward(layer, x);
    CHECK(y.shape() == Shape{1, 3, 1});
    CHECK(y[0] == 1.5);
    CHECK(y[1] == 2.5);
    CHECK(y[2] == 3.5);
    CHECK_THROWS_AS(dense_forward(layer, Tensor({2, 3})), DimensionError);
}

TEST_CASE("softmax rows sum to one and lie in (0,1)") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Tensor logits = random_tensor({8, 5}, seed, 5.0);
        const Tensor p = softmax(logits);
        for (std::size_t r = 0; r < 8; ++r) {
            double sum = 0.0;
            for (std::size_t k = 0; k < 5; ++k) {
                const double v = p[r * 5 + k];
                CHECK(v > 0.0);
                CHECK(v < 1.0);
                sum += v;
            }
            CHECK(std::abs(sum - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("cross-entropy gradient at the logits is probabilities minus one-hot") {
    const Tensor logits = random_tensor({4, 3}, 5);
    Tensor target({4, 3});
    for (std::size_t r = 0; r < 4; ++r) target[r * 3 + r % 3] = 1.0;
    const Tensor g = loss_gradient(LossKind::SoftmaxCrossEntropy, logits, target);
    const Tensor p = softmax(logits);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(4.0 * g[i] - (p[i] - target[i])) < 1e-15);

    // Numerical confirmation on one logit.
    const double h = 1e-6;
    Tensor up = logits, down = logits;
    up[4] += h;
    down[4] -= h;
    const double numeric = (compute_loss(LossKind::SoftmaxCrossEntropy, up, target) -
                            compute_loss(LossKind::SoftmaxCrossEntropy, down, target)) /
                           (2.0 * h);
    CHECK(std::abs(numeric - g[4]) < 1e-8);
}

// ---------------------------------------------------------------------------
// LSTM layer

TEST_CASE("LSTM with zero parameters outputs zero") {
    LstmLayer layer(2, 3, Direction::Forward, SequenceOutput::Full);
    for (auto& c : layer.cells) {
        c.input_weights.setZero();
        c.recurrent_weights.setZero();
        c.bias.setZero();
    }
    const Tensor y = lstm_forward(layer, random_tensor({2, 5, 2}, 6));
    CHECK(y.shape() == Shape{2, 5, 3});
    for (double v : y.data()) CHECK(v == 0.0);
}

TEST_CASE("LSTM single step hand instance") {
    LstmLayer layer(1, 1, Direction::Forward, SequenceOutput::Last);
    auto& c = layer.cells[0];
    c.input_weights << 0.4, -0.3, 0.9, 1.2;  // input, forget, output, candidate
    c.recurrent_weights << 0.7, 0.1, -0.5, 0.2;
    c.bias << 0.05, 1.0, -0.1, 0.3;
    const double x = 0.6;
    const Tensor y = lstm_forward(layer, Tensor({1, 1, 1}, {x}));
    const double i = sigmoid(0.4 * x + 0.05);
    const double o = sigmoid(0.9 * x - 0.1);
    const double g = std::tanh(1.2 * x + 0.3);
    const double expect = o * std::tanh(i * g);
    CHECK(y.shape() == Shape{1, 1});
    CHECK(y[0] == doctest::Approx(expect).epsilon(1e-15));
}

TEST_CASE("LSTM two step hand instance exercises the recurrence") {
    LstmLayer layer(1, 1, Direction::Forward, SequenceOutput::Full);
    auto& c = layer.cells[0];
    c.input_weights << 0.4, -0.3, 0.9, 1.2;
    c.recurrent_weights << 0.7, 0.1, -0.5, 0.2;
    c.bias << 0.05, 1.0, -0.1, 0.3;
    const double x1 = 0.6, x2 = -1.1;
    double h = 0.0, cell = 0.0;
    std::vector<double> expect;
    for (double x : {x1, x2}) {
        const double i = sigmoid(0.4 * x + 0.7 * h + 0.05);
        const double f = sigmoid(-0.3 * x + 0.1 * h + 1.0);
        const double o = sigmoid(0.9 * x - 0.5 * h - 0.1);
        const double g = std::tanh(1.2 * x + 0.2 * h + 0.3);
        cell = f * cell + i * g;
        h = o * std::tanh(cell);
        expect.push_back(h);
    }
    const Tensor y = lstm_forward(layer, Tensor({1, 2, 1}, {x1, x2}));
    CHECK(y[0] == doctest::Approx(expect[0]).epsilon(1e-15));
    CHECK(y[1] == doctest::Approx(expect[1]).epsilon(1e-15));
}

TEST_CASE("bidirectional LSTM halves agree on constant-in-time input") {
    LstmLayer layer(2, 3, Direction::Bidirectional, SequenceOutput::Full);
    Rng rng(7, 7);
    for (auto& c : layer.cells) {
        for (auto* m : {&c.input_weights, &c.recurrent_weights})
            for (Eigen::Index k = 0; k < m->size(); ++k) m->data()[k] = rng.normal(0.0, 0.5);
        for (auto& v : c.bias) v = rng.normal(0.0, 0.5);
    }
    layer.cells[1] = layer.cells[0];
    const Tensor x({1, 4, 2}, {0.3, -0.7, 0.3, -0.7, 0.3, -0.7, 0.3, -0.7});
    const Tensor y = lstm_forward(layer, x);
    CHECK(y.shape() == Shape{1, 4, 6});
    for (std::size_t t = 0; t < 4; ++t) {
        for (std::size_t k = 0; k < 3; ++k) {
            // Forward at step t saw t+1 inputs; backward at step 3-t saw the same count.
            CHECK(y[t * 6 + k] == doctest::Approx(y[(3 - t) * 6 + 3 + k]).epsilon(1e-14));
        }
    }
}

TEST_CASE("LSTM hidden states are bounded by one") {
    Network net = make_dr(20, 2, toy_sizes());
    Rng rng(8, 7);
    initialize(net, rng);
    auto& lstm = std::get<LstmLayer>(net.layers()[0]);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Tensor h = lstm_forward(lstm, random_tensor({3, 20, 2}, seed, 10.0));
        for (double v : h.data()) CHECK(std::abs(v) <= 1.0);
    }
}

// ---------------------------------------------------------------------------
// Architectures

TEST_CASE("FNN with zero parameters outputs its final bias") {
    Network net = make_fnn(6, 1, 2, LossKind::Mse, toy_sizes());
    zero_parameters(net);
    auto& head = std::get<DenseLayer>(net.layers().back());
    head.bias << 0.75, -1.5;
    const Tensor y = net.forward(random_tensor({3, 6, 1}, 9));
    CHECK(y.shape() == Shape{3, 2});
    for (std::size_t r = 0; r < 3; ++r) {
        CHECK(y[r * 2] == 0.75);
        CHECK(y[r * 2 + 1] == -1.5);
    }
}

TEST_CASE("architecture output shapes") {
    const ArchitectureSizes s = toy_sizes();
    const Tensor x = random_tensor({2, 9, 1}, 10);
    CHECK(make_snn(9, 1, 1, LossKind::Mse, s).forward(x).shape() == Shape{2, 1});
    CHECK(make_fnn(9, 1, 1, LossKind::Mse, s).forward(x).shape() == Shape{2, 1});
    CHECK(make_dr(9, 1, s).forward(x).shape() == Shape{2, 9});
    CHECK(make_cr(9, 1, 9, s).forward(x).shape() == Shape{2, 9});
    CHECK(make_cr(9, 1, 4, s).forward(x).shape() == Shape{2, 4});
}

TEST_CASE("default architectures use the documented widths") {
    const Network snn = make_snn(10, 1, 1, LossKind::Mse);
    CHECK(std::get<LstmLayer>(snn.layers()[0]).hidden == 32);
    const Network dr = make_dr(10, 1);
    CHECK(std::get<LstmLayer>(dr.layers()[0]).directions() == 2);
    CHECK(std::get<LstmLayer>(dr.layers()[0]).hidden == 32);
    const Network cr = make_cr(10, 1, 10);
    bool has_hidden = false;
    for (const auto& layer : cr.layers()) {
        if (const auto* d = std::get_if<DenseLayer>(&layer)) {
            has_hidden = has_hidden || (d->output_size() == 64 && d->activation == Activation::Tanh);
        }
    }
    CHECK(has_hidden);
}

TEST_CASE("SNN is order sensitive while FNN with permuted weights is not") {
    const std::size_t T = 8;
    Network snn = make_snn(T, 1, 1, LossKind::Mse, toy_sizes());
    Rng rng(12, 7);
    initialize(snn, rng);
    Network fnn = make_fnn(T, 1, 1, LossKind::Mse, toy_sizes());
    initialize(fnn, rng);

    const Tensor x = random_tensor({1, T, 1}, 13);
    std::vector<std::size_t> perm = {3, 0, 7, 5, 1, 6, 2, 4};
    Tensor xp({1, T, 1});
    for (std::size_t t = 0; t < T; ++t) xp[t] = x[perm[t]];

    CHECK(std::abs(snn.forward(x)[0] - snn.forward(xp)[0]) > 1e-6);

    Network fnn_p = fnn;
    DenseLayer* first = nullptr;
    for (auto& layer : fnn_p.layers())
        if ((first = std::get_if<DenseLayer>(&layer))) break;
    REQUIRE(first != nullptr);
    const Matrix original = first->weights;
    for (std::size_t t = 0; t < T; ++t) first->weights.col(static_cast<Eigen::Index>(t)) = original.col(static_cast<Eigen::Index>(perm[t]));
    CHECK(fnn_p.forward(xp)[0] == doctest::Approx(fnn.forward(x)[0]).epsilon(1e-14));
}

// ---------------------------------------------------------------------------
// Backward pass

TEST_CASE("zero parameters and zero targets give zero gradients") {
    Network net = make_fnn(5, 1, 1, LossKind::Mse, toy_sizes());
    zero_parameters(net);
    const BackwardResult r = backward(net, random_tensor({3, 5, 1}, 14), Tensor({3, 1}));
    CHECK(r.loss == 0.0);
    for (const auto& block : r.gradients)
        for (double v : block) CHECK(v == 0.0);
}

TEST_CASE("finite-difference check on T = 7, H = 3 networks") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        for (const auto& r : gradcheck_suite(seed)) {
            CAPTURE(seed);
            CAPTURE(r.name);
            CHECK(r.parameters > 0);
            CHECK(r.parameters <= 500);
            CHECK(r.max_relative_error <= 1e-4);
        }
    }
}

TEST_CASE("workspace backward matches the allocating backward") {
    Network net = make_cr(7, 1, 7, toy_sizes());
    Rng rng(15, 7);
    initialize(net, rng);
    BackwardWorkspace ws;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const Tensor x = random_tensor({2, 7, 1}, 20 + seed);
        const Tensor y = random_tensor({2, 7}, 30 + seed);
        const BackwardResult fresh = backward(net, x, y);
        const BackwardResult& reused = backward(net, x, y, ws);
        CHECK(fresh.loss == reused.loss);
        CHECK(fresh.gradients == reused.gradients);
    }
}

TEST_CASE("non-finite loss is a numeric error") {
    Network net = make_fnn(4, 1, 1, LossKind::Mse, toy_sizes());
    Rng rng(16, 7);
    initialize(net, rng);
    Tensor y({2, 1});
    y[0] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(backward(net, random_tensor({2, 4, 1}, 17), y), NumericalError);
}

// ---------------------------------------------------------------------------
// Adam

TEST_CASE("Adam first step moves by the learning rate against the gradient sign") {
    std::vector<double> p = {1.0, -2.0, 0.5};
    std::vector<std::span<double>> params = {p};
    const Gradients g = {{0.3, -4.0, 1e-3}};
    AdamState state{{{0, 0, 0}}, {{0, 0, 0}}, 0};
    TrainingConfig config;
    config.learning_rate = 0.01;
    adam_step(params, g, state, config);
    CHECK(p[0] == doctest::Approx(0.99).epsilon(1e-6));
    CHECK(p[1] == doctest::Approx(-1.99).epsilon(1e-6));
    CHECK(p[2] == doctest::Approx(0.49).epsilon(1e-4));
}

TEST_CASE("Adam leaves parameters unchanged for a zero gradient") {
    std::vector<double> p = {1.0, -2.0};
    std::vector<std::span<double>> params = {p};
    AdamState state{{{0, 0}}, {{0, 0}}, 0};
    adam_step(params, {{0.0, 0.0}}, state, TrainingConfig{});
    CHECK(p[0] == 1.0);
    CHECK(p[1] == -2.0);
}

TEST_CASE("two Adam steps with a constant gradient") {
    std::vector<double> p = {0.0};
    std::vector<std::span<double>> params = {p};
    AdamState state{{{0}}, {{0}}, 0};
    TrainingConfig config;
    config.learning_rate = 0.1;
    const double g = 0.5;
    double m = 0.0, v = 0.0, expect = 0.0;
    for (int t = 1; t <= 2; ++t) {
        adam_step(params, {{g}}, state, config);
        m = 0.9 * m + 0.1 * g;
        v = 0.999 * v + 0.001 * g * g;
        const double m_hat = m / (1.0 - std::pow(0.9, t));
        const double v_hat = v / (1.0 - std::pow(0.999, t));
        expect -= 0.1 * m_hat / (std::sqrt(v_hat) + 1e-8);
        CHECK(p[0] == doctest::Approx(expect).epsilon(1e-14));
    }
}

// ---------------------------------------------------------------------------
// Training

namespace {

struct LinearTask {
    Tensor x;
    Tensor y;
};

LinearTask linear_task(std::size_t n) {
    SimSpec spec;
    spec.sim_case = SimCase::Linear;
    spec.q = 5;
    spec.T = 30;
    spec.n_train = n;
    spec.seed = 3;
    const SimData d = simulate(spec, SimPart::Train);
    Tensor x({n, 30, 1});
    Tensor y({n, 1});
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t t = 0; t < 30; ++t) x[i * 30 + t] = d.x().curves()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t));
        y[i] = d.scalar->response.values[static_cast<Eigen::Index>(i)];
    }
    return {x, y};
}

}  // namespace

TEST_CASE("training lowers the loss on the linear task") {
    const LinearTask task = linear_task(200);
    Network net = make_snn(30, 1, 1, LossKind::Mse);
    Rng rng(1, static_cast<std::uint64_t>(StreamRole::Init));
    initialize(net, rng);
    TrainingConfig config;
    config.epochs = 15;
    config.seed = 4;
    const TrainResult r = train(net, task.x, task.y, config);
    REQUIRE(r.epoch_loss.size() == 15);
    CHECK(r.epoch_loss.back() <= r.epoch_loss.front());
}

TEST_CASE("training is deterministic for a fixed seed") {
    const LinearTask task = linear_task(64);
    Network net = make_snn(30, 1, 1, LossKind::Mse, toy_sizes());
    Rng rng(2, 7);
    initialize(net, rng);
    TrainingConfig config;
    config.epochs = 3;
    config.seed = 5;
    const TrainResult a = train(net, task.x, task.y, config);
    const TrainResult b = train(net, task.x, task.y, config);
    CHECK(a.epoch_loss == b.epoch_loss);
    const auto pa = a.network.parameters();
    const auto pb = b.network.parameters();
    for (std::size_t k = 0; k < pa.size(); ++k)
        CHECK(std::equal(pa[k].begin(), pa[k].end(), pb[k].begin(), pb[k].end()));
}

TEST_CASE("learning rate zero leaves parameters unchanged") {
    const LinearTask task = linear_task(40);
    Network net = make_fnn(30, 1, 1, LossKind::Mse, toy_sizes());
    Rng rng(3, 7);
    initialize(net, rng);
    TrainingConfig config;
    config.learning_rate = 0.0;
    config.epochs = 2;
    const TrainResult r = train(net, task.x, task.y, config);
    const auto before = net.parameters();
    const auto after = r.network.parameters();
    for (std::size_t k = 0; k < before.size(); ++k)
        CHECK(std::equal(before[k].begin(), before[k].end(), after[k].begin(), after[k].end()));
}

TEST_CASE("input scaling uses per-step statistics") {
    const Tensor x({2, 2, 1}, {1.0, 10.0, 3.0, 30.0});
    const InputScaling s = fit_input_scaling(x);
    CHECK(s.mean == std::vector<double>{2.0, 20.0});
    CHECK(s.scale[0] > 0.0);
    CHECK(s.scale[1] == doctest::Approx(10.0 * s.scale[0]));
    const InputScaling flat = fit_input_scaling(Tensor({3, 1, 1}, {4.0, 4.0, 4.0}));
    CHECK(flat.scale[0] == 1.0);
}

TEST_CASE("training configuration validation") {
    TrainingConfig c;
    c.epochs = 0;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = TrainingConfig{};
    c.learning_rate = -1.0;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = TrainingConfig{};
    c.batch_size = 0;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
}

TEST_CASE("diverging training names the epoch") {
    const LinearTask task = linear_task(32);
    Network net = make_fnn(30, 1, 1, LossKind::Mse, toy_sizes());
    Rng rng(4, 7);
    initialize(net, rng);
    Tensor y = task.y;
    y[0] = 1e300;
    TrainingConfig config;
    config.epochs = 2;
    try {
        train(net, task.x, y, config);
        FAIL("expected divergence");
    } catch (const TrainingDivergedError& e) {
        CHECK(std::string(e.what()).find("epoch 1") != std::string::npos);
    } catch (const NumericalError&) {
        // Non-finite loss detected inside the backward pass.
    }
}

// ---------------------------------------------------------------------------
// Serialization

TEST_CASE("network save and load round-trips every parameter") {
    Network net = make_cr(7, 2, 7, toy_sizes());
    Rng rng(18, 7);
    initialize(net, rng);
    net.set_scaling(fit_input_scaling(random_tensor({5, 7, 2}, 19)));
    std::stringstream buffer;
    save_network(net, buffer);
    const Network back = load_network(buffer);
    CHECK(back.architecture() == Architecture::CR);
    CHECK(back.steps() == 7);
    CHECK(back.features() == 2);
    const auto pa = net.parameters();
    const auto pb = back.parameters();
    REQUIRE(pa.size() == pb.size());
    for (std::size_t k = 0; k < pa.size(); ++k)
        CHECK(std::equal(pa[k].begin(), pa[k].end(), pb[k].begin(), pb[k].end()));
    const Tensor x = random_tensor({2, 7, 2}, 20);
    CHECK(back.forward(x) == net.forward(x));
}

TEST_CASE("loading a malformed dump fails") {
    std::stringstream bad("funbench-network 99\n");
    CHECK_THROWS(load_network(bad));
    std::stringstream truncated("funbench-network 1\narchitecture SNN\n");
    CHECK_THROWS(load_network(truncated));
}

}  // TEST_SUITE
