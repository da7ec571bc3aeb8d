#include "funbench/neuro/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace funbench::nn {

double relative_error(double analytic, double numeric, double floor) {
    const double denom = std::max({std::abs(analytic), std::abs(numeric), floor});
    return std::abs(analytic - numeric) / denom;
}

GradcheckResult check_gradients(const Network& net, const Tensor& x, const Tensor& target, double step) {
    const BackwardResult analytic = backward(net, x, target);
    Network probe = net;
    auto params = probe.parameters();

    GradcheckResult result;
    for (std::size_t b = 0; b < params.size(); ++b) {
        for (std::size_t i = 0; i < params[b].size(); ++i) {
            const double saved = params[b][i];
            params[b][i] = saved + step;
            const double up = compute_loss(probe.loss(), probe.forward(x), target);
            params[b][i] = saved - step;
            const double down = compute_loss(probe.loss(), probe.forward(x), target);
            params[b][i] = saved;
            const double numeric = (up - down) / (2.0 * step);
            const double err = relative_error(analytic.gradients[b][i], numeric);
            ++result.parameters;
            if (err > result.max_relative_error) {
                result.max_relative_error = err;
                result.worst_block = b;
                result.worst_index = i;
            }
        }
    }
    return result;
}

namespace {

Tensor random_tensor(Shape shape, Rng& rng, double sd = 1.0) {
    Tensor t(std::move(shape));
    for (auto& v : t.data()) v = rng.normal(0.0, sd);
    return t;
}

Tensor random_one_hot(std::size_t rows, std::size_t classes, Rng& rng) {
    Tensor t({rows, classes});
    for (std::size_t r = 0; r < rows; ++r) t[r * classes + rng.below(classes)] = 1.0;
    return t;
}

// Glorot init plus random biases so no parameter sits at a special value.
void randomize(Network& net, Rng& rng) {
    initialize(net, rng);
    for (auto& layer : net.layers()) {
        if (auto* d = std::get_if<DenseLayer>(&layer)) {
            for (auto& v : d->bias) v = rng.normal(0.0, 0.5);
        } else if (auto* l = std::get_if<LstmLayer>(&layer)) {
            for (auto& c : l->cells)
                for (auto& v : c.bias) v += rng.normal(0.0, 0.5);
        }
    }
}

}  // namespace

std::vector<GradcheckResult> gradcheck_suite(std::uint64_t seed, double step) {
    constexpr std::size_t kSteps = 7;
    constexpr std::size_t kBatch = 3;
    ArchitectureSizes toy;
    toy.recurrent_units = 3;
    toy.dense_units = 4;
    toy.cr_hidden_units = 4;
    ArchitectureSizes toy_last = toy;
    toy_last.snn_readout = SnnReadout::LastStep;
    Rng rng(seed, 0);

    struct Case {
        std::string name;
        Network net;
        bool classifier;
    };
    std::vector<Case> cases;
    cases.push_back({"SNN", make_snn(kSteps, 1, 1, LossKind::Mse, toy), false});
    cases.push_back({"SNN-softmax", make_snn(kSteps, 1, 2, LossKind::SoftmaxCrossEntropy, toy), true});
    cases.push_back({"SNN-last", make_snn(kSteps, 1, 1, LossKind::Mse, toy_last), false});
    cases.push_back({"FNN", make_fnn(kSteps, 1, 1, LossKind::Mse, toy), false});
    cases.push_back({"FNN-softmax", make_fnn(kSteps, 1, 2, LossKind::SoftmaxCrossEntropy, toy), true});
    cases.push_back({"DR", make_dr(kSteps, 1, toy), false});
    cases.push_back({"CR", make_cr(kSteps, 1, kSteps, toy), false});
    {
        std::vector<Layer> layers;
        layers.emplace_back(LstmLayer(2, 2, Direction::Bidirectional, SequenceOutput::Last));
        layers.emplace_back(DenseLayer(4, 4, Activation::Sigmoid));
        layers.emplace_back(DenseLayer(4, 3, Activation::Softmax));
        cases.push_back({"activations", Network(std::move(layers), LossKind::Mse, Architecture::Custom, kSteps, 2), false});
    }

    std::vector<GradcheckResult> results;
    for (auto& c : cases) {
        randomize(c.net, rng);
        const Tensor x = random_tensor({kBatch, kSteps, c.net.features()}, rng);
        const Tensor probe = c.net.forward(x);
        const Tensor target = c.classifier ? random_one_hot(kBatch, probe.shape().back(), rng)
                                           : random_tensor(probe.shape(), rng, 0.5);
        GradcheckResult r = check_gradients(c.net, x, target, step);
        r.name = c.name;
        results.push_back(r);
    }
    return results;
}

}  // namespace funbench::nn
