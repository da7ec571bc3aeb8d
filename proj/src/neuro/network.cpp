#include "funbench/neuro/network.hpp"

#include <cmath>

#include "funbench/errors.hpp"

namespace funbench::nn {

namespace {

using Eigen::Index;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::size_t block_count(const Layer& layer) {
    return std::visit(Overloaded{[](const DenseLayer&) -> std::size_t { return 2; },
                                 [](const LstmLayer& l) -> std::size_t { return 3 * l.directions(); },
                                 [](const FlattenLayer&) -> std::size_t { return 0; }},
                      layer);
}

Tensor flatten(const Tensor& x) {
    if (x.rank() < 1) throw DimensionError("flatten needs a batch axis");
    return x.reshaped({x.dim(0), x.size() / std::max<std::size_t>(x.dim(0), 1)});
}

void glorot(Matrix& w, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
    const double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    // Column-major fill order, fixed so initialization is reproducible.
    for (Index j = 0; j < w.cols(); ++j)
        for (Index i = 0; i < w.rows(); ++i) w(i, j) = (2.0 * rng.uniform() - 1.0) * a;
}

}  // namespace

std::string to_string(Architecture a) {
    switch (a) {
        case Architecture::SNN: return "SNN";
        case Architecture::FNN: return "FNN";
        case Architecture::DR: return "DR";
        case Architecture::CR: return "CR";
        case Architecture::Custom: return "custom";
    }
    return "custom";
}

Architecture architecture_from_string(const std::string& name) {
    if (name == "SNN") return Architecture::SNN;
    if (name == "FNN") return Architecture::FNN;
    if (name == "DR") return Architecture::DR;
    if (name == "CR") return Architecture::CR;
    if (name == "custom") return Architecture::Custom;
    throw ParseError("unknown architecture '" + name + "'");
}

Network::Network(std::vector<Layer> layers, LossKind loss, Architecture arch, std::size_t steps, std::size_t features)
    : layers_(std::move(layers)), loss_(loss), arch_(arch), steps_(steps), features_(features) {
    validate();
}

void Network::validate() const {
    if (layers_.empty()) throw InvalidArgument("network needs at least one layer");
    Shape shape{steps_, features_};  // per-sample shape
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        const std::string where = "layer " + std::to_string(i) + ": ";
        std::visit(Overloaded{[&](const DenseLayer& l) {
                                  if (shape.back() != l.input_size())
                                      throw DimensionError(where + "dense input " + std::to_string(l.input_size()) +
                                                           " does not match " + shape_string(shape));
                                  shape.back() = l.output_size();
                              },
                              [&](const LstmLayer& l) {
                                  if (shape.size() != 2 || shape.back() != l.input_size())
                                      throw DimensionError(where + "LSTM cannot consume " + shape_string(shape));
                                  if (l.output == SequenceOutput::Full)
                                      shape = {shape[0], l.output_size()};
                                  else
                                      shape = {l.output_size()};
                              },
                              [&](const FlattenLayer&) { shape = {shape_product(shape)}; }},
                   layers_[i]);
    }
    if (loss_ == LossKind::SoftmaxCrossEntropy && shape.size() != 1) {
        throw DimensionError("cross-entropy networks must end in a vector of logits");
    }
}

std::vector<std::span<double>> Network::parameters() {
    std::vector<std::span<double>> out;
    for (auto& layer : layers_) {
        std::visit(Overloaded{[&](DenseLayer& l) {
                                  out.emplace_back(l.weights.data(), static_cast<std::size_t>(l.weights.size()));
                                  out.emplace_back(l.bias.data(), static_cast<std::size_t>(l.bias.size()));
                              },
                              [&](LstmLayer& l) {
                                  for (auto& c : l.cells) {
                                      out.emplace_back(c.input_weights.data(),
                                                       static_cast<std::size_t>(c.input_weights.size()));
                                      out.emplace_back(c.recurrent_weights.data(),
                                                       static_cast<std::size_t>(c.recurrent_weights.size()));
                                      out.emplace_back(c.bias.data(), static_cast<std::size_t>(c.bias.size()));
                                  }
                              },
                              [](FlattenLayer&) {}},
                   layer);
    }
    return out;
}

std::vector<std::span<const double>> Network::parameters() const {
    auto mutable_views = const_cast<Network*>(this)->parameters();
    return {mutable_views.begin(), mutable_views.end()};
}

std::size_t Network::parameter_count() const {
    std::size_t n = 0;
    for (auto block : parameters()) n += block.size();
    return n;
}

Gradients Network::zero_gradients() const {
    Gradients g;
    for (auto block : parameters()) g.emplace_back(block.size(), 0.0);
    return g;
}

Tensor Network::scale_inputs(const Tensor& x) const {
    if (x.rank() != 3 || x.dim(1) != steps_ || x.dim(2) != features_) {
        throw DimensionError("network expects input [batch, " + std::to_string(steps_) + ", " +
                             std::to_string(features_) + "], got " + shape_string(x.shape()));
    }
    if (!scaling_) return x;
    Tensor out = x;
    const std::size_t per = steps_ * features_;
    auto d = out.data();
    for (std::size_t i = 0; i < d.size(); ++i) {
        const std::size_t k = i % per;
        d[i] = (d[i] - scaling_->mean[k]) / scaling_->scale[k];
    }
    return out;
}

Tensor Network::forward(const Tensor& x) const {
    Tensor h = scale_inputs(x);
    for (const auto& layer : layers_) {
        h = std::visit(Overloaded{[&](const DenseLayer& l) { return dense_forward(l, h); },
                                  [&](const LstmLayer& l) { return lstm_forward(l, h); },
                                  [&](const FlattenLayer&) { return flatten(h); }},
                       layer);
    }
    return h;
}

Tensor Network::predict(const Tensor& x) const {
    Tensor out = forward(x);
    return loss_ == LossKind::SoftmaxCrossEntropy ? softmax(out) : out;
}

// ---------------------------------------------------------------------------

Tensor softmax(const Tensor& logits) {
    Tensor p = logits;
    const std::size_t k = logits.shape().back();
    auto m = p.matrix(k);
    for (Index r = 0; r < m.rows(); ++r) {
        auto row = m.row(r).array();
        row = (row - row.maxCoeff()).exp();
        row /= row.sum();
    }
    return p;
}

double compute_loss(LossKind loss, const Tensor& output, const Tensor& target) {
    if (output.shape() != target.shape()) {
        throw DimensionError("loss: output " + shape_string(output.shape()) + " vs target " +
                             shape_string(target.shape()));
    }
    if (loss == LossKind::Mse) {
        double s = 0.0;
        for (std::size_t i = 0; i < output.size(); ++i) {
            const double r = output[i] - target[i];
            s += r * r;
        }
        return s / static_cast<double>(output.size());
    }
    const std::size_t k = output.shape().back();
    const auto z = output.matrix(k);
    const auto y = target.matrix(k);
    double s = 0.0;
    for (Index r = 0; r < z.rows(); ++r) {
        const double mx = z.row(r).maxCoeff();
        const double lse = mx + std::log((z.row(r).array() - mx).exp().sum());
        s += (y.row(r).array() * (lse - z.row(r).array())).sum();
    }
    return s / static_cast<double>(z.rows());
}

Tensor loss_gradient(LossKind loss, const Tensor& output, const Tensor& target) {
    if (output.shape() != target.shape()) throw DimensionError("loss gradient: shape mismatch");
    Tensor g(output.shape());
    if (loss == LossKind::Mse) {
        const double scale = 2.0 / static_cast<double>(output.size());
        for (std::size_t i = 0; i < output.size(); ++i) g[i] = scale * (output[i] - target[i]);
        return g;
    }
    const std::size_t k = output.shape().back();
    const Tensor p = softmax(output);
    const double rows = static_cast<double>(output.size() / k);
    for (std::size_t i = 0; i < output.size(); ++i) g[i] = (p[i] - target[i]) / rows;
    return g;
}

const BackwardResult& backward(const Network& net, const Tensor& x, const Tensor& target, BackwardWorkspace& ws) {
    const auto& layers = net.layers();
    if (ws.caches.size() != layers.size()) {
        ws.caches.clear();
        for (const auto& layer : layers) {
            std::visit(Overloaded{[&](const DenseLayer&) { ws.caches.emplace_back(DenseCache{}); },
                                  [&](const LstmLayer&) { ws.caches.emplace_back(LstmCache{}); },
                                  [&](const FlattenLayer&) { ws.caches.emplace_back(FlattenCache{}); }},
                       layer);
        }
    }
    Tensor h = x;
    for (std::size_t i = 0; i < layers.size(); ++i) {
        h = std::visit(Overloaded{[&](const DenseLayer& l) { return dense_forward(l, h, std::get<DenseCache>(ws.caches[i])); },
                                  [&](const LstmLayer& l) { return lstm_forward(l, h, std::get<LstmCache>(ws.caches[i])); },
                                  [&](const FlattenLayer&) {
                                      std::get<FlattenCache>(ws.caches[i]).input_shape = h.shape();
                                      return flatten(h);
                                  }},
                       layers[i]);
    }

    BackwardResult& result = ws.result;
    result.loss = compute_loss(net.loss(), h, target);
    if (!std::isfinite(result.loss)) throw NumericalError("non-finite loss in backward pass");
    if (result.gradients.empty()) {
        result.gradients = net.zero_gradients();
    } else {
        for (auto& g : result.gradients) std::fill(g.begin(), g.end(), 0.0);
    }

    // Offsets of each layer's first gradient block.
    std::vector<std::size_t> offsets(layers.size());
    std::size_t offset = 0;
    for (std::size_t i = 0; i < layers.size(); ++i) {
        offsets[i] = offset;
        offset += block_count(layers[i]);
    }

    Tensor grad = loss_gradient(net.loss(), h, target);
    for (std::size_t i = layers.size(); i-- > 0;) {
        const std::span<GradBlock> blocks(result.gradients.data() + offsets[i], block_count(layers[i]));
        grad = std::visit(
            Overloaded{[&](const DenseLayer& l) { return dense_backward(l, std::get<DenseCache>(ws.caches[i]), grad, blocks); },
                       [&](const LstmLayer& l) { return lstm_backward(l, std::get<LstmCache>(ws.caches[i]), grad, blocks); },
                       [&](const FlattenLayer&) { return grad.reshaped(std::get<FlattenCache>(ws.caches[i]).input_shape); }},
            layers[i]);
    }
    return result;
}

BackwardResult backward(const Network& net, const Tensor& x, const Tensor& target) {
    BackwardWorkspace ws;
    return backward(net, x, target, ws);
}

// ---------------------------------------------------------------------------

Network make_snn(std::size_t steps, std::size_t features, std::size_t outputs, LossKind loss,
                 const ArchitectureSizes& sizes) {
    std::vector<Layer> layers;
    if (sizes.snn_readout == SnnReadout::LastStep) {
        layers.emplace_back(LstmLayer(features, sizes.recurrent_units, Direction::Forward, SequenceOutput::Last));
        layers.emplace_back(DenseLayer(sizes.recurrent_units, outputs, Activation::Identity));
    } else {
        layers.emplace_back(LstmLayer(features, sizes.recurrent_units, Direction::Forward, SequenceOutput::Full));
        layers.emplace_back(FlattenLayer{});
        layers.emplace_back(DenseLayer(steps * sizes.recurrent_units, outputs, Activation::Identity));
    }
    return Network(std::move(layers), loss, Architecture::SNN, steps, features);
}

Network make_fnn(std::size_t steps, std::size_t features, std::size_t outputs, LossKind loss,
                 const ArchitectureSizes& sizes) {
    std::vector<Layer> layers;
    layers.emplace_back(FlattenLayer{});
    layers.emplace_back(DenseLayer(steps * features, sizes.dense_units, Activation::Tanh));
    layers.emplace_back(DenseLayer(sizes.dense_units, sizes.dense_units, Activation::Tanh));
    layers.emplace_back(DenseLayer(sizes.dense_units, outputs, Activation::Identity));
    return Network(std::move(layers), loss, Architecture::FNN, steps, features);
}

Network make_dr(std::size_t steps, std::size_t features, const ArchitectureSizes& sizes) {
    std::vector<Layer> layers;
    layers.emplace_back(LstmLayer(features, sizes.recurrent_units, Direction::Bidirectional, SequenceOutput::Full));
    layers.emplace_back(DenseLayer(2 * sizes.recurrent_units, 1, Activation::Identity));
    layers.emplace_back(FlattenLayer{});
    return Network(std::move(layers), LossKind::Mse, Architecture::DR, steps, features);
}

Network make_cr(std::size_t steps, std::size_t features, std::size_t outputs, const ArchitectureSizes& sizes) {
    std::vector<Layer> layers;
    layers.emplace_back(LstmLayer(features, sizes.recurrent_units, Direction::Bidirectional, SequenceOutput::Full));
    layers.emplace_back(FlattenLayer{});
    layers.emplace_back(DenseLayer(steps * 2 * sizes.recurrent_units, sizes.cr_hidden_units, Activation::Tanh));
    layers.emplace_back(DenseLayer(sizes.cr_hidden_units, outputs, Activation::Identity));
    return Network(std::move(layers), LossKind::Mse, Architecture::CR, steps, features);
}

void initialize(Network& net, Rng& rng) {
    for (auto& layer : net.layers()) {
        std::visit(Overloaded{[&](DenseLayer& l) {
                                  glorot(l.weights, l.input_size(), l.output_size(), rng);
                                  l.bias.setZero();
                              },
                              [&](LstmLayer& l) {
                                  const auto H = static_cast<Index>(l.hidden);
                                  for (auto& c : l.cells) {
                                      glorot(c.input_weights, l.input_size(), 4 * l.hidden, rng);
                                      glorot(c.recurrent_weights, l.hidden, 4 * l.hidden, rng);
                                      c.bias.setZero();
                                      c.bias.segment(H, H).setOnes();
                                  }
                              },
                              [](FlattenLayer&) {}},
                   layer);
    }
}

}  // namespace funbench::nn
