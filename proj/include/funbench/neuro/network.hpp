#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "funbench/neuro/layers.hpp"
#include "funbench/rng.hpp"

namespace funbench::nn {

using Layer = std::variant<DenseLayer, LstmLayer, FlattenLayer>;

enum class LossKind { Mse, SoftmaxCrossEntropy };
enum class Architecture { SNN, FNN, DR, CR, Custom };

std::string to_string(Architecture a);
Architecture architecture_from_string(const std::string& name);

/// Per-(time, feature) affine input normalization estimated on training data.
struct InputScaling {
    std::vector<double> mean;
    std::vector<double> scale;  // divide by this; 1 where the training sd is 0
};

/// Parameters of every layer, in layer order. For each dense layer the
/// blocks are (weights, bias); for each LSTM direction (input weights,
/// recurrent weights, bias). Weight blocks are column-major.
using Gradients = std::vector<GradBlock>;

class Network {
public:
    Network() = default;
    Network(std::vector<Layer> layers, LossKind loss, Architecture arch, std::size_t steps, std::size_t features);

    const std::vector<Layer>& layers() const noexcept { return layers_; }
    std::vector<Layer>& layers() noexcept { return layers_; }
    LossKind loss() const noexcept { return loss_; }
    Architecture architecture() const noexcept { return arch_; }
    std::size_t steps() const noexcept { return steps_; }
    std::size_t features() const noexcept { return features_; }

    const std::optional<InputScaling>& scaling() const noexcept { return scaling_; }
    void set_scaling(std::optional<InputScaling> s) { scaling_ = std::move(s); }

    /// Views over every parameter block in canonical order.
    std::vector<std::span<double>> parameters();
    std::vector<std::span<const double>> parameters() const;
    std::size_t parameter_count() const;
    Gradients zero_gradients() const;

    /// Applies input scaling (when set) and every layer. For the softmax
    /// loss the result is logits; use predict() for probabilities.
    Tensor forward(const Tensor& x) const;
    /// forward() followed by a softmax over the last axis for classifiers.
    Tensor predict(const Tensor& x) const;

    /// Input tensor after scaling; identity when no scaling is set.
    Tensor scale_inputs(const Tensor& x) const;

private:
    void validate() const;

    std::vector<Layer> layers_;
    LossKind loss_ = LossKind::Mse;
    Architecture arch_ = Architecture::Custom;
    std::size_t steps_ = 0;
    std::size_t features_ = 0;
    std::optional<InputScaling> scaling_;
};

/// Mean loss over the batch. MSE averages over every output element;
/// cross-entropy takes one-hot targets and averages over rows.
double compute_loss(LossKind loss, const Tensor& output, const Tensor& target);
/// d loss / d output.
Tensor loss_gradient(LossKind loss, const Tensor& output, const Tensor& target);

Tensor softmax(const Tensor& logits);

struct BackwardResult {
    double loss = 0.0;
    Gradients gradients;
};

using LayerCache = std::variant<DenseCache, LstmCache, FlattenCache>;

/// Buffers reused across backward passes of one network, so a training
/// loop does not reallocate per-step caches for every batch.
struct BackwardWorkspace {
    std::vector<LayerCache> caches;
    BackwardResult result;
};

/// Forward pass with caching followed by reverse-mode accumulation through
/// every layer (backpropagation through time for LSTM layers). Inputs are
/// taken as already scaled; scaling is not part of the differentiated graph.
BackwardResult backward(const Network& net, const Tensor& x, const Tensor& target);
/// Same as above; the result lives in workspace.result.
const BackwardResult& backward(const Network& net, const Tensor& x, const Tensor& target, BackwardWorkspace& workspace);

// ---------------------------------------------------------------------------
// Architectures. `steps` is the input sequence length, `features` the
// per-step input width.

/// What the SNN dense head reads: the hidden state of every step
/// (flattened) or only the final step's.
enum class SnnReadout { FullSequence, LastStep };

struct ArchitectureSizes {
    std::size_t recurrent_units = 32;
    SnnReadout snn_readout = SnnReadout::FullSequence;
    std::size_t dense_units = 32;       // FNN hidden width
    std::size_t cr_hidden_units = 64;   // CR decoder width
};

/// LSTM -> dense head with `outputs` units. With the full-sequence readout
/// the head sees the flattened [steps, units] hidden sequence.
Network make_snn(std::size_t steps, std::size_t features, std::size_t outputs, LossKind loss,
                 const ArchitectureSizes& sizes = {});
/// Flatten -> dense(tanh) -> dense(tanh) -> dense head.
Network make_fnn(std::size_t steps, std::size_t features, std::size_t outputs, LossKind loss,
                 const ArchitectureSizes& sizes = {});
/// Bidirectional LSTM (full sequence) -> time-distributed dense(1), output [batch, steps].
Network make_dr(std::size_t steps, std::size_t features, const ArchitectureSizes& sizes = {});
/// Bidirectional LSTM (full sequence) -> flatten -> dense(tanh) -> dense(`outputs`).
Network make_cr(std::size_t steps, std::size_t features, std::size_t outputs, const ArchitectureSizes& sizes = {});

/// Glorot-uniform weights (input-to-hidden and recurrent alike), zero biases,
/// forget-gate bias 1.
void initialize(Network& net, Rng& rng);

}  // namespace funbench::nn
