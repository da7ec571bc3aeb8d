#include "funbench/neuro/train.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "funbench/errors.hpp"

namespace funbench::nn {

void TrainingConfig::validate() const {
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
        throw InvalidArgument("learning rate must be finite and nonnegative");
    }
    if (epochs < 1) throw InvalidArgument("epochs must be at least 1");
    if (batch_size < 1) throw InvalidArgument("batch size must be at least 1");
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
        throw InvalidArgument("Adam betas must lie in [0, 1)");
    }
    if (!(epsilon > 0.0)) throw InvalidArgument("Adam epsilon must be positive");
    if (!(clip_norm >= 0.0)) throw InvalidArgument("clip norm must be nonnegative");
}

AdamState AdamState::zeros_like(const Network& net) {
    return {net.zero_gradients(), net.zero_gradients(), 0};
}

void adam_step(std::span<std::span<double>> params, const Gradients& grads, AdamState& state,
               const TrainingConfig& config) {
    if (params.size() != grads.size() || state.first_moment.size() != grads.size()) {
        throw DimensionError("Adam: parameter, gradient and state block counts differ");
    }
    ++state.step;
    const double t = static_cast<double>(state.step);
    const double correction1 = 1.0 - std::pow(config.beta1, t);
    const double correction2 = 1.0 - std::pow(config.beta2, t);

    double scale = 1.0;
    if (config.clip_norm > 0.0) {
        double sq = 0.0;
        for (const auto& g : grads)
            for (double v : g) sq += v * v;
        const double norm = std::sqrt(sq);
        if (norm > config.clip_norm) scale = config.clip_norm / norm;
    }

    for (std::size_t b = 0; b < params.size(); ++b) {
        auto p = params[b];
        const auto& g = grads[b];
        auto& m = state.first_moment[b];
        auto& v = state.second_moment[b];
        if (p.size() != g.size() || m.size() != g.size()) throw DimensionError("Adam: block size mismatch");
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double gi = scale * g[i];
            m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * gi;
            v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * gi * gi;
            const double m_hat = m[i] / correction1;
            const double v_hat = v[i] / correction2;
            p[i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
        }
    }
}

InputScaling fit_input_scaling(const Tensor& x) {
    if (x.rank() != 3 || x.dim(0) < 1) throw DimensionError("input scaling expects a nonempty [n, T, d] tensor");
    const std::size_t n = x.dim(0);
    const std::size_t per = x.dim(1) * x.dim(2);
    InputScaling s{std::vector<double>(per, 0.0), std::vector<double>(per, 0.0)};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < per; ++k) s.mean[k] += x[i * per + k];
    for (auto& m : s.mean) m /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < per; ++k) {
            const double r = x[i * per + k] - s.mean[k];
            s.scale[k] += r * r;
        }
    for (auto& v : s.scale) {
        v = std::sqrt(v / static_cast<double>(n));
        if (!(v > 1e-12)) v = 1.0;
    }
    return s;
}

Tensor gather_rows(const Tensor& t, std::span<const std::size_t> rows) {
    if (t.rank() < 1) throw DimensionError("gather needs a leading axis");
    const std::size_t per = t.dim(0) == 0 ? 0 : t.size() / t.dim(0);
    Shape shape = t.shape();
    shape[0] = rows.size();
    Tensor out(shape);
    auto dst = out.data();
    const auto src = t.data();
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r] >= t.dim(0)) throw DimensionError("gather row out of range");
        std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(rows[r] * per), per,
                    dst.begin() + static_cast<std::ptrdiff_t>(r * per));
    }
    return out;
}

TrainResult train(Network net, const Tensor& x, const Tensor& y, const TrainingConfig& config) {
    config.validate();
    if (x.rank() != 3 || x.dim(0) < 1) throw EmptyInputError("training inputs must be a nonempty [n, T, d] tensor");
    if (y.rank() < 2 || y.dim(0) != x.dim(0)) throw DimensionError("training targets must have one row per input");

    if (config.standardize_inputs) {
        net.set_scaling(fit_input_scaling(x));
    } else {
        net.set_scaling(std::nullopt);
    }
    const Tensor xs = net.scale_inputs(x);

    const std::size_t n = x.dim(0);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng shuffle_rng(config.seed, static_cast<std::uint64_t>(StreamRole::Shuffle));
    AdamState state = AdamState::zeros_like(net);
    BackwardWorkspace workspace;

    TrainResult result;
    result.epoch_loss.reserve(config.epochs);
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        shuffle_rng.shuffle(std::span<std::size_t>(order));
        double total = 0.0;
        for (std::size_t start = 0; start < n; start += config.batch_size) {
            const std::size_t count = std::min(config.batch_size, n - start);
            const std::span<const std::size_t> idx(order.data() + start, count);
            const Tensor xb = gather_rows(xs, idx);
            const Tensor yb = gather_rows(y, idx);
            try {
                backward(net, xb, yb, workspace);
            } catch (const NumericalError&) {
                throw TrainingDivergedError("non-finite loss in epoch " + std::to_string(epoch + 1));
            }
            total += workspace.result.loss * static_cast<double>(count);
            auto params = net.parameters();
            adam_step(params, workspace.result.gradients, state, config);
        }
        const double mean_loss = total / static_cast<double>(n);
        if (!std::isfinite(mean_loss)) {
            throw TrainingDivergedError("non-finite loss in epoch " + std::to_string(epoch + 1));
        }
        result.epoch_loss.push_back(mean_loss);
    }
    for (auto block : net.parameters())
        for (double v : block)
            if (!std::isfinite(v)) throw TrainingDivergedError("non-finite parameters after training");
    result.network = std::move(net);
    return result;
}

}  // namespace funbench::nn
