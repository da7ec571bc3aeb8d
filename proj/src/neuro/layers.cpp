#include "funbench/neuro/layers.hpp"

#include "funbench/errors.hpp"

namespace funbench::nn {

namespace {

using Eigen::Index;

// exp-based forms vectorize in Eigen; std::tanh on doubles does not.
template <typename Derived>
void sigmoid_inplace(Eigen::ArrayBase<Derived>&& a) {
    a = 1.0 / (1.0 + (-a).exp());
}

template <typename Derived>
void tanh_inplace(Eigen::ArrayBase<Derived>&& a) {
    a = 2.0 / (1.0 + (-2.0 * a).exp()) - 1.0;
}

void apply_activation(Eigen::Map<RowMatrix>& z, Activation act) {
    switch (act) {
        case Activation::Identity:
            break;
        case Activation::Tanh:
            tanh_inplace(z.array());
            break;
        case Activation::Sigmoid:
            sigmoid_inplace(z.array());
            break;
        case Activation::Softmax:
            for (Index r = 0; r < z.rows(); ++r) {
                auto row = z.row(r).array();
                row = (row - row.maxCoeff()).exp();
                row /= row.sum();
            }
            break;
    }
}

Shape with_last(Shape shape, std::size_t last) {
    shape.back() = last;
    return shape;
}

void require_last_dim(const Tensor& x, std::size_t expected, const char* layer) {
    if (x.rank() < 2 || x.shape().back() != expected) {
        throw DimensionError(std::string(layer) + " expects last dimension " + std::to_string(expected) + ", got " +
                             shape_string(x.shape()));
    }
}

void require_blocks(std::span<GradBlock> grads, std::size_t count, const char* layer) {
    if (grads.size() != count) throw DimensionError(std::string(layer) + " received the wrong number of gradient blocks");
}

}  // namespace

std::string to_string(Activation a) {
    switch (a) {
        case Activation::Identity: return "identity";
        case Activation::Tanh: return "tanh";
        case Activation::Sigmoid: return "sigmoid";
        case Activation::Softmax: return "softmax";
    }
    return "identity";
}

Activation activation_from_string(const std::string& name) {
    if (name == "identity") return Activation::Identity;
    if (name == "tanh") return Activation::Tanh;
    if (name == "sigmoid") return Activation::Sigmoid;
    if (name == "softmax") return Activation::Softmax;
    throw ParseError("unknown activation '" + name + "'");
}

// ---------------------------------------------------------------------------
// Dense

DenseLayer::DenseLayer(std::size_t d_in, std::size_t d_out, Activation act)
    : weights(Matrix::Zero(static_cast<Index>(d_out), static_cast<Index>(d_in))),
      bias(Vector::Zero(static_cast<Index>(d_out))),
      activation(act) {}

Tensor dense_forward(const DenseLayer& layer, const Tensor& x) {
    require_last_dim(x, layer.input_size(), "dense layer");
    Tensor y(with_last(x.shape(), layer.output_size()));
    auto out = y.matrix(layer.output_size());
    out.noalias() = x.matrix(layer.input_size()) * layer.weights.transpose();
    out.rowwise() += layer.bias.transpose();
    apply_activation(out, layer.activation);
    return y;
}

Tensor dense_forward(const DenseLayer& layer, const Tensor& x, DenseCache& cache) {
    cache.input = x;
    cache.output = dense_forward(layer, x);
    return cache.output;
}

Tensor dense_backward(const DenseLayer& layer, const DenseCache& cache, const Tensor& dy, std::span<GradBlock> grads) {
    require_blocks(grads, 2, "dense layer");
    const std::size_t d_in = layer.input_size();
    const std::size_t d_out = layer.output_size();
    if (dy.shape() != cache.output.shape()) throw DimensionError("dense backward: gradient shape mismatch");

    const auto y = cache.output.matrix(d_out);
    const auto g = dy.matrix(d_out);
    RowMatrix dz;
    switch (layer.activation) {
        case Activation::Identity:
            dz = g;
            break;
        case Activation::Tanh:
            dz = g.array() * (1.0 - y.array().square());
            break;
        case Activation::Sigmoid:
            dz = g.array() * y.array() * (1.0 - y.array());
            break;
        case Activation::Softmax: {
            // Row-wise Jacobian-vector product: y * (g - <g, y>).
            dz.resize(g.rows(), g.cols());
            for (Index r = 0; r < g.rows(); ++r) {
                const double dot = g.row(r).dot(y.row(r));
                dz.row(r) = y.row(r).array() * (g.row(r).array() - dot);
            }
            break;
        }
    }

    Eigen::Map<Matrix> dw(grads[0].data(), static_cast<Index>(d_out), static_cast<Index>(d_in));
    Eigen::Map<Vector> db(grads[1].data(), static_cast<Index>(d_out));
    const auto x = cache.input.matrix(d_in);
    dw.noalias() += dz.transpose() * x;
    db += dz.colwise().sum().transpose();

    Tensor dx(cache.input.shape());
    dx.matrix(d_in).noalias() = dz * layer.weights;
    return dx;
}

// ---------------------------------------------------------------------------
// LSTM

LstmLayer::LstmLayer(std::size_t d_in, std::size_t h, Direction direction, SequenceOutput out)
    : hidden(h), output(out) {
    if (h == 0 || d_in == 0) throw InvalidArgument("LSTM sizes must be positive");
    const auto H = static_cast<Index>(h);
    const std::size_t count = direction == Direction::Bidirectional ? 2 : 1;
    for (std::size_t k = 0; k < count; ++k) {
        cells.push_back(
            {Matrix::Zero(4 * H, static_cast<Index>(d_in)), Matrix::Zero(4 * H, H), Vector::Zero(4 * H)});
    }
}

namespace {

void require_sequence(const LstmLayer& layer, const Tensor& x) {
    if (x.rank() != 3 || x.dim(2) != layer.input_size() || x.dim(1) < 1 || x.dim(0) < 1) {
        throw DimensionError("LSTM expects [batch, time>=1, " + std::to_string(layer.input_size()) + "], got " +
                             shape_string(x.shape()));
    }
}

// Sequence position s of direction `dir` reads time step time_of(s).
inline Index time_of(std::size_t dir, Index s, Index steps) {
    return dir == 0 ? s : steps - 1 - s;
}

}  // namespace

Tensor lstm_forward(const LstmLayer& layer, const Tensor& x, LstmCache& cache) {
    require_sequence(layer, x);
    const auto B = static_cast<Index>(x.dim(0));
    const auto T = static_cast<Index>(x.dim(1));
    const auto D = static_cast<Index>(x.dim(2));
    const auto H = static_cast<Index>(layer.hidden);

    cache.batch = static_cast<std::size_t>(B);
    cache.steps = static_cast<std::size_t>(T);
    cache.inputs.resize(T * B, D);
    const auto xin = x.data();
    for (Index b = 0; b < B; ++b)
        for (Index t = 0; t < T; ++t)
            for (Index k = 0; k < D; ++k) cache.inputs(t * B + b, k) = xin[static_cast<std::size_t>((b * T + t) * D + k)];

    cache.directions.resize(layer.directions());
    for (std::size_t dir = 0; dir < layer.directions(); ++dir) {
        const LstmCell& cell = layer.cells[dir];
        LstmDirectionCache& dc = cache.directions[dir];
        dc.gates.noalias() = cache.inputs * cell.input_weights.transpose();
        dc.gates.rowwise() += cell.bias.transpose();
        dc.cell.resize(T * B, H);
        dc.tanh_cell.resize(T * B, H);
        dc.hidden.resize(T * B, H);

        Index prev = -1;
        for (Index s = 0; s < T; ++s) {
            const Index t = time_of(dir, s, T);
            auto z = dc.gates.middleRows(t * B, B);
            if (prev >= 0) z.noalias() += dc.hidden.middleRows(prev * B, B) * cell.recurrent_weights.transpose();
            sigmoid_inplace(z.leftCols(3 * H).array());
            tanh_inplace(z.rightCols(H).array());

            auto c = dc.cell.middleRows(t * B, B);
            c = z.leftCols(H).cwiseProduct(z.rightCols(H));
            if (prev >= 0) c += z.middleCols(H, H).cwiseProduct(dc.cell.middleRows(prev * B, B));
            auto tc = dc.tanh_cell.middleRows(t * B, B);
            tc = c;
            tanh_inplace(tc.array());
            dc.hidden.middleRows(t * B, B) = z.middleCols(2 * H, H).cwiseProduct(tc);
            prev = t;
        }
    }

    const auto dirs = static_cast<Index>(layer.directions());
    if (layer.output == SequenceOutput::Full) {
        Tensor y({static_cast<std::size_t>(B), static_cast<std::size_t>(T), static_cast<std::size_t>(dirs * H)});
        auto out = y.data();
        for (Index dir = 0; dir < dirs; ++dir) {
            const RowMatrix& h = cache.directions[static_cast<std::size_t>(dir)].hidden;
            for (Index b = 0; b < B; ++b)
                for (Index t = 0; t < T; ++t)
                    for (Index k = 0; k < H; ++k)
                        out[static_cast<std::size_t>((b * T + t) * dirs * H + dir * H + k)] = h(t * B + b, k);
        }
        return y;
    }
    Tensor y({static_cast<std::size_t>(B), static_cast<std::size_t>(dirs * H)});
    auto out = y.matrix(static_cast<std::size_t>(dirs * H));
    for (Index dir = 0; dir < dirs; ++dir) {
        const Index t_last = time_of(static_cast<std::size_t>(dir), T - 1, T);
        out.middleCols(dir * H, H) = cache.directions[static_cast<std::size_t>(dir)].hidden.middleRows(t_last * B, B);
    }
    return y;
}

Tensor lstm_forward(const LstmLayer& layer, const Tensor& x) {
    LstmCache cache;
    return lstm_forward(layer, x, cache);
}

Tensor lstm_backward(const LstmLayer& layer, LstmCache& cache, const Tensor& dy, std::span<GradBlock> grads) {
    require_blocks(grads, 3 * layer.directions(), "LSTM layer");
    const auto B = static_cast<Index>(cache.batch);
    const auto T = static_cast<Index>(cache.steps);
    const auto D = static_cast<Index>(layer.input_size());
    const auto H = static_cast<Index>(layer.hidden);
    const auto dirs = static_cast<Index>(layer.directions());

    const Shape expected = layer.output == SequenceOutput::Full
                               ? Shape{cache.batch, cache.steps, static_cast<std::size_t>(dirs * H)}
                               : Shape{cache.batch, static_cast<std::size_t>(dirs * H)};
    if (dy.shape() != expected) throw DimensionError("LSTM backward: gradient shape mismatch");

    RowMatrix& dinputs = cache.d_inputs;
    RowMatrix& dh_out = cache.d_hidden;
    RowMatrix& dgates = cache.d_gates;
    RowMatrix& h_prev = cache.prev_hidden;
    dinputs.setZero(T * B, D);
    dh_out.resize(T * B, H);
    dgates.resize(T * B, 4 * H);
    h_prev.resize(T * B, H);
    RowMatrix dh(B, H), dh_next(B, H), dc_next(B, H), dc(B, H);

    for (Index dir = 0; dir < dirs; ++dir) {
        const auto udir = static_cast<std::size_t>(dir);
        const LstmCell& cell = layer.cells[udir];
        const LstmDirectionCache& fc = cache.directions[udir];

        dh_out.setZero();
        const auto g = dy.data();
        if (layer.output == SequenceOutput::Full) {
            for (Index b = 0; b < B; ++b)
                for (Index t = 0; t < T; ++t)
                    for (Index k = 0; k < H; ++k)
                        dh_out(t * B + b, k) = g[static_cast<std::size_t>((b * T + t) * dirs * H + dir * H + k)];
        } else {
            const Index t_last = time_of(udir, T - 1, T);
            dh_out.middleRows(t_last * B, B) = dy.matrix(static_cast<std::size_t>(dirs * H)).middleCols(dir * H, H);
        }

        dh_next.setZero();
        dc_next.setZero();
        for (Index s = T - 1; s >= 0; --s) {
            const Index t = time_of(udir, s, T);
            const Index tp = s > 0 ? time_of(udir, s - 1, T) : -1;
            const auto z = fc.gates.middleRows(t * B, B).array();
            const auto ig = z.leftCols(H);
            const auto fg = z.middleCols(H, H);
            const auto og = z.middleCols(2 * H, H);
            const auto cg = z.rightCols(H);
            const auto tc = fc.tanh_cell.middleRows(t * B, B).array();

            dh = dh_out.middleRows(t * B, B) + dh_next;
            dc = dc_next.array() + dh.array() * og * (1.0 - tc.square());

            auto dz = dgates.middleRows(t * B, B).array();
            dz.leftCols(H) = dc.array() * cg * ig * (1.0 - ig);
            if (tp >= 0) {
                dz.middleCols(H, H) = dc.array() * fc.cell.middleRows(tp * B, B).array() * fg * (1.0 - fg);
                h_prev.middleRows(t * B, B) = fc.hidden.middleRows(tp * B, B);
            } else {
                dz.middleCols(H, H).setZero();
                h_prev.middleRows(t * B, B).setZero();
            }
            dz.middleCols(2 * H, H) = dh.array() * tc * og * (1.0 - og);
            dz.rightCols(H) = dc.array() * ig * (1.0 - cg.square());

            dc_next = dc.array() * fg;
            dh_next.noalias() = dgates.middleRows(t * B, B) * cell.recurrent_weights;
        }

        Eigen::Map<Matrix> dwx(grads[3 * udir].data(), 4 * H, D);
        Eigen::Map<Matrix> dwh(grads[3 * udir + 1].data(), 4 * H, H);
        Eigen::Map<Vector> db(grads[3 * udir + 2].data(), 4 * H);
        dwx.noalias() += dgates.transpose() * cache.inputs;
        dwh.noalias() += dgates.transpose() * h_prev;
        db.noalias() += dgates.transpose() * Vector::Ones(T * B);
        dinputs.noalias() += dgates * cell.input_weights;
    }

    Tensor dx({cache.batch, cache.steps, static_cast<std::size_t>(D)});
    auto out = dx.data();
    for (Index b = 0; b < B; ++b)
        for (Index t = 0; t < T; ++t)
            for (Index k = 0; k < D; ++k) out[static_cast<std::size_t>((b * T + t) * D + k)] = dinputs(t * B + b, k);
    return dx;
}

}  // namespace funbench::nn
