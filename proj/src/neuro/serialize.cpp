#include "funbench/neuro/serialize.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "funbench/errors.hpp"

namespace funbench::nn {

namespace {

constexpr int kFormatVersion = 1;

void write_values(std::ostream& out, const std::vector<double>& v) {
    for (double x : v) out << ' ' << x;
}

template <typename T>
T read(std::istream& in, const char* what) {
    T value;
    if (!(in >> value)) throw ParseError(std::string("network dump: expected ") + what);
    return value;
}

void expect(std::istream& in, const std::string& keyword) {
    const auto word = read<std::string>(in, keyword.c_str());
    if (word != keyword) throw ParseError("network dump: expected '" + keyword + "', found '" + word + "'");
}

// Weight blocks are column-major in memory; the dump is row-major.
void write_block(std::ostream& out, std::span<const double> data, Eigen::Index rows, Eigen::Index cols) {
    out << "block " << rows << ' ' << cols;
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) out << ' ' << data[static_cast<std::size_t>(j * rows + i)];
    out << '\n';
}

void read_block(std::istream& in, std::span<double> data, Eigen::Index rows, Eigen::Index cols) {
    expect(in, "block");
    const auto r = read<Eigen::Index>(in, "block rows");
    const auto c = read<Eigen::Index>(in, "block cols");
    if (r != rows || c != cols) {
        throw SchemaError("network dump: block is " + std::to_string(r) + "x" + std::to_string(c) + ", expected " +
                          std::to_string(rows) + "x" + std::to_string(cols));
    }
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) data[static_cast<std::size_t>(j * rows + i)] = read<double>(in, "value");
}

template <typename Fn>
void for_each_block(Network& net, Fn&& fn) {
    for (auto& layer : net.layers()) {
        if (auto* d = std::get_if<DenseLayer>(&layer)) {
            fn(std::span<double>(d->weights.data(), static_cast<std::size_t>(d->weights.size())), d->weights.rows(),
               d->weights.cols());
            fn(std::span<double>(d->bias.data(), static_cast<std::size_t>(d->bias.size())), d->bias.rows(),
               Eigen::Index{1});
        } else if (auto* l = std::get_if<LstmLayer>(&layer)) {
            for (auto& c : l->cells) {
                fn(std::span<double>(c.input_weights.data(), static_cast<std::size_t>(c.input_weights.size())),
                   c.input_weights.rows(), c.input_weights.cols());
                fn(std::span<double>(c.recurrent_weights.data(), static_cast<std::size_t>(c.recurrent_weights.size())),
                   c.recurrent_weights.rows(), c.recurrent_weights.cols());
                fn(std::span<double>(c.bias.data(), static_cast<std::size_t>(c.bias.size())), c.bias.rows(),
                   Eigen::Index{1});
            }
        }
    }
}

}  // namespace

void save_network(const Network& net, std::ostream& out) {
    const auto old_precision = out.precision(17);
    out << "funbench-network " << kFormatVersion << '\n';
    out << "architecture " << to_string(net.architecture()) << '\n';
    out << "loss " << (net.loss() == LossKind::Mse ? "mse" : "softmax_ce") << '\n';
    out << "input " << net.steps() << ' ' << net.features() << '\n';
    if (net.scaling()) {
        out << "scaling 1";
        write_values(out, net.scaling()->mean);
        write_values(out, net.scaling()->scale);
        out << '\n';
    } else {
        out << "scaling 0\n";
    }
    out << "layers " << net.layers().size() << '\n';
    for (const auto& layer : net.layers()) {
        if (const auto* d = std::get_if<DenseLayer>(&layer)) {
            out << "dense " << d->input_size() << ' ' << d->output_size() << ' ' << to_string(d->activation) << '\n';
        } else if (const auto* l = std::get_if<LstmLayer>(&layer)) {
            out << "lstm " << l->input_size() << ' ' << l->hidden << ' ' << l->directions() << ' '
                << (l->output == SequenceOutput::Full ? "full" : "last") << '\n';
        } else {
            out << "flatten\n";
        }
    }
    for_each_block(const_cast<Network&>(net), [&](std::span<double> data, Eigen::Index rows, Eigen::Index cols) {
        write_block(out, data, rows, cols);
    });
    out.precision(old_precision);
}

Network load_network(std::istream& in) {
    expect(in, "funbench-network");
    const int version = read<int>(in, "format version");
    if (version != kFormatVersion) throw SchemaError("unsupported network dump version " + std::to_string(version));
    expect(in, "architecture");
    const Architecture arch = architecture_from_string(read<std::string>(in, "architecture"));
    expect(in, "loss");
    const auto loss_name = read<std::string>(in, "loss");
    LossKind loss;
    if (loss_name == "mse")
        loss = LossKind::Mse;
    else if (loss_name == "softmax_ce")
        loss = LossKind::SoftmaxCrossEntropy;
    else
        throw ParseError("unknown loss '" + loss_name + "'");
    expect(in, "input");
    const auto steps = read<std::size_t>(in, "steps");
    const auto features = read<std::size_t>(in, "features");

    expect(in, "scaling");
    std::optional<InputScaling> scaling;
    if (read<int>(in, "scaling flag") == 1) {
        const std::size_t per = steps * features;
        InputScaling s{std::vector<double>(per), std::vector<double>(per)};
        for (auto& v : s.mean) v = read<double>(in, "scaling mean");
        for (auto& v : s.scale) v = read<double>(in, "scaling scale");
        scaling = std::move(s);
    }

    expect(in, "layers");
    const auto count = read<std::size_t>(in, "layer count");
    std::vector<Layer> layers;
    for (std::size_t i = 0; i < count; ++i) {
        const auto kind = read<std::string>(in, "layer kind");
        if (kind == "dense") {
            const auto d_in = read<std::size_t>(in, "dense input");
            const auto d_out = read<std::size_t>(in, "dense output");
            layers.emplace_back(DenseLayer(d_in, d_out, activation_from_string(read<std::string>(in, "activation"))));
        } else if (kind == "lstm") {
            const auto d_in = read<std::size_t>(in, "lstm input");
            const auto hidden = read<std::size_t>(in, "lstm hidden");
            const auto dirs = read<std::size_t>(in, "lstm directions");
            const auto mode = read<std::string>(in, "lstm output mode");
            if (dirs != 1 && dirs != 2) throw SchemaError("LSTM must have 1 or 2 directions");
            if (mode != "full" && mode != "last") throw ParseError("unknown LSTM output mode '" + mode + "'");
            layers.emplace_back(LstmLayer(d_in, hidden, dirs == 2 ? Direction::Bidirectional : Direction::Forward,
                                          mode == "full" ? SequenceOutput::Full : SequenceOutput::Last));
        } else if (kind == "flatten") {
            layers.emplace_back(FlattenLayer{});
        } else {
            throw ParseError("unknown layer kind '" + kind + "'");
        }
    }
    Network net(std::move(layers), loss, arch, steps, features);
    net.set_scaling(std::move(scaling));
    for_each_block(net, [&](std::span<double> data, Eigen::Index rows, Eigen::Index cols) {
        read_block(in, data, rows, cols);
    });
    return net;
}

}  // namespace funbench::nn
