#pragma once

#include <iosfwd>

#include "funbench/neuro/network.hpp"

namespace funbench::nn {

/// Versioned plain-text parameter dump.
///
///     funbench-network 1
///     architecture <SNN|FNN|DR|CR|custom>
///     loss <mse|softmax_ce>
///     input <steps> <features>
///     scaling <0|1> [mean values...] [scale values...]
///     layers <count>
///     dense <d_in> <d_out> <activation> | lstm <d_in> <hidden> <directions> <full|last> | flatten
///     ...
///     block <rows> <cols> <row-major values...>     (one line per parameter block)
///
/// Values are written with 17 significant digits, so a save/load cycle
/// reproduces every parameter bit for bit.
void save_network(const Network& net, std::ostream& out);
Network load_network(std::istream& in);

}  // namespace funbench::nn
