#pragma once

#include "funbench/fcurve.hpp"

namespace funbench {

/// Prepends a column of ones.
Matrix with_intercept(const Matrix& design);

/// Solves min ||Z theta - Y||^2 + ridge ||P theta||^2 column-by-column, where
/// P is the identity with the first diagonal entry zeroed when
/// `free_first` is set (an unpenalized intercept). Uses Householder QR on
/// the augmented system so that ridge = 0 is ordinary least squares.
/// Throws SingularDesignError when the design is rank deficient and ridge = 0.
Matrix ridge_least_squares(const Matrix& design, const Matrix& targets, double ridge, bool free_first);

}  // namespace funbench
