// linalg.hpp — dense complex matrix kernel: Kronecker products, the matrix
// exponential, Frobenius distances, and the shape/size guards every other
// module routes through.

#pragma once

#include <complex>
#include <cstddef>
#include <string>

#include <Eigen/Dense>

#include "fermijump/errors.hpp"

namespace fermijump {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr Complex kImag{0.0, 1.0};

// Entry cap shared by every matrix-producing operation, to fail fast instead
// of exhausting memory. Default 2^26 entries per matrix; the CLI layer may
// change it per scenario.
std::size_t matrix_entry_cap();
void set_matrix_entry_cap(std::size_t cap);

void require_square(const Matrix& a, const std::string& where);
void require_same_shape(const Matrix& a, const Matrix& b, const std::string& where);
void require_finite(const Matrix& a, const std::string& where);
void require_within_cap(std::size_t rows, std::size_t cols, const std::string& where);

// Entry ((i*b.rows+p),(j*b.cols+q)) of the result is a(i,j)*b(p,q).
Matrix kron(const Matrix& a, const Matrix& b);

// Matrix exponential by scaling-and-squaring with high-order Pade
// approximants. Accuracy is a fixed contract (no tolerance knob): near
// machine precision for well-conditioned inputs.
Matrix expm(const Matrix& a);

// Frobenius norm of (a - b).
double frob_dist(const Matrix& a, const Matrix& b);

} // namespace fermijump
