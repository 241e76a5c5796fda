#include "fermijump/linalg.hpp"

#include <atomic>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace fermijump {

namespace {
std::atomic<std::size_t> g_entry_cap{std::size_t{1} << 26};
}

std::size_t matrix_entry_cap() { return g_entry_cap.load(); }

void set_matrix_entry_cap(std::size_t cap) { g_entry_cap.store(cap); }

void require_square(const Matrix& a, const std::string& where) {
    if (a.rows() != a.cols()) {
        throw ShapeError(where + ": matrix must be square, got " + std::to_string(a.rows()) +
                         "x" + std::to_string(a.cols()));
    }
}

void require_same_shape(const Matrix& a, const Matrix& b, const std::string& where) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ShapeError(where + ": shape mismatch, " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
    }
}

void require_finite(const Matrix& a, const std::string& where) {
    if (!a.allFinite()) {
        throw NumericalFailure(where + ": matrix contains NaN or Inf entries");
    }
}

void require_within_cap(std::size_t rows, std::size_t cols, const std::string& where) {
    const std::size_t cap = matrix_entry_cap();
    if (rows != 0 && cols > cap / rows) {
        throw SizeLimitError(where + ": " + std::to_string(rows) + "x" + std::to_string(cols) +
                             " exceeds the entry cap of " + std::to_string(cap));
    }
}

Matrix kron(const Matrix& a, const Matrix& b) {
    require_within_cap(static_cast<std::size_t>(a.rows()) * static_cast<std::size_t>(b.rows()),
                       static_cast<std::size_t>(a.cols()) * static_cast<std::size_t>(b.cols()),
                       "kron");
    return Eigen::kroneckerProduct(a, b);
}

Matrix expm(const Matrix& a) {
    require_square(a, "expm");
    Matrix e = a.exp();
    require_finite(e, "expm");
    return e;
}

double frob_dist(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "frob_dist");
    return (a - b).norm();
}

} // namespace fermijump
