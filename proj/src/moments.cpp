#include "fermijump/moments.hpp"

#include <Eigen/Eigenvalues>

namespace fermijump {

namespace {

// Gaps below this are treated as zero to skip spurious exponentials.
constexpr double kTimeClamp = 1e-15;

std::size_t checked_moment_size(int n, int order, const std::string& where) {
    if (n < 1) throw ConstraintError(where + ": n must be positive");
    if (order < 1) throw ConstraintError(where + ": order must be >= 1");
    const std::size_t cap = moment_row_cap();
    std::size_t size = 1;
    for (int m = 0; m < order; ++m) {
        size *= static_cast<std::size_t>(2 * n);
        if (size > cap) {
            throw SizeLimitError(where + ": (2n)^M exceeds the row cap of " +
                                 std::to_string(cap));
        }
    }
    return size;
}

void require_physical(const Matrix& rho, const std::string& where) {
    require_square(rho, where);
    require_finite(rho, where);
    const double tol = 1e-10;
    const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (herm > tol) {
        throw StateValidationError(where + ": state is not Hermitian (residual " +
                                   std::to_string(herm) + ")");
    }
    const double trace_err = std::abs(rho.trace() - Complex{1.0, 0.0});
    if (trace_err > tol) {
        throw StateValidationError(where + ": state trace differs from 1 by " +
                                   std::to_string(trace_err));
    }
    const Matrix herm_part = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(herm_part, Eigen::EigenvaluesOnly);
    const double min_eig = eig.eigenvalues().minCoeff();
    if (min_eig < -tol) {
        throw StateValidationError(where + ": state has negative eigenvalue " +
                                   std::to_string(min_eig));
    }
}

// Depth-first sweep over index tuples reusing operator-product prefixes.
void fill_moments(const Matrix& rho, const FermionRep& rep, int order, int depth,
                  const Matrix& prefix, std::size_t flat_base, Vector& out) {
    const int two_n = rep.vec_dim();
    for (int i = 0; i < two_n; ++i) {
        const Matrix product = depth == 0 ? rep.ops[i] : Matrix(prefix * rep.ops[i]);
        const std::size_t flat = flat_base * two_n + i;
        if (depth + 1 == order) {
            // tr(rho P) without forming the product matrix.
            out[static_cast<Eigen::Index>(flat)] =
                (rho.transpose().cwiseProduct(product)).sum();
        } else {
            fill_moments(rho, rep, order, depth + 1, product, flat, out);
        }
    }
}

} // namespace

MomentTensor MomentTensor::zeros(int n, int order) {
    const std::size_t size = checked_moment_size(n, order, "MomentTensor");
    MomentTensor t;
    t.n = n;
    t.order = order;
    t.data = Vector::Zero(static_cast<Eigen::Index>(size));
    return t;
}

Complex MomentTensor::at(const std::vector<int>& idx) const {
    return data[static_cast<Eigen::Index>(moment_flat_index(n, order, idx))];
}

std::size_t moment_flat_index(int n, int order, const std::vector<int>& idx) {
    if (static_cast<int>(idx.size()) != order) {
        throw ShapeError("moment_flat_index: expected " + std::to_string(order) +
                         " indices, got " + std::to_string(idx.size()));
    }
    std::size_t flat = 0;
    for (int m = 0; m < order; ++m) {
        if (idx[m] < 0 || idx[m] >= 2 * n) {
            throw ShapeError("moment_flat_index: index " + std::to_string(idx[m]) +
                             " out of range 0.." + std::to_string(2 * n - 1));
        }
        flat = flat * static_cast<std::size_t>(2 * n) + static_cast<std::size_t>(idx[m]);
    }
    return flat;
}

std::vector<int> moment_multi_index(int n, int order, std::size_t flat) {
    std::vector<int> idx(static_cast<std::size_t>(order));
    for (int m = order - 1; m >= 0; --m) {
        idx[static_cast<std::size_t>(m)] = static_cast<int>(flat % static_cast<std::size_t>(2 * n));
        flat /= static_cast<std::size_t>(2 * n);
    }
    return idx;
}

TimePoints::TimePoints(std::vector<double> times) : times_(std::move(times)) {
    if (times_.empty()) {
        throw OrderingError("TimePoints: at least one time is required");
    }
    double prev = 0.0;
    for (std::size_t m = 0; m < times_.size(); ++m) {
        if (!(times_[m] >= prev)) {
            throw OrderingError("TimePoints: times must be nonnegative and nondecreasing, got t_" +
                                std::to_string(m + 1) + " = " + std::to_string(times_[m]) +
                                " after " + std::to_string(prev));
        }
        prev = times_[m];
    }
}

MomentTensor initial_moments(const Matrix& rho, const FermionRep& rep, int order) {
    if (rho.rows() != rep.dim()) {
        throw ShapeError("initial_moments: state dimension " + std::to_string(rho.rows()) +
                         " does not match 2^n = " + std::to_string(rep.dim()));
    }
    require_physical(rho, "initial_moments");
    MomentTensor t = MomentTensor::zeros(rep.n, order);
    fill_moments(rho, rep, order, 0, Matrix(), 0, t.data);
    return t;
}

MomentTensor propagate_moments(const MomentTensor& m0, const ChannelSet& cs, double t) {
    if (m0.n != cs.n()) {
        throw ShapeError("propagate_moments: tensor has n=" + std::to_string(m0.n) +
                         " but channels have n=" + std::to_string(cs.n()));
    }
    if (!(t >= 0.0)) {
        throw OrderingError("propagate_moments: time must be nonnegative, got " +
                            std::to_string(t));
    }
    if (t < kTimeClamp) return m0;

    MomentTensor out = m0;
    out.data = expm(moment_generator(cs, m0.order) * t) * m0.data;
    return out;
}

MomentTensor multitime_correlations(const MomentTensor& m0, const ChannelSet& cs,
                                    const TimePoints& times) {
    if (m0.n != cs.n()) {
        throw ShapeError("multitime_correlations: tensor has n=" + std::to_string(m0.n) +
                         " but channels have n=" + std::to_string(cs.n()));
    }
    const int order = m0.order;
    if (times.count() != order) {
        throw ShapeError("multitime_correlations: expected " + std::to_string(order) +
                         " times for an order-" + std::to_string(order) + " tensor, got " +
                         std::to_string(times.count()));
    }

    MomentTensor out = m0;
    // Gap g covers (t_g, t_{g+1}) with t_0 = 0 and is generated by L_{M, M-g}.
    for (int g = 0; g < order; ++g) {
        const double gap = times.values()[static_cast<std::size_t>(g)] -
                           (g > 0 ? times.values()[static_cast<std::size_t>(g - 1)] : 0.0);
        if (gap < kTimeClamp) continue;
        out.data = expm(partial_generator(cs, order, order - g) * gap) * out.data;
    }
    return out;
}

} // namespace fermijump
