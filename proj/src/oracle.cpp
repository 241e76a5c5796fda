#include "fermijump/oracle.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace fermijump {

namespace {

constexpr double kTimeClamp = 1e-15;
constexpr double kEvolveTolerance = 1e-8;

void require_rep_match(const ChannelSet& cs, const FermionRep& rep, const std::string& where) {
    if (cs.n() != rep.n) {
        throw ShapeError(where + ": channels have n=" + std::to_string(cs.n()) +
                         " but representation has n=" + std::to_string(rep.n));
    }
}

double hermiticity_residual(const Matrix& rho) {
    return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const Matrix& rho) {
    const Matrix herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(herm, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().minCoeff();
}

} // namespace

DensityState DensityState::validated(Matrix rho, double herm_tol, double trace_tol,
                                     double eig_floor) {
    require_square(rho, "DensityState");
    require_finite(rho, "DensityState");
    const double herm = hermiticity_residual(rho);
    if (herm > herm_tol) {
        throw StateValidationError("DensityState: not Hermitian (residual " +
                                   std::to_string(herm) + ")");
    }
    const double trace_err = std::abs(rho.trace() - Complex{1.0, 0.0});
    if (trace_err > trace_tol) {
        throw StateValidationError("DensityState: trace differs from 1 by " +
                                   std::to_string(trace_err));
    }
    const double min_eig = min_eigenvalue(rho);
    if (min_eig < eig_floor) {
        throw StateValidationError("DensityState: negative eigenvalue " +
                                   std::to_string(min_eig));
    }
    return DensityState(std::move(rho));
}

Vector vec(const Matrix& x) {
    return Eigen::Map<const Vector>(x.data(), x.size());
}

Matrix unvec(const Vector& v) {
    const auto dim = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
    if (dim * dim != v.size()) {
        throw ShapeError("unvec: length " + std::to_string(v.size()) + " is not a perfect square");
    }
    return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

Superoperator liouvillian(const ChannelSet& cs, const FermionRep& rep) {
    require_rep_match(cs, rep, "liouvillian");
    const Eigen::Index dim = rep.dim();
    require_within_cap(static_cast<std::size_t>(dim) * dim, static_cast<std::size_t>(dim) * dim,
                       "liouvillian");

    Matrix l = Matrix::Zero(dim * dim, dim * dim);
    for (const auto& ch : cs.channels()) {
        const Matrix& u = ch.unitary(rep);
        l += ch.rate() * (kron(u.conjugate(), u) - Matrix::Identity(dim * dim, dim * dim));
    }

    const Vector id_vec = vec(Matrix::Identity(dim, dim));
    const double trace_residual = (id_vec.adjoint() * l).cwiseAbs().maxCoeff();
    if (trace_residual > 1e-10 * std::max(1.0, cs.total_rate())) {
        throw NumericalFailure("liouvillian: trace preservation violated (residual " +
                               std::to_string(trace_residual) + ")");
    }
    return Superoperator{rep.n, std::move(l)};
}

Superoperator adjoint_liouvillian(const ChannelSet& cs, const FermionRep& rep) {
    require_rep_match(cs, rep, "adjoint_liouvillian");
    const Eigen::Index dim = rep.dim();
    Matrix l = Matrix::Zero(dim * dim, dim * dim);
    for (const auto& ch : cs.channels()) {
        const Matrix& u = ch.unitary(rep);
        l += ch.rate() *
             (kron(u.transpose(), u.adjoint()) - Matrix::Identity(dim * dim, dim * dim));
    }
    return Superoperator{rep.n, std::move(l)};
}

DensityState evolve_density(const DensityState& rho0, const ChannelSet& cs,
                            const FermionRep& rep, double t) {
    require_rep_match(cs, rep, "evolve_density");
    if (rep.n > kOracleMaxModesEvolve) {
        throw SizeLimitError("evolve_density: oracle envelope is n <= " +
                             std::to_string(kOracleMaxModesEvolve) + ", got n=" +
                             std::to_string(rep.n));
    }
    if (rho0.dim() != rep.dim()) {
        throw ShapeError("evolve_density: state dimension does not match representation");
    }
    if (!(t >= 0.0)) {
        throw OrderingError("evolve_density: time must be nonnegative, got " + std::to_string(t));
    }
    if (t < kTimeClamp) return rho0;

    const Superoperator l = liouvillian(cs, rep);
    Matrix evolved = unvec(expm(l.matrix * t) * vec(rho0.rho()));

    const double herm = hermiticity_residual(evolved);
    const double trace_err = std::abs(evolved.trace() - Complex{1.0, 0.0});
    const double min_eig = min_eigenvalue(evolved);
    if (herm > kEvolveTolerance || trace_err > kEvolveTolerance || min_eig < -kEvolveTolerance) {
        throw NumericalFailure("evolve_density: evolved state violates physicality "
                               "(hermiticity " + std::to_string(herm) + ", trace error " +
                               std::to_string(trace_err) + ", min eigenvalue " +
                               std::to_string(min_eig) + ")");
    }
    return DensityState::validated(std::move(evolved), kEvolveTolerance, kEvolveTolerance,
                                   -kEvolveTolerance);
}

Matrix adjoint_apply(const Matrix& x, const ChannelSet& cs, const FermionRep& rep) {
    require_rep_match(cs, rep, "adjoint_apply");
    if (x.rows() != rep.dim() || x.cols() != rep.dim()) {
        throw ShapeError("adjoint_apply: operand must be " + std::to_string(rep.dim()) + "x" +
                         std::to_string(rep.dim()) + ", got " + std::to_string(x.rows()) + "x" +
                         std::to_string(x.cols()));
    }
    Matrix out = Matrix::Zero(x.rows(), x.cols());
    for (const auto& ch : cs.channels()) {
        const Matrix& u = ch.unitary(rep);
        out.noalias() += ch.rate() * (u.adjoint() * x * u - x);
    }
    return out;
}

namespace {

// Depth-first insertion sweep: at recursion depth g the matrix `x` has been
// evolved through gap g, and the operator for tensor slot (M - g) is inserted
// next. Slot M sits at the least significant digit of the flat index.
void multitime_sweep(const FermionRep& rep, const std::vector<Matrix>& propagators,
                     const Matrix& x, int depth, std::size_t flat_base, Vector& out) {
    const int order = static_cast<int>(propagators.size());
    const int two_n = rep.vec_dim();
    const std::size_t weight = [&] {
        std::size_t w = 1;
        for (int i = 0; i < depth; ++i) w *= static_cast<std::size_t>(two_n);
        return w;
    }();
    for (int i = 0; i < two_n; ++i) {
        const Matrix inserted = rep.ops[i] * x;
        const std::size_t flat = flat_base + static_cast<std::size_t>(i) * weight;
        if (depth + 1 == order) {
            out[static_cast<Eigen::Index>(flat)] = inserted.trace();
        } else {
            const Matrix& p = propagators[static_cast<std::size_t>(depth + 1)];
            multitime_sweep(rep, propagators, unvec(p * vec(inserted)), depth + 1, flat, out);
        }
    }
}

} // namespace

MomentTensor oracle_multitime(const DensityState& rho0, const ChannelSet& cs,
                              const FermionRep& rep, const TimePoints& times) {
    require_rep_match(cs, rep, "oracle_multitime");
    if (rep.n > kOracleMaxModesMultitime) {
        throw SizeLimitError("oracle_multitime: oracle envelope is n <= " +
                             std::to_string(kOracleMaxModesMultitime) + ", got n=" +
                             std::to_string(rep.n));
    }
    if (rho0.dim() != rep.dim()) {
        throw ShapeError("oracle_multitime: state dimension does not match representation");
    }

    const int order = times.count();
    MomentTensor out = MomentTensor::zeros(rep.n, order);

    const Superoperator l = liouvillian(cs, rep);
    std::vector<Matrix> propagators(static_cast<std::size_t>(order));
    const Eigen::Index sdim = l.matrix.rows();
    for (int g = 0; g < order; ++g) {
        const double gap = times.values()[static_cast<std::size_t>(g)] -
                           (g > 0 ? times.values()[static_cast<std::size_t>(g - 1)] : 0.0);
        propagators[static_cast<std::size_t>(g)] =
            gap < kTimeClamp ? Matrix::Identity(sdim, sdim) : expm(l.matrix * gap);
    }

    const Matrix start = unvec(propagators[0] * vec(rho0.rho()));
    multitime_sweep(rep, propagators, start, 0, 0, out.data);
    return out;
}

} // namespace fermijump
