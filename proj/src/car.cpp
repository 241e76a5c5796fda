#include "fermijump/car.hpp"

#include <cmath>
#include <random>

namespace fermijump {

FermionRep build_rep(int n) {
    if (n < 1 || n > kMaxModes) {
        throw SizeLimitError("build_rep: n must be in 1.." + std::to_string(kMaxModes) +
                             ", got " + std::to_string(n));
    }
    Matrix a(2, 2), z(2, 2);
    a << 0, 1, 0, 0;
    z << 1, 0, 0, -1;
    const Matrix eye2 = Matrix::Identity(2, 2);

    FermionRep rep;
    rep.n = n;
    rep.ops.resize(2 * n);
    for (int j = 0; j < n; ++j) {
        Matrix op = Matrix::Identity(1, 1);
        for (int s = 0; s < n; ++s) {
            op = kron(op, s < j ? z : (s == j ? a : eye2));
        }
        rep.ops[j] = op;
        rep.ops[n + j] = op.adjoint();
    }
    return rep;
}

Matrix exchange_matrix(int n) {
    if (n < 1) {
        throw ConstraintError("exchange_matrix: n must be positive, got " + std::to_string(n));
    }
    Matrix e = Matrix::Zero(2 * n, 2 * n);
    e.block(0, n, n, n) = Matrix::Identity(n, n);
    e.block(n, 0, n, n) = Matrix::Identity(n, n);
    return e;
}

Matrix tilde(const Matrix& k) {
    require_square(k, "tilde");
    if (k.rows() % 2 != 0) {
        throw ShapeError("tilde: dimension must be even, got " + std::to_string(k.rows()));
    }
    const Matrix e = exchange_matrix(static_cast<int>(k.rows()) / 2);
    return e * k.conjugate() * e;
}

Matrix quadratic_form(const Matrix& k, const FermionRep& rep) {
    if (k.rows() != rep.vec_dim() || k.cols() != rep.vec_dim()) {
        throw ShapeError("quadratic_form: expected " + std::to_string(rep.vec_dim()) + "x" +
                         std::to_string(rep.vec_dim()) + " coefficient matrix, got " +
                         std::to_string(k.rows()) + "x" + std::to_string(k.cols()));
    }
    Matrix acc = Matrix::Zero(rep.dim(), rep.dim());
    for (int i = 0; i < k.rows(); ++i) {
        for (int j = 0; j < k.cols(); ++j) {
            if (k(i, j) != 0.0) {
                acc.noalias() += k(i, j) * rep.ops[i] * rep.ops[j];
            }
        }
    }
    return acc;
}

GeneratorReport validate_generator(const Matrix& h) {
    require_square(h, "validate_generator");
    if (h.rows() % 2 != 0) {
        throw ShapeError("validate_generator: dimension must be even, got " +
                         std::to_string(h.rows()));
    }
    GeneratorReport report;
    report.antisymmetry_residual = (h + h.transpose()).cwiseAbs().maxCoeff();
    report.tilde_residual = (tilde(h) + h).cwiseAbs().maxCoeff();
    report.valid = report.antisymmetry_residual <= kGeneratorTolerance &&
                   report.tilde_residual <= kGeneratorTolerance;
    return report;
}

QuadraticGenerator QuadraticGenerator::validated(Matrix h) {
    require_finite(h, "QuadraticGenerator");
    const GeneratorReport report = validate_generator(h);
    if (!report.valid) {
        throw ConstraintError("QuadraticGenerator: constraints h = -h^T and tilde(h) = -h "
                              "violated (antisymmetry residual " +
                              std::to_string(report.antisymmetry_residual) +
                              ", tilde residual " + std::to_string(report.tilde_residual) + ")");
    }
    QuadraticGenerator gen;
    gen.n = static_cast<int>(h.rows()) / 2;
    gen.h = std::move(h);
    return gen;
}

QuadraticGenerator random_generator(int n, std::uint64_t seed, double scale) {
    if (n < 1) {
        throw ConstraintError("random_generator: n must be positive, got " + std::to_string(n));
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double w = scale * M_SQRT1_2;

    Matrix a = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const Complex v{w * gauss(rng), w * gauss(rng)};
            a(i, j) = v;
            a(j, i) = -v;
        }
    }
    Matrix b = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        b(i, i) = scale * gauss(rng);
        for (int j = i + 1; j < n; ++j) {
            const Complex v{w * gauss(rng), w * gauss(rng)};
            b(i, j) = v;
            b(j, i) = std::conj(v);
        }
    }

    Matrix h(2 * n, 2 * n);
    h.block(0, 0, n, n) = a;
    h.block(0, n, n, n) = b;
    h.block(n, 0, n, n) = -b.transpose();
    h.block(n, n, n, n) = -a.conjugate();
    return QuadraticGenerator::validated(std::move(h));
}

} // namespace fermijump
