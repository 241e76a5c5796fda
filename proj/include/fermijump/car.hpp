// car.hpp — fermionic mode operators, the exchange matrix, tilde conjugation,
// quadratic forms and admissible quadratic generators.
//
// The 2n mode operators are kept as the ordered vector
// (c_1, ..., c_n, c_1^dag, ..., c_n^dag) acting on the 2^n-dimensional Fock
// space, realized by the Jordan-Wigner convention
//   c_j = Z^{(j-1)} (x) A (x) I^{(n-j)},  A = [[0,1],[0,0]],  Z = diag(1,-1),
// with Z-strings on the left. Every exported result depends only on the
// anticommutation relations {c_i, c_j^dag} = delta_ij, {c_i, c_j} = 0, not on
// this particular realization.

#pragma once

#include <cstdint>
#include <vector>

#include "fermijump/linalg.hpp"

namespace fermijump {

inline constexpr int kMaxModes = 6;

// Hilbert-space realization of the 2n mode operators, n <= kMaxModes.
// ops[i] for i < n are annihilators, ops[n+i] = ops[i]^dag the creators.
struct FermionRep {
    int n = 0;
    std::vector<Matrix> ops;

    int dim() const { return 1 << n; }      // 2^n
    int vec_dim() const { return 2 * n; }   // length of the operator vector
};

FermionRep build_rep(int n);

// The 2n x 2n block matrix [[0, I_n],[I_n, 0]]. Encodes the anticommutation
// relations as {f^T c, c^T g} = f^T E g.
Matrix exchange_matrix(int n);

// E conj(K) E for square K of even dimension.
Matrix tilde(const Matrix& k);

// sum_{ij} k(i,j) ops[i] ops[j] as a 2^n x 2^n matrix.
Matrix quadratic_form(const Matrix& k, const FermionRep& rep);

// Max-abs residuals of the two admissibility constraints h = -h^T and
// tilde(h) = -h. Construction noise sits at <= 1e-13; the validity threshold
// of 1e-12 separates it from genuinely inadmissible inputs.
struct GeneratorReport {
    double antisymmetry_residual = 0.0;
    double tilde_residual = 0.0;
    bool valid = false;
};

inline constexpr double kGeneratorTolerance = 1e-12;

GeneratorReport validate_generator(const Matrix& h);

// Admissible jump generator: a 2n x 2n matrix with h = -h^T and
// E conj(h) E = -h. Guarantees 1/2 c^T h c is self-adjoint, so the jump
// exp(-(i/2) c^T h c) is unitary.
struct QuadraticGenerator {
    int n = 0;
    Matrix h;

    // Validates both constraints; throws ConstraintError with the residuals
    // otherwise.
    static QuadraticGenerator validated(Matrix h);
};

// Random admissible generator, deterministic in seed, entries of magnitude
// O(scale). Solving h = -h^T together with E conj(h) E = -h blockwise forces
//   h = [[A, B], [-B^T, -conj(A)]]  with  A = -A^T  and  B = B^dag,
// so the sampler draws A (complex antisymmetric) and B (Hermitian) directly
// and always passes validate_generator.
QuadraticGenerator random_generator(int n, std::uint64_t seed, double scale);

} // namespace fermijump
