// oracle.hpp — brute-force reference engine: the full Liouvillian
// superoperator, exact density-matrix evolution, the adjoint (Heisenberg)
// generator, and multi-time correlation tensors evaluated directly from their
// nested trace definition.
//
// Vectorization is column-stacking throughout: vec(A X B) = (B^T (x) A) vec(X).

#pragma once

#include "fermijump/moments.hpp"

namespace fermijump {

// Envelopes beyond which the oracle refuses rather than degrades.
inline constexpr int kOracleMaxModesEvolve = 5;
inline constexpr int kOracleMaxModesMultitime = 3;

// 4^n x 4^n matrix acting on column-stacked 2^n x 2^n matrices.
struct Superoperator {
    int n = 0;
    Matrix matrix;
};

class DensityState {
  public:
    // Validates Hermiticity, unit trace, and positivity of the spectrum.
    static DensityState validated(Matrix rho, double herm_tol = 1e-12,
                                  double trace_tol = 1e-12, double eig_floor = -1e-10);

    const Matrix& rho() const { return rho_; }
    int dim() const { return static_cast<int>(rho_.rows()); }

  private:
    explicit DensityState(Matrix rho) : rho_(std::move(rho)) {}
    Matrix rho_;
};

Vector vec(const Matrix& x);
Matrix unvec(const Vector& v);

// sum_k lambda_k (conj(U_k) (x) U_k - I): the generator of rho-evolution.
// Trace preservation (vec(I)^dag is a left null vector) is checked at build
// time.
Superoperator liouvillian(const ChannelSet& cs, const FermionRep& rep);

// sum_k lambda_k (U_k^T (x) U_k^dag - I): the Heisenberg-picture generator,
// dual to the Liouvillian under tr(X^dag L(rho)).
Superoperator adjoint_liouvillian(const ChannelSet& cs, const FermionRep& rep);

// vec(rho_t) = exp(L t) vec(rho_0). Fails if the evolved state violates
// physicality beyond 1e-8.
DensityState evolve_density(const DensityState& rho0, const ChannelSet& cs,
                            const FermionRep& rep, double t);

// sum_k lambda_k (U_k^dag x U_k - x), the adjoint generator applied to an
// arbitrary (not necessarily Hermitian) matrix.
Matrix adjoint_apply(const Matrix& x, const ChannelSet& cs, const FermionRep& rep);

// Order-M tensor with element (i_1..i_M) =
//   tr(ops[i_1] Phi_{t_M - t_{M-1}}( ... ops[i_{M-1}] Phi_{t_2 - t_1}(
//       ops[i_M] Phi_{t_1}(rho_0)) ... ))
// where Phi_s = exp(L s) and operators are inserted by left multiplication.
// Slot 1 carries the latest time, matching multitime_correlations. The
// intermediate matrices are generally non-Hermitian, so no physicality checks
// apply mid-chain.
MomentTensor oracle_multitime(const DensityState& rho0, const ChannelSet& cs,
                              const FermionRep& rep, const TimePoints& times);

} // namespace fermijump
