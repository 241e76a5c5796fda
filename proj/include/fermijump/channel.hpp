// channel.hpp — Poisson jump channels: rates, one-particle matrices
// O = exp(-i E H), Hilbert-space jump unitaries U = exp(-(i/2) c^T H c), and
// the moment-space generators sum_k lambda_k (O_k^(x)m - I) together with
// their embeddings into a larger tensor order.

#pragma once

#include <memory>
#include <mutex>
#include <vector>

#include "fermijump/car.hpp"

namespace fermijump {

// Row cap for moment-space matrices of dimension (2n)^m. Default 2^20 rows;
// the practical envelope is m <= 3 for n <= 4 and m <= 4 for n <= 2.
std::size_t moment_row_cap();
void set_moment_row_cap(std::size_t cap);

// exp(-i E h): the linear map with U^dag c U = O c. Preserves the
// anticommutation form (O E O^T = E) and the adjoint pairing (tilde(O) = O).
Matrix one_particle_matrix(const QuadraticGenerator& gen);

// exp(-(i/2) c^T h c) on the 2^n-dimensional Fock space; unitary because the
// quadratic form is self-adjoint for admissible h.
Matrix jump_unitary(const QuadraticGenerator& gen, const FermionRep& rep);

// One jump channel: rate lambda > 0 plus its generator. The one-particle
// matrix is computed eagerly; the Fock-space unitary costs a 2^n x 2^n
// exponential and is built lazily on first use (thread-safe, observationally
// identical to eager construction).
class JumpChannel {
  public:
    JumpChannel(double rate, QuadraticGenerator gen);

    double rate() const { return rate_; }
    const QuadraticGenerator& generator() const { return gen_; }
    const Matrix& one_particle() const { return one_particle_; }
    const Matrix& unitary(const FermionRep& rep) const;

  private:
    struct UnitaryCache {
        std::once_flag once;
        Matrix u;
    };

    double rate_ = 0.0;
    QuadraticGenerator gen_;
    Matrix one_particle_;
    std::shared_ptr<UnitaryCache> cache_;
};

// Nonempty list of channels over a common number of modes.
class ChannelSet {
  public:
    explicit ChannelSet(std::vector<JumpChannel> channels);

    int n() const { return n_; }
    const std::vector<JumpChannel>& channels() const { return channels_; }
    std::size_t size() const { return channels_.size(); }
    double total_rate() const;

  private:
    int n_ = 0;
    std::vector<JumpChannel> channels_;
};

// max_j || U^dag ops[j] U - sum_l O(j,l) ops[l] ||_F over the 2n operators.
double conjugation_check(const JumpChannel& ch, const FermionRep& rep);

// sum_k lambda_k (O_k^(x)m - I) acting on the (2n)^m-dimensional moment space.
Matrix moment_generator(const ChannelSet& cs, int m);

// moment_generator(cs, m) (x) I_{(2n)^(big_m - m)}: the order-m generator
// embedded to act on the first m of big_m tensor slots.
Matrix partial_generator(const ChannelSet& cs, int big_m, int m);

} // namespace fermijump
