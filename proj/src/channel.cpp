#include "fermijump/channel.hpp"

#include <atomic>

namespace fermijump {

namespace {

std::atomic<std::size_t> g_moment_row_cap{std::size_t{1} << 20};

constexpr double kChannelInvariantTolerance = 1e-10;

// (2n)^m with the row cap enforced at every step.
std::size_t moment_dim(int two_n, int m, const std::string& where) {
    const std::size_t cap = moment_row_cap();
    std::size_t dim = 1;
    for (int i = 0; i < m; ++i) {
        dim *= static_cast<std::size_t>(two_n);
        if (dim > cap) {
            throw SizeLimitError(where + ": (2n)^m with 2n=" + std::to_string(two_n) +
                                 ", m=" + std::to_string(m) + " exceeds the row cap of " +
                                 std::to_string(cap));
        }
    }
    return dim;
}

} // namespace

std::size_t moment_row_cap() { return g_moment_row_cap.load(); }

void set_moment_row_cap(std::size_t cap) { g_moment_row_cap.store(cap); }

Matrix one_particle_matrix(const QuadraticGenerator& gen) {
    const Matrix e = exchange_matrix(gen.n);
    return expm(-kImag * e * gen.h);
}

Matrix jump_unitary(const QuadraticGenerator& gen, const FermionRep& rep) {
    if (gen.n != rep.n) {
        throw ShapeError("jump_unitary: generator has n=" + std::to_string(gen.n) +
                         " but representation has n=" + std::to_string(rep.n));
    }
    return expm(-0.5 * kImag * quadratic_form(gen.h, rep));
}

JumpChannel::JumpChannel(double rate, QuadraticGenerator gen)
    : rate_(rate), gen_(std::move(gen)), cache_(std::make_shared<UnitaryCache>()) {
    if (!(rate_ > 0.0)) {
        throw ConstraintError("JumpChannel: rate must be positive, got " + std::to_string(rate_));
    }
    one_particle_ = one_particle_matrix(gen_);

    const Matrix e = exchange_matrix(gen_.n);
    const double car_residual = frob_dist(one_particle_ * e * one_particle_.transpose(), e);
    const double tilde_residual = frob_dist(tilde(one_particle_), one_particle_);
    if (car_residual > kChannelInvariantTolerance || tilde_residual > kChannelInvariantTolerance) {
        throw NumericalFailure("JumpChannel: one-particle matrix violates O E O^T = E or "
                               "tilde(O) = O (residuals " + std::to_string(car_residual) + ", " +
                               std::to_string(tilde_residual) + ")");
    }
}

const Matrix& JumpChannel::unitary(const FermionRep& rep) const {
    std::call_once(cache_->once, [&] {
        Matrix u = jump_unitary(gen_, rep);
        const double residual =
            frob_dist(u.adjoint() * u, Matrix::Identity(u.rows(), u.cols()));
        if (residual > kChannelInvariantTolerance) {
            throw NumericalFailure("JumpChannel: jump unitary fails U^dag U = I (residual " +
                                   std::to_string(residual) + ")");
        }
        cache_->u = std::move(u);
    });
    if (cache_->u.rows() != rep.dim()) {
        throw ShapeError("JumpChannel::unitary: representation dimension changed between calls");
    }
    return cache_->u;
}

ChannelSet::ChannelSet(std::vector<JumpChannel> channels) : channels_(std::move(channels)) {
    if (channels_.empty()) {
        throw ConstraintError("ChannelSet: at least one channel is required");
    }
    n_ = channels_.front().generator().n;
    for (std::size_t k = 0; k < channels_.size(); ++k) {
        if (channels_[k].generator().n != n_) {
            throw ConstraintError("ChannelSet: channel " + std::to_string(k + 1) + " has n=" +
                                  std::to_string(channels_[k].generator().n) +
                                  ", expected n=" + std::to_string(n_));
        }
    }
}

double ChannelSet::total_rate() const {
    double total = 0.0;
    for (const auto& ch : channels_) total += ch.rate();
    return total;
}

double conjugation_check(const JumpChannel& ch, const FermionRep& rep) {
    const Matrix& u = ch.unitary(rep);
    const Matrix& o = ch.one_particle();
    double max_residual = 0.0;
    for (int j = 0; j < rep.vec_dim(); ++j) {
        Matrix transformed = Matrix::Zero(rep.dim(), rep.dim());
        for (int l = 0; l < rep.vec_dim(); ++l) {
            if (o(j, l) != 0.0) transformed.noalias() += o(j, l) * rep.ops[l];
        }
        max_residual = std::max(max_residual, frob_dist(u.adjoint() * rep.ops[j] * u, transformed));
    }
    return max_residual;
}

Matrix moment_generator(const ChannelSet& cs, int m) {
    if (m < 1) {
        throw ConstraintError("moment_generator: order must be >= 1, got " + std::to_string(m));
    }
    const int two_n = 2 * cs.n();
    const std::size_t dim = moment_dim(two_n, m, "moment_generator");
    const auto d = static_cast<Eigen::Index>(dim);

    Matrix gen = Matrix::Zero(d, d);
    for (const auto& ch : cs.channels()) {
        Matrix power = ch.one_particle();
        for (int r = 1; r < m; ++r) power = kron(power, ch.one_particle());
        gen += ch.rate() * (power - Matrix::Identity(d, d));
    }
    return gen;
}

Matrix partial_generator(const ChannelSet& cs, int big_m, int m) {
    if (m < 1 || m > big_m) {
        throw ConstraintError("partial_generator: need 1 <= m <= M, got m=" + std::to_string(m) +
                              ", M=" + std::to_string(big_m));
    }
    const int two_n = 2 * cs.n();
    moment_dim(two_n, big_m, "partial_generator");
    const Matrix head = moment_generator(cs, m);
    if (m == big_m) return head;
    const std::size_t tail_dim = moment_dim(two_n, big_m - m, "partial_generator");
    return kron(head, Matrix::Identity(static_cast<Eigen::Index>(tail_dim),
                                       static_cast<Eigen::Index>(tail_dim)));
}

} // namespace fermijump
