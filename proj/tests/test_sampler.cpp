#include <doctest.h>

#include "fermijump/sampler.hpp"
#include "test_util.hpp"

using namespace fermijump;
using testutil::random_channels;
using testutil::random_density;

namespace {

DensityState plus_state() {
    Matrix rho(2, 2);
    rho << 0.5, 0.5, 0.5, 0.5;
    return DensityState::validated(rho);
}

ChannelSet phase_channel(double lambda, double b) {
    Matrix h(2, 2);
    h << 0, b, -b, 0;
    std::vector<JumpChannel> channels;
    channels.emplace_back(lambda, QuadraticGenerator::validated(h));
    return ChannelSet(std::move(channels));
}

} // namespace

TEST_CASE("zero horizon returns the initial state exactly") {
    const FermionRep rep = build_rep(1);
    const ChannelSet cs = phase_channel(1.0, 0.7);
    const DensityState rho0 = plus_state();

    std::mt19937_64 rng = substream(7, 0);
    const DensityState endpoint = sample_trajectory(rho0, cs, rep, 0.0, rng);
    CHECK(frob_dist(endpoint.rho(), rho0.rho()) == 0.0);

    TrajectoryConfig cfg;
    cfg.horizon = 0.0;
    cfg.trajectories = 1;
    cfg.seed = 7;
    const EvolutionEstimate est = estimate_evolution(rho0, cs, rep, cfg);
    CHECK(frob_dist(est.mean, rho0.rho()) == 0.0);
    CHECK(est.std_error.maxCoeff() == 0.0);
    CHECK(est.event_counts[0] == 0);
}

TEST_CASE("trajectory endpoints stay physical") {
    const FermionRep rep = build_rep(2);
    const ChannelSet cs = random_channels(2, 2, 120);
    std::mt19937_64 state_rng(2000);
    const DensityState rho0 =
        DensityState::validated(random_density(4, state_rng), 1e-10, 1e-10, -1e-10);
    for (std::uint64_t idx = 0; idx < 50; ++idx) {
        std::mt19937_64 rng = substream(99, idx);
        // validated() inside sample_trajectory enforces trace/positivity.
        CHECK_NOTHROW((void)sample_trajectory(rho0, cs, rep, 1.5, rng));
    }
}

TEST_CASE("estimates are deterministic in the seed and thread count") {
    const FermionRep rep = build_rep(2);
    const ChannelSet cs = random_channels(2, 2, 121);
    std::mt19937_64 state_rng(2001);
    const DensityState rho0 =
        DensityState::validated(random_density(4, state_rng), 1e-10, 1e-10, -1e-10);

    TrajectoryConfig cfg;
    cfg.horizon = 1.0;
    cfg.trajectories = 1000;
    cfg.seed = 4242;

    const EvolutionEstimate a = estimate_evolution(rho0, cs, rep, cfg);
    const EvolutionEstimate b = estimate_evolution(rho0, cs, rep, cfg);
    CHECK(frob_dist(a.mean, b.mean) == 0.0);
    CHECK((a.std_error - b.std_error).norm() == 0.0);
    CHECK(a.event_counts == b.event_counts);

    cfg.threads = 4;
    const EvolutionEstimate parallel = estimate_evolution(rho0, cs, rep, cfg);
    CHECK(frob_dist(a.mean, parallel.mean) == 0.0);
    CHECK((a.std_error - parallel.std_error).norm() == 0.0);
    CHECK(a.event_counts == parallel.event_counts);
}

TEST_CASE("single-mode phase channel mean converges to the Poisson characteristic function") {
    const FermionRep rep = build_rep(1);
    const double lambda = 1.0, b = 0.7, t = 1.0;
    const ChannelSet cs = phase_channel(lambda, b);
    const DensityState rho0 = plus_state();

    TrajectoryConfig cfg;
    cfg.horizon = t;
    cfg.trajectories = 4000;
    cfg.seed = 31337;
    const EvolutionEstimate est = estimate_evolution(rho0, cs, rep, cfg);

    // <c> = rho(1, 0); analytic value e^{lambda (e^{ib} - 1) t} <c>_0.
    const Complex analytic = std::exp(lambda * (std::polar(1.0, b) - 1.0) * t) * 0.5;
    const double err = std::abs(est.mean(1, 0) - analytic);
    CHECK(err <= 4.0 * est.std_error(1, 0));
}

TEST_CASE("event counts match the Poisson intensities") {
    const FermionRep rep = build_rep(1);
    Matrix h1(2, 2), h2(2, 2);
    h1 << 0, 0.4, -0.4, 0;
    h2 << 0, 1.1, -1.1, 0;
    std::vector<JumpChannel> channels;
    channels.emplace_back(0.7, QuadraticGenerator::validated(h1));
    channels.emplace_back(1.6, QuadraticGenerator::validated(h2));
    const ChannelSet cs(std::move(channels));

    TrajectoryConfig cfg;
    cfg.horizon = 0.9;
    cfg.trajectories = 100000;
    cfg.seed = 555;
    const EvolutionEstimate est = estimate_evolution(plus_state(), cs, rep, cfg);

    const double n = static_cast<double>(cfg.trajectories);
    const std::vector<double> rates = {0.7, 1.6};
    for (std::size_t k = 0; k < rates.size(); ++k) {
        const double expected = rates[k] * cfg.horizon;
        const double observed = static_cast<double>(est.event_counts[k]) / n;
        const double std_err = std::sqrt(expected / n);
        CHECK(std::abs(observed - expected) <= 4.0 * std_err);
    }
}

TEST_CASE("estimator error decreases roughly as the square root of the sample size") {
    const FermionRep rep = build_rep(2);
    const ChannelSet cs = random_channels(2, 2, 122);
    std::mt19937_64 state_rng(2002);
    const DensityState rho0 =
        DensityState::validated(random_density(4, state_rng), 1e-10, 1e-10, -1e-10);
    const double t = 1.0;
    const DensityState reference = evolve_density(rho0, cs, rep, t);

    std::vector<double> errors;
    for (int n : {100, 1000, 10000}) {
        TrajectoryConfig cfg;
        cfg.horizon = t;
        cfg.trajectories = n;
        cfg.seed = 777;
        const EvolutionEstimate est = estimate_evolution(rho0, cs, rep, cfg);
        errors.push_back((est.mean - reference.rho()).norm());
    }
    CHECK(errors[2] < errors[0]);
    const double ratio = errors[0] / errors[2];   // expected near sqrt(10000/100) = 10
    CHECK(ratio > 3.0);
    CHECK(ratio < 40.0);
}

TEST_CASE("input validation") {
    const FermionRep rep = build_rep(1);
    const ChannelSet cs = phase_channel(1.0, 0.7);
    std::mt19937_64 rng = substream(1, 0);
    CHECK_THROWS_AS((void)sample_trajectory(plus_state(), cs, rep, -0.1, rng), OrderingError);

    TrajectoryConfig cfg;
    cfg.trajectories = 0;
    CHECK_THROWS_AS((void)estimate_evolution(plus_state(), cs, rep, cfg), ConstraintError);
}
