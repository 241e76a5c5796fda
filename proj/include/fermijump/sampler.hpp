// sampler.hpp — Monte Carlo unraveling: classical Poisson jump processes with
// unitary jumps whose ensemble average reproduces the semigroup.
//
// Events are drawn from the superposed process of total rate Lambda =
// sum_k lambda_k, each event independently assigned to channel k with
// probability lambda_k / Lambda. This is equal in law to merging K
// independent Poisson streams and keeps the ordering semantics trivial when
// the jump unitaries do not commute.

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fermijump/oracle.hpp"

namespace fermijump {

struct TrajectoryConfig {
    double horizon = 0.0;
    int trajectories = 1;
    std::uint64_t seed = 0;
    int threads = 1;
};

// Deterministic per-trajectory substream; trajectories are independent given
// (seed, index), so parallel execution cannot change results.
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index);

// One endpoint of the jump process: unitaries applied at Poisson event times
// in order, no evolution between events. Appends per-channel event counts to
// *event_counts when provided.
DensityState sample_trajectory(const DensityState& rho0, const ChannelSet& cs,
                               const FermionRep& rep, double horizon, std::mt19937_64& rng,
                               std::vector<std::int64_t>* event_counts = nullptr);

struct EvolutionEstimate {
    Matrix mean;
    RealMatrix std_error;                    // per-entry standard error of the mean
    std::uint64_t seed = 0;
    int trajectories = 0;
    double total_rate = 0.0;
    std::vector<std::int64_t> event_counts;  // per channel, summed over trajectories
    std::string rng_algorithm;

    // Frobenius aggregation of the elementwise standard errors.
    double aggregated_std_error() const { return std_error.norm(); }
};

// Arithmetic mean of cfg.trajectories endpoints plus elementwise standard
// errors. Deterministic in cfg.seed for any thread count: trajectories are
// accumulated in fixed blocks whose partial sums merge in block order.
EvolutionEstimate estimate_evolution(const DensityState& rho0, const ChannelSet& cs,
                                     const FermionRep& rep, const TrajectoryConfig& cfg);

} // namespace fermijump
