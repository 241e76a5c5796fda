#include "fermijump/sampler.hpp"

#include <atomic>
#include <thread>

namespace fermijump {

namespace {

constexpr int kBlockSize = 256;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

struct BlockSums {
    Matrix sum;
    RealMatrix sum_sq;   // sum of |x|^2 per entry
    std::vector<std::int64_t> event_counts;
};

} // namespace

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(index)));
}

DensityState sample_trajectory(const DensityState& rho0, const ChannelSet& cs,
                               const FermionRep& rep, double horizon, std::mt19937_64& rng,
                               std::vector<std::int64_t>* event_counts) {
    if (cs.n() != rep.n) {
        throw ShapeError("sample_trajectory: channels have n=" + std::to_string(cs.n()) +
                         " but representation has n=" + std::to_string(rep.n));
    }
    if (rho0.dim() != rep.dim()) {
        throw ShapeError("sample_trajectory: state dimension does not match representation");
    }
    if (!(horizon >= 0.0)) {
        throw OrderingError("sample_trajectory: horizon must be nonnegative, got " +
                            std::to_string(horizon));
    }
    if (event_counts && event_counts->size() != cs.size()) {
        event_counts->assign(cs.size(), 0);
    }

    const double total_rate = cs.total_rate();
    std::exponential_distribution<double> waiting(total_rate);
    std::uniform_real_distribution<double> select(0.0, total_rate);

    Matrix rho = rho0.rho();
    double clock = waiting(rng);
    while (clock <= horizon) {
        const double pick = select(rng);
        std::size_t k = 0;
        double cumulative = cs.channels()[0].rate();
        while (k + 1 < cs.size() && pick > cumulative) {
            ++k;
            cumulative += cs.channels()[k].rate();
        }
        const Matrix& u = cs.channels()[k].unitary(rep);
        rho = u * rho * u.adjoint();
        if (event_counts) ++(*event_counts)[k];
        clock += waiting(rng);
    }
    // Unitary conjugation keeps the state physical up to roundoff.
    return DensityState::validated(std::move(rho), 1e-10, 1e-10, -1e-10);
}

EvolutionEstimate estimate_evolution(const DensityState& rho0, const ChannelSet& cs,
                                     const FermionRep& rep, const TrajectoryConfig& cfg) {
    if (cfg.trajectories < 1) {
        throw ConstraintError("estimate_evolution: need at least one trajectory, got " +
                              std::to_string(cfg.trajectories));
    }
    const int dim = rho0.dim();
    const int total = cfg.trajectories;
    const int blocks = (total + kBlockSize - 1) / kBlockSize;

    auto run_block = [&](int block) {
        BlockSums sums{Matrix::Zero(dim, dim), RealMatrix::Zero(dim, dim),
                       std::vector<std::int64_t>(cs.size(), 0)};
        const int lo = block * kBlockSize;
        const int hi = std::min(total, lo + kBlockSize);
        for (int idx = lo; idx < hi; ++idx) {
            std::mt19937_64 rng = substream(cfg.seed, static_cast<std::uint64_t>(idx));
            const DensityState endpoint =
                sample_trajectory(rho0, cs, rep, cfg.horizon, rng, &sums.event_counts);
            sums.sum += endpoint.rho();
            sums.sum_sq += endpoint.rho().cwiseAbs2();
        }
        return sums;
    };

    std::vector<BlockSums> block_sums(static_cast<std::size_t>(blocks));
    const int threads = std::max(1, cfg.threads);
    if (threads == 1) {
        for (int b = 0; b < blocks; ++b) block_sums[static_cast<std::size_t>(b)] = run_block(b);
    } else {
        std::atomic<int> next{0};
        auto worker = [&] {
            for (int b = next.fetch_add(1); b < blocks; b = next.fetch_add(1)) {
                block_sums[static_cast<std::size_t>(b)] = run_block(b);
            }
        };
        std::vector<std::thread> pool;
        for (int w = 0; w < std::min(threads, blocks); ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    Matrix sum = Matrix::Zero(dim, dim);
    RealMatrix sum_sq = RealMatrix::Zero(dim, dim);
    std::vector<std::int64_t> event_counts(cs.size(), 0);
    for (const auto& bs : block_sums) {
        sum += bs.sum;
        sum_sq += bs.sum_sq;
        for (std::size_t k = 0; k < event_counts.size(); ++k) event_counts[k] += bs.event_counts[k];
    }

    EvolutionEstimate est;
    est.mean = sum / static_cast<double>(total);
    if (total > 1) {
        const double n = static_cast<double>(total);
        const RealMatrix variance =
            ((sum_sq - est.mean.cwiseAbs2() * n) / (n - 1.0)).cwiseMax(0.0);
        est.std_error = (variance / n).cwiseSqrt();
    } else {
        est.std_error = RealMatrix::Zero(dim, dim);
    }
    est.seed = cfg.seed;
    est.trajectories = total;
    est.total_rate = cs.total_rate();
    est.event_counts = std::move(event_counts);
    est.rng_algorithm = "mt19937_64/splitmix64-substreams/exponential-interarrival";
    return est;
}

} // namespace fermijump
