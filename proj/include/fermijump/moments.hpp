// moments.hpp — closed-form propagation of order-M moment tensors and
// multi-time ordered correlation tensors.
//
// Flattening convention: element (i_1, ..., i_M) of the order-M tensor is the
// expectation of the operator product c_{i_1} c_{i_2} ... c_{i_M} read
// left-to-right across tensor slots, stored at flat index
// sum_m i_m (2n)^(M-m), i.e. i_1 most significant. In multi-time tensors the
// first slot carries the latest time:
//   element (i_1, ..., i_M) = < c_{i_1}(t_M) c_{i_2}(t_{M-1}) ... c_{i_M}(t_1) >.

#pragma once

#include <vector>

#include "fermijump/channel.hpp"

namespace fermijump {

struct MomentTensor {
    int n = 0;
    int order = 0;
    Vector data;   // length (2n)^order

    static MomentTensor zeros(int n, int order);

    std::size_t size() const { return static_cast<std::size_t>(data.size()); }
    Complex at(const std::vector<int>& idx) const;
};

std::size_t moment_flat_index(int n, int order, const std::vector<int>& idx);
std::vector<int> moment_multi_index(int n, int order, std::size_t flat);

// Ordered times t_1 <= ... <= t_M, all nonnegative.
class TimePoints {
  public:
    explicit TimePoints(std::vector<double> times);

    const std::vector<double>& values() const { return times_; }
    int count() const { return static_cast<int>(times_.size()); }

  private:
    std::vector<double> times_;
};

// Entry (i_1..i_M) = tr(rho ops[i_1] ... ops[i_M]). rho must be Hermitian,
// unit-trace and positive semidefinite to 1e-10.
MomentTensor initial_moments(const Matrix& rho, const FermionRep& rep, int order);

// exp(sum_k lambda_k (O_k^(x)M - I) t) applied to the flattened tensor.
MomentTensor propagate_moments(const MomentTensor& m0, const ChannelSet& cs, double t);

// exp(L_{M,1} (t_M - t_{M-1})) ... exp(L_{M,M-1} (t_2 - t_1)) exp(L_{M,M} t_1)
// applied to the flattened tensor, with L_{M,m} the order-m generator embedded
// on the first m slots. Factor order follows the nested trace definition of
// the ordered correlations; reordering the factors changes the result when
// the channels do not commute.
MomentTensor multitime_correlations(const MomentTensor& m0, const ChannelSet& cs,
                                    const TimePoints& times);

} // namespace fermijump
