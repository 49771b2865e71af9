#pragma once

// Straightforward single-threaded versions of the parallel kernels. They share
// the sampling streams with the parallel code, so results agree up to the
// order of floating point summation.

#include "gfrob/estimate.hpp"
#include "gfrob/precond.hpp"

namespace gfrob::reference {

RiskGradient evaluate(const Params& p, const LossDescriptor& loss, const Dataset& data);

Moments2 input_moments(const Dataset& data);

template <Scalar T>
EstimateReport<T> estimate_metric_trace(const SesquilinearForm<T>& form, const SamplingLaw<T>& law,
                                        std::size_t count);

template <Scalar T>
EstimateReport<T> estimate_frob_inner(const MetrizedMap<T>& s, const MetrizedMap<T>& t,
                                      const SamplingLaw<T>& law, std::size_t count);

}  // namespace gfrob::reference
