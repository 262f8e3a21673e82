#pragma once

// Central finite-difference gradient checking shared by the neural and
// learner tests. The numeric oracle lives here, independent of the
// reverse-mode path it verifies.

#include <cmath>
#include <functional>
#include <vector>

#include "doctest.h"
#include "uavlora/neural.hpp"

namespace testutil {

inline std::vector<double> finite_difference(
    uavlora::ParamVector& pv, const std::function<double()>& loss,
    double h = 1e-5) {
  std::vector<double> grad(pv.size());
  for (std::size_t i = 0; i < pv.size(); ++i) {
    const double saved = pv.values[i];
    pv.values[i] = saved + h;
    const double up = loss();
    pv.values[i] = saved - h;
    const double down = loss();
    pv.values[i] = saved;
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

inline void check_gradients(const std::vector<double>& analytic,
                            const std::vector<double>& numeric,
                            double rel_tol = 1e-4) {
  REQUIRE(analytic.size() == numeric.size());
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    const double denom =
        std::max({std::abs(analytic[i]), std::abs(numeric[i]), 1e-6});
    const double rel = std::abs(analytic[i] - numeric[i]) / denom;
    CHECK_MESSAGE(rel <= rel_tol, "coordinate ", i, ": analytic ",
                  analytic[i], " vs numeric ", numeric[i]);
  }
}

}  // namespace testutil
