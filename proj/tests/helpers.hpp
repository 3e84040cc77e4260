#pragma once

#include <cmath>

#include "blowuplab/solver.hpp"

namespace testing {

/// Config with grid spacing h and the outer radius just past the cone at t_max.
inline blowuplab::solver::SimConfig config(int N, double mu, double p, double q, int a, int b,
                                           double eps, double h, double t_max) {
    blowuplab::solver::SimConfig cfg;
    cfg.params = {N, mu, p, q, a, b};
    cfg.eps = eps;
    cfg.t_max = t_max;
    cfg.nr = static_cast<int>(std::ceil((t_max + 2.0) / h));
    cfg.L = cfg.nr * h;
    return cfg;
}

}  // namespace testing
