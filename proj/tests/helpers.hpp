#pragma once

// Shared fixture: a dual problem small enough that every unit test stays well
// under a second, but with a genuinely decaying Gaussian weight.

#include "breather/dual.hpp"

inline breather::ProblemParams small_params(int cutoff = 3) {
    breather::ProblemParams pp;
    pp.dim = 2;
    pp.p = 3.0;
    pp.q = 8.0;
    pp.symmetry = 3;
    pp.cutoff = cutoff;
    pp.half_width = 10.0;
    pp.points = 32;
    pp.epsilon = 1e-2;
    return pp;
}

inline breather::DualProblem small_problem(double epsilon = 1e-2, int cutoff = 3) {
    breather::ProblemParams pp = small_params(cutoff);
    pp.epsilon = epsilon;
    const breather::OperatorSpec op = breather::OperatorSpec::fractional_laplacian(1.0);
    breather::Potential weight =
        breather::Potential::gaussian(pp.make_grid(), 1.0, 2.0, pp.p, pp.q);
    return breather::DualProblem(pp, op, std::move(weight));
}
