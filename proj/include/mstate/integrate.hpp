#pragma once

#include <functional>
#include <vector>

#include "mstate/piecewise.hpp"

namespace mstate {

// Lebesgue-Stieltjes integral of f over (s, t] against the measure m:
// continuous part by per-piece Gauss-Legendre (exact for piecewise-constant
// f times piecewise-constant densities, adaptive refinement otherwise) plus
// the atom sum. Known discontinuities of f can be passed as breakpoints.
// Integrating across a pole's reset point is a domain error.
double ls_integrate(const std::function<double(double)>& f, const PiecewiseMeasure& m,
                    double s, double t, const std::vector<double>& f_breakpoints = {});

}   // namespace mstate
