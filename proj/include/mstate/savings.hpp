#pragma once

#include "mstate/model.hpp"
#include "mstate/path.hpp"

namespace mstate {

// Savings-account accumulation factor kappa(t)/kappa(s) along the path's
// state occupancy: exp of the continuous interest increment times the
// product of (1 + Delta R) over interest atoms in (s, t]. R(dt) weights
// Phi^i by I^i(t-), so an atom at a jump time accrues at the pre-jump state.
double accumulation_factor(const InterestCanonical& interest, const Path& path, double s,
                           double t);

// Same factor while remaining in a single state on (s, t].
double accumulation_factor(const InterestCanonical& interest, int state, double s, double t);

// kappa(s)/kappa(t), the discount factor of future payments.
double discount_factor(const InterestCanonical& interest, const Path& path, double s, double t);

}   // namespace mstate
