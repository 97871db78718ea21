#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mstate/path.hpp"
#include "mstate/piecewise.hpp"
#include "mstate/rate.hpp"

namespace mstate {

// Payments attached to a transition (k -> l) that are defined in terms of
// the reserve itself: b = a0 + a1 (V^k - V^l) at transition, and sojourn
// payments A0(dt) + V^k(t-) A1(dt) in state k. Resolved into an explicit
// model before solving (see compare::transform_reserve_dependent).
struct ReserveDependence {
    int from = 0;
    int to = 0;
    PiecewiseFunction a0;
    PiecewiseFunction a1;
    PiecewiseMeasure sojourn_base;      // A0
    PiecewiseMeasure sojourn_reserve;   // A1
};

// Canonical cash flow representation: sojourn payment measures B^i and
// transition payment functions b^{ij}(t). Benefits positive, premiums
// negative.
struct CashFlowCanonical {
    std::map<int, PiecewiseMeasure> sojourn;
    std::map<std::pair<int, int>, PiecewiseFunction> transition;
    std::vector<ReserveDependence> reserve_dependence;

    const PiecewiseMeasure* sojourn_for(int state) const;
    const PiecewiseFunction* transition_for(int from, int to) const;
    bool has_reserve_dependence() const { return !reserve_dependence.empty(); }
};

// State-wise cumulative interest rates Phi^i. Atoms must stay above -1.
struct InterestCanonical {
    std::map<int, PiecewiseMeasure> phi;

    const PiecewiseMeasure* phi_for(int state) const;
};

enum class Regime { markov, semi_markov, path_dependent };

struct ValidationIssue {
    std::string code;      // e.g. "assumption_b", "assumption_d", "alpha"
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
    bool has(const std::string& code) const;
    std::string to_string() const;
};

// The full canonical insurance model (alpha, Lambda, Phi, B, b) with a
// finite valuation horizon. Immutable after construction in practice; all
// operations are pure functions over it.
struct CanonicalInsuranceModel {
    StateSpace states;
    std::vector<double> alpha;                              // by state index
    std::map<std::pair<int, int>, CumulativeRate> lambda;   // by labels (i, j)
    InterestCanonical interest;
    CashFlowCanonical cashflow;
    double horizon = 0.0;

    const CumulativeRate* rate_for(int from, int to) const;
    std::vector<std::pair<int, const CumulativeRate*>> rates_out_of(int from) const;

    Regime regime() const;
    // True when every rate is a pure atom measure with atoms at integers
    // only (discrete modeling per the integer-time characterization).
    bool is_discrete() const;

    double total_atom_mass_out_of(int from, double time) const;
};

// Structural validation of the standing assumptions. Violations are data,
// not errors; malformed numerics (NaN, infinities in the wrong place) throw
// std::invalid_argument.
ValidationReport validate_model(const CanonicalInsuranceModel& model);

}   // namespace mstate
