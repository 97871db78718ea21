#pragma once

#include <functional>

#include "mstate/path.hpp"
#include "mstate/piecewise.hpp"

namespace mstate {

enum class Dependence { markov, semi_markov, path_dependent };

struct RateIncrement {
    double continuous = 0.0;
    std::vector<Atom> atoms;
};

// One cumulative transition rate Lambda^{ij}. Markov rates live in calendar
// time; semi-Markov rates are parameterized by duration since the last jump;
// path-dependent rates materialize a calendar-time measure per history
// (valid from the last jump until the next one), usable by simulation only.
class CumulativeRate {
public:
    Dependence dependence = Dependence::markov;
    PiecewiseMeasure base;                                        // markov / semi_markov
    std::function<PiecewiseMeasure(const HistoryContext&)> rule;  // path_dependent

    static CumulativeRate markov(PiecewiseMeasure m);
    static CumulativeRate semi_markov(PiecewiseMeasure duration_measure);
    static CumulativeRate path_dependent(
        std::function<PiecewiseMeasure(const HistoryContext&)> rule);

    bool is_zero() const;
    bool has_pole() const;
    double max_atom_mass() const;

    // Calendar-time measure on the (s,i)-stopped history of ctx.
    PiecewiseMeasure slice(const HistoryContext& ctx) const;
};

// Increment of the continuous part of Lambda over (s, t] plus the atoms in
// the interval, evaluated on the stopped history. Throws std::domain_error
// when (s, t] crosses a reset point unless split_at_resets is set, in which
// case the continuous part is +infinity across any pole.
RateIncrement evaluate_rate(const CumulativeRate& rate, double s, double t,
                            const HistoryContext& ctx, bool split_at_resets = false);

}   // namespace mstate
