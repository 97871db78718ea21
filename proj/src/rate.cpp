#include "mstate/rate.hpp"

#include <cmath>
#include <stdexcept>

namespace mstate {

CumulativeRate CumulativeRate::markov(PiecewiseMeasure m) {
    CumulativeRate r;
    r.dependence = Dependence::markov;
    m.extrapolate = true;
    r.base = std::move(m);
    return r;
}

CumulativeRate CumulativeRate::semi_markov(PiecewiseMeasure duration_measure) {
    CumulativeRate r;
    r.dependence = Dependence::semi_markov;
    duration_measure.extrapolate = true;
    r.base = std::move(duration_measure);
    return r;
}

CumulativeRate CumulativeRate::path_dependent(
    std::function<PiecewiseMeasure(const HistoryContext&)> rule) {
    CumulativeRate r;
    r.dependence = Dependence::path_dependent;
    r.rule = std::move(rule);
    return r;
}

bool CumulativeRate::is_zero() const {
    return dependence != Dependence::path_dependent && base.empty();
}

bool CumulativeRate::has_pole() const {
    if (dependence == Dependence::path_dependent) return false;
    for (const auto& p : base.pieces)
        if (p.kind == DensityPiece::Kind::pole) return true;
    return false;
}

double CumulativeRate::max_atom_mass() const {
    double m = 0.0;
    if (dependence != Dependence::path_dependent)
        for (const auto& a : base.atoms) m = std::max(m, a.mass);
    return m;
}

PiecewiseMeasure CumulativeRate::slice(const HistoryContext& ctx) const {
    switch (dependence) {
        case Dependence::markov:
            return base;
        case Dependence::semi_markov:
            return base.shifted(ctx.last_jump_time);
        case Dependence::path_dependent: {
            if (!rule) throw std::logic_error("path-dependent rate without rule");
            PiecewiseMeasure m = rule(ctx);
            m.normalize();
            return m;
        }
    }
    return PiecewiseMeasure::zero();
}

RateIncrement evaluate_rate(const CumulativeRate& rate, double s, double t,
                            const HistoryContext& ctx, bool split_at_resets) {
    if (ctx.last_jump_time > s)
        throw std::invalid_argument("evaluate_rate: interval starts before the last jump");
    const PiecewiseMeasure m = rate.slice(ctx);
    RateIncrement inc;
    inc.continuous = m.continuous_increment(s, t, split_at_resets);
    inc.atoms = m.atoms_in(s, t);
    return inc;
}

}   // namespace mstate
