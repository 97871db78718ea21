#include "mstate/savings.hpp"

#include <cmath>
#include <stdexcept>

namespace mstate {

namespace {

// log of the factor contributed by state `state` over (a, b].
double log_factor_one_state(const InterestCanonical& interest, int state, double a, double b) {
    const PiecewiseMeasure* phi = interest.phi_for(state);
    if (!phi || b <= a) return 0.0;
    double log_f = phi->continuous_increment(a, b);
    for (const auto& atom : phi->atoms_in(a, b)) {
        if (atom.mass <= -1.0)
            throw std::domain_error("savings account: interest atom <= -1");
        log_f += std::log1p(atom.mass);
    }
    return log_f;
}

}   // namespace

double accumulation_factor(const InterestCanonical& interest, const Path& path, double s,
                           double t) {
    if (t <= s) return 1.0;
    double log_f = 0.0;
    double cursor = s;
    for (const auto& pt : path.points()) {
        if (pt.time <= s) continue;
        if (pt.time >= t) break;
        log_f += log_factor_one_state(interest, path.state_at(cursor), cursor, pt.time);
        cursor = pt.time;
    }
    log_f += log_factor_one_state(interest, path.state_at(cursor), cursor, t);
    return std::exp(log_f);
}

double accumulation_factor(const InterestCanonical& interest, int state, double s, double t) {
    return std::exp(log_factor_one_state(interest, state, s, t));
}

double discount_factor(const InterestCanonical& interest, const Path& path, double s,
                       double t) {
    return 1.0 / accumulation_factor(interest, path, s, t);
}

}   // namespace mstate
