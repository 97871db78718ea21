#include "mstate/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mstate {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool nearly_equal(double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

}   // namespace

double DensityPiece::rate_at(double t) const {
    switch (kind) {
        case Kind::constant: return value;
        case Kind::linear: return value + slope * (t - begin);
        case Kind::pole: {
            const double d = end - t;
            return d > 0.0 ? value / d : kInf;
        }
    }
    return 0.0;
}

double DensityPiece::integral(double a, double b) const {
    if (b <= a) return 0.0;
    switch (kind) {
        case Kind::constant:
            return value * (b - a);
        case Kind::linear: {
            const double fa = value + slope * (a - begin);
            const double fb = value + slope * (b - begin);
            return 0.5 * (fa + fb) * (b - a);
        }
        case Kind::pole: {
            if (b >= end) return kInf;
            return value * (std::log(end - a) - std::log(end - b));
        }
    }
    return 0.0;
}

void PiecewiseMeasure::normalize() {
    std::sort(pieces.begin(), pieces.end(),
              [](const DensityPiece& x, const DensityPiece& y) { return x.begin < y.begin; });
    for (std::size_t k = 0; k < pieces.size(); ++k) {
        const auto& p = pieces[k];
        if (!(p.end > p.begin))
            throw std::invalid_argument("measure: piece with non-positive width");
        if (!std::isfinite(p.begin) || !std::isfinite(p.end) || !std::isfinite(p.value) ||
            !std::isfinite(p.slope))
            throw std::invalid_argument("measure: non-finite piece parameter");
        if (k + 1 < pieces.size() && pieces[k + 1].begin < p.end - 1e-12)
            throw std::invalid_argument("measure: overlapping density pieces");
        if (p.kind == DensityPiece::Kind::pole) {
            bool declared = false;
            for (double r : resets) declared |= nearly_equal(r, p.end);
            if (!declared) resets.push_back(p.end);
        }
    }
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& x, const Atom& y) { return x.time < y.time; });
    for (std::size_t k = 0; k < atoms.size(); ++k) {
        if (!std::isfinite(atoms[k].time) || !std::isfinite(atoms[k].mass))
            throw std::invalid_argument("measure: non-finite atom");
        if (k + 1 < atoms.size() && nearly_equal(atoms[k].time, atoms[k + 1].time))
            throw std::invalid_argument("measure: duplicate atom time");
    }
    std::sort(resets.begin(), resets.end());
    resets.erase(std::unique(resets.begin(), resets.end(),
                             [](double a, double b) { return nearly_equal(a, b); }),
                 resets.end());
    for (const auto& p : pieces) t_max = std::max(t_max, p.end);
    for (const auto& a : atoms) t_max = std::max(t_max, a.time);
}

double PiecewiseMeasure::density_at(double t) const {
    for (const auto& p : pieces)
        if (t >= p.begin && t < p.end) return p.rate_at(t);
    if (extrapolate && t >= t_max) return terminal_density();
    return 0.0;
}

double PiecewiseMeasure::terminal_density() const {
    if (pieces.empty()) return 0.0;
    const auto& last = pieces.back();
    if (!nearly_equal(last.end, t_max)) return 0.0;
    switch (last.kind) {
        case DensityPiece::Kind::constant: return last.value;
        case DensityPiece::Kind::linear: return last.rate_at(last.end);
        case DensityPiece::Kind::pole: return 0.0;   // pole ends in a reset
    }
    return 0.0;
}

double PiecewiseMeasure::continuous_increment(double s, double t,
                                              bool allow_reset_crossing) const {
    if (t <= s) return 0.0;
    if (!allow_reset_crossing) {
        for (double r : resets)
            if (r > s && r <= t)
                throw std::domain_error("interval crosses a reset point; split required");
    }
    double total = 0.0;
    for (const auto& p : pieces) {
        const double a = std::max(s, p.begin);
        const double b = std::min(t, p.end);
        if (b > a) total += p.integral(a, b);
    }
    if (extrapolate && t > t_max) {
        const double a = std::max(s, t_max);
        total += terminal_density() * (t - a);
    }
    return total;
}

std::vector<Atom> PiecewiseMeasure::atoms_in(double s, double t) const {
    std::vector<Atom> out;
    for (const auto& a : atoms)
        if (a.time > s && a.time <= t) out.push_back(a);
    return out;
}

double PiecewiseMeasure::atom_mass_at(double t) const {
    for (const auto& a : atoms)
        if (nearly_equal(a.time, t)) return a.mass;
    return 0.0;
}

double PiecewiseMeasure::first_reset_after(double s) const {
    for (double r : resets)
        if (r > s) return r;
    return kInf;
}

void PiecewiseMeasure::breakpoints_into(double s, double t, std::vector<double>& out) const {
    auto add = [&](double x) {
        if (x > s && x < t) out.push_back(x);
    };
    for (const auto& p : pieces) {
        add(p.begin);
        add(p.end);
    }
    for (const auto& a : atoms) add(a.time);
    for (double r : resets) add(r);
    if (extrapolate) add(t_max);
}

PiecewiseMeasure PiecewiseMeasure::shifted(double offset) const {
    PiecewiseMeasure out = *this;
    for (auto& p : out.pieces) {
        p.begin += offset;
        p.end += offset;
    }
    for (auto& a : out.atoms) a.time += offset;
    for (auto& r : out.resets) r += offset;
    out.t_max += offset;
    return out;
}

PiecewiseMeasure PiecewiseMeasure::scaled(double factor) const {
    PiecewiseMeasure out = *this;
    for (auto& p : out.pieces) {
        p.value *= factor;
        p.slope *= factor;
    }
    for (auto& a : out.atoms) a.mass *= factor;
    return out;
}

PiecewiseMeasure PiecewiseMeasure::zero() {
    return PiecewiseMeasure{};
}

PiecewiseMeasure PiecewiseMeasure::constant_density(double rate, double from, double to) {
    PiecewiseMeasure m;
    m.pieces.push_back({DensityPiece::Kind::constant, from, to, rate, 0.0});
    m.normalize();
    return m;
}

PiecewiseMeasure PiecewiseMeasure::single_atom(double time, double mass) {
    PiecewiseMeasure m;
    m.atoms.push_back({time, mass});
    m.normalize();
    return m;
}

PiecewiseMeasure measure_sum(const PiecewiseMeasure& a, const PiecewiseMeasure& b,
                             double factor_b) {
    for (const auto& p : a.pieces)
        if (p.kind == DensityPiece::Kind::pole)
            throw std::domain_error("measure_sum: pole pieces are not summable");
    for (const auto& p : b.pieces)
        if (p.kind == DensityPiece::Kind::pole)
            throw std::domain_error("measure_sum: pole pieces are not summable");

    // Split both piece lists at the union of boundaries, then add densities.
    std::vector<double> bounds;
    for (const auto& p : a.pieces) {
        bounds.push_back(p.begin);
        bounds.push_back(p.end);
    }
    for (const auto& p : b.pieces) {
        bounds.push_back(p.begin);
        bounds.push_back(p.end);
    }
    std::sort(bounds.begin(), bounds.end());
    bounds.erase(std::unique(bounds.begin(), bounds.end(),
                             [](double x, double y) { return nearly_equal(x, y); }),
                 bounds.end());

    PiecewiseMeasure out;
    for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
        const double lo = bounds[k];
        const double hi = bounds[k + 1];
        const double mid = 0.5 * (lo + hi);
        double v = 0.0, sl = 0.0;
        bool linear = false;
        auto accumulate = [&](const PiecewiseMeasure& m, double f) {
            for (const auto& p : m.pieces) {
                if (mid < p.begin || mid >= p.end) continue;
                v += f * p.rate_at(lo);
                if (p.kind == DensityPiece::Kind::linear) {
                    sl += f * p.slope;
                    linear = true;
                }
            }
        };
        accumulate(a, 1.0);
        accumulate(b, factor_b);
        if (v != 0.0 || sl != 0.0)
            out.pieces.push_back({linear ? DensityPiece::Kind::linear
                                         : DensityPiece::Kind::constant,
                                  lo, hi, v, sl});
    }

    out.atoms = a.atoms;
    for (const auto& at : b.atoms) {
        bool merged = false;
        for (auto& existing : out.atoms)
            if (nearly_equal(existing.time, at.time)) {
                existing.mass += factor_b * at.mass;
                merged = true;
                break;
            }
        if (!merged) out.atoms.push_back({at.time, factor_b * at.mass});
    }
    out.atoms.erase(std::remove_if(out.atoms.begin(), out.atoms.end(),
                                   [](const Atom& at) { return at.mass == 0.0; }),
                    out.atoms.end());
    out.t_max = std::max(a.t_max, b.t_max);
    out.extrapolate = a.extrapolate || b.extrapolate;
    out.normalize();
    return out;
}

double PiecewiseFunction::operator()(double t) const {
    for (const auto& s : segs)
        if (t >= s.begin && t < s.end) return s.value + s.slope * (t - s.begin);
    if (!segs.empty() && t == segs.back().end) {
        const auto& s = segs.back();
        return s.value + s.slope * (t - s.begin);
    }
    return 0.0;
}

void PiecewiseFunction::breakpoints_into(double s, double t, std::vector<double>& out) const {
    for (const auto& seg : segs) {
        if (seg.begin > s && seg.begin < t) out.push_back(seg.begin);
        if (seg.end > s && seg.end < t) out.push_back(seg.end);
    }
}

PiecewiseFunction PiecewiseFunction::constant(double v, double from, double to) {
    PiecewiseFunction f;
    f.segs.push_back({from, to, v, 0.0});
    return f;
}

PiecewiseFunction PiecewiseFunction::interpolant(const std::vector<double>& times,
                                                 const std::vector<double>& values) {
    if (times.size() != values.size() || times.size() < 2)
        throw std::invalid_argument("interpolant: need matching times/values, at least two");
    PiecewiseFunction f;
    for (std::size_t k = 0; k + 1 < times.size(); ++k) {
        const double w = times[k + 1] - times[k];
        if (!(w > 0.0)) throw std::invalid_argument("interpolant: times not increasing");
        f.segs.push_back({times[k], times[k + 1], values[k], (values[k + 1] - values[k]) / w});
    }
    return f;
}

PiecewiseFunction function_sum(const PiecewiseFunction& a, const PiecewiseFunction& b) {
    std::vector<double> bounds;
    for (const auto& s : a.segs) {
        bounds.push_back(s.begin);
        bounds.push_back(s.end);
    }
    for (const auto& s : b.segs) {
        bounds.push_back(s.begin);
        bounds.push_back(s.end);
    }
    std::sort(bounds.begin(), bounds.end());
    bounds.erase(std::unique(bounds.begin(), bounds.end(),
                             [](double x, double y) { return nearly_equal(x, y); }),
                 bounds.end());
    PiecewiseFunction out;
    for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
        const double lo = bounds[k];
        const double hi = bounds[k + 1];
        const double mid = 0.5 * (lo + hi);
        auto slope_of = [&](const PiecewiseFunction& f) {
            for (const auto& s : f.segs)
                if (mid >= s.begin && mid < s.end) return s.slope;
            return 0.0;
        };
        out.segs.push_back({lo, hi, a(lo) + b(lo), slope_of(a) + slope_of(b)});
    }
    return out;
}

}   // namespace mstate
