#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mstate {

// Point mass of a Stieltjes measure.
struct Atom {
    double time = 0.0;
    double mass = 0.0;
};

// Density piece on [begin, end).
//   constant: rate == value
//   linear:   rate(t) == value + slope * (t - begin)
//   pole:     rate(t) == value / (end - t), terminating at a reset point (end)
struct DensityPiece {
    enum class Kind { constant, linear, pole };

    Kind kind = Kind::constant;
    double begin = 0.0;
    double end = 0.0;
    double value = 0.0;
    double slope = 0.0;

    double rate_at(double t) const;
    // Integral of the density over (a, b] with [a, b] inside [begin, end].
    // For a pole piece, b == end gives +infinity.
    double integral(double a, double b) const;
};

// Piecewise Stieltjes measure on [0, t_max]: sorted disjoint density pieces
// (gaps carry zero density), point masses, and reset times. Reset points are
// the downward jumps of a cumulative transition rate; every pole piece ends
// at one. Signed measures (payments, interest) use no poles and no resets.
class PiecewiseMeasure {
public:
    std::vector<DensityPiece> pieces;
    std::vector<Atom> atoms;
    std::vector<double> resets;
    double t_max = 0.0;
    // Rates extend beyond t_max with the last piece's terminal density;
    // payment and interest measures stop at t_max.
    bool extrapolate = false;

    void normalize();   // sort, check disjointness, derive resets from poles

    bool empty() const { return pieces.empty() && atoms.empty(); }

    double density_at(double t) const;
    double terminal_density() const;   // extrapolated density beyond t_max

    // Increment of the continuous part over (s, t]. Throws std::domain_error
    // if (s, t] crosses a reset point, unless allow_reset_crossing is set, in
    // which case the increment of a piece ending at its pole is +infinity.
    double continuous_increment(double s, double t, bool allow_reset_crossing = false) const;

    std::vector<Atom> atoms_in(double s, double t) const;   // atoms in (s, t]
    double atom_mass_at(double t) const;

    double first_reset_after(double s) const;   // +inf if none

    // Collects piece boundaries, atom times and resets lying in (s, t).
    void breakpoints_into(double s, double t, std::vector<double>& out) const;

    PiecewiseMeasure shifted(double offset) const;   // duration -> calendar time
    PiecewiseMeasure scaled(double factor) const;

    static PiecewiseMeasure zero();
    static PiecewiseMeasure constant_density(double rate, double from, double to);
    static PiecewiseMeasure single_atom(double time, double mass);
};

// Adds measure `m` (pieces and atoms) into `target`, scaling by `factor`.
// Overlapping constant/linear pieces are merged by splitting at boundaries.
PiecewiseMeasure measure_sum(const PiecewiseMeasure& a, const PiecewiseMeasure& b,
                             double factor_b = 1.0);

// Piecewise-affine function of time, right-open pieces [begin, end); the
// final piece also covers its right endpoint. Zero outside all pieces.
struct PiecewiseFunction {
    struct Seg {
        double begin = 0.0;
        double end = 0.0;
        double value = 0.0;
        double slope = 0.0;
    };
    std::vector<Seg> segs;

    double operator()(double t) const;
    bool is_zero() const { return segs.empty(); }
    void breakpoints_into(double s, double t, std::vector<double>& out) const;

    static PiecewiseFunction constant(double v, double from, double to);
    // Piecewise-linear interpolant through (times[k], values[k]).
    static PiecewiseFunction interpolant(const std::vector<double>& times,
                                         const std::vector<double>& values);
};

PiecewiseFunction function_sum(const PiecewiseFunction& a, const PiecewiseFunction& b);

}   // namespace mstate
