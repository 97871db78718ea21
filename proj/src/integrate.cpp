#include "mstate/integrate.hpp"

#include <algorithm>
#include <cmath>

namespace mstate {

namespace {

// 7-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kNodes[7] = {-0.9491079123427585, -0.7415311855993945, -0.4058451513773972,
                              0.0,                 0.4058451513773972,  0.7415311855993945,
                              0.9491079123427585};
constexpr double kWeights[7] = {0.1294849661688697, 0.2797053914892766, 0.3818300505051189,
                                0.4179591836734694, 0.3818300505051189, 0.2797053914892766,
                                0.1294849661688697};

double gauss7(const std::function<double(double)>& g, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (int k = 0; k < 7; ++k) sum += kWeights[k] * g(mid + half * kNodes[k]);
    return sum * half;
}

double adaptive_gauss(const std::function<double(double)>& g, double a, double b, double whole,
                      double tol, int depth) {
    const double mid = 0.5 * (a + b);
    const double left = gauss7(g, a, mid);
    const double right = gauss7(g, mid, b);
    if (depth >= 24 || std::abs(left + right - whole) <= tol)
        return left + right;
    return adaptive_gauss(g, a, mid, left, 0.5 * tol, depth + 1) +
           adaptive_gauss(g, mid, b, right, 0.5 * tol, depth + 1);
}

double integrate_piece(const std::function<double(double)>& f, const DensityPiece& p,
                       double a, double b) {
    auto g = [&](double u) { return f(u) * p.rate_at(u); };
    if (p.kind == DensityPiece::Kind::constant) {
        // Exact once the caller has split at f's breakpoints; one adaptive
        // pass still guards against unannounced structure in f.
        return adaptive_gauss(g, a, b, gauss7(g, a, b), 1e-13 * std::max(1.0, b - a), 0);
    }
    if (p.kind == DensityPiece::Kind::pole) {
        if (b >= p.end)
            throw std::domain_error("ls_integrate: pole reached without a pole-aware rule");
        // Geometric refinement toward the reset keeps the steep tail accurate.
        double total = 0.0;
        double lo = a;
        while (p.end - lo > 2.0 * (p.end - b)) {
            const double hi = p.end - 0.5 * (p.end - lo);
            total += adaptive_gauss(g, lo, hi, gauss7(g, lo, hi), 1e-14, 0);
            lo = hi;
        }
        total += adaptive_gauss(g, lo, b, gauss7(g, lo, b), 1e-14, 0);
        return total;
    }
    return adaptive_gauss(g, a, b, gauss7(g, a, b), 1e-13 * std::max(1.0, b - a), 0);
}

}   // namespace

double ls_integrate(const std::function<double(double)>& f, const PiecewiseMeasure& m,
                    double s, double t, const std::vector<double>& f_breakpoints) {
    if (t <= s) return 0.0;
    for (double r : m.resets)
        if (r > s && r <= t)
            throw std::domain_error("ls_integrate: interval crosses a reset point");

    std::vector<double> cuts{s, t};
    m.breakpoints_into(s, t, cuts);
    for (double x : f_breakpoints)
        if (x > s && x < t) cuts.push_back(x);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    double total = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double a = cuts[k];
        const double b = cuts[k + 1];
        const double mid = 0.5 * (a + b);
        bool covered = false;
        for (const auto& p : m.pieces) {
            if (mid < p.begin || mid >= p.end) continue;
            total += integrate_piece(f, p, a, b);
            covered = true;
            break;
        }
        if (!covered && m.extrapolate && mid >= m.t_max) {
            const double rate = m.terminal_density();
            if (rate != 0.0) {
                DensityPiece ext{DensityPiece::Kind::constant, a, b, rate, 0.0};
                total += integrate_piece(f, ext, a, b);
            }
        }
    }
    for (const auto& atom : m.atoms)
        if (atom.time > s && atom.time <= t) total += f(atom.time) * atom.mass;
    return total;
}

}   // namespace mstate
