#include "mstate/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mstate {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSurvivalFloor = 1e-300;   // clamp to exact zero below this
constexpr double kLogFloor = -690.0;        // log(kSurvivalFloor), roughly

constexpr double kNodes7[7] = {-0.9491079123427585, -0.7415311855993945, -0.4058451513773972,
                               0.0,                 0.4058451513773972,  0.7415311855993945,
                               0.9491079123427585};
constexpr double kWeights7[7] = {0.1294849661688697, 0.2797053914892766, 0.3818300505051189,
                                 0.4179591836734694, 0.3818300505051189, 0.2797053914892766,
                                 0.1294849661688697};

bool nearly_equal(double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

}   // namespace

double KernelPair::CellRate::at(double a, double t) const {
    double v = c0 + c1 * (t - a);
    if (has_pole) {
        const double d = pole_r - t;
        v += d > 0.0 ? pole_c / d : kInf;
    }
    return v;
}

double KernelPair::CellRate::integral(double a, double x, double y) const {
    double v = c0 * (y - x) + 0.5 * c1 * ((y - a) * (y - a) - (x - a) * (x - a));
    if (has_pole) {
        if (y >= pole_r) return kInf;
        v += pole_c * (std::log(pole_r - x) - std::log(pole_r - y));
    }
    return v;
}

double KernelPair::log_survival_to(std::size_t node) const { return node_log_surv_[node]; }

// p within cell k at t in (a, b): exp(log p(a) - H(a -> t)).
double KernelPair::survival_in_cell(std::size_t cell, double t) const {
    const auto& c = cells_[cell];
    double h = 0.0;
    for (const auto& r : c.rates) h += r.integral(c.a, c.a, t);
    const double log_p = node_log_surv_[cell] - h;
    return log_p < kLogFloor ? 0.0 : std::exp(log_p);
}

double KernelPair::survival(double t) const {
    if (t <= s_) return 1.0;
    if (t >= rho_) return 0.0;
    if (nodes_.size() >= 2 && t >= nodes_.back()) {
        const double p_end = node_surv_.back();
        if (p_end == 0.0 || ext_total_ == 0.0) return p_end;
        const double log_p = node_log_surv_.back() - ext_total_ * (t - nodes_.back());
        return log_p < kLogFloor ? 0.0 : std::exp(log_p);
    }
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
    const std::size_t cell = static_cast<std::size_t>(it - nodes_.begin()) - 1;
    if (cell + 1 < nodes_.size() && t == nodes_[cell + 1]) return node_surv_[cell + 1];
    if (nearly_equal(t, nodes_[cell])) return node_surv_[cell];
    return survival_in_cell(cell, t);
}

// Increments of each p^{ij} over (cell begin, t], excluding any atom at t.
void KernelPair::jump_increments(std::size_t cell, double t, std::vector<double>& out) const {
    const auto& c = cells_[cell];
    const std::size_t n = c.rates.size();
    out.assign(n, 0.0);
    const double p_a = node_surv_[cell];
    if (p_a == 0.0) return;

    const double t_hi = std::min(t, c.b);
    bool any_pole = false, any_linear = false;
    double total_const = 0.0;
    double common_r = 0.0;
    bool common_pole = true;
    for (const auto& r : c.rates) {
        total_const += r.c0;
        if (r.c1 != 0.0) any_linear = true;
        if (r.has_pole) {
            if (!any_pole) common_r = r.pole_r;
            else if (!nearly_equal(common_r, r.pole_r)) common_pole = false;
            any_pole = true;
        }
    }

    auto p_at = [&](double u) {
        double h = 0.0;
        for (const auto& r : c.rates) h += r.integral(c.a, c.a, u);
        const double log_p = node_log_surv_[cell] - h;
        return log_p < kLogFloor ? 0.0 : std::exp(log_p);
    };

    // Ratio-exact cases: the destination share of the hazard is constant on
    // the cell, so each increment is that share of the survival drop.
    const bool constants_only = !any_pole && !any_linear;
    const bool pure_common_pole = any_pole && common_pole && !any_linear && total_const == 0.0;
    if (constants_only) {
        if (total_const <= 0.0) return;
        const double drop = p_a - p_at(t_hi);
        for (std::size_t j = 0; j < n; ++j) out[j] = (c.rates[j].c0 / total_const) * drop;
        return;
    }
    if (pure_common_pole) {
        double total_c = 0.0;
        for (const auto& r : c.rates) total_c += r.pole_c;
        const double p_t = t_hi >= common_r ? 0.0 : p_at(t_hi);
        const double drop = p_a - p_t;
        for (std::size_t j = 0; j < n; ++j) out[j] = (c.rates[j].pole_c / total_c) * drop;
        return;
    }

    // General case: composite Gauss-Legendre on p(u) * lambda_j(u), with
    // geometric refinement toward a terminal pole.
    auto add_segment = [&](double x, double y) {
        const double mid = 0.5 * (x + y);
        const double half = 0.5 * (y - x);
        for (int q = 0; q < 7; ++q) {
            const double u = mid + half * kNodes7[q];
            const double w = kWeights7[q] * half;
            const double pu = p_at(u);
            if (pu == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) out[j] += w * pu * c.rates[j].at(c.a, u);
        }
    };
    const double width = t_hi - c.a;
    const int base_splits = 8;
    if (c.ends_at_reset && t_hi >= c.b - 1e-15 * std::max(1.0, std::abs(c.b))) {
        // Split geometrically toward the reset; the unreachable tail's mass
        // equals the remaining survival, distributed by pole strengths.
        double lo = c.a;
        double seg = width * 0.5;
        double hi = c.a + seg;
        for (int level = 0; level < 60 && p_at(lo) > 1e-18; ++level) {
            for (int k = 0; k < base_splits; ++k) {
                const double x = lo + (hi - lo) * k / base_splits;
                const double y = lo + (hi - lo) * (k + 1) / base_splits;
                add_segment(x, y);
            }
            lo = hi;
            seg *= 0.5;
            hi = lo + seg;
        }
        double tail = p_at(lo);
        if (tail > 0.0) {
            double total_c = 0.0;
            for (const auto& r : c.rates)
                if (r.has_pole) total_c += r.pole_c;
            if (total_c > 0.0)
                for (std::size_t j = 0; j < n; ++j)
                    if (c.rates[j].has_pole) out[j] += tail * c.rates[j].pole_c / total_c;
        }
        return;
    }
    for (int k = 0; k < base_splits; ++k)
        add_segment(c.a + width * k / base_splits, c.a + width * (k + 1) / base_splits);
}

double KernelPair::jump(int dest_label, double t) const {
    if (!has_jump_kernels_) throw std::logic_error("kernel: jump kernels not built");
    std::size_t j = 0;
    for (; j < dest_labels_.size(); ++j)
        if (dest_labels_[j] == dest_label) break;
    if (j == dest_labels_.size()) return 0.0;
    if (t <= s_) return 0.0;
    if (t >= rho_) return node_jump_.back()[j];
    if (t >= nodes_.back()) {
        double v = node_jump_.back()[j];
        if (ext_total_ > 0.0) {
            const double drop = node_surv_.back() - survival(t);
            v += drop * ext_rates_[j] / ext_total_;
        }
        return v;
    }
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
    const std::size_t cell = static_cast<std::size_t>(it - nodes_.begin()) - 1;
    double v = node_jump_[cell][j];
    if (cell + 1 < nodes_.size() && t == nodes_[cell + 1]) return node_jump_[cell + 1][j];
    std::vector<double> inc;
    jump_increments(cell, t, inc);
    return v + inc[j];
}

double KernelPair::total_jump(double t) const {
    double total = 0.0;
    for (int label : dest_labels_) total += jump(label, t);
    return total;
}

KernelPair::Draw KernelPair::sample(double u, double u_dest) const {
    Draw draw;
    u = std::max(u, kSurvivalFloor);
    if (u < defect_ || dest_labels_.empty()) {
        draw.to_infinity = true;
        return draw;
    }

    const std::size_t n_cells = cells_.size();
    std::size_t cell = n_cells;
    for (std::size_t k = 0; k < n_cells; ++k) {
        if (node_surv_[k + 1] <= u) {
            cell = k;
            break;
        }
    }

    auto pick_destination = [&](const std::vector<double>& weights) {
        double total = 0.0;
        for (double w : weights) total += w;
        if (total <= 0.0) return -1;
        double target = u_dest * total;
        for (std::size_t j = 0; j < weights.size(); ++j) {
            target -= weights[j];
            if (target <= 0.0) return dest_labels_[j];
        }
        return dest_labels_.back();
    };

    if (cell == n_cells) {
        // Beyond the explicit grid: constant extrapolated hazard.
        const double p_end = node_surv_.back();
        if (ext_total_ <= 0.0 || p_end == 0.0) {
            draw.to_infinity = true;
            return draw;
        }
        draw.time = nodes_.back() + (node_log_surv_.back() - std::log(u)) / ext_total_;
        draw.destination = pick_destination(ext_rates_);
        return draw;
    }

    const auto& c = cells_[cell];
    double h_cell = 0.0;
    for (const auto& r : c.rates) h_cell += r.integral(c.a, c.a, c.b);
    const double log_p_before_atom = node_log_surv_[cell] - h_cell;
    const double p_before_atom =
        log_p_before_atom < kLogFloor ? 0.0 : std::exp(log_p_before_atom);

    if (p_before_atom <= u) {
        // Continuous crossing inside (a, b).
        const double log_u = std::log(u);
        double tau;
        bool any_pole = false, any_linear = false;
        double total_const = 0.0, total_pole = 0.0, common_r = 0.0;
        bool common_pole = true;
        for (const auto& r : c.rates) {
            total_const += r.c0;
            if (r.c1 != 0.0) any_linear = true;
            if (r.has_pole) {
                if (!any_pole) common_r = r.pole_r;
                else if (!nearly_equal(common_r, r.pole_r)) common_pole = false;
                any_pole = true;
                total_pole += r.pole_c;
            }
        }
        if (!any_pole && !any_linear && total_const > 0.0) {
            tau = c.a + (node_log_surv_[cell] - log_u) / total_const;
        } else if (any_pole && common_pole && !any_linear && total_const == 0.0) {
            tau = common_r - (common_r - c.a) *
                                 std::exp((log_u - node_log_surv_[cell]) / total_pole);
        } else {
            double lo = c.a, hi = c.b;
            if (c.ends_at_reset) hi = c.b - 1e-16 * std::max(1.0, std::abs(c.b));
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                double h = 0.0;
                for (const auto& r : c.rates) h += r.integral(c.a, c.a, mid);
                if (node_log_surv_[cell] - h > log_u) lo = mid;
                else hi = mid;
                if (hi - lo <= 1e-15 * std::max(1.0, std::abs(hi))) break;
            }
            tau = 0.5 * (lo + hi);
        }
        tau = std::min(std::max(tau, std::nextafter(c.a, kInf)), c.b);
        draw.time = tau;
        std::vector<double> weights(dest_labels_.size());
        bool diverged = false;
        for (std::size_t j = 0; j < weights.size(); ++j) {
            weights[j] = c.rates[j].at(c.a, tau);
            if (std::isinf(weights[j])) diverged = true;
        }
        if (diverged) {
            for (std::size_t j = 0; j < weights.size(); ++j)
                weights[j] = c.rates[j].has_pole ? c.rates[j].pole_c : 0.0;
        }
        draw.destination = pick_destination(weights);
        return draw;
    }

    // Atom at the right node.
    draw.time = c.b;
    draw.destination = pick_destination(node_atom_mass_[cell + 1]);
    return draw;
}

KernelPair make_kernel(const std::vector<std::pair<int, const CumulativeRate*>>& row, double s,
                       const HistoryContext& ctx, bool with_jump_kernels) {
    if (s < ctx.last_jump_time)
        throw std::invalid_argument("kernel: s before the last jump of the history");

    KernelPair k;
    k.s_ = s;
    k.has_jump_kernels_ = with_jump_kernels;

    std::vector<PiecewiseMeasure> slices;
    for (const auto& [label, rate] : row) {
        k.dest_labels_.push_back(label);
        slices.push_back(rate->slice(ctx));
    }
    const std::size_t n = slices.size();

    double rho = kInf;
    for (const auto& m : slices) rho = std::min(rho, m.first_reset_after(s));
    k.rho_ = rho;

    double t_end = s;
    for (const auto& m : slices) {
        t_end = std::max(t_end, m.t_max);
        for (const auto& a : m.atoms) t_end = std::max(t_end, a.time);
    }
    t_end = std::min(t_end, rho);
    if (t_end <= s) t_end = s;

    std::vector<double> nodes{s};
    for (const auto& m : slices) {
        std::vector<double> pts;
        m.breakpoints_into(s, t_end, pts);
        for (double p : pts) nodes.push_back(p);
    }
    if (t_end > s) nodes.push_back(t_end);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end(),
                            [](double a, double b) { return nearly_equal(a, b); }),
                nodes.end());
    k.nodes_ = nodes;

    // Cells with per-destination coefficients.
    for (std::size_t c = 0; c + 1 < nodes.size(); ++c) {
        KernelPair::Cell cell;
        cell.a = nodes[c];
        cell.b = nodes[c + 1];
        const double mid = 0.5 * (cell.a + cell.b);
        for (std::size_t j = 0; j < n; ++j) {
            KernelPair::CellRate cr;
            bool covered = false;
            for (const auto& p : slices[j].pieces) {
                if (mid < p.begin || mid >= p.end) continue;
                covered = true;
                switch (p.kind) {
                    case DensityPiece::Kind::constant:
                        cr.c0 = p.value;
                        break;
                    case DensityPiece::Kind::linear:
                        cr.c0 = p.rate_at(cell.a);
                        cr.c1 = p.slope;
                        break;
                    case DensityPiece::Kind::pole:
                        cr.has_pole = true;
                        cr.pole_c = p.value;
                        cr.pole_r = p.end;
                        if (nearly_equal(p.end, cell.b)) cell.ends_at_reset = true;
                        break;
                }
                break;
            }
            if (!covered && slices[j].extrapolate && mid >= slices[j].t_max)
                cr.c0 = slices[j].terminal_density();
            cell.rates.push_back(cr);
        }
        k.cells_.push_back(std::move(cell));
    }

    // Atom masses per node (atoms exactly at s are excluded; an atom at a
    // reset is not probability mass).
    k.node_atom_mass_.assign(nodes.size(), std::vector<double>(n, 0.0));
    for (std::size_t v = 1; v < nodes.size(); ++v) {
        if (rho < kInf && nearly_equal(nodes[v], rho)) continue;
        for (std::size_t j = 0; j < n; ++j)
            k.node_atom_mass_[v][j] = slices[j].atom_mass_at(nodes[v]);
    }

    // Survival accumulation in log space.
    k.node_log_surv_.assign(nodes.size(), 0.0);
    k.node_surv_.assign(nodes.size(), 1.0);
    for (std::size_t c = 0; c + 1 < nodes.size(); ++c) {
        double h = 0.0;
        for (const auto& r : k.cells_[c].rates) h += r.integral(k.cells_[c].a, k.cells_[c].a,
                                                               k.cells_[c].b);
        double log_p = k.node_log_surv_[c] - h;
        double atom_total = 0.0;
        for (std::size_t j = 0; j < n; ++j) atom_total += k.node_atom_mass_[c + 1][j];
        if (atom_total > 1.0 + 1e-12)
            throw std::domain_error("kernel: simultaneous atom mass exceeds one");
        if (atom_total >= 1.0 - 1e-15) log_p = -kInf;
        else if (atom_total > 0.0) log_p += std::log1p(-atom_total);
        k.node_log_surv_[c + 1] = log_p;
        k.node_surv_[c + 1] = log_p < kLogFloor ? 0.0 : std::exp(log_p);
    }

    // Extrapolated hazard beyond the grid (only without a reset ahead).
    k.ext_rates_.assign(n, 0.0);
    k.ext_total_ = 0.0;
    if (rho == kInf) {
        for (std::size_t j = 0; j < n; ++j) {
            k.ext_rates_[j] = slices[j].extrapolate ? slices[j].terminal_density() : 0.0;
            k.ext_total_ += k.ext_rates_[j];
        }
    }

    const double p_end = k.node_surv_.back();
    k.defect_ = (rho < kInf || k.ext_total_ > 0.0) ? 0.0 : p_end;

    if (with_jump_kernels) {
        k.node_jump_.assign(nodes.size(), std::vector<double>(n, 0.0));
        std::vector<double> inc;
        for (std::size_t c = 0; c + 1 < nodes.size(); ++c) {
            k.jump_increments(c, nodes[c + 1], inc);
            double h = 0.0;
            for (const auto& r : k.cells_[c].rates)
                h += r.integral(k.cells_[c].a, k.cells_[c].a, k.cells_[c].b);
            const double lp = k.node_log_surv_[c] - h;
            const double p_pre_atom = lp < kLogFloor ? 0.0 : std::exp(lp);
            for (std::size_t j = 0; j < n; ++j) {
                k.node_jump_[c + 1][j] = k.node_jump_[c][j] + inc[j] +
                                         p_pre_atom * k.node_atom_mass_[c + 1][j];
            }
        }
    }
    return k;
}

KernelPair survival_kernel(const std::vector<std::pair<int, const CumulativeRate*>>& row,
                           double s, const HistoryContext& ctx) {
    return make_kernel(row, s, ctx, false);
}

KernelPair jump_kernel(const std::vector<std::pair<int, const CumulativeRate*>>& row, double s,
                       const HistoryContext& ctx) {
    return make_kernel(row, s, ctx, true);
}

KernelPair jump_kernel(const CanonicalInsuranceModel& model, double s,
                       const HistoryContext& ctx) {
    return make_kernel(model.rates_out_of(ctx.current_state), s, ctx, true);
}

}   // namespace mstate
