#pragma once

#include <vector>

#include "mstate/model.hpp"
#include "mstate/path.hpp"
#include "mstate/rate.hpp"

namespace mstate {

// Survival and sub-distribution kernels for one state row, conditioned on a
// stopped history: p_s^i(t) and p_s^{ij}(t) on [s, infinity]. Built once per
// (s, i, history) and evaluated repeatedly; evaluation is reentrant.
class KernelPair {
public:
    struct Draw {
        bool to_infinity = false;
        double time = 0.0;
        int destination = -1;
    };

    double start() const { return s_; }
    double reset_horizon() const { return rho_; }     // first reset after s (+inf if none)
    double defect() const { return defect_; }          // p_s^i(infinity-)
    const std::vector<int>& destinations() const { return dest_labels_; }

    double survival(double t) const;                   // p_s^i(t)
    double jump(int dest_label, double t) const;       // p_s^{ij}(t)
    double total_jump(double t) const;                 // sum over destinations

    // Inverse-transform sampling: u drives the jump time through p_s^i,
    // u_dest picks the destination from the rate ratios at that time.
    Draw sample(double u, double u_dest) const;

private:
    friend KernelPair make_kernel(
        const std::vector<std::pair<int, const CumulativeRate*>>& row, double s,
        const HistoryContext& ctx, bool with_jump_kernels);

    struct CellRate {                 // one destination's density on a cell
        double c0 = 0.0;              // affine part: c0 + c1 * (t - cell begin)
        double c1 = 0.0;
        double pole_c = 0.0;          // pole part: pole_c / (pole_r - t)
        double pole_r = 0.0;
        bool has_pole = false;
        double at(double a, double t) const;
        double integral(double a, double x, double y) const;   // over (x, y]
    };
    struct Cell {                     // (a, b]; coefficients constant in form
        double a = 0.0, b = 0.0;
        std::vector<CellRate> rates;  // per destination
        bool ends_at_reset = false;
    };

    double log_survival_to(std::size_t node) const;
    double survival_in_cell(std::size_t cell, double t) const;
    void jump_increments(std::size_t cell, double t, std::vector<double>& out) const;

    double s_ = 0.0;
    double rho_ = 0.0;
    std::vector<int> dest_labels_;
    std::vector<Cell> cells_;
    std::vector<double> nodes_;                 // cell boundaries, nodes_[0] == s
    std::vector<double> node_log_surv_;         // log p at nodes (right limits)
    std::vector<double> node_surv_;             // p at nodes (right limits)
    std::vector<std::vector<double>> node_jump_;   // p^{ij} at nodes, per destination
    std::vector<std::vector<double>> node_atom_mass_;   // atom mass per dest at node
    std::vector<double> ext_rates_;             // extrapolated densities beyond the grid
    double ext_total_ = 0.0;
    double defect_ = 0.0;
    bool has_jump_kernels_ = false;
};

// Kernel construction from all rates out of one state. survival_kernel skips
// the jump-kernel accumulation; jump_kernel computes the full pair.
KernelPair survival_kernel(const std::vector<std::pair<int, const CumulativeRate*>>& row,
                           double s, const HistoryContext& ctx);
KernelPair jump_kernel(const std::vector<std::pair<int, const CumulativeRate*>>& row,
                       double s, const HistoryContext& ctx);

// Convenience: kernels for the model's rates out of ctx.current_state.
KernelPair jump_kernel(const CanonicalInsuranceModel& model, double s,
                       const HistoryContext& ctx);

}   // namespace mstate
