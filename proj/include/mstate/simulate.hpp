#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mstate/kernels.hpp"
#include "mstate/model.hpp"
#include "mstate/path.hpp"

namespace mstate {

// Deterministic per-path random stream: a splitmix64-keyed xoshiro256++
// generator, so path k's draws depend only on (seed, k) and never on thread
// scheduling.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t path_index);
    std::uint64_t next_u64();
    double next_uniform();   // in (0, 1)

private:
    std::uint64_t state_[4];
};

struct SimConfig {
    std::uint64_t n_paths = 1;
    std::uint64_t seed = 0;
    double horizon = 0.0;                        // 0: use the model horizon
    std::optional<HistoryContext> start;          // default: draw from alpha at 0
    unsigned threads = 1;

    double effective_horizon(const CanonicalInsuranceModel& model) const {
        return horizon > 0.0 ? horizon : model.horizon;
    }
};

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t n = 0;
};

// Next-jump draw from the stopped history: inverse transform through the
// survival kernel; +infinity when the draw lands in the defect mass.
struct JumpDraw {
    bool has_jump = false;
    double time = 0.0;
    int destination = -1;
};
JumpDraw sample_next_jump(const CanonicalInsuranceModel& model, double s,
                          const HistoryContext& ctx, RngStream& rng);

// One full path: initial state from alpha (or the given start context),
// then iterated next-jump sampling, truncated at the horizon.
Path sample_path(const CanonicalInsuranceModel& model, const SimConfig& config,
                 std::uint64_t path_index);

// Monte Carlo estimate of P_s^i[Z(t) = j].
McEstimate mc_transition_probability(const CanonicalInsuranceModel& model, double s, int state,
                                     const HistoryContext& ctx, double t, int target,
                                     const SimConfig& config);

// Monte Carlo estimate of the state-wise prospective reserve V^i(s): the
// expected discounted payments over (s, T] along paths from the stopped
// history. Refuses models with unresolved reserve-dependent payments.
McEstimate mc_reserve(const CanonicalInsuranceModel& model, double s, int state,
                      const HistoryContext& ctx, const SimConfig& config);

// Estimate of E[ int Y dN^{jk} - int Y I^j(u-) Lambda^{jk}(du) ] over the
// interval; straddles zero when the compensator is correct.
McEstimate martingale_residual(const CanonicalInsuranceModel& model,
                               const std::function<double(double)>& test_fn, int from, int to,
                               double interval_begin, double interval_end,
                               const SimConfig& config);

// Discounted payments of one realized path over (s, T].
double path_liability(const CanonicalInsuranceModel& model, const Path& path, double s,
                      double horizon);

// CSV path dump, one record per jump: path_id,time,from,to.
std::string dump_paths_csv(const CanonicalInsuranceModel& model, const SimConfig& config);

}   // namespace mstate
