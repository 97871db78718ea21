#pragma once

#include <optional>
#include <vector>

#include "mstate/piecewise.hpp"

namespace mstate {

// Ordered finite set of small non-negative integer state labels. States may
// be flagged absorbing as a hint that model validation verifies.
class StateSpace {
public:
    StateSpace() = default;
    explicit StateSpace(std::vector<int> labels, std::vector<int> absorbing_hint = {});

    std::size_t size() const { return labels_.size(); }
    const std::vector<int>& labels() const { return labels_; }
    const std::vector<int>& absorbing_hint() const { return absorbing_hint_; }

    bool contains(int label) const;
    std::size_t index_of(int label) const;   // throws if unknown
    int label_at(std::size_t index) const { return labels_.at(index); }

private:
    std::vector<int> labels_;
    std::vector<int> absorbing_hint_;
};

// One policy history: a finite marked point sequence (time, state). The
// first point is at time 0; times strictly increase and consecutive states
// differ. The infinite tail after the last recorded point is implicit.
class Path {
public:
    struct Point {
        double time;
        int state;
    };

    Path() = default;
    Path(std::vector<Point> points, std::optional<double> horizon = std::nullopt);

    const std::vector<Point>& points() const { return points_; }
    std::optional<double> horizon() const { return horizon_; }
    bool empty() const { return points_.empty(); }

    int state_at(double t) const;           // Z(t), right-continuous
    double last_jump_at_or_before(double t) const;

private:
    std::vector<Point> points_;
    std::optional<double> horizon_;
};

// The information on which kernels condition: the past strictly before
// current_time plus the current state. last_jump_time is when current_state
// was entered (equal to current_time right after a jump).
struct HistoryContext {
    double current_time = 0.0;
    int current_state = 0;
    double last_jump_time = 0.0;
    Path prior_points;

    static HistoryContext fresh(double time, int state);
    static HistoryContext at(const Path& path, double time);

    double duration() const { return current_time - last_jump_time; }
    void check() const;   // invariants; throws std::invalid_argument
};

// (s,i)-stopped status development: history before s kept; the process is
// constant equal to i from s on. Idempotent in (s, i).
Path stop_path(const Path& path, double s, int state);

struct PathStats {
    std::vector<std::vector<long>> transitions;   // N^{ij}(t), by state index
    std::vector<int> occupancy;                   // I^i(t)
    int state;                                    // Z(t)
};

// Counting matrix, occupation indicators and current state at time t.
// Satisfies I^i(t) - I^i(0) = sum_j (N^{ji}(t) - N^{ij}(t)) exactly.
PathStats path_statistics(const Path& path, double t, const StateSpace& states);

}   // namespace mstate
