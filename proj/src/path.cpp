#include "mstate/path.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mstate {

StateSpace::StateSpace(std::vector<int> labels, std::vector<int> absorbing_hint)
    : labels_(std::move(labels)), absorbing_hint_(std::move(absorbing_hint)) {
    if (labels_.empty()) throw std::invalid_argument("state space: empty");
    for (int l : labels_)
        if (l < 0) throw std::invalid_argument("state space: negative label");
    auto sorted = labels_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("state space: duplicate label");
    for (int l : absorbing_hint_)
        if (!contains(l)) throw std::invalid_argument("state space: absorbing hint not a state");
}

bool StateSpace::contains(int label) const {
    return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

std::size_t StateSpace::index_of(int label) const {
    for (std::size_t k = 0; k < labels_.size(); ++k)
        if (labels_[k] == label) return k;
    throw std::invalid_argument("state space: unknown label " + std::to_string(label));
}

Path::Path(std::vector<Point> points, std::optional<double> horizon)
    : points_(std::move(points)), horizon_(horizon) {
    if (points_.empty()) return;
    if (points_.front().time != 0.0)
        throw std::invalid_argument("path: first point must be at time 0");
    for (std::size_t k = 0; k < points_.size(); ++k) {
        if (!std::isfinite(points_[k].time) || points_[k].time < 0.0)
            throw std::invalid_argument("path: invalid time");
        if (k + 1 < points_.size()) {
            if (points_[k + 1].time <= points_[k].time)
                throw std::invalid_argument("path: times not strictly increasing");
            if (points_[k + 1].state == points_[k].state)
                throw std::invalid_argument("path: consecutive states equal");
        }
    }
}

int Path::state_at(double t) const {
    if (points_.empty()) throw std::logic_error("path: empty");
    int state = points_.front().state;
    for (const auto& p : points_) {
        if (p.time <= t) state = p.state;
        else break;
    }
    return state;
}

double Path::last_jump_at_or_before(double t) const {
    if (points_.empty()) throw std::logic_error("path: empty");
    double jump = points_.front().time;
    for (const auto& p : points_) {
        if (p.time <= t) jump = p.time;
        else break;
    }
    return jump;
}

HistoryContext HistoryContext::fresh(double time, int state) {
    HistoryContext ctx;
    ctx.current_time = time;
    ctx.current_state = state;
    ctx.last_jump_time = time;
    if (time == 0.0) {
        ctx.prior_points = Path({{0.0, state}});
    } else {
        ctx.prior_points = Path({});
    }
    return ctx;
}

HistoryContext HistoryContext::at(const Path& path, double time) {
    HistoryContext ctx;
    ctx.current_time = time;
    ctx.current_state = path.state_at(time);
    ctx.last_jump_time = path.last_jump_at_or_before(time);
    ctx.prior_points = stop_path(path, time, ctx.current_state);
    return ctx;
}

void HistoryContext::check() const {
    if (last_jump_time > current_time)
        throw std::invalid_argument("history: last jump after current time");
    if (!prior_points.empty()) {
        if (prior_points.state_at(current_time) != current_state)
            throw std::invalid_argument("history: prior points disagree with current state");
    }
}

Path stop_path(const Path& path, double s, int state) {
    if (s < 0.0) throw std::invalid_argument("stop_path: s < 0");
    if (s == 0.0) return Path({{0.0, state}});

    std::vector<Path::Point> kept;
    for (const auto& p : path.points())
        if (p.time < s) kept.push_back(p);

    if (kept.empty() || kept.back().state != state) kept.push_back({s, state});
    return Path(std::move(kept));
}

PathStats path_statistics(const Path& path, double t, const StateSpace& states) {
    if (t < 0.0) throw std::invalid_argument("path_statistics: t < 0");
    const std::size_t n = states.size();
    PathStats stats;
    stats.transitions.assign(n, std::vector<long>(n, 0));
    stats.occupancy.assign(n, 0);

    const auto& pts = path.points();
    if (pts.empty()) throw std::invalid_argument("path_statistics: empty path");

    std::size_t current = states.index_of(pts.front().state);
    for (std::size_t k = 1; k < pts.size(); ++k) {
        if (pts[k].time > t) break;
        const std::size_t next = states.index_of(pts[k].state);
        stats.transitions[current][next] += 1;
        current = next;
    }
    stats.occupancy[current] = 1;
    stats.state = states.label_at(current);
    return stats;
}

}   // namespace mstate
