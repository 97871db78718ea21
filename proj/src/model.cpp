#include "mstate/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mstate {

const PiecewiseMeasure* CashFlowCanonical::sojourn_for(int state) const {
    auto it = sojourn.find(state);
    return it == sojourn.end() ? nullptr : &it->second;
}

const PiecewiseFunction* CashFlowCanonical::transition_for(int from, int to) const {
    auto it = transition.find({from, to});
    return it == transition.end() ? nullptr : &it->second;
}

const PiecewiseMeasure* InterestCanonical::phi_for(int state) const {
    auto it = phi.find(state);
    return it == phi.end() ? nullptr : &it->second;
}

bool ValidationReport::has(const std::string& code) const {
    for (const auto& issue : issues)
        if (issue.code == code) return true;
    return false;
}

std::string ValidationReport::to_string() const {
    std::ostringstream out;
    for (const auto& issue : issues) out << issue.code << ": " << issue.detail << "\n";
    return out.str();
}

const CumulativeRate* CanonicalInsuranceModel::rate_for(int from, int to) const {
    auto it = lambda.find({from, to});
    return it == lambda.end() ? nullptr : &it->second;
}

std::vector<std::pair<int, const CumulativeRate*>> CanonicalInsuranceModel::rates_out_of(
    int from) const {
    std::vector<std::pair<int, const CumulativeRate*>> out;
    for (const auto& [key, rate] : lambda)
        if (key.first == from) out.emplace_back(key.second, &rate);
    return out;
}

Regime CanonicalInsuranceModel::regime() const {
    Regime r = Regime::markov;
    for (const auto& [key, rate] : lambda) {
        if (rate.dependence == Dependence::path_dependent) return Regime::path_dependent;
        if (rate.dependence == Dependence::semi_markov) r = Regime::semi_markov;
    }
    return r;
}

bool CanonicalInsuranceModel::is_discrete() const {
    for (const auto& [key, rate] : lambda) {
        if (rate.dependence != Dependence::markov) return false;
        if (!rate.base.pieces.empty() || !rate.base.resets.empty()) return false;
        for (const auto& a : rate.base.atoms)
            if (a.time != std::floor(a.time)) return false;
    }
    return true;
}

double CanonicalInsuranceModel::total_atom_mass_out_of(int from, double time) const {
    double mass = 0.0;
    for (const auto& [key, rate] : lambda) {
        if (key.first != from || rate.dependence == Dependence::path_dependent) continue;
        mass += rate.base.atom_mass_at(time);
    }
    return mass;
}

namespace {

void check_measure_numerics(const PiecewiseMeasure& m, const std::string& where) {
    for (const auto& p : m.pieces)
        if (std::isnan(p.value) || std::isnan(p.slope))
            throw std::invalid_argument(where + ": NaN density");
    for (const auto& a : m.atoms)
        if (std::isnan(a.mass) || std::isnan(a.time))
            throw std::invalid_argument(where + ": NaN atom");
}

bool density_negative_somewhere(const PiecewiseMeasure& m) {
    for (const auto& p : m.pieces) {
        switch (p.kind) {
            case DensityPiece::Kind::constant:
                if (p.value < 0.0) return true;
                break;
            case DensityPiece::Kind::linear:
                if (p.value < 0.0 || p.rate_at(p.end) < 0.0) return true;
                break;
            case DensityPiece::Kind::pole:
                if (p.value <= 0.0) return true;
                break;
        }
    }
    return false;
}

// Cycle detection on the subgraph of unbounded (pole-bearing) transitions.
bool unbounded_subgraph_has_cycle(const CanonicalInsuranceModel& model,
                                  std::vector<int>& cycle_witness) {
    const std::size_t n = model.states.size();
    std::vector<std::vector<std::size_t>> adjacency(n);
    for (const auto& [key, rate] : model.lambda)
        if (rate.has_pole())
            adjacency[model.states.index_of(key.first)].push_back(
                model.states.index_of(key.second));

    std::vector<int> color(n, 0);   // 0 unvisited, 1 on stack, 2 done
    std::vector<std::size_t> stack;
    bool found = false;

    std::function<void(std::size_t)> dfs = [&](std::size_t u) {
        if (found) return;
        color[u] = 1;
        stack.push_back(u);
        for (std::size_t v : adjacency[u]) {
            if (found) return;
            if (color[v] == 1) {
                for (auto it = std::find(stack.begin(), stack.end(), v); it != stack.end(); ++it)
                    cycle_witness.push_back(model.states.label_at(*it));
                found = true;
                return;
            }
            if (color[v] == 0) dfs(v);
        }
        stack.pop_back();
        color[u] = 2;
    };
    for (std::size_t u = 0; u < n && !found; ++u)
        if (color[u] == 0) dfs(u);
    return found;
}

}   // namespace

ValidationReport validate_model(const CanonicalInsuranceModel& model) {
    ValidationReport report;
    auto flag = [&](const std::string& code, const std::string& detail) {
        report.issues.push_back({code, detail});
    };

    if (!(model.horizon > 0.0) || !std::isfinite(model.horizon))
        flag("horizon", "horizon must be a positive finite time");

    if (model.alpha.size() != model.states.size()) {
        flag("alpha", "alpha size does not match state count");
    } else {
        double sum = 0.0;
        bool bad_entry = false;
        for (double a : model.alpha) {
            if (std::isnan(a)) throw std::invalid_argument("alpha: NaN entry");
            if (a < 0.0 || a > 1.0) bad_entry = true;
            sum += a;
        }
        if (bad_entry) flag("alpha", "alpha entries must lie in [0, 1]");
        if (std::abs(sum - 1.0) > 1e-12) {
            std::ostringstream msg;
            msg << "alpha sums to " << sum << ", expected 1";
            flag("alpha", msg.str());
        }
    }

    // Transition rates: assumptions (b) and (c), plus basic sanity.
    for (const auto& [key, rate] : model.lambda) {
        const std::string name =
            "lambda " + std::to_string(key.first) + "->" + std::to_string(key.second);
        if (!model.states.contains(key.first) || !model.states.contains(key.second)) {
            flag("states", name + " references an unknown state");
            continue;
        }
        if (key.first == key.second) flag("states", name + " is a self-transition");
        if (rate.dependence == Dependence::path_dependent) continue;

        check_measure_numerics(rate.base, name);
        if (density_negative_somewhere(rate.base))
            flag("negative_density", name + " has a negative density segment");
        for (const auto& a : rate.base.atoms) {
            if (a.time <= 0.0) flag("assumption_b", name + " has an atom at time <= 0");
            if (a.mass < 0.0 || a.mass > 1.0)
                flag("assumption_b", name + " atom mass outside [0, 1]");
        }
        for (double r : rate.base.resets) {
            bool pole_ends_here = false;
            for (const auto& p : rate.base.pieces)
                if (p.kind == DensityPiece::Kind::pole &&
                    std::abs(p.end - r) <= 1e-12 * std::max(1.0, std::abs(r)))
                    pole_ends_here = true;
            if (!pole_ends_here)
                flag("assumption_c", name + " declares a reset without a pole ending there");
        }
    }

    // Assumption (b): simultaneous atoms out of one state may not exceed
    // total mass one. Grouped per dependence class, since markov atoms live
    // in calendar time and semi-markov atoms in duration.
    for (int i : model.states.labels()) {
        for (int cls = 0; cls < 2; ++cls) {
            const Dependence dep = cls == 0 ? Dependence::markov : Dependence::semi_markov;
            std::vector<double> times;
            for (const auto& [key, rate] : model.lambda)
                if (key.first == i && rate.dependence == dep)
                    for (const auto& a : rate.base.atoms) times.push_back(a.time);
            std::sort(times.begin(), times.end());
            times.erase(std::unique(times.begin(), times.end()), times.end());
            for (double t : times) {
                double mass = 0.0;
                for (const auto& [key, rate] : model.lambda)
                    if (key.first == i && rate.dependence == dep)
                        mass += rate.base.atom_mass_at(t);
                if (mass > 1.0 + 1e-12) {
                    std::ostringstream msg;
                    msg << "state " << i << ": simultaneous atom mass " << mass << " at t=" << t
                        << " exceeds 1";
                    flag("assumption_b", msg.str());
                }
            }
        }
    }

    // Assumption (d): every cycle must contain a bounded rate, i.e. the
    // subgraph of unbounded rates is acyclic.
    std::vector<int> cycle;
    if (unbounded_subgraph_has_cycle(model, cycle)) {
        std::ostringstream msg;
        msg << "cycle of unbounded transition rates through states";
        for (int s : cycle) msg << " " << s;
        flag("assumption_d", msg.str());
    }

    // Absorbing hints must have no outgoing activity.
    for (int s : model.states.absorbing_hint()) {
        for (const auto& [key, rate] : model.lambda)
            if (key.first == s && !rate.is_zero())
                flag("absorbing", "state " + std::to_string(s) +
                                      " hinted absorbing but has an outgoing rate");
    }

    // Interest: atoms above -1, no poles, implied R bounded on compacts.
    for (const auto& [state, phi] : model.interest.phi) {
        const std::string name = "phi " + std::to_string(state);
        check_measure_numerics(phi, name);
        for (const auto& a : phi.atoms)
            if (a.mass <= -1.0) flag("interest_atom", name + " has an atom <= -1");
        for (const auto& p : phi.pieces)
            if (p.kind == DensityPiece::Kind::pole)
                flag("interest_pole", name + " has a pole segment; R must stay bounded");
    }

    // Sojourn payments: finite variation (no poles) suffices for the
    // supported segment types.
    for (const auto& [state, b] : model.cashflow.sojourn) {
        const std::string name = "sojourn " + std::to_string(state);
        check_measure_numerics(b, name);
        for (const auto& p : b.pieces)
            if (p.kind == DensityPiece::Kind::pole)
                flag("sojourn_pole", name + " has a pole segment");
    }

    // Reserve-dependent payment coefficients (Theorem-style bounds).
    for (const auto& rd : model.cashflow.reserve_dependence) {
        const std::string name = "reserve_dependence " + std::to_string(rd.from) + "->" +
                                 std::to_string(rd.to);
        for (const auto& seg : rd.a1.segs) {
            const double lo = std::min(seg.value, seg.value + seg.slope * (seg.end - seg.begin));
            const double hi = std::max(seg.value, seg.value + seg.slope * (seg.end - seg.begin));
            if (lo < 0.0) flag("reserve_dependence", name + ": a1 negative");
            if (hi >= 1.0) flag("reserve_dependence", name + ": a1 not bounded below 1");
        }
        for (const auto& seg : rd.a0.segs) {
            const double lo = std::min(seg.value, seg.value + seg.slope * (seg.end - seg.begin));
            if (lo < 0.0) flag("reserve_dependence", name + ": a0 negative");
        }
        const PiecewiseMeasure* phi = model.interest.phi_for(rd.from);
        for (const auto& a : rd.sojourn_reserve.atoms) {
            const double dphi = phi ? phi->atom_mass_at(a.time) : 0.0;
            if (dphi - a.mass <= -1.0)
                flag("reserve_dependence", name + ": Delta(Phi - A1) <= -1 at an atom");
        }
    }

    return report;
}

}   // namespace mstate
