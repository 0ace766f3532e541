#include "distobs/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "distobs/errors.hpp"

namespace distobs {

namespace {

constexpr double kStepGuard = 1.0;
constexpr double kStepFraction = 0.05;

// Constancy pieces further split at the requested breakpoints.
std::vector<Piece> split_pieces(const SwitchingSignal& signal, std::vector<double> breakpoints) {
    std::sort(breakpoints.begin(), breakpoints.end());
    std::vector<Piece> out;
    for (const auto& piece : signal.pieces()) {
        double start = piece.start;
        auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), start);
        for (; it != breakpoints.end() && *it < piece.end; ++it) {
            out.push_back({start, *it, piece.value});
            start = *it;
        }
        out.push_back({start, piece.end, piece.value});
    }
    return out;
}

template <typename Derivative>
Trajectory run_rk4(const SwitchingSignal& signal, const Vector& initial, double step,
                   const SimOptions& options, Derivative&& f) {
    Trajectory traj;
    Vector x = initial;
    traj.times.push_back(0.0);
    traj.states.push_back(x);
    double last_recorded = 0.0;
    for (const auto& piece : split_pieces(signal, options.breakpoints)) {
        const double len = piece.end - piece.start;
        const long steps = std::max(1L, static_cast<long>(std::ceil(len / step - 1e-9)));
        const double h = len / static_cast<double>(steps);
        for (long s = 1; s <= steps; ++s) {
            const Vector k1 = f(piece.value, x);
            const Vector k2 = f(piece.value, x + 0.5 * h * k1);
            const Vector k3 = f(piece.value, x + 0.5 * h * k2);
            const Vector k4 = f(piece.value, x + h * k3);
            x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            const bool piece_end = s == steps;
            const double t = piece_end ? piece.end : piece.start + static_cast<double>(s) * h;
            if (piece_end || t - last_recorded >= options.sample_interval) {
                traj.times.push_back(t);
                traj.states.push_back(x);
                last_recorded = t;
            }
        }
    }
    return traj;
}

void check_step(double step, double norm, const char* what) {
    if (!(step > 0.0)) throw InvalidArgument(std::string(what) + ": step must be positive");
    if (step * norm > kStepGuard) {
        std::ostringstream msg;
        msg << what << ": step " << step << " times mode norm " << norm << " exceeds "
            << kStepGuard;
        throw StepTooLarge(msg.str());
    }
}

void check_modes(const SwitchingSignal& signal, std::size_t family_size) {
    if (static_cast<std::size_t>(signal.max_value()) >= family_size) {
        throw InvalidArgument("switching signal refers to graph " + std::to_string(signal.max_value()) +
                              " but the family has " + std::to_string(family_size));
    }
}

}  // namespace

std::vector<double> Trajectory::norms() const {
    std::vector<double> out;
    out.reserve(states.size());
    for (const auto& s : states) out.push_back(s.norm());
    return out;
}

std::vector<double> Trajectory::block_norms(int block) const {
    std::vector<double> out;
    out.reserve(states.size());
    for (const auto& s : states) out.push_back(s.segment(block * block_size, block_size).norm());
    return out;
}

double default_step(const ErrorModel& model, const SwitchingSignal& signal) {
    const double by_piece = signal.shortest_piece() / 10.0;
    const double norm = model.max_mode_norm();
    return norm > 0.0 ? std::min(kStepFraction / norm, by_piece) : by_piece;
}

Trajectory integrate_error(const ErrorModel& model, const SwitchingSignal& signal, const Vector& e0,
                           double step, const SimOptions& options) {
    check_modes(signal, static_cast<std::size_t>(model.mode_count()));
    if (e0.size() != model.dim()) throw InvalidArgument("integrate_error: e0 has the wrong size");
    check_step(step, model.max_mode_norm(), "integrate_error");
    Trajectory traj = run_rk4(signal, e0, step, options,
                              [&](int p, const Vector& e) -> Vector { return model.mode(p) * e; });
    traj.block_size = model.design().state_dim;
    for (int i = 0; i < model.design().agent_count; ++i) traj.labels.push_back("e" + std::to_string(i + 1));
    return traj;
}

Trajectory integrate_observer(const Plant& plant, const ObserverDesign& design,
                              const GraphFamily& family, const SwitchingSignal& signal, double g,
                              const Vector& x0, const std::vector<Vector>& xhat0, double step,
                              const SimOptions& options) {
    check_modes(signal, family.size());
    const int n = plant.state_dim();
    const int m = plant.agent_count();
    if (x0.size() != n || static_cast<int>(xhat0.size()) != m) {
        throw InvalidArgument("integrate_observer: initial conditions do not match the plant");
    }
    double norm = norm2(plant.A());
    for (int p = 0; p < static_cast<int>(family.size()); ++p) {
        norm = std::max(norm, norm2(mode_matrix(design, family, g, p)));
    }
    check_step(step, norm, "integrate_observer");

    Vector initial(static_cast<Eigen::Index>(n) * (m + 1));
    initial.head(n) = x0;
    for (int i = 0; i < m; ++i) {
        if (xhat0[static_cast<std::size_t>(i)].size() != n) {
            throw InvalidArgument("integrate_observer: estimator initial state has the wrong size");
        }
        initial.segment(static_cast<Eigen::Index>(i + 1) * n, n) = xhat0[static_cast<std::size_t>(i)];
    }

    std::vector<std::vector<std::vector<int>>> neighbors(family.size());
    for (std::size_t p = 0; p < family.size(); ++p) {
        for (int i = 0; i < m; ++i) neighbors[p].push_back(family[p].neighbors(i));
    }

    auto f = [&](int p, const Vector& z) -> Vector {
        Vector dz(z.size());
        const auto x = z.head(n);
        dz.head(n) = plant.A() * x;
        for (int i = 0; i < m; ++i) {
            const auto& agent = design.agents[static_cast<std::size_t>(i)];
            const auto xi = z.segment(static_cast<Eigen::Index>(i + 1) * n, n);
            const Vector yi = plant.channel(i) * x;
            const auto& nbrs = neighbors[static_cast<std::size_t>(p)][static_cast<std::size_t>(i)];
            Vector avg = Vector::Zero(n);
            for (int j : nbrs) avg += z.segment(static_cast<Eigen::Index>(j + 1) * n, n);
            avg /= static_cast<double>(nbrs.size());
            dz.segment(static_cast<Eigen::Index>(i + 1) * n, n) =
                agent.closed_loop * xi - agent.K * yi - g * agent.P * (xi - avg);
        }
        return dz;
    };
    Trajectory traj = run_rk4(signal, initial, step, options, f);
    traj.block_size = n;
    traj.labels.push_back("x");
    for (int i = 0; i < m; ++i) traj.labels.push_back("x" + std::to_string(i + 1));
    return traj;
}

Trajectory observer_errors(const Trajectory& observer, int agent_count) {
    const int n = observer.block_size;
    Trajectory out;
    out.times = observer.times;
    out.block_size = n;
    for (int i = 0; i < agent_count; ++i) out.labels.push_back("e" + std::to_string(i + 1));
    out.states.reserve(observer.states.size());
    for (const auto& z : observer.states) {
        Vector e(static_cast<Eigen::Index>(n) * agent_count);
        for (int i = 0; i < agent_count; ++i) {
            e.segment(static_cast<Eigen::Index>(i) * n, n) =
                z.segment(static_cast<Eigen::Index>(i + 1) * n, n) - z.head(n);
        }
        out.states.push_back(std::move(e));
    }
    return out;
}

std::pair<Trajectory, Trajectory> project_coordinates(const ObserverDesign& design,
                                                      const Trajectory& errors) {
    Trajectory z1;
    Trajectory z2;
    z1.times = errors.times;
    z2.times = errors.times;
    z1.labels = {"z1"};
    z2.labels = {"z2"};
    z1.block_size = static_cast<int>(design.annihilator.rows());
    z2.block_size = static_cast<int>(design.basis.cols());
    z1.states.reserve(errors.size());
    z2.states.reserve(errors.size());
    const Matrix Vt = design.basis.transpose();
    for (const auto& e : errors.states) {
        z1.states.push_back(design.annihilator * e);
        z2.states.push_back(Vt * e);
    }
    return {std::move(z1), std::move(z2)};
}

RateEstimate estimate_rate(const std::vector<double>& times, const std::vector<double>& norms,
                           double burn_in_fraction, double floor) {
    if (times.size() != norms.size()) throw InvalidArgument("estimate_rate: size mismatch");
    std::size_t usable_end = 0;
    while (usable_end < norms.size() && norms[usable_end] > floor) ++usable_end;
    if (usable_end < 2) throw DegenerateFit("estimate_rate: trajectory is at the floor from the start");
    const double t_eff = times[usable_end - 1];
    const double t_start = times.front() + burn_in_fraction * (t_eff - times.front());

    // Plain least-squares line fit of log-norm against time.
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
    int count = 0;
    for (std::size_t k = 0; k < usable_end; ++k) {
        if (times[k] < t_start) continue;
        const double x = times[k];
        const double y = std::log(norms[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
        ++count;
    }
    if (count < 10) {
        throw DegenerateFit("estimate_rate: only " + std::to_string(count) + " usable samples");
    }
    const double nn = count;
    const double cov = sxy - sx * sy / nn;
    const double var_x = sxx - sx * sx / nn;
    const double var_y = syy - sy * sy / nn;
    if (!(var_x > 0.0)) throw DegenerateFit("estimate_rate: samples share a single time");
    const double slope = cov / var_x;

    RateEstimate r;
    r.lambda_fit = -slope;
    r.r_squared = var_y > 0.0 ? std::clamp(cov * cov / (var_x * var_y), 0.0, 1.0) : 1.0;
    r.t_start = t_start;
    r.t_end = t_eff;
    r.samples = count;
    return r;
}

RateEstimate estimate_rate(const Trajectory& trajectory, double burn_in_fraction, double floor) {
    return estimate_rate(trajectory.times, trajectory.norms(), burn_in_fraction, floor);
}

double z1_autonomy_check(const ObserverDesign& design, const GraphFamily& family,
                         const SwitchingSignal& signal_a, const SwitchingSignal& signal_b, double g_a,
                         double g_b, const Vector& e0, double step) {
    const double horizon = std::min(signal_a.horizon(), signal_b.horizon());
    SimOptions options;
    constexpr int kGrid = 100;
    for (int k = 1; k < kGrid; ++k) options.breakpoints.push_back(horizon * k / kGrid);

    const ErrorModel model_a(design, family, g_a);
    const ErrorModel model_b(design, family, g_b);
    const Trajectory ta = integrate_error(model_a, signal_a, e0, step, options);
    const Trajectory tb = integrate_error(model_b, signal_b, e0, step, options);

    // Both runs record every breakpoint with bit-identical times.
    double worst = 0.0;
    std::size_t j = 0;
    for (std::size_t i = 0; i < ta.size(); ++i) {
        while (j < tb.size() && tb.times[j] < ta.times[i]) ++j;
        if (j == tb.size()) break;
        if (tb.times[j] != ta.times[i]) continue;
        worst = std::max(worst, (design.annihilator * (ta.states[i] - tb.states[j])).norm());
    }
    return worst;
}

void write_error_csv(std::ostream& out, const ObserverDesign& design, const Trajectory& errors) {
    const int n = design.state_dim;
    const int m = design.agent_count;
    out << "t";
    for (int i = 1; i <= m; ++i) {
        for (int j = 1; j <= n; ++j) out << ",e_" << i << "_" << j;
    }
    out << ",norm_e,z1_norm,z2_norm\n";
    const Matrix Vt = design.basis.transpose();
    out << std::setprecision(12);
    for (std::size_t k = 0; k < errors.size(); ++k) {
        const Vector& e = errors.states[k];
        out << errors.times[k];
        for (Eigen::Index r = 0; r < e.size(); ++r) out << ',' << e(r);
        out << ',' << e.norm() << ',' << (design.annihilator * e).norm() << ',' << (Vt * e).norm()
            << '\n';
    }
}

}  // namespace distobs
