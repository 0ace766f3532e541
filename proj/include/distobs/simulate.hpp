#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "distobs/errormodel.hpp"
#include "distobs/plant.hpp"
#include "distobs/switching.hpp"

namespace distobs {

/// Sampled solution of a linear ODE. Every switch instant of the driving
/// signal appears in `times`.
struct Trajectory {
    std::vector<double> times;
    std::vector<Vector> states;
    /// Role tag per block of the state vector, e.g. "x", "x1", ... or "e1", ...
    std::vector<std::string> labels;
    int block_size = 0;

    std::size_t size() const { return times.size(); }
    std::vector<double> norms() const;
    /// Euclidean norm of one labelled block over time.
    std::vector<double> block_norms(int block) const;
};

struct SimOptions {
    /// Minimum spacing between recorded samples; 0 records every step.
    double sample_interval = 0.0;
    /// Extra instants at which steps are split and a sample is recorded.
    std::vector<double> breakpoints;
};

struct RateEstimate {
    double lambda_fit = 0.0;
    double r_squared = 0.0;
    double t_start = 0.0;
    double t_end = 0.0;
    int samples = 0;
};

inline constexpr double kDefaultRateFloor = 1e-13;
inline constexpr double kDefaultBurnIn = 0.1;

/// min(0.05 / max_p ||M(p)||, shortest constancy interval / 10).
double default_step(const ErrorModel& model, const SwitchingSignal& signal);

/// Classical RK4 on e' = M(sigma(t)) e with steps split at every switch time.
/// StepTooLarge if step * ||M(p)|| > 1 for some mode.
Trajectory integrate_error(const ErrorModel& model, const SwitchingSignal& signal, const Vector& e0,
                           double step, const SimOptions& options = {});

/// Co-integrates the plant and all m estimators of the distributed observer.
/// State layout: [x; x_1; ...; x_m].
Trajectory integrate_observer(const Plant& plant, const ObserverDesign& design,
                              const GraphFamily& family, const SwitchingSignal& signal, double g,
                              const Vector& x0, const std::vector<Vector>& xhat0, double step,
                              const SimOptions& options = {});

/// Stacked errors x_i - x from an observer trajectory.
Trajectory observer_errors(const Trajectory& observer, int agent_count);

/// (z1, z2) = (Q e, V' e) at every sample.
std::pair<Trajectory, Trajectory> project_coordinates(const ObserverDesign& design,
                                                      const Trajectory& errors);

/// Least-squares slope of log(max(norm, floor)) over [burn_in * T_eff, T_eff],
/// where T_eff is the last sample before the norm first drops to the floor.
/// DegenerateFit with fewer than 10 usable samples.
RateEstimate estimate_rate(const std::vector<double>& times, const std::vector<double>& norms,
                           double burn_in_fraction = kDefaultBurnIn,
                           double floor = kDefaultRateFloor);

RateEstimate estimate_rate(const Trajectory& trajectory, double burn_in_fraction = kDefaultBurnIn,
                           double floor = kDefaultRateFloor);

/// Integrates the error system under (signal_a, g_a) and (signal_b, g_b) from
/// the same e0 and returns max_t ||Q e_a(t) - Q e_b(t)|| on a shared time grid.
double z1_autonomy_check(const ObserverDesign& design, const GraphFamily& family,
                         const SwitchingSignal& signal_a, const SwitchingSignal& signal_b, double g_a,
                         double g_b, const Vector& e0, double step);

/// CSV with header t,e_1_1,...,e_m_n,norm_e,z1_norm,z2_norm.
void write_error_csv(std::ostream& out, const ObserverDesign& design, const Trajectory& errors);

}  // namespace distobs
