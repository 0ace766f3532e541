#pragma once

#include <vector>

#include "distobs/errormodel.hpp"
#include "distobs/switching.hpp"

namespace distobs {

/// ||exp(M t)|| <= c exp(-lambda t) for t >= 0.
struct ExpBound {
    double c = 1.0;
    double lambda = 0.0;
};

inline constexpr double kDefaultSlack = 0.05;
inline constexpr double kDefaultHorizonMult = 10.0;

/// Exponential bound for a Hurwitz matrix. lambda is (1 - slack) times the
/// distance of the spectrum from the imaginary axis; c is the sampled sup of
/// ||exp(M t)|| exp(lambda t) over [0, horizon_mult / lambda], with its
/// overshoot above 1 inflated by 10%. The window is extended while the sup is
/// still being attained near its end. Sampling does not prove the sup.
///
/// Throws NotHurwitz if some eigenvalue has nonnegative real part. An empty
/// matrix gives c = 1, lambda = +inf.
ExpBound exp_bound(const Matrix& M, double slack = kDefaultSlack,
                   double horizon_mult = kDefaultHorizonMult, int samples = 1000);

/// max{(lambda + b c)/lambda*, (lambda + b c)/lambda* + ln(c)/(lambda* tau_D)}
double gain_lower_bound(double c, double lambda_star, double b, double lambda, double tau_D);

/// Same, with c = max c_i and lambda* = min lambda_i over the per-mode bounds.
double gain_lower_bound(const std::vector<ExpBound>& per_mode, double b, double lambda, double tau_D);

struct GainCertificate {
    std::vector<ExpBound> per_mode;  // bounds for -G(p)
    double c = 1.0;
    double lambda_star = 0.0;
    double b = 0.0;                  // ||A~||_2
    double lambda = 0.0;
    double tau_D = 0.0;
    double g_min = 0.0;

    /// g lambda* >= lambda + b c, the rate condition the formula folds in.
    bool rate_condition_holds(double g) const;
};

/// Bounds for every mode's -G(p) and the resulting g_min. tau_D is the dwell
/// time, or the average dwell time for bursty signals.
GainCertificate certify(const ObserverDesign& design, const GraphFamily& family, double lambda,
                        double tau_D, double slack = kDefaultSlack,
                        double horizon_mult = kDefaultHorizonMult);

/// max over modes of ||A^_V(p)||, the forcing bound from z1 into z2.
double coupling_bound(const ErrorModel& model);

/// Phi(t1, t0) of x' = modes[sigma(t)] x, as the ordered product of per-piece
/// exponentials (latest piece leftmost). OutOfHorizon if [t0, t1] is not
/// inside [0, horizon].
Matrix transition_matrix(const std::vector<Matrix>& modes, const SwitchingSignal& signal, double t0,
                         double t1);

/// Transition matrix of z2' = A_V(sigma(t)) z2.
Matrix transition_matrix(const ErrorModel& model, const SwitchingSignal& signal, double t0, double t1);

struct BoundReport {
    /// max of ||Phi(t, tau)|| / (c exp(-lambda (t - tau))) over sampled pairs.
    double max_violation = 0.0;
    bool pass = false;
    int pairs_checked = 0;
};

/// Checks ||Phi(t, tau)|| <= c exp(-lambda (t - tau)) at `samples` start times
/// tau, sweeping t forward over every switch instant and a fine grid.
BoundReport verify_transition_bound(const std::vector<Matrix>& modes, const SwitchingSignal& signal,
                                    double lambda, double c, int samples = 20);

/// verify_transition_bound on the A_V(p) matrices of the model.
BoundReport verify_switched_bound(const ErrorModel& model, const SwitchingSignal& signal,
                                  double lambda, double c, int samples = 20);

}  // namespace distobs
