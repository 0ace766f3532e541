#pragma once

#include <cstdint>
#include <vector>

namespace distobs {

/// One maximal interval on which the signal is constant.
struct Piece {
    double start;
    double end;
    int value;
};

/// Piecewise-constant, right-continuous map [0, horizon] -> graph index.
/// values[0] is active on [0, t_1), values[k] on [t_k, t_{k+1}).
class SwitchingSignal {
public:
    /// Throws InvalidArgument unless 0 < t_1 < t_2 < ... < horizon,
    /// values.size() == switch_times.size() + 1, values are nonnegative and
    /// consecutive values differ.
    SwitchingSignal(std::vector<double> switch_times, std::vector<int> values, double horizon);

    static SwitchingSignal constant(int value, double horizon);

    const std::vector<double>& switch_times() const { return switch_times_; }
    const std::vector<int>& values() const { return values_; }
    double horizon() const { return horizon_; }
    int max_value() const;

    std::vector<Piece> pieces() const;
    /// Pieces clipped to [t0, t1]; zero-length pieces dropped.
    std::vector<Piece> pieces(double t0, double t1) const;
    /// Shortest constancy interval (the last, possibly truncated one included).
    double shortest_piece() const;

private:
    std::vector<double> switch_times_;
    std::vector<int> values_;
    double horizon_;
};

/// Throws OutOfHorizon for t outside [0, horizon].
int value_at(const SwitchingSignal& signal, double t);

/// Number of switch times strictly inside the open interval between the two
/// times (argument order does not matter).
int count_switches(const SwitchingSignal& signal, double tau, double t);

/// Every gap t_{k+1} - t_k >= tau_D, with t_0 = 0 included.
bool validate_dwell(const SwitchingSignal& signal, double tau_D);

/// N(tau, t) <= N0 + (t - tau) / tau_D for all 0 <= tau <= t <= horizon.
bool validate_average_dwell(const SwitchingSignal& signal, double tau_D, double N0);

/// Gaps uniform in [tau_D, 2 tau_D], values uniform over the other indices.
SwitchingSignal generate_dwell(int family_size, double tau_D, double horizon, std::uint64_t seed);

/// Bursty signals inside S_ave(tau_D, N0), produced by a token bucket that
/// holds at most N0 switches and refills at rate 1/tau_D. When N0 > 1 and
/// there is more than one mode the result contains at least one gap shorter
/// than tau_D; GenerationFailed if no such signal is found.
SwitchingSignal generate_average_dwell(int family_size, double tau_D, double N0, double horizon,
                                       std::uint64_t seed);

/// Switches at every multiple of gap: the fastest switching a fixed-step
/// integrator can follow when gap is a small multiple of its step.
SwitchingSignal generate_fixed_gap(int family_size, double gap, double horizon, std::uint64_t seed);

}  // namespace distobs
