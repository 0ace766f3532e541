#include "distobs/switching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "distobs/errors.hpp"

namespace distobs {

namespace {

constexpr double kTimeTol = 1e-12;
constexpr int kMaxGenerationAttempts = 100;

int draw_next_value(std::mt19937_64& rng, int family_size, int current) {
    std::uniform_int_distribution<int> pick(0, family_size - 2);
    const int v = pick(rng);
    return v >= current ? v + 1 : v;
}

}  // namespace

SwitchingSignal::SwitchingSignal(std::vector<double> switch_times, std::vector<int> values,
                                 double horizon)
    : switch_times_(std::move(switch_times)), values_(std::move(values)), horizon_(horizon) {
    if (!(horizon_ > 0.0) || !std::isfinite(horizon_)) {
        throw InvalidArgument("switching signal: horizon must be positive and finite");
    }
    if (values_.size() != switch_times_.size() + 1) {
        throw InvalidArgument("switching signal: need exactly one more value than switch times");
    }
    double prev = 0.0;
    for (double t : switch_times_) {
        if (!(t > prev) || !(t < horizon_)) {
            std::ostringstream msg;
            msg << "switching signal: switch time " << t
                << " is not strictly increasing inside (0, horizon)";
            throw InvalidArgument(msg.str());
        }
        prev = t;
    }
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (values_[k] < 0) throw InvalidArgument("switching signal: negative graph index");
        if (k > 0 && values_[k] == values_[k - 1]) {
            throw InvalidArgument("switching signal: consecutive values must differ");
        }
    }
}

SwitchingSignal SwitchingSignal::constant(int value, double horizon) {
    return SwitchingSignal({}, {value}, horizon);
}

int SwitchingSignal::max_value() const {
    return *std::max_element(values_.begin(), values_.end());
}

std::vector<Piece> SwitchingSignal::pieces() const {
    return pieces(0.0, horizon_);
}

std::vector<Piece> SwitchingSignal::pieces(double t0, double t1) const {
    std::vector<Piece> out;
    double start = 0.0;
    for (std::size_t k = 0; k < values_.size(); ++k) {
        const double end = k < switch_times_.size() ? switch_times_[k] : horizon_;
        const double a = std::max(start, t0);
        const double b = std::min(end, t1);
        if (b > a) out.push_back({a, b, values_[k]});
        start = end;
    }
    return out;
}

double SwitchingSignal::shortest_piece() const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : pieces()) best = std::min(best, p.end - p.start);
    return best;
}

int value_at(const SwitchingSignal& signal, double t) {
    if (!(t >= 0.0) || t > signal.horizon()) {
        std::ostringstream msg;
        msg << "value_at: t = " << t << " outside [0, " << signal.horizon() << "]";
        throw OutOfHorizon(msg.str());
    }
    const auto& st = signal.switch_times();
    const auto idx = std::upper_bound(st.begin(), st.end(), t) - st.begin();
    return signal.values()[static_cast<std::size_t>(idx)];
}

int count_switches(const SwitchingSignal& signal, double tau, double t) {
    if (tau > t) std::swap(tau, t);
    const auto& st = signal.switch_times();
    const auto lo = std::upper_bound(st.begin(), st.end(), tau);
    const auto hi = std::lower_bound(st.begin(), st.end(), t);
    return hi > lo ? static_cast<int>(hi - lo) : 0;
}

bool validate_dwell(const SwitchingSignal& signal, double tau_D) {
    double prev = 0.0;
    for (double t : signal.switch_times()) {
        if (t - prev < tau_D * (1.0 - kTimeTol)) return false;
        prev = t;
    }
    return true;
}

bool validate_average_dwell(const SwitchingSignal& signal, double tau_D, double N0) {
    // The open-interval count only changes at switch times, so the supremum
    // over (tau, t) is attained as the interval shrinks onto [t_a, t_b]:
    // b - a + 1 switches over length t_b - t_a.
    const auto& st = signal.switch_times();
    const std::size_t K = st.size();
    for (std::size_t a = 0; a < K; ++a) {
        for (std::size_t b = a; b < K; ++b) {
            const double count = static_cast<double>(b - a + 1);
            if (count > N0 + (st[b] - st[a]) / tau_D + 1e-9) return false;
        }
    }
    return true;
}

SwitchingSignal generate_dwell(int family_size, double tau_D, double horizon, std::uint64_t seed) {
    if (family_size < 1) throw InvalidArgument("generate_dwell: family_size must be >= 1");
    if (!(tau_D > 0.0)) throw InvalidArgument("generate_dwell: tau_D must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> first(0, family_size - 1);
    std::uniform_real_distribution<double> gap(tau_D, 2.0 * tau_D);

    std::vector<double> times;
    std::vector<int> values{first(rng)};
    if (family_size == 1) return SwitchingSignal({}, values, horizon);
    double t = 0.0;
    while (true) {
        t += gap(rng);
        if (t >= horizon) break;
        times.push_back(t);
        values.push_back(draw_next_value(rng, family_size, values.back()));
    }
    return SwitchingSignal(std::move(times), std::move(values), horizon);
}

SwitchingSignal generate_average_dwell(int family_size, double tau_D, double N0, double horizon,
                                       std::uint64_t seed) {
    if (family_size < 1) throw InvalidArgument("generate_average_dwell: family_size must be >= 1");
    if (!(tau_D > 0.0) || !(N0 > 0.0)) {
        throw InvalidArgument("generate_average_dwell: tau_D and N0 must be positive");
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> first(0, family_size - 1);
    if (family_size == 1) return SwitchingSignal({}, {first(rng)}, horizon);

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const bool need_burst = N0 > 1.0;

    for (int attempt = 0; attempt < kMaxGenerationAttempts; ++attempt) {
        std::vector<double> times;
        std::vector<int> values{first(rng)};
        // t = 0 counts as a switch instant, which keeps N0 = 1 identical to
        // the fixed dwell-time class.
        double tokens = std::max(0.0, N0 - 1.0);
        double t = 0.0;
        double prev = 0.0;
        bool has_short_gap = false;
        while (true) {
            double gap = 0.0;
            bool short_gap = false;
            if (unit(rng) < 0.5) {
                const double refill = (1.0 - tokens) * tau_D;
                gap = std::max(tau_D * (0.05 + 0.15 * unit(rng)), refill + 1e-9 * tau_D);
                short_gap = gap < tau_D;
            }
            if (!short_gap) gap = tau_D * (1.0 + unit(rng));
            t = prev + gap;
            tokens = std::min(N0, tokens + gap / tau_D);
            if (t >= horizon) break;
            times.push_back(t);
            values.push_back(draw_next_value(rng, family_size, values.back()));
            tokens -= 1.0;
            has_short_gap = has_short_gap || short_gap;
            prev = t;
        }
        SwitchingSignal s(std::move(times), std::move(values), horizon);
        if (!validate_average_dwell(s, tau_D, N0)) continue;
        if (need_burst && (!has_short_gap || validate_dwell(s, tau_D))) continue;
        return s;
    }
    throw GenerationFailed("generate_average_dwell: no valid bursty signal after bounded retries");
}

SwitchingSignal generate_fixed_gap(int family_size, double gap, double horizon, std::uint64_t seed) {
    if (family_size < 1) throw InvalidArgument("generate_fixed_gap: family_size must be >= 1");
    if (!(gap > 0.0)) throw InvalidArgument("generate_fixed_gap: gap must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> first(0, family_size - 1);
    std::vector<double> times;
    std::vector<int> values{first(rng)};
    if (family_size == 1) return SwitchingSignal({}, values, horizon);
    for (long k = 1;; ++k) {
        const double t = static_cast<double>(k) * gap;
        if (t >= horizon - 0.5 * gap) break;
        times.push_back(t);
        values.push_back(draw_next_value(rng, family_size, values.back()));
    }
    return SwitchingSignal(std::move(times), std::move(values), horizon);
}

}  // namespace distobs
