#include "distobs/gaincert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "distobs/errors.hpp"

namespace distobs {

namespace {

constexpr double kOvershootInflation = 1.1;
constexpr int kMaxWindowExtensions = 8;

// exp(M dt) memoized on (mode, dt); fixed-gap and grid pieces reuse a handful
// of distinct lengths.
class ExponentialCache {
public:
    explicit ExponentialCache(const std::vector<Matrix>& modes) : modes_(modes) {}

    const Matrix& get(int mode, double dt) {
        auto key = std::make_pair(mode, dt);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        return cache_.emplace(key, expm(modes_.at(static_cast<std::size_t>(mode)) * dt)).first->second;
    }

private:
    const std::vector<Matrix>& modes_;
    std::map<std::pair<int, double>, Matrix> cache_;
};

void check_span(const SwitchingSignal& signal, double t0, double t1) {
    if (!(t0 >= 0.0) || t1 > signal.horizon() || t0 > t1) {
        std::ostringstream msg;
        msg << "transition_matrix: [" << t0 << ", " << t1 << "] not inside [0, " << signal.horizon()
            << "]";
        throw OutOfHorizon(msg.str());
    }
}

}  // namespace

ExpBound exp_bound(const Matrix& M, double slack, double horizon_mult, int samples) {
    if (M.size() == 0) return {1.0, std::numeric_limits<double>::infinity()};
    if (!(slack >= 0.0 && slack < 1.0)) throw InvalidArgument("exp_bound: slack must be in [0, 1)");
    const double abscissa = spectral_abscissa(M);
    if (!(abscissa < 0.0)) {
        std::ostringstream msg;
        msg << "exp_bound: spectral abscissa " << abscissa << " is not negative";
        throw NotHurwitz(msg.str());
    }
    ExpBound out;
    out.lambda = (1.0 - slack) * (-abscissa);

    const double window = horizon_mult / out.lambda;
    const double dt = window / samples;
    const Matrix step = expm(M * dt);
    Matrix phi = Matrix::Identity(M.rows(), M.cols());

    double sup = 1.0;
    int argmax = 0;
    int k = 0;
    for (int extension = 0; extension <= kMaxWindowExtensions; ++extension) {
        for (int i = 0; i < samples; ++i) {
            phi = step * phi;
            ++k;
            const double v = norm2(phi) * std::exp(out.lambda * dt * k);
            if (v > sup) {
                sup = v;
                argmax = k;
            }
        }
        // Stop once the maximum sits well inside the sampled range.
        if (argmax < k - samples / 10) break;
    }
    out.c = std::max(1.0, 1.0 + kOvershootInflation * (sup - 1.0));
    return out;
}

double gain_lower_bound(double c, double lambda_star, double b, double lambda, double tau_D) {
    const double base = (lambda + b * c) / lambda_star;
    return std::max(base, base + std::log(c) / (lambda_star * tau_D));
}

double gain_lower_bound(const std::vector<ExpBound>& per_mode, double b, double lambda, double tau_D) {
    double c = 1.0;
    double lambda_star = std::numeric_limits<double>::infinity();
    for (const auto& e : per_mode) {
        c = std::max(c, e.c);
        lambda_star = std::min(lambda_star, e.lambda);
    }
    return gain_lower_bound(c, lambda_star, b, lambda, tau_D);
}

bool GainCertificate::rate_condition_holds(double g) const {
    // Relative slack so that g = g_min itself passes despite rounding.
    const double rhs = lambda + b * c;
    return g * lambda_star >= rhs * (1.0 - 1e-12);
}

GainCertificate certify(const ObserverDesign& design, const GraphFamily& family, double lambda,
                        double tau_D, double slack, double horizon_mult) {
    GainCertificate cert;
    cert.lambda = lambda;
    cert.tau_D = tau_D;
    cert.b = norm2(design.restricted);
    cert.lambda_star = std::numeric_limits<double>::infinity();
    for (int p = 0; p < static_cast<int>(family.size()); ++p) {
        ExpBound e = exp_bound(-coupling_block(design, family, p), slack, horizon_mult);
        cert.c = std::max(cert.c, e.c);
        cert.lambda_star = std::min(cert.lambda_star, e.lambda);
        cert.per_mode.push_back(e);
    }
    // No unobservable directions anywhere: z2 is empty and any g works.
    cert.g_min = design.basis.cols() == 0
                     ? 0.0
                     : gain_lower_bound(cert.c, cert.lambda_star, cert.b, lambda, tau_D);
    return cert;
}

double coupling_bound(const ErrorModel& model) {
    double worst = 0.0;
    for (int p = 0; p < model.mode_count(); ++p) worst = std::max(worst, norm2(model.reduced(p).coupling));
    return worst;
}

Matrix transition_matrix(const std::vector<Matrix>& modes, const SwitchingSignal& signal, double t0,
                         double t1) {
    check_span(signal, t0, t1);
    if (modes.empty()) throw InvalidArgument("transition_matrix: no modes");
    const Eigen::Index k = modes.front().rows();
    Matrix phi = Matrix::Identity(k, k);
    for (const auto& piece : signal.pieces(t0, t1)) {
        phi = expm(modes.at(static_cast<std::size_t>(piece.value)) * (piece.end - piece.start)) * phi;
    }
    return phi;
}

Matrix transition_matrix(const ErrorModel& model, const SwitchingSignal& signal, double t0, double t1) {
    return transition_matrix(model.sub_matrices(), signal, t0, t1);
}

BoundReport verify_transition_bound(const std::vector<Matrix>& modes, const SwitchingSignal& signal,
                                    double lambda, double c, int samples) {
    BoundReport report;
    const Eigen::Index k = modes.empty() ? 0 : modes.front().rows();
    if (k == 0) {
        report.pass = true;
        return report;
    }
    ExponentialCache cache(modes);
    const double H = signal.horizon();
    const double grid = H / 200.0;
    for (int j = 0; j < samples; ++j) {
        const double tau = H * j / samples;
        Matrix phi = Matrix::Identity(k, k);
        for (const auto& piece : signal.pieces(tau, H)) {
            const double len = piece.end - piece.start;
            const int chunks = std::max(1, static_cast<int>(std::ceil(len / grid - 1e-9)));
            const double dt = len / chunks;
            for (int q = 1; q <= chunks; ++q) {
                phi = cache.get(piece.value, dt) * phi;
                const double t = q == chunks ? piece.end : piece.start + q * dt;
                const double ratio = norm2(phi) * std::exp(lambda * (t - tau)) / c;
                report.max_violation = std::max(report.max_violation, ratio);
                ++report.pairs_checked;
            }
        }
    }
    report.pass = report.max_violation <= 1.0;
    return report;
}

BoundReport verify_switched_bound(const ErrorModel& model, const SwitchingSignal& signal,
                                  double lambda, double c, int samples) {
    return verify_transition_bound(model.sub_matrices(), signal, lambda, c, samples);
}

}  // namespace distobs
