#include "core/bath.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "core/errors.hpp"

namespace dephase::bath {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kSmallPhase = 1e-8;  // |omega * t| below which series limits apply

void check_mode_index(const BathSpec& spec, std::size_t k) {
    if (k >= spec.size()) {
        throw Error(ErrorCode::invalid_argument, "mode index out of range");
    }
}

void check_time(double t) {
    if (!(t >= 0.0)) {
        throw Error(ErrorCode::invalid_argument, "time must be >= 0");
    }
}

// Gamma_k(t) = g^2 [-i t/w + (1 - e^{-i w t})/w^2]; l1 = exp(-sum Gamma_k).
Complex mode_decay_exponent(const Mode& mode, double t) {
    const double w = mode.omega;
    const double g2 = mode.g * mode.g;
    const double x = w * t;
    if (std::abs(x) < kSmallPhase) {
        const double t2 = t * t;
        return g2 * Complex(t2 / 2.0 - x * x * t2 / 24.0, -x * t2 / 6.0);
    }
    const Complex tail = (1.0 - std::exp(-kI * x)) / (w * w);
    return g2 * (Complex(0.0, -t / w) + tail);
}

}  // namespace

BathSpec::BathSpec(std::vector<Mode> modes) : modes_(std::move(modes)) {
    if (modes_.empty()) {
        throw Error(ErrorCode::invalid_argument, "bath requires at least one mode");
    }
    for (const auto& m : modes_) {
        if (!std::isfinite(m.omega) || !std::isfinite(m.g)) {
            throw Error(ErrorCode::invalid_argument, "bath mode parameters must be finite");
        }
        if (m.g < 0.0) {
            throw Error(ErrorCode::invalid_argument, "bath coupling g must be >= 0");
        }
    }
}

Complex displacement_amplitude(const BathSpec& spec, std::size_t k, double t) {
    check_mode_index(spec, k);
    check_time(t);
    const Mode& mode = spec.modes()[k];
    const double x = mode.omega * t;
    if (std::abs(x) < kSmallPhase) {
        // g t (e^{ix} - 1)/(ix) expanded around x = 0
        return mode.g * t * Complex(1.0 - x * x / 6.0, x / 2.0);
    }
    return mode.g * (std::exp(kI * x) - 1.0) / (kI * mode.omega);
}

Complex mode_phase(const BathSpec& spec, std::size_t k, double t) {
    check_mode_index(spec, k);
    check_time(t);
    const Mode& mode = spec.modes()[k];
    const double w = mode.omega;
    const double g2 = mode.g * mode.g;
    const double x = w * t;
    if (std::abs(x) < kSmallPhase) {
        const double t2 = t * t;
        return g2 * Complex(-x * t2 / 6.0 * (1.0 - x * x / 20.0),
                            -t2 / 2.0 * (1.0 - x * x / 12.0));
    }
    const double re = -(g2 / w) * t + (g2 / (w * w)) * std::sin(x);
    const double im = -(g2 / (w * w)) * (1.0 - std::cos(x));
    return {re, im};
}

Complex correlation(const BathSpec& spec, double t1, double s) {
    Complex acc = 0.0;
    for (const auto& m : spec.modes()) {
        acc += m.g * m.g * std::exp(-kI * (m.omega * (t1 - s)));
    }
    return acc;
}

Complex vacuum_coefficient(const BathSpec& spec, double t) {
    check_time(t);
    Complex exponent = 0.0;
    for (std::size_t k = 0; k < spec.size(); ++k) {
        exponent += mode_decay_exponent(spec.modes()[k], t);
    }
    return std::exp(-exponent);
}

namespace {

// 8-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr std::array<double, 8> kGlNodes = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGlWeights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

template <typename F>
Complex gauss_legendre(F&& f, double a, double b, int panels) {
    Complex acc = 0.0;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        for (std::size_t i = 0; i < kGlNodes.size(); ++i) {
            acc += kGlWeights[i] * f(mid + 0.5 * h * kGlNodes[i]);
        }
    }
    return acc * (0.5 * h);
}

}  // namespace

Complex vacuum_coefficient_quadrature(const BathSpec& spec, double t, double tol) {
    check_time(t);
    if (t == 0.0) return {1.0, 0.0};

    auto nested = [&](int panels) {
        auto inner = [&](double t1) {
            return gauss_legendre([&](double s) { return correlation(spec, t1, s); }, 0.0, t1,
                                  panels);
        };
        return gauss_legendre(inner, 0.0, t, panels);
    };

    Complex prev = nested(1);
    for (int panels = 2; panels <= 512; panels *= 2) {
        const Complex cur = nested(panels);
        if (std::abs(cur - prev) <= tol) {
            return std::exp(-cur);
        }
        prev = cur;
    }
    std::ostringstream msg;
    msg << "vacuum coefficient quadrature did not converge to " << tol << " at t = " << t;
    throw Error(ErrorCode::quadrature_not_converged, msg.str());
}

ParityWeights parity_coefficients(const BathSpec& spec, double t) {
    check_time(t);
    const double g = total_displacement(spec, t);
    // e^{-g} sinh g and e^{-g}(cosh g - 1) in cancellation-free form
    const double l2_sq = 0.5 * (1.0 - std::exp(-2.0 * g));
    const double l3_root = (1.0 - std::exp(-g)) / std::sqrt(2.0);
    return {std::sqrt(l2_sq), l3_root};
}

double total_displacement(const BathSpec& spec, double t) {
    check_time(t);
    double acc = 0.0;
    for (std::size_t k = 0; k < spec.size(); ++k) {
        acc += std::norm(displacement_amplitude(spec, k, t));
    }
    return acc;
}

double coherence_factor(const BathSpec& spec, double t, double coupling_scale) {
    return std::exp(-2.0 * total_displacement(spec, t) * coupling_scale * coupling_scale);
}

DephasingCoefficients coefficients(const BathSpec& spec, double t) {
    check_time(t);
    DephasingCoefficients out;
    out.t = t;
    out.l1 = vacuum_coefficient(spec, t);
    const ParityWeights parity = parity_coefficients(spec, t);
    out.l2 = parity.l2;
    out.l3 = parity.l3;
    out.gamma = std::abs(out.l1);
    out.g_total = total_displacement(spec, t);
    Complex phi = 0.0;
    for (std::size_t k = 0; k < spec.size(); ++k) phi += mode_phase(spec, k, t);
    out.phi_total = phi;
    return out;
}

}  // namespace dephase::bath
