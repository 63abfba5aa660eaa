#ifndef DEPHASE_CORE_BATH_HPP
#define DEPHASE_CORE_BATH_HPP

#include <vector>

#include "core/types.hpp"

namespace dephase::bath {

struct Mode {
    double omega;  // angular frequency (rad / time), any real
    double g;      // coupling strength (1 / time), >= 0
};

// Discrete bosonic mode list defining the environment. A continuum spectral
// density is represented by the caller as a quadrature-discretized list.
class BathSpec {
public:
    explicit BathSpec(std::vector<Mode> modes);

    const std::vector<Mode>& modes() const noexcept { return modes_; }
    std::size_t size() const noexcept { return modes_.size(); }

private:
    std::vector<Mode> modes_;
};

// Time-indexed scalars parameterizing every channel built downstream.
struct DephasingCoefficients {
    double t = 0.0;
    Complex l1{1.0, 0.0};        // vacuum-branch amplitude (complex)
    double l2 = 0.0;             // odd-branch weight root
    double l3 = 0.0;             // even-branch weight root
    double gamma = 1.0;          // |l1|, single-step coherence factor
    Complex phi_total{0.0, 0.0}; // accumulated phase sum_k phi_k(t)
    double g_total = 0.0;        // sum_k |G_k(t)|^2
};

// G_k(t) = g_k (e^{i w_k t} - 1) / (i w_k); series limit below |w t| ~ 1e-8.
Complex displacement_amplitude(const BathSpec& spec, std::size_t k, double t);

// phi_k(t), integral of dphi/dt = -i g_k e^{-i w_k t} G_k(t) from phi_k(0)=0.
// The imaginary part carries the -|G_k|^2/2 normal-ordering decay.
Complex mode_phase(const BathSpec& spec, std::size_t k, double t);

// alpha(t1, s) = sum_k g_k^2 e^{-i w_k (t1 - s)}.
Complex correlation(const BathSpec& spec, double t1, double s);

// l1(t) = exp(-sum_k Gamma_k(t)), Gamma_k = g^2 [-i t/w + (1 - e^{-i w t})/w^2].
Complex vacuum_coefficient(const BathSpec& spec, double t);

// Same quantity by nested quadrature of the double time integral of the
// correlation function; throws QuadratureNotConverged when panel refinement
// fails to reach tol.
Complex vacuum_coefficient_quadrature(const BathSpec& spec, double t, double tol = 1e-9);

struct ParityWeights {
    double l2;
    double l3;
};

// l2 = sqrt(e^{-g} sinh g), l3 = sqrt(e^{-g}(cosh g - 1)) with g = g_total(t).
ParityWeights parity_coefficients(const BathSpec& spec, double t);

// sum_k |G_k(t)|^2.
double total_displacement(const BathSpec& spec, double t);

// gamma(t) = exp(-2 g_total scale^2); scale is half the level spacing of the
// coupled operator (sigma_z -> 1, S_z -> 1/2). For scale = 1 this equals the
// even-minus-odd parity weight difference.
double coherence_factor(const BathSpec& spec, double t, double coupling_scale = 1.0);

// Assembles every coefficient at time t.
DephasingCoefficients coefficients(const BathSpec& spec, double t);

}  // namespace dephase::bath

#endif
