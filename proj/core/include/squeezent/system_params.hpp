#ifndef SQUEEZENT_SYSTEM_PARAMS_HPP
#define SQUEEZENT_SYSTEM_PARAMS_HPP

#include <array>
#include <stdexcept>

namespace squeezent {

/// Dimensionless model knobs. Couplings g (cavity-resonator) and lambda
/// (qubit-resonator) are scaled by the vibrational frequency; Omega is the
/// dimensionless phase (vibrational frequency times evolution time); beta is
/// the real coherent amplitude and (r, phi_xi) the squeezing amplitude/phase
/// of the initial mechanical state.
struct SystemParams {
    double g = 0.0;
    double lambda = 0.0;
    double Omega = 0.0;
    double beta = 0.0;
    double r = 0.0;
    double phi_xi = 0.0;

    void validate() const {
        if (g < 0.0 || lambda < 0.0 || r < 0.0)
            throw std::invalid_argument("SystemParams: g, lambda, r must be >= 0");
    }

    /// Effective resonator displacement couplings of the four (qubit, cavity)
    /// branches, ordered (0,0), (0,1), (1,0), (1,1).
    std::array<double, 4> branch_couplings() const {
        return {lambda, g + lambda, -lambda, g - lambda};
    }
};

}  // namespace squeezent

#endif
