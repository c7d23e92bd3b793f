#pragma once

#include <array>
#include <stdexcept>
#include <string>

// Two-box energy-balance climate model with a bounded insolation control.
//
// State is (T_A, T_s): mean atmospheric and surface temperature in kelvin.
// The control u in [0, u_max] is the fraction of incoming shortwave flux
// removed before it reaches either box (albedo modification).

namespace climctl {

struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ClimateState {
    double t_a = 0.0;  // atmospheric temperature, K
    double t_s = 0.0;  // surface temperature, K
};

// Plausibility window enforced at API boundaries.
inline constexpr double kTempMinK = 150.0;
inline constexpr double kTempMaxK = 400.0;

bool state_plausible(const ClimateState& x);
void require_plausible(const ClimateState& x, const char* where);

struct ControlLevel {
    double u = 0.0;  // fraction of insolation blocked
};

inline constexpr double kDefaultUMax = 0.03;

struct ModelParams {
    double c_a = 4.6e7;       // atmospheric heat capacity, J m^-2 K^-1
    double c_s = 2.97e8;      // surface heat capacity, J m^-2 K^-1
    double q = 342.0;         // solar constant per unit area, W m^-2
    double delta = 5.67e-8;   // Stefan-Boltzmann constant, W m^-2 K^-4
    double a = 0.241;         // atmospheric shortwave absorption fraction
    double eps = 0.812;       // atmospheric longwave emissivity
    double alpha_s = 0.132;   // surface albedo
    double alpha_a = 0.250;   // atmospheric albedo
    double h = 5.944;         // sensible/latent exchange coefficient, W m^-2 K^-1

    // Throws ModelError naming the offending field.
    void validate() const;
};

// Warmed (doubled-CO2) parameterization: CO2 forcing folded into emissivity.
inline ModelParams warmed_params() {
    ModelParams p;
    p.eps = 0.8408;
    return p;
}

struct ShortwaveCoeffs {
    double s_a = 0.0;  // shortwave absorbed by the atmosphere, W m^-2
    double s_s = 0.0;  // shortwave absorbed by the surface, W m^-2
};

ShortwaveCoeffs shortwave_coefficients(const ModelParams& p);

// Net flux into each box (the rhs numerators), W m^-2.
struct NetFluxes {
    double f_a = 0.0;
    double f_s = 0.0;
};

NetFluxes net_fluxes(const ClimateState& x, ControlLevel u, const ModelParams& p);

// Temperature rates (dT_A/dt, dT_s/dt), K s^-1. Throws ModelError on a
// non-finite input state (numerical blow-up upstream).
struct StateRate {
    double d_t_a = 0.0;
    double d_t_s = 0.0;
};

StateRate rhs(const ClimateState& x, ControlLevel u, const ModelParams& p);

// Fixed point of the controlled dynamics, found by damped Newton iteration
// on the net fluxes with a finite-difference Jacobian. Converged when the
// infinity norm of the net fluxes drops below 1e-6 W m^-2.
struct EquilibriumError : ModelError {
    EquilibriumError(const std::string& msg, ClimateState last, double res)
        : ModelError(msg), last_iterate(last), residual(res) {}
    ClimateState last_iterate;
    double residual;
};

ClimateState equilibrium(const ModelParams& p, ControlLevel u = {},
                         ClimateState guess = {270.0, 288.0});

using Matrix2 = std::array<std::array<double, 2>, 2>;

// Central finite-difference Jacobian of rhs, step 1e-4 K. Units s^-1.
Matrix2 jacobian(const ClimateState& x, ControlLevel u, const ModelParams& p);

// Real parts of the eigenvalues of a 2x2 matrix, descending.
std::array<double, 2> eigenvalue_real_parts(const Matrix2& m);

}  // namespace climctl
