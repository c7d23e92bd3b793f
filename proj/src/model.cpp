#include "climctl/model.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace climctl {

bool state_plausible(const ClimateState& x) {
    return std::isfinite(x.t_a) && std::isfinite(x.t_s) &&
           x.t_a >= kTempMinK && x.t_a <= kTempMaxK &&
           x.t_s >= kTempMinK && x.t_s <= kTempMaxK;
}

void require_plausible(const ClimateState& x, const char* where) {
    if (!state_plausible(x)) {
        throw ModelError(std::string(where) + ": state (" + std::to_string(x.t_a) +
                         ", " + std::to_string(x.t_s) + ") outside plausible range");
    }
}

void ModelParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw ModelError(std::string("ModelParams: ") + name + " must be strictly positive");
        }
    };
    auto fraction = [](double v, const char* name) {
        if (!(v > 0.0 && v < 1.0)) {
            throw ModelError(std::string("ModelParams: ") + name + " must lie in (0, 1)");
        }
    };
    positive(c_a, "c_a");
    positive(c_s, "c_s");
    positive(q, "q");
    positive(delta, "delta");
    positive(h, "h");
    fraction(a, "a");
    fraction(eps, "eps");
    fraction(alpha_s, "alpha_s");
    fraction(alpha_a, "alpha_a");
}

ShortwaveCoeffs shortwave_coefficients(const ModelParams& p) {
    ShortwaveCoeffs c;
    c.s_a = (1.0 - p.alpha_a) * p.a * (1.0 + (1.0 - p.a) * p.alpha_s) * p.q;
    c.s_s = (1.0 - p.alpha_a) * (1.0 - p.a) * (1.0 - p.alpha_s) * p.q;
    return c;
}

NetFluxes net_fluxes(const ClimateState& x, ControlLevel u, const ModelParams& p) {
    const ShortwaveCoeffs sw = shortwave_coefficients(p);
    const double ta4 = x.t_a * x.t_a * x.t_a * x.t_a;
    const double ts4 = x.t_s * x.t_s * x.t_s * x.t_s;
    const double exch = p.h * (x.t_s - x.t_a);
    NetFluxes f;
    f.f_a = sw.s_a * (1.0 - u.u) + p.eps * p.delta * ts4 - 2.0 * p.eps * p.delta * ta4 + exch;
    f.f_s = sw.s_s * (1.0 - u.u) - p.delta * ts4 + (4.0 / 3.0) * p.eps * p.delta * ta4 - exch;
    return f;
}

StateRate rhs(const ClimateState& x, ControlLevel u, const ModelParams& p) {
    if (!std::isfinite(x.t_a) || !std::isfinite(x.t_s)) {
        throw ModelError("rhs: non-finite state (numerical blow-up upstream)");
    }
    const NetFluxes f = net_fluxes(x, u, p);
    return {f.f_a / p.c_a, f.f_s / p.c_s};
}

namespace {

// 2x2 Jacobian of the net fluxes (W m^-2 K^-1), central differences.
Matrix2 flux_jacobian(const ClimateState& x, ControlLevel u, const ModelParams& p,
                      double step) {
    Matrix2 j{};
    for (int col = 0; col < 2; ++col) {
        ClimateState hi = x, lo = x;
        (col == 0 ? hi.t_a : hi.t_s) += step;
        (col == 0 ? lo.t_a : lo.t_s) -= step;
        const NetFluxes fh = net_fluxes(hi, u, p);
        const NetFluxes fl = net_fluxes(lo, u, p);
        j[0][col] = (fh.f_a - fl.f_a) / (2.0 * step);
        j[1][col] = (fh.f_s - fl.f_s) / (2.0 * step);
    }
    return j;
}

double inf_norm(const NetFluxes& f) {
    return std::max(std::fabs(f.f_a), std::fabs(f.f_s));
}

}  // namespace

ClimateState equilibrium(const ModelParams& p, ControlLevel u, ClimateState guess) {
    p.validate();
    constexpr double kTol = 1e-6;   // W m^-2
    constexpr int kMaxIter = 100;
    constexpr double kFdStep = 1e-4;

    ClimateState x = guess;
    double res = inf_norm(net_fluxes(x, u, p));
    for (int it = 0; it < kMaxIter; ++it) {
        if (res < kTol) return x;
        const NetFluxes f = net_fluxes(x, u, p);
        const Matrix2 j = flux_jacobian(x, u, p, kFdStep);
        const double det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if (std::fabs(det) < 1e-30) {
            throw EquilibriumError("equilibrium: singular Jacobian", x, res);
        }
        // Newton step: solve J * dx = -f.
        double dx_a = (-f.f_a * j[1][1] + f.f_s * j[0][1]) / det;
        double dx_s = (-f.f_s * j[0][0] + f.f_a * j[1][0]) / det;

        // Halve the step while the residual grows.
        double scale = 1.0;
        ClimateState next;
        double next_res;
        for (;;) {
            next = {x.t_a + scale * dx_a, x.t_s + scale * dx_s};
            next_res = inf_norm(net_fluxes(next, u, p));
            if (next_res < res || scale < 1.0 / 1024.0) break;
            scale *= 0.5;
        }
        x = next;
        res = next_res;
    }
    if (res < kTol) return x;
    throw EquilibriumError("equilibrium: no convergence within 100 iterations (residual " +
                               std::to_string(res) + " W m^-2)",
                           x, res);
}

Matrix2 jacobian(const ClimateState& x, ControlLevel u, const ModelParams& p) {
    constexpr double kStep = 1e-4;  // K
    Matrix2 j{};
    for (int col = 0; col < 2; ++col) {
        ClimateState hi = x, lo = x;
        (col == 0 ? hi.t_a : hi.t_s) += kStep;
        (col == 0 ? lo.t_a : lo.t_s) -= kStep;
        const StateRate rh = rhs(hi, u, p);
        const StateRate rl = rhs(lo, u, p);
        j[0][col] = (rh.d_t_a - rl.d_t_a) / (2.0 * kStep);
        j[1][col] = (rh.d_t_s - rl.d_t_s) / (2.0 * kStep);
    }
    return j;
}

std::array<double, 2> eigenvalue_real_parts(const Matrix2& m) {
    const double tr = m[0][0] + m[1][1];
    const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    const double disc = tr * tr / 4.0 - det;
    if (disc >= 0.0) {
        const double root = std::sqrt(disc);
        return {tr / 2.0 + root, tr / 2.0 - root};
    }
    return {tr / 2.0, tr / 2.0};  // complex pair, shared real part
}

}  // namespace climctl
