#pragma once

#include <string>
#include <vector>

#include "blowuplab/specfun.hpp"

namespace blowuplab::specfun {

struct CheckRow {
    std::string check;
    std::string point;
    double value = 0.0;
    double limit = 0.0;
    bool pass = false;
};

/// Evaluates the special-function property table: K_ν symmetry and large-t
/// asymptotics, the half-order closed form, the radial Helmholtz identity for φ,
/// the ρ ODE residual, the limit ρ'/ρ → −1 and the conjugate equation for ψ.
/// Derivatives are centred differences with step 1e−4.
std::vector<CheckRow> run_property_checks();

/// Relative residual of ρ'' − ρ − (μ ρ/(1+t))' at t (t ≥ 0; one-sided-safe).
double rho_ode_residual(double mu, double t);

/// Relative residual of φ'' + (N−1)/r φ' − φ at r > 0.
double helmholtz_residual(int N, double r);

/// Relative residual of ψ_tt − Δψ − (μ ψ/(1+t))_t at (r, t), r > 0.
double conjugate_residual(int N, double mu, double r, double t);

}  // namespace blowuplab::specfun
