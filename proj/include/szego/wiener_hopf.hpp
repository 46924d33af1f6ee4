#pragma once

#include "szego/symbol.hpp"

#include <utility>

namespace szego {

/// Wiener-Hopf data of a symbol a with winding number zero.
///
/// With L = log a split as L = L_minus + L_0 + L_plus by index sign,
///   a_minus = mu^-1 exp(L_minus),  a_plus = mu exp(L_0 + L_plus),
///   b = a_minus / a_plus,          c = a_plus / a_minus,
/// so that a = a_minus a_plus and b c = 1 for every nonzero mu.
struct Factorization {
    Symbol log_coeffs;
    Symbol a_minus;
    Symbol a_plus;
    cplx g_mean = 1.0;
    Symbol b;
    Symbol c;
    cplx mu = 1.0;
};

Factorization factorize(const Symbol& a, cplx mu = 1.0);

std::pair<Symbol, Symbol> bc_coefficients(const Factorization& f);

/// Geometric mean exp((log x)_0).
cplx g_mean_of(const Symbol& x);

/// Smallest B >= 0 with ||Q_B H(phi)||_F < tol, computed from the coefficient
/// tail sum_{m > B} (m - B) |phi_m|^2. Use reflect(phi) for the H(phi~) side.
int hankel_bandwidth(const Symbol& phi, double tol);

}  // namespace szego
