#include "szego/wiener_hopf.hpp"

#include "szego/error.hpp"

#include <cmath>

namespace szego {

Factorization factorize(const Symbol& a, cplx mu) {
    if (mu == cplx{}) throw Error(ErrorCode::InvalidParams, "mu must be nonzero");
    if (const int gamma = winding_number(a); gamma != 0) {
        throw Error(ErrorCode::NonzeroWinding, "winding number " + std::to_string(gamma));
    }
    Factorization f;
    f.mu = mu;
    f.log_coeffs = log_symbol(a);
    const Symbol log_minus = f.log_coeffs.negative_part(false);
    const Symbol log_plus = f.log_coeffs.positive_part(true);

    f.a_minus = scale(exp_symbol(log_minus), 1.0 / mu);
    f.a_plus = scale(exp_symbol(log_plus), mu);
    f.g_mean = std::exp(f.log_coeffs[0]);
    f.b = scale(exp_symbol(subtract(log_minus, log_plus)), 1.0 / (mu * mu));
    f.c = scale(exp_symbol(subtract(log_plus, log_minus)), mu * mu);
    return f;
}

std::pair<Symbol, Symbol> bc_coefficients(const Factorization& f) { return {f.b, f.c}; }

cplx g_mean_of(const Symbol& x) { return std::exp(log_symbol(x)[0]); }

int hankel_bandwidth(const Symbol& phi, double tol) {
    auto tail_sq = [&](int cut) {
        double total = 0.0;
        for (auto it = phi.coeffs().upper_bound(cut); it != phi.coeffs().end(); ++it) {
            total += static_cast<double>(it->first - cut) * std::norm(it->second);
        }
        return total;
    };
    int lo = 0;
    int hi = phi.k_max();
    if (std::sqrt(tail_sq(lo)) < tol) return 0;
    // invariant: tail(lo) >= tol, tail(hi) < tol (tail(k_max) is exactly zero)
    while (hi - lo > 1) {
        const int mid = lo + (hi - lo) / 2;
        if (std::sqrt(tail_sq(mid)) < tol) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

}  // namespace szego
