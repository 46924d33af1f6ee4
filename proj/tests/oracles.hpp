#pragma once

// Brute-force references for the unit and acceptance tests. Nothing here
// touches Eigen or the library's transforms: determinants are Leibniz sums or
// hand-rolled elimination in long double, Fourier coefficients are direct
// sums, and operator products are explicit index loops.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numeric>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using lcplx = std::complex<long double>;
using Dense = std::vector<std::vector<cplx>>;
using Coeff = std::function<cplx(long)>;

inline Dense zeros(int rows, int cols) { return Dense(rows, std::vector<cplx>(cols)); }

/// Leibniz expansion over all permutations; n <= 8.
inline cplx det_leibniz(const Dense& a) {
    const int n = static_cast<int>(a.size());
    if (n == 0) return 1.0;
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    cplx total = 0.0;
    do {
        int inversions = 0;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) inversions += p[i] > p[j];
        }
        cplx term = inversions % 2 ? -1.0 : 1.0;
        for (int i = 0; i < n; ++i) term *= a[i][p[i]];
        total += term;
    } while (std::next_permutation(p.begin(), p.end()));
    return total;
}

/// Gaussian elimination with row pivoting in long double.
inline cplx det_elimination(Dense in) {
    const int n = static_cast<int>(in.size());
    std::vector<std::vector<lcplx>> a(n, std::vector<lcplx>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a[i][j] = lcplx(in[i][j].real(), in[i][j].imag());
    }
    lcplx det = 1.0L;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        }
        if (a[piv][col] == lcplx(0.0L)) return 0.0;
        if (piv != col) {
            std::swap(a[piv], a[col]);
            det = -det;
        }
        det *= a[col][col];
        for (int r = col + 1; r < n; ++r) {
            const lcplx factor = a[r][col] / a[col][col];
            for (int c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
        }
    }
    return {static_cast<double>(det.real()), static_cast<double>(det.imag())};
}

/// Inverse by Gauss-Jordan in long double.
inline Dense inverse(const Dense& in) {
    const int n = static_cast<int>(in.size());
    std::vector<std::vector<lcplx>> a(n, std::vector<lcplx>(2 * n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a[i][j] = lcplx(in[i][j].real(), in[i][j].imag());
        a[i][n + i] = 1.0L;
    }
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        }
        std::swap(a[piv], a[col]);
        const lcplx d = a[col][col];
        for (auto& v : a[col]) v /= d;
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const lcplx f = a[r][col];
            for (int c = 0; c < 2 * n; ++c) a[r][c] -= f * a[col][c];
        }
    }
    Dense out = zeros(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            out[i][j] = {static_cast<double>(a[i][n + j].real()), static_cast<double>(a[i][n + j].imag())};
        }
    }
    return out;
}

inline Dense multiply(const Dense& x, const Dense& y) {
    Dense out = zeros(static_cast<int>(x.size()), static_cast<int>(y[0].size()));
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t l = 0; l < y.size(); ++l) {
            for (std::size_t j = 0; j < y[0].size(); ++j) out[i][j] += x[i][l] * y[l][j];
        }
    }
    return out;
}

inline Dense toeplitz(const Coeff& f, int n, long offset = 0) {
    Dense t = zeros(n, n);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) t[j][k] = f(j - k + offset);
    }
    return t;
}

inline cplx toeplitz_det(const Coeff& f, int n) { return det_elimination(toeplitz(f, n)); }

/// N x N section of H(b) H(c~) with the inner sum over l = 1..inner.
inline Dense hankel_product(const Coeff& b, const Coeff& c, int n, int inner) {
    Dense k = zeros(n, n);
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            cplx s = 0.0;
            for (int l = 1; l <= inner; ++l) s += b(i + l - 1) * c(-(l + j - 1));
            k[i - 1][j - 1] = s;
        }
    }
    return k;
}

/// Coefficient k of the samples by the direct sum (1/M) sum_j x_j t_j^-k.
inline cplx dft_coefficient(const std::vector<cplx>& samples, long k) {
    const double m = static_cast<double>(samples.size());
    cplx s = 0.0;
    for (std::size_t j = 0; j < samples.size(); ++j) {
        s += samples[j] * std::polar(1.0, -2.0 * M_PI * static_cast<double>(k) * j / m);
    }
    return s / m;
}

inline cplx evaluate(const std::map<int, cplx>& coeffs, cplx t) {
    cplx s = 0.0;
    for (const auto& [k, v] : coeffs) s += v * std::pow(t, k);
    return s;
}

inline std::map<int, cplx> convolve(const std::map<int, cplx>& x, const std::map<int, cplx>& y) {
    std::map<int, cplx> out;
    for (const auto& [i, u] : x) {
        for (const auto& [j, v] : y) out[i + j] += u * v;
    }
    return out;
}

// --- geom(r, s) = (1 - r t)(1 - s/t), where every quantity has a closed form.

struct Geom {
    double r = 0.5;
    double s = 0.3;
    double rs() const { return r * s; }

    cplx a(long k) const {
        if (k == 0) return 1.0 + rs();
        if (k == 1) return -r;
        if (k == -1) return -s;
        return 0.0;
    }
    // b = (1 - s/t) / (1 - r t), c = (1 - r t) / (1 - s/t), by geometric series.
    cplx b(long k) const {
        if (k == -1) return -s;
        if (k >= 0) return std::pow(r, k) * (1.0 - rs());
        return 0.0;
    }
    cplx c(long k) const {
        if (k == 1) return -r;
        if (k <= 0) return std::pow(s, -k) * (1.0 - rs());
        return 0.0;
    }
    double dn(int n) const { return (1.0 - std::pow(rs(), n + 1)) / (1.0 - rs()); }
    double e() const { return 1.0 / (1.0 - rs()); }
    double f(int n) const { return std::pow(r, n) * (1.0 - rs()) / (1.0 - std::pow(rs(), n + 2)); }
};

/// sum_{m>=0} z^m / (m! (m+k)!), the shared series in the coefficients of
/// exp(alpha t + beta/t).
inline double bessel_series(double z, int k) {
    double term = 1.0;
    for (int i = 1; i <= k; ++i) term /= i;
    double s = 0.0;
    for (int m = 0; m < 60; ++m) {
        s += term;
        term *= z / ((m + 1.0) * (m + 1.0 + k));
    }
    return s;
}

}  // namespace oracle
