#include "szego/winding.hpp"

#include "szego/determinant.hpp"
#include "szego/error.hpp"

#include <algorithm>
#include <cmath>

namespace szego {

namespace {

void require_positive(int n, int kappa) {
    if (n < 1 || kappa < 1) {
        throw Error(ErrorCode::InvalidParams, "need n >= 1 and kappa >= 1, got n = " +
                                                  std::to_string(n) +
                                                  ", kappa = " + std::to_string(kappa));
    }
}

bool close(cplx x, cplx reference, double tol) {
    return std::abs(x - reference) <= tol * std::max(1.0, std::abs(reference));
}

int parity_sign(long exponent) { return exponent % 2 == 0 ? 1 : -1; }

// Factorization of a~ obtained from that of a: a~_- = (a_+)~, a~_+ = (a_-)~.
// Since a_+ carries G(a), this is the mu-family member with mu = 1/(mu G(a)).
Factorization reflected(const Factorization& f) {
    Factorization out;
    out.log_coeffs = reflect(f.log_coeffs);
    out.a_minus = reflect(f.a_plus);
    out.a_plus = reflect(f.a_minus);
    out.g_mean = f.g_mean;
    out.b = reflect(f.c);
    out.c = reflect(f.b);
    out.mu = 1.0 / (f.mu * f.g_mean);
    return out;
}

}  // namespace

int winding_sign(int n, int kappa) { return parity_sign(static_cast<long>(n) * kappa); }

std::pair<cplx, cplx> cor23_eval(const Symbol& a, int n, int kappa) {
    require_positive(n, kappa);
    const int m = n + kappa;
    const cplx brute = dn_exact(shift(a, -kappa), n);
    const Matrix t = toeplitz_section(a, m).entries;
    require_invertible(t, "T_{n+kappa}(a)");
    const Eigen::PartialPivLU<Matrix> lu(t);
    const Matrix inverse = lu.inverse();
    const cplx minor = det_lu(Matrix(inverse.block(n, 0, kappa, kappa))).value;
    return {brute, static_cast<double>(winding_sign(n, kappa)) * lu.determinant() * minor};
}

// ---------------------------------------------------------------------------

WindingContext::WindingContext(Factorization f, int max_m, const TruncationPolicy& policy)
    : f_(std::move(f)),
      policy_(policy),
      max_m_(max_m),
      level_(working_level(f_, max_m, policy)),
      product_(f_.b, f_.c, policy.doubling_check ? 2 * level_ : level_, policy) {
    if (max_m < 2) throw Error(ErrorCode::InvalidParams, "max_m must be >= 2");
}

void WindingContext::require_indices(int n, int kappa) const {
    require_positive(n, kappa);
    if (n + kappa > max_m_) {
        throw Error(ErrorCode::IndexOutOfRange, "n + kappa = " + std::to_string(n + kappa) +
                                                    " exceeds " + std::to_string(max_m_));
    }
}

cplx WindingContext::resolvent_det(Kind kind, int n, int kappa, int size, bool check) const {
    Matrix m;
    Matrix rhs;
    int first_row = 0;
    switch (kind) {
        case Kind::f11:
            m = product_.k_block(size);
            m.leftCols(n + kappa).setZero();
            rhs = toeplitz_block(f_.b, size, kappa);
            first_row = n;  // T(t^-n) drops the first n rows
            break;
        case Kind::f12:
            m = product_.gapped(n, size);
            m.leftCols(kappa).setZero();
            rhs = toeplitz_block(f_.b, size, kappa, n);
            break;
        case Kind::tilde:
            m = product_.gapped(n - kappa, size);
            rhs = toeplitz_block(f_.b, size, kappa, n);
            break;
    }
    m = Matrix::Identity(size, size) - m;
    if (check) require_invertible(m, "resolvent section");
    const Matrix z = m.partialPivLu().solve(rhs);
    return det_lu(Matrix(z.middleRows(first_row, kappa))).value;
}

cplx WindingContext::checked(Kind kind, int n, int kappa) const {
    const cplx value = resolvent_det(kind, n, kappa, level_, true);
    if (policy_.doubling_check) {
        const cplx doubled = resolvent_det(kind, n, kappa, 2 * level_, false);
        if (!close(value, doubled, kDoublingTol)) {
            throw Error(ErrorCode::TailNotResolved,
                        "F moved by " + std::to_string(std::abs(value - doubled)) +
                            " when the section level was doubled");
        }
    }
    return value;
}

cplx WindingContext::f_11(int n, int kappa) const {
    require_indices(n, kappa);
    return checked(Kind::f11, n, kappa);
}

cplx WindingContext::f_12(int n, int kappa) const {
    require_indices(n, kappa);
    return checked(Kind::f12, n, kappa);
}

cplx WindingContext::f_tilde(int n, int kappa) const {
    require_indices(n, kappa);
    if (n <= kappa) throw Error(ErrorCode::InvalidParams, "f_tilde needs n > kappa");
    return checked(Kind::tilde, n, kappa);
}

cplx WindingContext::f_series(int n, int kappa, int terms) const {
    require_indices(n, kappa);
    if (terms < 0) throw Error(ErrorCode::InvalidParams, "terms must be >= 0");
    Matrix m = product_.gapped(n, level_);
    m.leftCols(kappa).setZero();
    if (m.norm() >= 1.0) {
        const double spectral = Eigen::BDCSVD<Matrix>(m).singularValues()(0);
        if (spectral >= 1.0) {
            throw Error(ErrorCode::SeriesDiverges,
                        "||H(b) Q_n H(c~) Q_k|| = " + std::to_string(spectral));
        }
    }
    Matrix term = toeplitz_block(f_.b, level_, kappa, n);
    Matrix sum = term;
    for (int k = 0; k < terms; ++k) {
        term = m * term;
        sum += term;
    }
    return det_lu(Matrix(sum.topRows(kappa))).value;
}

cplx WindingContext::leading(int n, int kappa) const {
    require_positive(n, kappa);
    return det_lu(toeplitz_block(f_.b, kappa, kappa, n)).value;
}

cplx f_via_11(const Symbol& a, int n, int kappa, const TruncationPolicy& policy) {
    require_positive(n, kappa);
    return WindingContext(factorize(a), n + kappa, policy).f_11(n, kappa);
}

cplx f_via_12(const Symbol& a, int n, int kappa, const TruncationPolicy& policy) {
    require_positive(n, kappa);
    return WindingContext(factorize(a), n + kappa, policy).f_12(n, kappa);
}

cplx f_via_series(const Symbol& a, int n, int kappa, const TruncationPolicy& policy, int terms) {
    require_positive(n, kappa);
    return WindingContext(factorize(a), n + kappa, policy).f_series(n, kappa, terms);
}

cplx leading_term(const Symbol& a, int n, int kappa) {
    require_positive(n, kappa);
    return det_lu(toeplitz_block(factorize(a).b, kappa, kappa, n)).value;
}

cplx f_tilde(const Symbol& a, int n, int kappa, const TruncationPolicy& policy) {
    require_positive(n, kappa);
    return WindingContext(factorize(a), n + kappa, policy).f_tilde(n, kappa);
}

// ---------------------------------------------------------------------------

namespace {

// Lattice index i in -w..w lives at position i + w.
cplx y_raw(const Factorization& f, int n, int kappa, int w) {
    const int m = n + kappa;
    const int dim = 2 * w + 1;
    const CoeffTable b(f.b);
    const CoeffTable c(f.c);

    // V is supported on rows i < 0 and U on rows i > 0, so VU only needs the
    // block V(i < 0, j > 0) times U(j > 0, all).
    Matrix v_neg(w, w);
    for (int i = -w; i < 0; ++i) {
        for (int j = 1; j <= w; ++j) v_neg(i + w, j - 1) = c(static_cast<long>(i) - j - m + 1);
    }
    Matrix u_pos(w, dim);
    for (int j = 1; j <= w; ++j) {
        for (int l = -w; l <= w; ++l) u_pos(j - 1, l + w) = b(static_cast<long>(j) - l + m - 1);
    }
    Matrix a = Matrix::Identity(dim, dim);
    a.topRows(w).noalias() -= v_neg * u_pos;
    require_invertible(a, "I - VU");

    Matrix unit = Matrix::Zero(dim, kappa);
    for (int j = 0; j < kappa; ++j) unit(j + w, j) = 1.0;
    const Matrix x = a.partialPivLu().solve(unit);

    Matrix y(kappa, kappa);
    for (int i = 0; i < kappa; ++i) {
        Eigen::RowVectorXcd row(dim);
        for (int l = -w; l <= w; ++l) row(l + w) = b(static_cast<long>(-i) - l + m - 1);
        y.row(i) = row * x;
    }
    return det_lu(y).value;
}

}  // namespace

YDet y_matrix_det(const Factorization& f, int n, int kappa, int window) {
    require_positive(n, kappa);
    if (window < n + kappa) {
        throw Error(ErrorCode::WindowTooSmall,
                    "window " + std::to_string(window) + " below n + kappa");
    }
    const cplx raw = y_raw(f, n, kappa, window);
    const cplx doubled = y_raw(f, n, kappa, 2 * window);
    if (!close(raw, doubled, kDoublingTol)) {
        throw Error(ErrorCode::WindowTooSmall,
                    "det Y moved by " + std::to_string(std::abs(raw - doubled)) +
                        " when the window was doubled");
    }
    // Reversing the rows of Y gives the matrix whose determinant is F.
    const long reversal = static_cast<long>(kappa) * (kappa - 1) / 2;
    return {static_cast<double>(parity_sign(reversal)) * raw, raw};
}

YDet y_matrix_det(const Symbol& a, int n, int kappa, int window) {
    return y_matrix_det(factorize(a), n, kappa, window);
}

std::pair<cplx, cplx> positive_winding_det(const Symbol& a, int n, int kappa,
                                           const TruncationPolicy& policy) {
    require_positive(n, kappa);
    const int m = n + kappa;
    const cplx brute = dn_exact(shift(a, kappa), n);

    const Factorization star = reflected(factorize(a));
    const Symbol a_tilde = reflect(a);
    const cplx f = WindingContext(star, m, policy).f_12(n, kappa);
    const cplx g_ratio = g_mean_of(star.c) / star.g_mean;
    const cplx value = static_cast<double>(winding_sign(n, kappa)) * dn_exact(a_tilde, m) *
                       std::pow(g_ratio, kappa) * f;
    return {brute, value};
}

std::pair<cplx, cplx> mu_invariance_check(const Symbol& a, int n, int kappa, cplx mu,
                                          const TruncationPolicy& policy) {
    require_positive(n, kappa);
    const int m = n + kappa;
    const Matrix t = toeplitz_section(a, m).entries;
    require_invertible(t, "T_{n+kappa}(a)");

    const Factorization f = factorize(a, mu);
    const cplx big_f = WindingContext(f, m, policy).f_12(n, kappa);
    const cplx g_ratio = g_mean_of(f.c) / f.g_mean;
    const cplx value = static_cast<double>(winding_sign(n, kappa)) * det_lu(t).value *
                       std::pow(g_ratio, kappa) * big_f;
    return {value, dn_exact(shift(a, -kappa), n)};
}

WindingReport winding_report(const Symbol& a, const WindingContext& ctx, int n, int kappa,
                             int series_terms) {
    WindingReport r;
    r.n = n;
    r.kappa = kappa;
    r.sign = winding_sign(n, kappa);
    r.d_exact = dn_exact(shift(a, -kappa), n);
    r.f_11 = ctx.f_11(n, kappa);
    r.f_12 = ctx.f_12(n, kappa);
    r.f_series = ctx.f_series(n, kappa, series_terms);
    if (n > kappa) r.f_tilde = ctx.f_tilde(n, kappa);
    r.leading = ctx.leading(n, kappa);
    const YDet y = y_matrix_det(ctx.factorization(), n, kappa, ctx.level());
    r.y_det = y.value;
    r.y_det_raw = y.raw;
    r.d_reconstructed = static_cast<double>(r.sign) * dn_exact(a, n + kappa) * r.f_12;
    return r;
}

}  // namespace szego
