#include "szego/szego_bo.hpp"

#include "szego/determinant.hpp"
#include "szego/error.hpp"

#include <algorithm>
#include <cmath>

namespace szego {

namespace {

Matrix identity_minus(const Matrix& k) { return Matrix::Identity(k.rows(), k.cols()) - k; }

double relative_gap(cplx x, cplx y) {
    const double scale = std::max(std::abs(x), std::abs(y));
    return scale == 0.0 ? 0.0 : std::abs(x - y) / scale;
}

void check_doubling(cplx at_level, cplx at_double, const char* what) {
    const double gap = std::abs(at_level - at_double) / std::max(1.0, std::abs(at_double));
    if (gap > kDoublingTol) {
        throw Error(ErrorCode::TailNotResolved,
                    std::string(what) + " moved by " + std::to_string(gap) +
                        " when the section level was doubled");
    }
}

}  // namespace

cplx dn_exact(const Symbol& f, int n) {
    if (n < 0) throw Error(ErrorCode::InvalidParams, "n must be >= 0");
    if (n == 0) return 1.0;
    return det_lu(toeplitz_section(f, n)).value;
}

int working_level(const Factorization& f, int m, const TruncationPolicy& policy) {
    policy.validate();
    const int band = hankel_bandwidth(f.b, policy.tail_tol) +
                     hankel_bandwidth(reflect(f.c), policy.tail_tol);
    const int level = std::max({policy.target_level, 64, 4 * m, m + band});
    if (level > policy.max_inner) {
        throw Error(ErrorCode::TailNotResolved,
                    "working level " + std::to_string(level) + " exceeds the cap " +
                        std::to_string(policy.max_inner));
    }
    return level;
}

BorodinOkounkov::BorodinOkounkov(Factorization f, int max_n, const TruncationPolicy& policy)
    : f_(std::move(f)),
      policy_(policy),
      max_n_(max_n),
      level_(working_level(f_, max_n, policy)),
      product_(f_.b, f_.c, policy.doubling_check ? 2 * level_ : level_, policy) {
    if (max_n < 0) throw Error(ErrorCode::InvalidParams, "max_n must be >= 0");
    const Matrix a = identity_minus(product_.k_block(level_));
    require_invertible(a, "I - H(b)H(c~)");
    det_full_ = det_lu(a).value;
    det_full_doubled_ =
        policy_.doubling_check ? det_lu(identity_minus(product_.k())).value : det_full_;
}

cplx BorodinOkounkov::ratio(int n, int size) const {
    const Matrix k = product_.k_block(size);
    const Matrix tail = identity_minus(k.bottomRightCorner(size - n, size - n));
    const cplx full = size == level_ ? det_full_ : det_full_doubled_;
    return det_lu(tail).value / full;
}

cplx BorodinOkounkov::rhs(int n) const {
    if (n < 0 || n > max_n_) {
        throw Error(ErrorCode::IndexOutOfRange,
                    "n = " + std::to_string(n) + " outside 0.." + std::to_string(max_n_));
    }
    const cplx g_pow = std::pow(f_.g_mean, n);
    const cplx value = g_pow * ratio(n, level_);
    if (policy_.doubling_check) check_doubling(value, g_pow * ratio(n, 2 * level_), "BO ratio");
    return value;
}

cplx BorodinOkounkov::e_op() const {
    const cplx value = 1.0 / det_full_;
    if (policy_.doubling_check) check_doubling(value, 1.0 / det_full_doubled_, "1/det(I-K)");
    return value;
}

cplx bo_rhs(const Symbol& a, int n, const TruncationPolicy& policy) {
    return BorodinOkounkov(factorize(a), n, policy).rhs(n);
}

cplx exp_trace_series(const Symbol& x, const Symbol& y, int cutoff) {
    const int last = std::min({cutoff, x.k_max(), -y.k_min()});
    if (last < 1) return 1.0;
    std::vector<cplx> terms(static_cast<std::size_t>(last) + 1);
    std::vector<double> tail(static_cast<std::size_t>(last) + 2, 0.0);
    for (int k = last; k >= 1; --k) {
        terms[k] = static_cast<double>(k) * x[k] * y[-k];
        tail[k] = tail[k + 1] + std::abs(terms[k]);
    }
    cplx sum{};
    for (int k = 1; k <= last && tail[k] >= 1e-16; ++k) sum += terms[k];
    return std::exp(sum);
}

EBundle e_four_ways(const Symbol& a, const TruncationPolicy& policy, int series_cutoff) {
    const Factorization f = factorize(a);
    EBundle e;
    e.e_op = BorodinOkounkov(f, 0, policy).e_op();

    // T(a) T(a^-1) = I - H(a) H((a^-1)~)
    const Symbol a_inv = inverse_symbol(a);
    const int band =
        hankel_bandwidth(a, policy.tail_tol) + hankel_bandwidth(reflect(a_inv), policy.tail_tol);
    const int level = std::max({policy.target_level, 64, band});
    const HankelProduct ta(a, a_inv, policy.doubling_check ? 2 * level : level, policy);
    const Matrix i_minus = identity_minus(ta.k_block(level));
    require_invertible(i_minus, "T(a)T(a^-1)");
    e.e_ta = det_lu(i_minus).value;
    if (policy.doubling_check) check_doubling(e.e_ta, det_lu(identity_minus(ta.k())).value, "det T(a)T(a^-1)");

    e.e_series_a = exp_trace_series(f.log_coeffs, f.log_coeffs, series_cutoff);
    e.e_series_bc = exp_trace_series(log_symbol(f.b), log_symbol(f.c), series_cutoff);

    const cplx values[] = {e.e_op, e.e_ta, e.e_series_a, e.e_series_bc};
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i + 1; j < 4; ++j) {
            e.spread = std::max(e.spread, relative_gap(values[i], values[j]));
        }
    }
    return e;
}

std::vector<SzegoReport> szego_sweep(const Symbol& a, const std::vector<int>& n_list,
                                     const TruncationPolicy& policy) {
    if (n_list.empty()) return {};
    const int max_n = *std::max_element(n_list.begin(), n_list.end());
    const BorodinOkounkov bo(factorize(a), max_n, policy);
    const cplx e = bo.e_op();
    std::vector<SzegoReport> out;
    out.reserve(n_list.size());
    for (int n : n_list) {
        SzegoReport r;
        r.n = n;
        r.level = bo.level();
        r.inner_level = bo.inner_level();
        r.d_n = dn_exact(a, n);
        r.g_pow_e = std::pow(bo.factorization().g_mean, n) * e;
        r.rel_err = r.g_pow_e == cplx{} ? 0.0 : std::abs(r.d_n / r.g_pow_e - 1.0);
        r.bo_lhs = r.d_n;
        r.bo_rhs = bo.rhs(n);
        r.bo_gap = std::abs(r.bo_lhs - r.bo_rhs) / std::abs(r.bo_lhs);
        out.push_back(r);
    }
    return out;
}

std::vector<double> q_hankel_norms(const Symbol& b, const std::vector<int>& n_list, int level) {
    const Matrix h = hankel_block(b, level, level);
    std::vector<double> out;
    out.reserve(n_list.size());
    for (int n : n_list) {
        if (n < 0 || n > level) throw Error(ErrorCode::IndexOutOfRange, "n outside the section");
        out.push_back(h.bottomRows(level - n).norm());
    }
    return out;
}

}  // namespace szego
