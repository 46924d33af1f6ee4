#pragma once

#include "szego/sections.hpp"
#include "szego/wiener_hopf.hpp"

#include <vector>

namespace szego {

/// Relative tolerance of every level-doubling check on determinant ratios.
inline constexpr double kDoublingTol = 1e-9;

struct SzegoReport {
    int n = 0;
    cplx d_n;
    cplx g_pow_e;  // G(a)^n E(a)
    double rel_err = 0.0;
    cplx bo_lhs;
    cplx bo_rhs;
    double bo_gap = 0.0;
    int level = 0;
    int inner_level = 0;
};

/// The Szego constant four ways, with the largest pairwise relative gap.
struct EBundle {
    cplx e_op;         // 1 / det(I - H(b) H(c~))
    cplx e_ta;         // det T(a) T(a^-1) = det(I - H(a) H((a^-1)~))
    cplx e_series_a;   // exp sum k (log a)_k (log a)_{-k}
    cplx e_series_bc;  // exp sum k (log b)_k (log c)_{-k}
    double spread = 0.0;
};

/// D_n(f) = det T_n(f), with D_0 = 1.
cplx dn_exact(const Symbol& f, int n);

/// Working section level for quantities involving indices up to m:
/// max(target_level, 64, 4m, m + bandwidth(b) + bandwidth(c~)).
int working_level(const Factorization& f, int m, const TruncationPolicy& policy);

/// Right-hand side G(a)^n det(I - Q_n K Q_n) / det(I - K) for every
/// n <= max_n, with K = H(b) H(c~) built once. When the policy asks for it,
/// each value is recomputed at twice the working level and must agree to
/// kDoublingTol.
class BorodinOkounkov {
public:
    BorodinOkounkov(Factorization f, int max_n, const TruncationPolicy& policy);

    cplx rhs(int n) const;
    /// 1 / det(I - K).
    cplx e_op() const;

    int level() const noexcept { return level_; }
    int inner_level() const noexcept { return product_.inner_level(); }
    const Factorization& factorization() const noexcept { return f_; }
    const HankelProduct& product() const noexcept { return product_; }

private:
    cplx ratio(int n, int size) const;

    Factorization f_;
    TruncationPolicy policy_;
    int max_n_;
    int level_;
    HankelProduct product_;
    cplx det_full_;
    cplx det_full_doubled_;
};

cplx bo_rhs(const Symbol& a, int n, const TruncationPolicy& policy);

/// exp sum_{k>=1} k x_k y_{-k}, dropping the tail once its modulus bound is
/// below 1e-16, and never past index `cutoff`.
cplx exp_trace_series(const Symbol& x, const Symbol& y, int cutoff);

EBundle e_four_ways(const Symbol& a, const TruncationPolicy& policy, int series_cutoff = 100000);

std::vector<SzegoReport> szego_sweep(const Symbol& a, const std::vector<int>& n_list,
                                     const TruncationPolicy& policy);

/// ||Q_n H(b)||_F on the level x level section, for each n.
std::vector<double> q_hankel_norms(const Symbol& b, const std::vector<int>& n_list, int level);

}  // namespace szego
