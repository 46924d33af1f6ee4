#pragma once

#include "szego/szego_bo.hpp"

#include <utility>

namespace szego {

struct WindingReport {
    int n = 0;
    int kappa = 0;
    cplx d_exact;  // brute D_n(t^-kappa a)
    cplx f_11;
    cplx f_12;
    cplx f_series;
    cplx f_tilde;  // zero when n <= kappa
    cplx leading;  // det T_kappa(t^-n b)
    cplx y_det;    // sign-corrected det Y, comparable with f_12
    cplx y_det_raw;
    int sign = 1;  // (-1)^{n kappa}
    cplx d_reconstructed;
};

/// (-1)^{n kappa} by integer parity.
int winding_sign(int n, int kappa);

/// (brute D_n(t^-kappa a), (-1)^{n kappa} D_{n+kappa}(a) times the minor of
/// T_{n+kappa}^{-1}(a) on rows n+1..n+kappa, columns 1..kappa).
std::pair<cplx, cplx> cor23_eval(const Symbol& a, int n, int kappa);

/// Sections of the resolvents behind F_{n,kappa}, shared by every (n, kappa)
/// with n + kappa <= max_m. The product H(b) H(c~) is stored at twice the
/// working level so that the doubling check needs no second build.
class WindingContext {
public:
    WindingContext(Factorization f, int max_m, const TruncationPolicy& policy);

    /// det P_k T(t^-n) (I - K Q_{n+k})^{-1} T(b) P_k
    cplx f_11(int n, int kappa) const;
    /// det P_k (I - H(b) Q_n H(c~) Q_k)^{-1} T(t^-n b) P_k
    cplx f_12(int n, int kappa) const;
    /// Neumann partial sum of f_12 with powers 0..terms.
    cplx f_series(int n, int kappa, int terms) const;
    /// det P_k (I - H(b) Q_{n-k} H(c~))^{-1} T(t^-n b) P_k, for n > kappa.
    cplx f_tilde(int n, int kappa) const;
    cplx leading(int n, int kappa) const;

    int level() const noexcept { return level_; }
    int inner_level() const noexcept { return product_.inner_level(); }
    const Factorization& factorization() const noexcept { return f_; }

private:
    enum class Kind { f11, f12, tilde };
    void require_indices(int n, int kappa) const;
    cplx resolvent_det(Kind kind, int n, int kappa, int size, bool check) const;
    cplx checked(Kind kind, int n, int kappa) const;

    Factorization f_;
    TruncationPolicy policy_;
    int max_m_;
    int level_;
    HankelProduct product_;
};

cplx f_via_11(const Symbol& a, int n, int kappa, const TruncationPolicy& policy);
cplx f_via_12(const Symbol& a, int n, int kappa, const TruncationPolicy& policy);
/// Throws SeriesDiverges unless ||H(b) Q_n H(c~) Q_kappa|| < 1 on the section.
cplx f_via_series(const Symbol& a, int n, int kappa, const TruncationPolicy& policy, int terms);
cplx leading_term(const Symbol& a, int n, int kappa);
cplx f_tilde(const Symbol& a, int n, int kappa, const TruncationPolicy& policy);

struct YDet {
    cplx value;  // (-1)^{kappa(kappa-1)/2} det Y, which equals f_12
    cplx raw;    // det Y
};

/// Y_{ij} = P_{-i} t^{1-n-kappa} b (I - VU)^{-1} P_{j} on the lattice
/// {-window..window}, rechecked on the doubled window.
YDet y_matrix_det(const Factorization& f, int n, int kappa, int window);
YDet y_matrix_det(const Symbol& a, int n, int kappa, int window);

/// (brute D_n(t^kappa a), value from the reflected symbol fed through the
/// negative-winding machinery).
std::pair<cplx, cplx> positive_winding_det(const Symbol& a, int n, int kappa,
                                           const TruncationPolicy& policy = {});

/// (Right-hand side (-1)^{n kappa} D_{n+kappa}(a) G(a)^-kappa G(c)^kappa F
/// with the mu-rescaled factorization, brute D_n(t^-kappa a)).
std::pair<cplx, cplx> mu_invariance_check(const Symbol& a, int n, int kappa, cplx mu,
                                          const TruncationPolicy& policy = {});

/// Every winding quantity for one (n, kappa). f_tilde is left at zero when
/// n <= kappa.
WindingReport winding_report(const Symbol& a, const WindingContext& ctx, int n, int kappa,
                             int series_terms = 200);

}  // namespace szego
