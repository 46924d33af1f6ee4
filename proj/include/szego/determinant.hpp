#pragma once

#include "szego/sections.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace szego {

/// Matrices with rcond at or below this are treated as not invertible.
inline constexpr double kInvertibleRcond = 1e-12;

struct DetResult {
    cplx value = 1.0;
    double log_modulus = 0.0;
    double pivot_min = 0.0;
    double rcond_estimate = 1.0;
};

/// LU with partial pivoting. An empty matrix has determinant 1.
DetResult det_lu(const Matrix& a);
DetResult det_lu(const FiniteSection& a);

double rcond_estimate(const Matrix& a);
/// Throws NearSingular when rcond_estimate(a) <= kInvertibleRcond.
void require_invertible(const Matrix& a, const char* what);

/// Rows i_1 < ... < i_s and columns k_1 < ... < k_s (1-based) of an m x m matrix.
struct MinorSpec {
    std::vector<int> rows;
    std::vector<int> cols;
    int ambient = 0;

    void validate() const;
    /// {1..m} minus rows (resp. cols), increasing.
    std::vector<int> complement_rows() const;
    std::vector<int> complement_cols() const;
};

Matrix submatrix(const Matrix& a, const std::vector<int>& rows, const std::vector<int>& cols);

cplx minor_det(const Matrix& a, const MinorSpec& spec);

/// (-1)^{sum of the index sets}, by integer parity.
int minor_sign(const MinorSpec& spec);

/// Both sides of Jacobi's identity for the minors of the inverse:
///   A^{-1}(rows; cols) = (-1)^{sum(i_r + k_r)} A(cols'; rows') / det A.
std::pair<cplx, cplx> jacobi_check(const Matrix& a, const MinorSpec& spec);

/// (det P_n (I - K)^{-1} P_n, det(I - Q_n K Q_n) / det(I - K)) at the level
/// of the given section. This is an identity at every finite level.
std::pair<cplx, cplx> corollary22_check(const FiniteSection& k_sec, int n);

/// (det P_b e^A e^B e^-A e^-B P_b, exp tr P_b (AB - BA) P_b) where all
/// products are taken at the full section size and b defaults to half of it.
/// The sections play the role of the infinite operators A and B.
std::pair<cplx, cplx> phh_check(const FiniteSection& a_sec, const FiniteSection& b_sec,
                                std::optional<int> block = std::nullopt);

}  // namespace szego
