#pragma once

// Finite sections of the infinite Toeplitz and Hankel matrices
//   T(phi) = (phi_{j-k}),  H(phi) = (phi_{j+k-1}),  H(phi~) = (phi_{-j-k+1}),
// with j, k = 1, 2, ... . All public accessors use this 1-based convention;
// the Eigen storage underneath is 0-based.

#include "szego/symbol.hpp"

#include <Eigen/Dense>

#include <vector>

namespace szego {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct FiniteSection {
    Matrix entries;
    int level = 0;
    int inner_level = 0;
    /// Certified Frobenius bound on what the truncated inner products dropped.
    double tail_bound = 0.0;

    FiniteSection() = default;
    FiniteSection(Matrix m, int inner, double tail);
    explicit FiniteSection(Matrix m);

    /// Entry (j, k), 1-based.
    cplx at(int j, int k) const;
};

struct TruncationPolicy {
    int target_level = 64;
    double tail_tol = 1e-12;
    bool doubling_check = true;
    int max_inner = 4096;

    void validate() const;
};

/// Dense coefficient lookup over the support of a symbol.
class CoeffTable {
public:
    explicit CoeffTable(const Symbol& phi);
    cplx operator()(long k) const {
        return (k < lo_ || k > hi_) ? cplx{} : data_[static_cast<std::size_t>(k - lo_)];
    }

private:
    long lo_ = 0;
    long hi_ = -1;
    std::vector<cplx> data_;
};

/// rows x cols block with entry (j, k) = phi_{j - k + offset}, 1-based j, k.
Matrix toeplitz_block(const Symbol& phi, int rows, int cols, int offset = 0);
/// rows x cols block with entry (j, k) = phi_{j + k - 1 + offset}.
Matrix hankel_block(const Symbol& phi, int rows, int cols, int offset = 0);

FiniteSection toeplitz_section(const Symbol& phi, int n);
FiniteSection hankel_section(const Symbol& phi, int n);
FiniteSection hankel_tilde_section(const Symbol& phi, int n);

/// Frobenius norm of the rows 1..rows of H(phi) restricted to columns > inner.
double hankel_tail_norm(const Symbol& phi, int rows, int inner);

/// Smallest inner level L >= level for which both discarded factors of the
/// truncated product H(b) P_L H(c~) have Frobenius norm below tail_tol.
/// Throws TailNotResolved beyond policy.max_inner.
int choose_inner_level(const Symbol& b, const Symbol& c, int level, const TruncationPolicy& policy);

/// Section of H(b) H(c~) at policy.target_level. With doubling_check, the
/// section is recomputed with twice the inner level and must agree to 1e-12.
FiniteSection k_section(const Symbol& b, const Symbol& c, const TruncationPolicy& policy);

/// The factors of H(b) H(c~) at one level, kept so that gapped products
/// H(b) Q_n H(c~) come out as rank-n downdates of K.
class HankelProduct {
public:
    HankelProduct(const Symbol& b, const Symbol& c, int level, const TruncationPolicy& policy);

    int level() const noexcept { return level_; }
    int inner_level() const noexcept { return inner_; }
    double tail_bound() const noexcept { return tail_bound_; }

    const Matrix& hb() const noexcept { return hb_; }  // level x inner
    const Matrix& hc() const noexcept { return hc_; }  // inner x level
    const Matrix& k() const noexcept { return k_; }    // level x level

    /// Leading size x size block of H(b) Q_gap H(c~).
    Matrix gapped(int gap, int size) const;
    /// Leading size x size block of K.
    Matrix k_block(int size) const { return k_.topLeftCorner(size, size); }

private:
    int level_;
    int inner_;
    double tail_bound_;
    Matrix hb_;
    Matrix hc_;
    Matrix k_;
};

enum class Side { left, right, both };

/// Zeroes the first k rows (left), columns (right) or both.
FiniteSection apply_q(const FiniteSection& section, int k, Side side);

/// Singular values of the n x n section of H(phi), descending.
std::vector<double> hankel_singular_decay(const Symbol& phi, int n);

}  // namespace szego
