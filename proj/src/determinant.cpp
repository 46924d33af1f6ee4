#include "szego/determinant.hpp"

#include "szego/error.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace szego {

namespace {

void require_square(const Matrix& a) {
    if (a.rows() != a.cols()) throw Error(ErrorCode::InvalidParams, "matrix must be square");
}

}  // namespace

DetResult det_lu(const Matrix& a) {
    require_square(a);
    DetResult out;
    if (a.rows() == 0) {
        out.pivot_min = std::numeric_limits<double>::infinity();
        return out;
    }
    const Eigen::PartialPivLU<Matrix> lu(a);
    const auto diag = lu.matrixLU().diagonal();
    out.pivot_min = diag.cwiseAbs().minCoeff();
    out.log_modulus = diag.cwiseAbs().array().log().sum();
    if (out.pivot_min == 0.0) {
        out.value = 0.0;
        out.rcond_estimate = 0.0;
        return out;
    }
    out.value = lu.determinant();
    const double rc = lu.rcond();
    out.rcond_estimate = std::isfinite(rc) ? std::clamp(rc, 0.0, 1.0) : 0.0;
    return out;
}

DetResult det_lu(const FiniteSection& a) { return det_lu(a.entries); }

double rcond_estimate(const Matrix& a) { return det_lu(a).rcond_estimate; }

void require_invertible(const Matrix& a, const char* what) {
    const double rc = rcond_estimate(a);
    if (!(rc > kInvertibleRcond)) {
        throw Error(ErrorCode::NearSingular,
                    std::string(what) + " has rcond " + std::to_string(rc));
    }
}

// ---------------------------------------------------------------------------

void MinorSpec::validate() const {
    if (rows.empty() || rows.size() != cols.size()) {
        throw Error(ErrorCode::BadSpec, "row and column sets must be nonempty and of equal size");
    }
    for (const auto* set : {&rows, &cols}) {
        for (std::size_t r = 0; r < set->size(); ++r) {
            const int idx = (*set)[r];
            if (idx < 1 || idx > ambient) {
                throw Error(ErrorCode::BadSpec, "index " + std::to_string(idx) +
                                                    " outside 1.." + std::to_string(ambient));
            }
            if (r > 0 && (*set)[r - 1] >= idx) {
                throw Error(ErrorCode::BadSpec, "indices must be strictly increasing");
            }
        }
    }
}

namespace {

std::vector<int> complement(const std::vector<int>& set, int ambient) {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(ambient) - set.size());
    std::size_t r = 0;
    for (int i = 1; i <= ambient; ++i) {
        if (r < set.size() && set[r] == i) {
            ++r;
        } else {
            out.push_back(i);
        }
    }
    return out;
}

}  // namespace

std::vector<int> MinorSpec::complement_rows() const { return complement(rows, ambient); }
std::vector<int> MinorSpec::complement_cols() const { return complement(cols, ambient); }

Matrix submatrix(const Matrix& a, const std::vector<int>& rows, const std::vector<int>& cols) {
    Matrix out(rows.size(), cols.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) out(r, c) = a(rows[r] - 1, cols[c] - 1);
    }
    return out;
}

cplx minor_det(const Matrix& a, const MinorSpec& spec) {
    spec.validate();
    if (a.rows() != spec.ambient || a.cols() != spec.ambient) {
        throw Error(ErrorCode::BadSpec, "spec ambient size does not match the matrix");
    }
    return det_lu(submatrix(a, spec.rows, spec.cols)).value;
}

int minor_sign(const MinorSpec& spec) {
    const long sum = std::accumulate(spec.rows.begin(), spec.rows.end(), 0L) +
                     std::accumulate(spec.cols.begin(), spec.cols.end(), 0L);
    return sum % 2 == 0 ? 1 : -1;
}

std::pair<cplx, cplx> jacobi_check(const Matrix& a, const MinorSpec& spec) {
    spec.validate();
    if (a.rows() != spec.ambient || a.cols() != spec.ambient) {
        throw Error(ErrorCode::BadSpec, "spec ambient size does not match the matrix");
    }
    const Eigen::PartialPivLU<Matrix> lu(a);
    require_invertible(a, "A");
    const Matrix inverse = lu.inverse();
    const cplx lhs = det_lu(submatrix(inverse, spec.rows, spec.cols)).value;
    const cplx complementary =
        det_lu(submatrix(a, spec.complement_cols(), spec.complement_rows())).value;
    const cplx rhs = static_cast<double>(minor_sign(spec)) * complementary / lu.determinant();
    return {lhs, rhs};
}

std::pair<cplx, cplx> corollary22_check(const FiniteSection& k_sec, int n) {
    const int m = k_sec.level;
    if (n < 0 || n >= m) {
        throw Error(ErrorCode::IndexOutOfRange,
                    "need 0 <= n < level, got n = " + std::to_string(n));
    }
    const Matrix a = Matrix::Identity(m, m) - k_sec.entries;
    require_invertible(a, "I - K");
    const Eigen::PartialPivLU<Matrix> lu(a);
    const Matrix columns = lu.solve(Matrix::Identity(m, n));
    const cplx lhs = det_lu(Matrix(columns.topRows(n))).value;
    const cplx tail = det_lu(Matrix(a.bottomRightCorner(m - n, m - n))).value;
    return {lhs, tail / lu.determinant()};
}

std::pair<cplx, cplx> phh_check(const FiniteSection& a_sec, const FiniteSection& b_sec,
                                std::optional<int> block) {
    if (a_sec.level != b_sec.level) {
        throw Error(ErrorCode::InvalidParams, "sections must share a level");
    }
    const int level = a_sec.level;
    const int size = block.value_or(std::max(1, level / 2));
    if (size < 1 || size > level) {
        throw Error(ErrorCode::IndexOutOfRange, "block size outside the section");
    }
    const Matrix& a = a_sec.entries;
    const Matrix& b = b_sec.entries;
    const Matrix exp_a = a.exp();
    const Matrix exp_b = b.exp();
    const Matrix exp_ma = (-a).eval().exp();
    const Matrix exp_mb = (-b).eval().exp();
    const Matrix product = exp_a * exp_b * exp_ma * exp_mb;
    const cplx lhs = det_lu(Matrix(product.topLeftCorner(size, size))).value;

    // tr P (AB - BA) P as one fused sum
    cplx commutator_trace{};
    for (int i = 0; i < size; ++i) {
        for (int l = 0; l < level; ++l) commutator_trace += a(i, l) * b(l, i) - b(i, l) * a(l, i);
    }
    return {lhs, std::exp(commutator_trace)};
}

}  // namespace szego
