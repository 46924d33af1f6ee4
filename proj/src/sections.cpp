#include "szego/sections.hpp"

#include "szego/error.hpp"

#include <algorithm>
#include <cmath>

namespace szego {

FiniteSection::FiniteSection(Matrix m, int inner, double tail)
    : entries(std::move(m)), inner_level(inner), tail_bound(tail) {
    level = static_cast<int>(entries.rows());
    if (entries.rows() != entries.cols()) {
        throw Error(ErrorCode::InvalidParams, "finite sections are square");
    }
    if (inner_level < level) throw Error(ErrorCode::InvalidParams, "inner_level < level");
}

FiniteSection::FiniteSection(Matrix m) {
    const int n = static_cast<int>(m.rows());
    *this = FiniteSection(std::move(m), n, 0.0);
}

cplx FiniteSection::at(int j, int k) const {
    if (j < 1 || k < 1 || j > level || k > level) {
        throw Error(ErrorCode::IndexOutOfRange, "entry (" + std::to_string(j) + ", " +
                                                    std::to_string(k) + ") outside level " +
                                                    std::to_string(level));
    }
    return entries(j - 1, k - 1);
}

void TruncationPolicy::validate() const {
    if (!(tail_tol > 0.0)) throw Error(ErrorCode::InvalidParams, "tail_tol must be positive");
    if (target_level < 1) throw Error(ErrorCode::InvalidParams, "target_level must be >= 1");
    if (max_inner < target_level) {
        throw Error(ErrorCode::InvalidParams, "max_inner must be >= target_level");
    }
}

CoeffTable::CoeffTable(const Symbol& phi) {
    if (phi.is_zero()) return;
    lo_ = phi.coeffs().begin()->first;
    hi_ = phi.coeffs().rbegin()->first;
    data_.assign(static_cast<std::size_t>(hi_ - lo_ + 1), cplx{});
    for (const auto& [k, v] : phi.coeffs()) data_[static_cast<std::size_t>(k - lo_)] = v;
}

Matrix toeplitz_block(const Symbol& phi, int rows, int cols, int offset) {
    const CoeffTable table(phi);
    Matrix m(rows, cols);
    for (int k = 0; k < cols; ++k) {
        for (int j = 0; j < rows; ++j) m(j, k) = table(static_cast<long>(j) - k + offset);
    }
    return m;
}

Matrix hankel_block(const Symbol& phi, int rows, int cols, int offset) {
    const CoeffTable table(phi);
    Matrix m(rows, cols);
    for (int k = 0; k < cols; ++k) {
        for (int j = 0; j < rows; ++j) m(j, k) = table(static_cast<long>(j) + k + 1 + offset);
    }
    return m;
}

namespace {

void require_level(int n) {
    if (n < 1) throw Error(ErrorCode::InvalidParams, "section level must be >= 1");
}

}  // namespace

FiniteSection toeplitz_section(const Symbol& phi, int n) {
    require_level(n);
    return FiniteSection(toeplitz_block(phi, n, n));
}

FiniteSection hankel_section(const Symbol& phi, int n) {
    require_level(n);
    return FiniteSection(hankel_block(phi, n, n));
}

FiniteSection hankel_tilde_section(const Symbol& phi, int n) {
    require_level(n);
    return FiniteSection(hankel_block(reflect(phi), n, n));
}

double hankel_tail_norm(const Symbol& phi, int rows, int inner) {
    // Rows 1..rows, columns l > inner: coefficient m = j + l - 1 appears
    // clamp(m - inner, 0, rows) times.
    double total = 0.0;
    for (auto it = phi.coeffs().upper_bound(inner); it != phi.coeffs().end(); ++it) {
        const long count = std::min<long>(it->first - inner, rows);
        total += static_cast<double>(count) * std::norm(it->second);
    }
    return std::sqrt(total);
}

int choose_inner_level(const Symbol& b, const Symbol& c, int level,
                       const TruncationPolicy& policy) {
    policy.validate();
    const Symbol c_reflected = reflect(c);
    auto resolved = [&](int inner) {
        return hankel_tail_norm(b, level, inner) < policy.tail_tol &&
               hankel_tail_norm(c_reflected, level, inner) < policy.tail_tol;
    };
    if (resolved(level)) return level;
    if (!resolved(std::max(level, policy.max_inner))) {
        throw Error(ErrorCode::TailNotResolved,
                    "coefficient tails exceed tail_tol at inner level " +
                        std::to_string(policy.max_inner));
    }
    int lo = level;
    int hi = std::max(level, policy.max_inner);
    while (hi - lo > 1) {
        const int mid = lo + (hi - lo) / 2;
        if (resolved(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

HankelProduct::HankelProduct(const Symbol& b, const Symbol& c, int level,
                             const TruncationPolicy& policy)
    : level_(level) {
    require_level(level);
    inner_ = choose_inner_level(b, c, level, policy);
    tail_bound_ = hankel_tail_norm(b, level, inner_) * hankel_tail_norm(reflect(c), level, inner_);
    hb_ = hankel_block(b, level, inner_);
    hc_ = hankel_block(reflect(c), inner_, level);
    k_.noalias() = hb_ * hc_;
}

Matrix HankelProduct::gapped(int gap, int size) const {
    if (gap < 0 || size < 0 || size > level_ || gap > inner_) {
        throw Error(ErrorCode::IndexOutOfRange, "gapped product outside the stored section");
    }
    Matrix out = k_.topLeftCorner(size, size);
    if (gap > 0) {
        out.noalias() -= hb_.topLeftCorner(size, gap) * hc_.topLeftCorner(gap, size);
    }
    return out;
}

FiniteSection k_section(const Symbol& b, const Symbol& c, const TruncationPolicy& policy) {
    policy.validate();
    const HankelProduct product(b, c, policy.target_level, policy);
    if (policy.doubling_check) {
        const int level = product.level();
        const int doubled = 2 * product.inner_level();
        const Matrix wide = hankel_block(b, level, doubled) * hankel_block(reflect(c), doubled, level);
        const double gap = (wide - product.k()).cwiseAbs().maxCoeff();
        if (gap > 1e-12) {
            throw Error(ErrorCode::TailNotResolved,
                        "inner-level doubling changed K by " + std::to_string(gap));
        }
    }
    return FiniteSection(product.k(), product.inner_level(), product.tail_bound());
}

FiniteSection apply_q(const FiniteSection& section, int k, Side side) {
    if (k < 0 || k > section.level) {
        throw Error(ErrorCode::IndexOutOfRange,
                    "Q_" + std::to_string(k) + " on level " + std::to_string(section.level));
    }
    FiniteSection out = section;
    if (side == Side::left || side == Side::both) out.entries.topRows(k).setZero();
    if (side == Side::right || side == Side::both) out.entries.leftCols(k).setZero();
    return out;
}

std::vector<double> hankel_singular_decay(const Symbol& phi, int n) {
    if (n < 2) throw Error(ErrorCode::InvalidParams, "need n >= 2");
    const Matrix h = hankel_block(phi, n, n);
    const Eigen::BDCSVD<Matrix> svd(h);
    const auto& s = svd.singularValues();
    return {s.data(), s.data() + s.size()};
}

}  // namespace szego
