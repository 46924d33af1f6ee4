#pragma once

// Functions on the unit circle represented by finitely many Laurent
// coefficients, together with the transforms between coefficients and
// samples on the M-th roots of unity.

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace szego {

using cplx = std::complex<double>;

inline constexpr double kDefaultTrimTol = 1e-15;
inline constexpr double kDefaultZeroTol = 1e-12;

/// Laurent coefficient sequence of a function on the unit circle.
///
/// Coefficients with modulus below `trim_tol` are never stored, so two symbols
/// built from the same data compare equal coefficient by coefficient.
class Symbol {
public:
    Symbol() = default;
    explicit Symbol(std::map<int, cplx> coeffs, double trim_tol = kDefaultTrimTol);

    static Symbol constant(cplx value, double trim_tol = kDefaultTrimTol);
    static Symbol monomial(int power, cplx value = 1.0, double trim_tol = kDefaultTrimTol);

    /// Coefficient of t^k (zero outside the support).
    cplx operator[](int k) const;

    const std::map<int, cplx>& coeffs() const noexcept { return coeffs_; }
    double trim_tol() const noexcept { return trim_tol_; }
    bool is_zero() const noexcept { return coeffs_.empty(); }

    // Support bounds always bracket zero: k_min() <= 0 <= k_max().
    int k_min() const noexcept;
    int k_max() const noexcept;
    int span() const noexcept { return k_max() - k_min(); }

    /// Sum of coefficient moduli (Wiener norm).
    double abs_sum() const noexcept;

    cplx evaluate(cplx t) const;

    /// Restriction to k >= 0 (k > 0 without the constant term).
    Symbol positive_part(bool include_zero = true) const;
    /// Restriction to k < 0 (k <= 0 with the constant term).
    Symbol negative_part(bool include_zero = false) const;

    bool operator==(const Symbol& other) const = default;

private:
    std::map<int, cplx> coeffs_;
    double trim_tol_ = kDefaultTrimTol;
};

Symbol add(const Symbol& x, const Symbol& y);
Symbol subtract(const Symbol& x, const Symbol& y);
Symbol scale(const Symbol& x, cplx factor);
/// Multiplication by t^power.
Symbol shift(const Symbol& x, int power);
/// Laurent convolution.
Symbol multiply(const Symbol& x, const Symbol& y);
/// x~(t) = x(1/t), i.e. coefficient k of the result is x_{-k}.
Symbol reflect(const Symbol& x);

bool is_power_of_two(std::int64_t m) noexcept;

/// Smallest power of two >= 8 (k_max - k_min + 1), and at least 64.
int default_grid_size(const Symbol& x);

/// Values at t_j = exp(2 pi i j / M), j = 0..M-1. Coefficients outside
/// (-M/2, M/2] alias.
std::vector<cplx> sample(const Symbol& x, int grid_size);

/// Inverse of `sample` for symbols band-limited below M. The returned
/// coefficients are indexed in (-M/2, M/2].
Symbol coefficients_from_samples(std::span<const cplx> values, int grid_size,
                                 double trim_tol = kDefaultTrimTol);

int winding_number(const Symbol& x, int grid_size, double zero_tol = kDefaultZeroTol);
int winding_number(const Symbol& x);

/// Logarithm via a phase-unwrapped log of the samples. Requires winding
/// number zero.
Symbol log_symbol(const Symbol& a, int grid_size, double zero_tol = kDefaultZeroTol);
/// Same, on a grid doubled until the coefficients near the Nyquist index are
/// below the trim tolerance.
Symbol log_symbol(const Symbol& a);

Symbol exp_symbol(const Symbol& x, int grid_size);
Symbol exp_symbol(const Symbol& x);

/// Pointwise inverse 1/a, computed as exp(-log a).
Symbol inverse_symbol(const Symbol& a);

// ---------------------------------------------------------------------------
// Test-symbol families.

enum class PresetName { geom, exp2, cbeta, monomial };

std::string to_string(PresetName name);
PresetName preset_name_from_string(const std::string& name);

struct PresetParams {
    PresetName name = PresetName::geom;
    // geom: (1 - r t)(1 - s / t)
    cplx r = 0.5;
    cplx s = 0.3;
    // exp2: exp(alpha t + beta_coef / t)
    cplx alpha = 0.4;
    cplx beta_coef = 0.2;
    // cbeta: exp(g) with g_k = amplitude (1+|k|)^-(beta_smooth+1) e^{i theta_k}, |k| <= cutoff
    double beta_smooth = 1.5;
    std::uint64_t seed = 7;
    double amplitude = 0.2;
    int cutoff = 96;
    bool hermitian = false;
    // monomial: t^power
    int power = 0;

    static PresetParams geom(cplx r, cplx s);
    static PresetParams exp2(cplx alpha, cplx beta_coef);
    static PresetParams cbeta(double beta_smooth, std::uint64_t seed, double amplitude);
    static PresetParams monomial(int power);

    /// Throws InvalidParams when the family constraints are violated.
    void validate() const;
};

Symbol preset(const PresetParams& params);

/// Exponent g of the cbeta family, before exponentiation.
Symbol cbeta_exponent(const PresetParams& params);

/// splitmix64 step; the cbeta phases are drawn from this stream.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;

}  // namespace szego
