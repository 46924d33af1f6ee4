#include "szego/symbol.hpp"

#include "szego/error.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace szego {

namespace {

constexpr int kMaxGrid = 1 << 22;

void require_grid(int grid_size) {
    if (grid_size < 2 || !is_power_of_two(grid_size)) {
        throw Error(ErrorCode::InvalidParams,
                    "grid size must be a power of two >= 2, got " + std::to_string(grid_size));
    }
}

// True when no stored coefficient sits in the outer half of the index range
// (-M/2, M/2], i.e. the transform is far from aliasing.
bool resolved_on_grid(const Symbol& x, int grid_size) {
    const int quarter = grid_size / 4;
    const double floor = 1e-14 * std::max(1.0, x.abs_sum());
    for (const auto& [k, v] : x.coeffs()) {
        if (std::abs(k) > quarter && std::abs(v) > floor) return false;
    }
    return true;
}

template <typename PointwiseMap>
Symbol map_on_resolved_grid(const Symbol& x, PointwiseMap&& map) {
    int grid = default_grid_size(x);
    while (true) {
        Symbol result = map(grid);
        if (resolved_on_grid(result, grid) || grid >= kMaxGrid) {
            if (grid >= kMaxGrid && !resolved_on_grid(result, grid)) {
                throw Error(ErrorCode::GridTooCoarse,
                            "coefficients not resolved on grid " + std::to_string(grid));
            }
            return result;
        }
        grid *= 2;
    }
}

}  // namespace

// ---------------------------------------------------------------------------

Symbol::Symbol(std::map<int, cplx> coeffs, double trim_tol) : trim_tol_(trim_tol) {
    if (!(trim_tol >= 0.0)) throw Error(ErrorCode::InvalidParams, "trim_tol must be nonnegative");
    for (auto it = coeffs.begin(); it != coeffs.end();) {
        if (!(std::abs(it->second) >= trim_tol) || it->second == cplx{}) {
            it = coeffs.erase(it);
        } else {
            ++it;
        }
    }
    coeffs_ = std::move(coeffs);
}

Symbol Symbol::constant(cplx value, double trim_tol) { return Symbol({{0, value}}, trim_tol); }

Symbol Symbol::monomial(int power, cplx value, double trim_tol) {
    return Symbol({{power, value}}, trim_tol);
}

cplx Symbol::operator[](int k) const {
    auto it = coeffs_.find(k);
    return it == coeffs_.end() ? cplx{} : it->second;
}

int Symbol::k_min() const noexcept {
    return coeffs_.empty() ? 0 : std::min(0, coeffs_.begin()->first);
}

int Symbol::k_max() const noexcept {
    return coeffs_.empty() ? 0 : std::max(0, coeffs_.rbegin()->first);
}

double Symbol::abs_sum() const noexcept {
    double total = 0.0;
    for (const auto& [k, v] : coeffs_) total += std::abs(v);
    return total;
}

cplx Symbol::evaluate(cplx t) const {
    cplx total{};
    for (const auto& [k, v] : coeffs_) total += v * std::pow(t, k);
    return total;
}

Symbol Symbol::positive_part(bool include_zero) const {
    std::map<int, cplx> out;
    for (const auto& [k, v] : coeffs_) {
        if (k > 0 || (include_zero && k == 0)) out.emplace(k, v);
    }
    return Symbol(std::move(out), trim_tol_);
}

Symbol Symbol::negative_part(bool include_zero) const {
    std::map<int, cplx> out;
    for (const auto& [k, v] : coeffs_) {
        if (k < 0 || (include_zero && k == 0)) out.emplace(k, v);
    }
    return Symbol(std::move(out), trim_tol_);
}

// ---------------------------------------------------------------------------

Symbol add(const Symbol& x, const Symbol& y) {
    std::map<int, cplx> out = x.coeffs();
    for (const auto& [k, v] : y.coeffs()) out[k] += v;
    return Symbol(std::move(out), std::max(x.trim_tol(), y.trim_tol()));
}

Symbol subtract(const Symbol& x, const Symbol& y) { return add(x, scale(y, -1.0)); }

Symbol scale(const Symbol& x, cplx factor) {
    std::map<int, cplx> out;
    for (const auto& [k, v] : x.coeffs()) out.emplace(k, v * factor);
    return Symbol(std::move(out), x.trim_tol());
}

Symbol shift(const Symbol& x, int power) {
    std::map<int, cplx> out;
    for (const auto& [k, v] : x.coeffs()) out.emplace(k + power, v);
    return Symbol(std::move(out), x.trim_tol());
}

Symbol multiply(const Symbol& x, const Symbol& y) {
    std::map<int, cplx> out;
    for (const auto& [j, u] : x.coeffs()) {
        for (const auto& [k, v] : y.coeffs()) out[j + k] += u * v;
    }
    return Symbol(std::move(out), std::max(x.trim_tol(), y.trim_tol()));
}

Symbol reflect(const Symbol& x) {
    std::map<int, cplx> out;
    for (const auto& [k, v] : x.coeffs()) out.emplace(-k, v);
    return Symbol(std::move(out), x.trim_tol());
}

bool is_power_of_two(std::int64_t m) noexcept { return m > 0 && (m & (m - 1)) == 0; }

int default_grid_size(const Symbol& x) {
    const std::int64_t wanted = 8 * (static_cast<std::int64_t>(x.span()) + 1);
    std::int64_t grid = 64;
    while (grid < wanted) grid *= 2;
    return static_cast<int>(grid);
}

std::vector<cplx> sample(const Symbol& x, int grid_size) {
    require_grid(grid_size);
    std::vector<cplx> spectrum(grid_size);
    for (const auto& [k, v] : x.coeffs()) {
        const int q = ((k % grid_size) + grid_size) % grid_size;
        spectrum[q] += v;
    }
    Eigen::FFT<double> fft;
    fft.SetFlag(Eigen::FFT<double>::Unscaled);
    std::vector<cplx> values;
    fft.inv(values, spectrum);
    return values;
}

Symbol coefficients_from_samples(std::span<const cplx> values, int grid_size, double trim_tol) {
    require_grid(grid_size);
    if (values.size() != static_cast<std::size_t>(grid_size)) {
        throw Error(ErrorCode::InvalidParams, "expected " + std::to_string(grid_size) +
                                                  " samples, got " + std::to_string(values.size()));
    }
    std::vector<cplx> input(values.begin(), values.end());
    std::vector<cplx> spectrum;
    Eigen::FFT<double> fft;
    fft.fwd(spectrum, input);
    std::map<int, cplx> coeffs;
    const double inv_m = 1.0 / grid_size;
    for (int q = 0; q < grid_size; ++q) {
        const int k = q <= grid_size / 2 ? q : q - grid_size;
        coeffs.emplace(k, spectrum[q] * inv_m);
    }
    return Symbol(std::move(coeffs), trim_tol);
}

int winding_number(const Symbol& x, int grid_size, double zero_tol) {
    require_grid(grid_size);
    if (static_cast<std::int64_t>(grid_size) <= 8 * static_cast<std::int64_t>(x.span())) {
        throw Error(ErrorCode::GridTooCoarse, "grid " + std::to_string(grid_size) +
                                                  " does not exceed 8 x span " +
                                                  std::to_string(x.span()));
    }
    const auto values = sample(x, grid_size);
    for (const auto& v : values) {
        if (std::abs(v) < zero_tol) throw Error(ErrorCode::ZeroOnCircle, "sample below zero_tol");
    }
    double total = 0.0;
    for (int j = 0; j < grid_size; ++j) {
        const double step = std::arg(values[(j + 1) % grid_size] / values[j]);
        if (std::abs(step) > std::numbers::pi / 2) {
            throw Error(ErrorCode::GridTooCoarse, "phase step exceeds pi/2");
        }
        total += step;
    }
    return static_cast<int>(std::lround(total / (2 * std::numbers::pi)));
}

int winding_number(const Symbol& x) {
    int grid = default_grid_size(x);
    while (true) {
        try {
            return winding_number(x, grid);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::GridTooCoarse || grid >= kMaxGrid) throw;
            grid *= 2;
        }
    }
}

Symbol log_symbol(const Symbol& a, int grid_size, double zero_tol) {
    require_grid(grid_size);
    const auto values = sample(a, grid_size);
    for (const auto& v : values) {
        if (std::abs(v) < zero_tol) throw Error(ErrorCode::ZeroOnCircle, "sample below zero_tol");
    }
    std::vector<cplx> logs(grid_size);
    double phase = std::arg(values[0]);
    logs[0] = cplx(std::log(std::abs(values[0])), phase);
    for (int j = 1; j <= grid_size; ++j) {
        const double step = std::arg(values[j % grid_size] / values[j - 1]);
        if (std::abs(step) > std::numbers::pi / 2) {
            throw Error(ErrorCode::GridTooCoarse, "phase step exceeds pi/2 while unwrapping");
        }
        phase += step;
        if (j < grid_size) logs[j] = cplx(std::log(std::abs(values[j])), phase);
    }
    const double closure = phase - std::arg(values[0]);
    if (std::abs(closure) > std::numbers::pi) {
        throw Error(ErrorCode::NonzeroWinding,
                    "winding number " +
                        std::to_string(std::lround(closure / (2 * std::numbers::pi))));
    }
    if (std::abs(closure) > 1e-8) {
        throw Error(ErrorCode::Internal, "unwrapped logarithm does not close");
    }
    return coefficients_from_samples(logs, grid_size, a.trim_tol());
}

Symbol log_symbol(const Symbol& a) {
    return map_on_resolved_grid(a, [&](int grid) { return log_symbol(a, grid); });
}

Symbol exp_symbol(const Symbol& x, int grid_size) {
    auto values = sample(x, grid_size);
    for (auto& v : values) v = std::exp(v);
    return coefficients_from_samples(values, grid_size, x.trim_tol());
}

Symbol exp_symbol(const Symbol& x) {
    return map_on_resolved_grid(x, [&](int grid) { return exp_symbol(x, grid); });
}

Symbol inverse_symbol(const Symbol& a) { return exp_symbol(scale(log_symbol(a), -1.0)); }

// ---------------------------------------------------------------------------

std::string to_string(PresetName name) {
    switch (name) {
        case PresetName::geom: return "geom";
        case PresetName::exp2: return "exp2";
        case PresetName::cbeta: return "cbeta";
        case PresetName::monomial: return "monomial";
    }
    return "?";
}

PresetName preset_name_from_string(const std::string& name) {
    if (name == "geom") return PresetName::geom;
    if (name == "exp2") return PresetName::exp2;
    if (name == "cbeta") return PresetName::cbeta;
    if (name == "monomial") return PresetName::monomial;
    throw Error(ErrorCode::InvalidParams, "unknown preset '" + name + "'");
}

PresetParams PresetParams::geom(cplx r, cplx s) {
    PresetParams p;
    p.name = PresetName::geom;
    p.r = r;
    p.s = s;
    return p;
}

PresetParams PresetParams::exp2(cplx alpha, cplx beta_coef) {
    PresetParams p;
    p.name = PresetName::exp2;
    p.alpha = alpha;
    p.beta_coef = beta_coef;
    return p;
}

PresetParams PresetParams::cbeta(double beta_smooth, std::uint64_t seed, double amplitude) {
    PresetParams p;
    p.name = PresetName::cbeta;
    p.beta_smooth = beta_smooth;
    p.seed = seed;
    p.amplitude = amplitude;
    return p;
}

PresetParams PresetParams::monomial(int power) {
    PresetParams p;
    p.name = PresetName::monomial;
    p.power = power;
    return p;
}

void PresetParams::validate() const {
    auto finite = [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); };
    switch (name) {
        case PresetName::geom:
            if (!(std::abs(r) < 1.0) || !(std::abs(s) < 1.0)) {
                throw Error(ErrorCode::InvalidParams, "geom requires |r| < 1 and |s| < 1");
            }
            break;
        case PresetName::exp2:
            if (!finite(alpha) || !finite(beta_coef)) {
                throw Error(ErrorCode::InvalidParams, "exp2 coefficients must be finite");
            }
            break;
        case PresetName::cbeta:
            if (!(beta_smooth > 0.0) || !std::isfinite(beta_smooth)) {
                throw Error(ErrorCode::InvalidParams, "cbeta requires beta_smooth > 0");
            }
            if (std::abs(beta_smooth - std::round(beta_smooth)) < 1e-12) {
                throw Error(ErrorCode::InvalidParams, "cbeta requires non-integer beta_smooth");
            }
            if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
                throw Error(ErrorCode::InvalidParams, "cbeta requires a finite amplitude >= 0");
            }
            if (cutoff < 1) throw Error(ErrorCode::InvalidParams, "cbeta requires cutoff >= 1");
            break;
        case PresetName::monomial:
            break;
    }
}

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace {

double unit_phase(std::uint64_t& state) {
    return 2 * std::numbers::pi * static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

// exp(z t^sign) as a one-sided power series, summed until the terms drop below tol.
Symbol exponential_series(cplx z, int sign, double tol) {
    std::map<int, cplx> coeffs{{0, 1.0}};
    cplx term = 1.0;
    for (int p = 1; p < 10000; ++p) {
        term *= z / static_cast<double>(p);
        if (std::abs(term) < tol && p > std::abs(z)) break;
        coeffs.emplace(sign * p, term);
    }
    return Symbol(std::move(coeffs), tol);
}

}  // namespace

Symbol cbeta_exponent(const PresetParams& params) {
    std::uint64_t state = params.seed;
    std::map<int, cplx> g;
    auto magnitude = [&](int k) {
        return params.amplitude * std::pow(1.0 + std::abs(k), -(params.beta_smooth + 1.0));
    };
    if (params.hermitian) {
        g.emplace(0, magnitude(0));
        for (int k = 1; k <= params.cutoff; ++k) {
            const cplx gk = std::polar(magnitude(k), unit_phase(state));
            g.emplace(k, gk);
            g.emplace(-k, std::conj(gk));
        }
    } else {
        for (int k = -params.cutoff; k <= params.cutoff; ++k) {
            g.emplace(k, std::polar(magnitude(k), unit_phase(state)));
        }
    }
    return Symbol(std::move(g));
}

Symbol preset(const PresetParams& params) {
    params.validate();
    switch (params.name) {
        case PresetName::geom:
            return Symbol({{-1, -params.s}, {0, 1.0 + params.r * params.s}, {1, -params.r}});
        case PresetName::exp2:
            return multiply(exponential_series(params.alpha, +1, kDefaultTrimTol),
                            exponential_series(params.beta_coef, -1, kDefaultTrimTol));
        case PresetName::cbeta:
            return exp_symbol(cbeta_exponent(params));
        case PresetName::monomial:
            return Symbol::monomial(params.power);
    }
    throw Error(ErrorCode::InvalidParams, "unknown preset");
}

}  // namespace szego
