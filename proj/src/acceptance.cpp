#include "szego/acceptance.hpp"

#include "szego/determinant.hpp"
#include "szego/error.hpp"
#include "szego/experiment.hpp"
#include "szego/szego_bo.hpp"
#include "szego/winding.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

namespace szego {

namespace {

constexpr double kR = 0.5;
constexpr double kS = 0.3;
constexpr double kRS = kR * kS;

Symbol geom() { return preset(PresetParams::geom(kR, kS)); }
Symbol exp2() { return preset(PresetParams::exp2(0.4, 0.2)); }
Symbol cbeta() { return preset(PresetParams::cbeta(1.5, 7, 0.2)); }

// Closed forms for geom, where H(b) and H(c~) are rank one.
double geom_dn(int n) { return (1.0 - std::pow(kRS, n + 1)) / (1.0 - kRS); }
double geom_f(int n) { return std::pow(kR, n) * (1.0 - kRS) / (1.0 - std::pow(kRS, n + 2)); }
double geom_f_tilde(int n) { return std::pow(kR, n) * (1.0 - kRS) / (1.0 - std::pow(kRS, n)); }

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", x);
    return buf;
}

std::string fixed(double x, int digits = 3) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

struct Worst {
    double value = 0.0;
    void add(double x) { value = std::isnan(x) ? INFINITY : std::max(value, x); }
};

double rel(cplx x, cplx ref) { return std::abs(x - ref) / std::abs(ref); }
double rel1(cplx x, cplx ref) { return std::abs(x - ref) / std::max(1.0, std::abs(ref)); }

struct Outcome {
    bool pass = true;
    std::string detail;
    double limit_seconds = 0.0;  // 0: no runtime bound

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + ("FAILED " + what);
        }
    }
    void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

// ---------------------------------------------------------------------------

Outcome jacobi() {
    Outcome out;
    out.limit_seconds = 5.0;
    Worst worst;
    int count = 0;
    for (int m : {3, 5, 8}) {
        std::mt19937_64 rng(1000 + m);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        std::vector<int> idx(m);
        for (int trial = 0; trial < 100; ++trial) {
            Matrix a(m, m);
            for (int j = 0; j < m; ++j) {
                for (int k = 0; k < m; ++k) a(j, k) = cplx(u(rng), u(rng));
            }
            for (int s = 1; s <= m; ++s) {
                MinorSpec spec;
                spec.ambient = m;
                for (auto* set : {&spec.rows, &spec.cols}) {
                    std::iota(idx.begin(), idx.end(), 1);
                    std::shuffle(idx.begin(), idx.end(), rng);
                    set->assign(idx.begin(), idx.begin() + s);
                    std::sort(set->begin(), set->end());
                }
                const auto [lhs, rhs] = jacobi_check(a, spec);
                worst.add(rel(rhs, lhs));
                ++count;
            }
        }
    }
    out.require(worst.value < 1e-9, "Jacobi relative gap " + sci(worst.value));
    out.note("max relative gap " + sci(worst.value) + " over " + std::to_string(count) + " minors");
    return out;
}

Outcome corollary22() {
    Outcome out;
    TruncationPolicy policy;
    policy.target_level = 64;
    Worst gap;
    Worst oracle;
    for (const auto& [label, a] : {std::pair{"geom", geom()}, std::pair{"exp2", exp2()}}) {
        const Factorization f = factorize(a);
        const FiniteSection k = k_section(f.b, f.c, policy);
        for (int n = 1; n <= 8; ++n) {
            const auto [lhs, rhs] = corollary22_check(k, n);
            gap.add(rel(lhs, rhs));
            if (std::string(label) == "geom") {
                oracle.add(rel(lhs, geom_dn(n)));
                oracle.add(rel(rhs, geom_dn(n)));
            }
        }
    }
    out.require(gap.value < 1e-10, "sides differ by " + sci(gap.value));
    out.require(oracle.value < 1e-10, "geom closed form off by " + sci(oracle.value));
    out.note("m = 64, max side gap " + sci(gap.value) + ", geom closed-form gap " + sci(oracle.value));
    return out;
}

Outcome borodin_okounkov() {
    Outcome out;
    out.limit_seconds = 10.0;
    const TruncationPolicy policy;
    Worst oracle;
    for (const auto& [label, a] :
         {std::pair{"geom", geom()}, std::pair{"exp2", exp2()}, std::pair{"cbeta", cbeta()}}) {
        const BorodinOkounkov bo(factorize(a), 12, policy);
        Worst gap;
        for (int n = 1; n <= 12; ++n) {
            const cplx d = dn_exact(a, n);
            const cplx r = bo.rhs(n);
            gap.add(rel(r, d));
            if (std::string(label) == "geom") {
                oracle.add(rel(d, geom_dn(n)));
                oracle.add(rel(r, geom_dn(n)));
            }
        }
        out.require(gap.value < 1e-9, std::string(label) + " gap " + sci(gap.value));
        out.note(std::string(label) + " gap " + sci(gap.value) + " (level " +
                 std::to_string(bo.level()) + ")");
    }
    out.require(oracle.value < 1e-10, "geom closed form off by " + sci(oracle.value));
    out.note("geom closed-form gap " + sci(oracle.value));
    return out;
}

Outcome e_four() {
    Outcome out;
    const TruncationPolicy policy;
    const std::pair<const char*, Symbol> presets[] = {
        {"geom", geom()}, {"exp2", exp2()}, {"cbeta", cbeta()}, {"monomial0", preset(PresetParams::monomial(0))}};
    for (const auto& [label, a] : presets) {
        const EBundle e = e_four_ways(a, policy);
        out.require(e.spread < 1e-7, std::string(label) + " spread " + sci(e.spread));
        out.note(std::string(label) + " spread " + sci(e.spread));
        Worst off;
        const std::string name = label;
        if (name == "geom" || name == "exp2") {
            const double expected = name == "geom" ? 1.0 / (1.0 - kRS) : std::exp(0.08);
            const double tol = name == "geom" ? 1e-8 : 1e-9;
            for (cplx v : {e.e_op, e.e_ta, e.e_series_a, e.e_series_bc}) off.add(std::abs(v - expected));
            out.require(off.value < tol, name + " value off by " + sci(off.value));
            out.note(name + " E = " + fixed(e.e_op.real(), 10));
        }
    }
    return out;
}

Outcome szego_rate() {
    Outcome out;
    out.limit_seconds = 30.0;
    const TruncationPolicy policy;
    {
        const std::vector<int> ns = {16, 24, 32, 48, 64};
        const auto reports = szego_sweep(cbeta(), ns, policy);
        std::vector<double> x, y;
        for (const auto& r : reports) {
            x.push_back(r.n);
            y.push_back(r.rel_err);
        }
        const RateFit fit = fit_rate(x, y);
        out.require(fit.power.slope <= -1.4, "cbeta power slope " + fixed(fit.power.slope));
        out.require(fit.power.r_squared > 0.9, "cbeta r^2 " + fixed(fit.power.r_squared));
        out.note("cbeta slope " + fixed(fit.power.slope) + " r^2 " + fixed(fit.power.r_squared));
    }
    {
        std::vector<int> ns(8);
        std::iota(ns.begin(), ns.end(), 1);
        const auto reports = szego_sweep(geom(), ns, policy);
        std::vector<double> x, y;
        for (const auto& r : reports) {
            x.push_back(r.n);
            y.push_back(r.rel_err);
        }
        const RateFit fit = fit_rate(x, y);
        out.require(fit.classification == RateClass::exponential,
                    "geom classified " + to_string(fit.classification));
        out.note("geom " + to_string(fit.classification) + " rate " +
                 fixed(std::exp(fit.exponential.slope), 4));
    }
    return out;
}

Outcome exactness() {
    Outcome out;
    const TruncationPolicy policy;
    Worst identity;
    Worst formulas;
    int skipped = 0;
    for (const auto& [label, a] : {std::pair{"geom", geom()}, std::pair{"exp2", exp2()}}) {
        const WindingContext ctx(factorize(a), 10, policy);
        for (int kappa : {1, 2}) {
            for (int n = 1; n <= 8; ++n) {
                const Matrix t = toeplitz_section(a, n + kappa).entries;
                if (rcond_estimate(t) <= kInvertibleRcond) {
                    ++skipped;
                    continue;
                }
                const cplx f12 = ctx.f_12(n, kappa);
                const cplx d = dn_exact(shift(a, -kappa), n);
                const cplx rhs = static_cast<double>(winding_sign(n, kappa)) * det_lu(t).value * f12;
                identity.add(rel1(rhs, d));
                formulas.add(rel1(ctx.f_11(n, kappa), f12));
            }
        }
    }
    const Symbol g = geom();
    const cplx f21 = f_via_12(g, 2, 1, policy);
    const cplx d21 = cor23_eval(g, 2, 1).first;
    out.require(identity.value < 1e-9, "identity gap " + sci(identity.value));
    out.require(formulas.value < 1e-9, "f_11 vs f_12 gap " + sci(formulas.value));
    out.require(std::abs(f21 - geom_f(2)) < 1e-8, "geom F_{2,1} = " + fixed(f21.real(), 10));
    out.require(std::abs(d21 - 0.25) < 1e-8, "geom D_2(t^-1 a) = " + fixed(d21.real(), 10));
    out.note("identity gap " + sci(identity.value) + ", f_11/f_12 gap " + sci(formulas.value) +
             ", F_{2,1} = " + fixed(f21.real(), 8) + ", d = " + fixed(d21.real(), 8));
    if (skipped > 0) out.note(std::to_string(skipped) + " singular T_{n+kappa} skipped");
    return out;
}

const std::vector<int> kRateNs = {8, 12, 16, 24, 32, 40, 48};

Outcome leading_asymptotics() {
    Outcome out;
    const TruncationPolicy policy;
    const WindingContext ctx(factorize(cbeta()), kRateNs.back() + 2, policy);
    for (int kappa : {1, 2}) {
        std::vector<double> x, y;
        for (int n : kRateNs) {
            x.push_back(n);
            y.push_back(std::abs(ctx.f_12(n, kappa) - ctx.leading(n, kappa)));
        }
        const RateFit fit = fit_rate(x, y);
        out.require(fit.power.slope <= -3.15,
                    "cbeta kappa " + std::to_string(kappa) + " slope " + fixed(fit.power.slope));
        out.note("cbeta kappa " + std::to_string(kappa) + " slope " + fixed(fit.power.slope));
    }
    const WindingContext gctx(factorize(geom()), 9, policy);
    std::vector<double> residual;
    for (int n = 2; n <= 8; ++n) residual.push_back(std::abs(gctx.f_12(n, 1) - gctx.leading(n, 1)));
    std::vector<double> ratio;
    for (std::size_t i = 1; i < residual.size(); ++i) ratio.push_back(residual[i] / residual[i - 1]);
    const double mean = std::accumulate(ratio.begin(), ratio.end(), 0.0) / ratio.size();
    double spread = 0.0;
    for (double q : ratio) spread = std::max(spread, std::abs(q - mean));
    out.require(mean < 1.0 && spread <= 0.1,
                "geom ratios mean " + fixed(mean, 4) + " spread " + sci(spread));
    out.note("geom residual ratio " + fixed(mean, 4) + " (spread " + sci(spread) + ")");
    return out;
}

Outcome y_matrix() {
    Outcome out;
    const TruncationPolicy policy;
    Worst gap;
    for (const auto& [label, a] : {std::pair{"geom", geom()}, std::pair{"exp2", exp2()}}) {
        const WindingContext ctx(factorize(a), 8, policy);
        for (int kappa : {1, 2}) {
            for (int n = 2; n <= 6; ++n) {
                const YDet y = y_matrix_det(ctx.factorization(), n, kappa, ctx.level());
                gap.add(rel1(y.value, ctx.f_12(n, kappa)));
            }
        }
    }
    out.require(gap.value < 1e-7, "Y gap " + sci(gap.value));
    out.note("max gap " + sci(gap.value));
    return out;
}

Outcome mu_invariance() {
    Outcome out;
    const TruncationPolicy policy;
    const cplx mus[] = {1.0, 2.0, cplx(0.0, 1.0)};
    Worst across;
    Worst brute;
    for (const auto& [label, a] : {std::pair{"geom", geom()}, std::pair{"exp2", exp2()}}) {
        for (int kappa : {1, 2}) {
            for (int n = 1; n <= 6; ++n) {
                const auto base = mu_invariance_check(a, n, kappa, mus[0], policy);
                brute.add(rel1(base.first, base.second));
                for (cplx mu : {mus[1], mus[2]}) {
                    across.add(rel1(mu_invariance_check(a, n, kappa, mu, policy).first, base.first));
                }
            }
        }
    }
    const Symbol g = geom();
    Worst spot;
    for (cplx mu : mus) spot.add(std::abs(mu_invariance_check(g, 2, 1, mu, policy).first - 0.25));
    out.require(across.value < 1e-10, "values across mu differ by " + sci(across.value));
    out.require(brute.value < 1e-9, "brute gap " + sci(brute.value));
    out.require(spot.value < 1e-10, "geom spot gap " + sci(spot.value));
    out.note("across-mu gap " + sci(across.value) + ", brute gap " + sci(brute.value) +
             ", geom spot gap " + sci(spot.value));
    return out;
}

Outcome positive_winding() {
    Outcome out;
    const TruncationPolicy policy;
    Worst gap;
    for (const auto& [label, a] : {std::pair{"geom", geom()}, std::pair{"exp2", exp2()}}) {
        for (int kappa : {1, 2}) {
            for (int n = 1; n <= 6; ++n) {
                const auto [b, p] = positive_winding_det(a, n, kappa, policy);
                gap.add(rel1(p, b));
            }
        }
    }
    const Symbol g = geom();
    const auto s2 = positive_winding_det(g, 2, 1, policy);
    const auto s3 = positive_winding_det(g, 3, 1, policy);
    const double spot = std::max({std::abs(s2.first - 0.09), std::abs(s2.second - 0.09),
                                  std::abs(s3.first + 0.027), std::abs(s3.second + 0.027)});
    out.require(gap.value < 1e-9, "pipeline gap " + sci(gap.value));
    out.require(spot < 1e-9, "geom spot gap " + sci(spot));
    out.note("pipeline gap " + sci(gap.value) + ", spots " + fixed(s2.second.real(), 6) + " and " +
             fixed(s3.second.real(), 6));
    return out;
}

Outcome f_tilde_gap() {
    Outcome out;
    const TruncationPolicy policy;
    const WindingContext ctx(factorize(cbeta()), kRateNs.back() + 2, policy);
    for (int kappa : {1, 2}) {
        std::vector<double> x, y;
        for (int n : kRateNs) {
            x.push_back(n);
            y.push_back(std::abs(ctx.f_tilde(n, kappa) - ctx.f_12(n, kappa)));
        }
        const RateFit fit = fit_rate(x, y);
        out.require(fit.power.slope <= -2.1,
                    "cbeta kappa " + std::to_string(kappa) + " slope " + fixed(fit.power.slope));
        out.note("cbeta kappa " + std::to_string(kappa) + " slope " + fixed(fit.power.slope));
    }
    const Symbol g = geom();
    const double gap = std::abs(f_tilde(g, 2, 1, policy) - f_via_12(g, 2, 1, policy));
    const double expected = geom_f_tilde(2) - geom_f(2);
    out.require(std::abs(gap - expected) < 1e-6, "geom gap " + sci(gap));
    out.note("geom gap " + sci(gap));
    return out;
}

Outcome determinism() {
    Outcome out;
    for (const auto& p : {PresetParams::geom(kR, kS), PresetParams::exp2(0.4, 0.2)}) {
        SweepConfig config;
        config.preset = p;
        config.n_list = {1, 2, 3, 4, 5, 6};
        config.kappa_list = {1, 2};
        config.mu_list = {1.0, cplx(0.0, 1.0)};
        const std::string first = to_csv(run_sweep(config));
        const std::string second = to_csv(run_sweep(config));
        config.jobs = 3;
        const std::string threaded = to_csv(run_sweep(config));
        const std::string label = to_string(p.name);
        out.require(first == second, label + " repeated runs differ");
        out.require(first == threaded, label + " output depends on --jobs");
        out.note(label + " " + std::to_string(first.size()) + " bytes identical");
    }
    return out;
}

struct Criterion {
    int id;
    const char* name;
    Outcome (*run)();
};

}  // namespace

std::vector<CriterionResult> run_acceptance_suite(
    const std::function<void(const CriterionResult&)>& on_result) {
    static const Criterion criteria[] = {
        {1, "jacobi-identity", jacobi},
        {2, "finite-m-inverse-minor", corollary22},
        {3, "borodin-okounkov", borodin_okounkov},
        {4, "szego-constant-four-ways", e_four},
        {5, "szego-rate", szego_rate},
        {6, "winding-exactness", exactness},
        {7, "winding-leading-term", leading_asymptotics},
        {8, "y-matrix", y_matrix},
        {9, "mu-invariance", mu_invariance},
        {10, "positive-winding", positive_winding},
        {11, "f-tilde-gap", f_tilde_gap},
        {12, "sweep-determinism", determinism},
    };
    std::vector<CriterionResult> results;
    for (const auto& c : criteria) {
        CriterionResult r;
        r.id = c.id;
        r.name = c.name;
        const auto start = std::chrono::steady_clock::now();
        try {
            Outcome o = c.run();
            r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            if (o.limit_seconds > 0.0 && r.seconds >= o.limit_seconds) {
                o.require(false, "runtime " + fixed(r.seconds, 2) + " s over " +
                                     fixed(o.limit_seconds, 0) + " s");
            }
            r.pass = o.pass;
            r.detail = o.detail;
        } catch (const std::exception& e) {
            r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        if (on_result) on_result(r);
        results.push_back(std::move(r));
    }
    return results;
}

std::string format_result(const CriterionResult& r) {
    char head[96];
    std::snprintf(head, sizeof head, "[%s] %2d %-26s", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str());
    return std::string(head) + " " + r.detail + " (" + fixed(r.seconds, 2) + " s)";
}

}  // namespace szego
