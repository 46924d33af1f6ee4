#include "oracles.hpp"

#include "szego/determinant.hpp"
#include "szego/error.hpp"
#include "szego/winding.hpp"

#include <doctest.h>

using namespace szego;

namespace {

const oracle::Geom kG;
const Symbol kGeom = preset(PresetParams::geom(0.5, 0.3));
const Symbol kExp2 = preset(PresetParams::exp2(0.4, 0.2));
const TruncationPolicy kPolicy;

// exp(0.4 t + 0.3 t^2 + 0.2/t - 0.1/t^2): F is nonzero for every kappa.
Symbol generic() { return exp_symbol(Symbol({{1, 0.4}, {2, 0.3}, {-1, 0.2}, {-2, -0.1}})); }

oracle::Coeff coeff_of(const Symbol& s) {
    return [s](long k) { return s[static_cast<int>(k)]; };
}

// D_n of t^p a, whose coefficient k is a_{k-p}.
cplx brute_dn_shifted(const Symbol& a, int n, int p) {
    return oracle::toeplitz_det([&](long k) { return a[static_cast<int>(k - p)]; }, n);
}

template <class F>
ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::Internal;
}

double rel1(cplx x, cplx ref) { return std::abs(x - ref) / std::max(1.0, std::abs(ref)); }

}  // namespace

TEST_CASE("inverse-minor form of D_n(t^-kappa a)") {
    const auto [b21, r21] = cor23_eval(kGeom, 2, 1);
    CHECK(std::abs(b21 - 0.25) < 1e-14);
    CHECK(std::abs(r21 - 0.25) < 1e-13);
    const auto [b11, r11] = cor23_eval(kGeom, 1, 1);
    CHECK(std::abs(b11 + 0.5) < 1e-14);
    CHECK(std::abs(r11 + 0.5) < 1e-13);
    const auto [bc, rc] = cor23_eval(Symbol::constant(1.0), 2, 1);
    CHECK(std::abs(bc) < 1e-15);
    CHECK(std::abs(rc) < 1e-15);
    for (const Symbol& a : {kGeom, kExp2, generic()}) {
        for (int kappa : {1, 2, 3}) {
            for (int n = 1; n <= 6; ++n) {
                const auto [brute, rhs] = cor23_eval(a, n, kappa);
                CHECK(std::abs(brute - brute_dn_shifted(a, n, -kappa)) < 1e-14);
                CHECK(rel1(rhs, brute) < 1e-10);
            }
        }
    }
    // T_m(t) is nilpotent
    CHECK(code_of([] { (void)cor23_eval(Symbol::monomial(1), 1, 1); }) == ErrorCode::NearSingular);
    CHECK(code_of([] { (void)cor23_eval(kGeom, 0, 1); }) == ErrorCode::InvalidParams);
}

TEST_CASE("F through both resolvent formulas") {
    CHECK(std::abs(f_via_11(kGeom, 2, 1, kPolicy) - kG.f(2)) < 1e-13);
    CHECK(std::abs(f_via_11(kGeom, 2, 1, kPolicy) - 0.21260764) < 1e-8);
    CHECK(std::abs(f_via_11(kGeom, 1, 1, kPolicy) - 0.42643923) < 1e-8);
    CHECK(std::abs(f_via_12(kGeom, 2, 1, kPolicy) - kG.f(2)) < 1e-13);
    CHECK(std::abs(f_via_11(Symbol::constant(2.0), 1, 1, kPolicy)) < 1e-15);
    CHECK(std::abs(f_via_12(Symbol::constant(2.0), 1, 1, kPolicy)) < 1e-15);
    const cplx f11 = f_via_11(kGeom, 3, 2, kPolicy);
    CHECK(std::abs(f11 - f_via_12(kGeom, 3, 2, kPolicy)) < 1e-10);

    for (const Symbol& a : {kGeom, kExp2, generic()}) {
        const WindingContext ctx(factorize(a), 11, kPolicy);
        for (int kappa : {1, 2, 3}) {
            for (int n = 1; n <= 8; ++n) {
                const cplx f12 = ctx.f_12(n, kappa);
                CHECK(rel1(ctx.f_11(n, kappa), f12) < 1e-9);
                const cplx d = brute_dn_shifted(a, n, -kappa);
                const cplx rebuilt = static_cast<double>(winding_sign(n, kappa)) *
                                     oracle::toeplitz_det(coeff_of(a), n + kappa) * f12;
                CHECK(rel1(rebuilt, d) < 1e-9);
            }
        }
    }
    const WindingContext ctx(factorize(kGeom), 5, kPolicy);
    CHECK(code_of([&] { (void)ctx.f_12(4, 2); }) == ErrorCode::IndexOutOfRange);
    CHECK(code_of([&] { (void)ctx.f_12(0, 2); }) == ErrorCode::InvalidParams);
}

TEST_CASE("Neumann series for F") {
    CHECK(std::abs(f_via_series(kGeom, 2, 1, kPolicy, 0) - 0.2125) < 1e-15);
    CHECK(std::abs(f_via_series(kGeom, 2, 1, kPolicy, 20) - 0.21260764) < 1e-8);
    CHECK(std::abs(f_via_series(kGeom, 2, 1, kPolicy, 20) - kG.f(2)) < 1e-12);
    for (int terms : {0, 3, 30}) {
        CHECK(std::abs(f_via_series(Symbol::constant(2.0), 1, 1, kPolicy, terms)) < 1e-15);
    }
    const WindingContext ctx(factorize(kExp2), 8, kPolicy);
    double last = INFINITY;
    for (int terms : {0, 1, 2, 4}) {
        const double gap = std::abs(ctx.f_series(3, 2, terms) - ctx.f_12(3, 2));
        CHECK(gap <= last);
        last = gap;
    }
    CHECK(last < 1e-12);

    const Symbol wild = preset(PresetParams::exp2(1.5, -2.0));
    CHECK(code_of([&] { (void)f_via_series(wild, 1, 1, kPolicy, 10); }) ==
          ErrorCode::SeriesDiverges);
    const WindingContext wctx(factorize(wild), 2, kPolicy);
    CHECK(rel1(wctx.f_11(1, 1), wctx.f_12(1, 1)) < 1e-9);
}

TEST_CASE("leading term and the T(b) block determinant") {
    CHECK(std::abs(leading_term(kGeom, 2, 1) - 0.2125) < 1e-15);
    CHECK(std::abs(leading_term(kGeom, 1, 1) - 0.425) < 1e-15);
    CHECK(std::abs(leading_term(Symbol::constant(2.0), 2, 2)) < 1e-15);
    // det T_k(t^-n b) with entries b_{j-k+n}
    const Factorization f = factorize(generic());
    const cplx direct = oracle::det_leibniz(oracle::toeplitz(coeff_of(f.b), 3, 4));
    CHECK(std::abs(leading_term(generic(), 4, 3) - direct) < 1e-15);

    CHECK(std::abs(f_tilde(kGeom, 2, 1, kPolicy) - 0.21739130) < 1e-8);
    CHECK(std::abs(f_tilde(kGeom, 2, 1, kPolicy) - 0.2125 / 0.9775) < 1e-13);
    CHECK(std::abs(f_tilde(Symbol::constant(2.0), 3, 1, kPolicy)) < 1e-15);
    CHECK(code_of([] { (void)f_tilde(kGeom, 2, 2, kPolicy); }) == ErrorCode::InvalidParams);

    const WindingContext ctx(factorize(kGeom), 9, kPolicy);
    std::vector<double> gaps;
    for (int n = 2; n <= 8; ++n) gaps.push_back(std::abs(ctx.f_tilde(n, 1) - ctx.f_12(n, 1)));
    for (std::size_t i = 1; i < gaps.size(); ++i) {
        const double q = gaps[i] / gaps[i - 1];
        CHECK(q < 0.2);
        CHECK(q > 0.01);
    }
}

TEST_CASE("Y matrix") {
    const YDet y = y_matrix_det(kGeom, 2, 1, 64);
    CHECK(std::abs(y.value - 0.21260764) < 1e-8);
    CHECK(std::abs(y_matrix_det(Symbol::constant(2.0), 1, 1, 16).value) < 1e-15);
    CHECK(rel1(y_matrix_det(kGeom, 3, 2, 64).value, f_via_12(kGeom, 3, 2, kPolicy)) < 1e-8);

    // det Y equals F after reversing the kappa rows, which is the sign
    // (-1)^{kappa(kappa-1)/2}; the plain (-1)^kappa is wrong already at kappa = 1.
    const Symbol a = generic();
    const WindingContext ctx(factorize(a), 9, kPolicy);
    for (int kappa = 1; kappa <= 4; ++kappa) {
        for (int n : {2, 5}) {
            const cplx f12 = ctx.f_12(n, kappa);
            REQUIRE(std::abs(f12) > 1e-12);
            const YDet yd = y_matrix_det(ctx.factorization(), n, kappa, ctx.level());
            const double reversal = (kappa * (kappa - 1) / 2) % 2 ? -1.0 : 1.0;
            CHECK(rel1(yd.raw, reversal * f12) < 1e-7);
            CHECK(rel1(yd.value, f12) < 1e-7);
            if (kappa % 4 == 1 || kappa % 4 == 2) {
                CHECK(std::abs(yd.raw * std::pow(-1.0, kappa) - f12) > 0.5 * std::abs(f12));
            }
        }
    }
    CHECK(code_of([] { (void)y_matrix_det(kGeom, 3, 2, 4); }) == ErrorCode::WindowTooSmall);
}

TEST_CASE("positive winding through the reflected symbol") {
    const auto [b2, p2] = positive_winding_det(kGeom, 2, 1);
    CHECK(std::abs(b2 - 0.09) < 1e-14);
    CHECK(std::abs(p2 - 0.09) < 1e-12);
    const auto [b3, p3] = positive_winding_det(kGeom, 3, 1);
    CHECK(std::abs(b3 + 0.027) < 1e-14);
    CHECK(std::abs(p3 + 0.027) < 1e-12);
    const auto [bc, pc] = positive_winding_det(Symbol::constant(1.0), 2, 1);
    CHECK(std::abs(bc) < 1e-15);
    CHECK(std::abs(pc) < 1e-15);
    for (const Symbol& a : {kExp2, generic(), Symbol::constant(3.0)}) {
        for (int kappa : {1, 2}) {
            for (int n = 1; n <= 5; ++n) {
                const auto [brute, pipe] = positive_winding_det(a, n, kappa);
                CHECK(std::abs(brute - brute_dn_shifted(a, n, kappa)) < 1e-13);
                CHECK(rel1(pipe, brute) < 1e-9);
            }
        }
    }
}

TEST_CASE("mu-rescaled factorizations give the same determinant") {
    for (cplx mu : {cplx(1.0), cplx(2.0), cplx(0.0, 1.0)}) {
        const auto [value, brute] = mu_invariance_check(kGeom, 2, 1, mu);
        CHECK(std::abs(value - 0.25) < 1e-12);
        CHECK(std::abs(brute - 0.25) < 1e-14);
    }
    // F itself scales like mu^{-2 kappa}
    const Factorization f2 = factorize(kGeom, 2.0);
    const cplx f_mu = WindingContext(f2, 3, kPolicy).f_12(2, 1);
    CHECK(std::abs(f_mu - kG.f(2) / 4.0) < 1e-13);
    for (const Symbol& a : {kExp2, generic()}) {
        for (int kappa : {1, 2, 3}) {
            for (int n = 1; n <= 5; ++n) {
                const cplx base = mu_invariance_check(a, n, kappa, 1.0).first;
                for (cplx mu : {cplx(2.0), cplx(0.0, 1.0), cplx(0.5, -0.7)}) {
                    CHECK(rel1(mu_invariance_check(a, n, kappa, mu).first, base) < 1e-10);
                }
            }
        }
    }
    CHECK(code_of([] { (void)mu_invariance_check(kGeom, 2, 1, 0.0); }) == ErrorCode::InvalidParams);
}

TEST_CASE("sign parity") {
    for (int n = 0; n <= 9; ++n) {
        for (int kappa = 0; kappa <= 9; ++kappa) {
            CHECK(winding_sign(n + kappa + 1, kappa) == winding_sign(n, kappa));
            CHECK(winding_sign(n, kappa) == ((n * kappa) % 2 ? -1 : 1));
        }
    }
}

TEST_CASE("winding report bundles everything") {
    const WindingContext ctx(factorize(kGeom), 4, kPolicy);
    const WindingReport r = winding_report(kGeom, ctx, 2, 1);
    CHECK(r.sign == 1);
    CHECK(std::abs(r.d_exact - 0.25) < 1e-14);
    CHECK(std::abs(r.d_reconstructed - 0.25) < 1e-12);
    CHECK(std::abs(r.f_11 - r.f_12) < 1e-14);
    CHECK(std::abs(r.f_series - r.f_12) < 1e-14);
    CHECK(std::abs(r.f_tilde - 0.2125 / 0.9775) < 1e-13);
    CHECK(std::abs(r.leading - 0.2125) < 1e-15);
    CHECK(std::abs(r.y_det - r.f_12) < 1e-12);
    const WindingReport s = winding_report(kGeom, ctx, 1, 2);
    CHECK(s.f_tilde == cplx(0.0));
    CHECK(std::abs(s.f_12) < 1e-14);
}
