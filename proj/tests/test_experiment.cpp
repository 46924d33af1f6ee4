#include "szego/error.hpp"
#include "szego/experiment.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace szego;

namespace {

SweepConfig geom_config(std::vector<int> ns, std::vector<int> kappas) {
    SweepConfig c;
    c.preset = PresetParams::geom(0.5, 0.3);
    c.n_list = std::move(ns);
    c.kappa_list = std::move(kappas);
    return c;
}

const ConvergenceRecord* find(const std::vector<ConvergenceRecord>& rows, const std::string& q,
                              int n, int kappa) {
    for (const auto& r : rows) {
        if (r.quantity == q && r.n == n && r.kappa == kappa) return &r;
    }
    return nullptr;
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

}  // namespace

TEST_CASE("config parsing") {
    const SweepConfig c = parse_config(R"({
        "preset": {"name": "geom", "params": {"r": [0.4, 0.1], "s": {"re": 0.2, "im": -0.1}}},
        "n_list": [1, 2, 5], "kappa_list": [0, 2], "mu_list": [1, [0, 1], {"re": 2}],
        "policy": {"target_level": 96, "tail_tol": 1e-13, "doubling_check": false},
        "out": "x.csv", "seed": 11, "jobs": 2})");
    CHECK(c.preset.name == PresetName::geom);
    CHECK(c.preset.r == cplx(0.4, 0.1));
    CHECK(c.preset.s == cplx(0.2, -0.1));
    CHECK(c.n_list == std::vector<int>{1, 2, 5});
    CHECK(c.kappa_list == std::vector<int>{0, 2});
    REQUIRE(c.mu_list.size() == 3);
    CHECK(c.mu_list[1] == cplx(0.0, 1.0));
    CHECK(c.mu_list[2] == cplx(2.0, 0.0));
    CHECK(c.level_policy.target_level == 96);
    CHECK(c.level_policy.tail_tol == 1e-13);
    CHECK(!c.level_policy.doubling_check);
    CHECK(c.out_path == "x.csv");
    CHECK(c.seed == 11);
    CHECK(c.jobs == 2);
    CHECK_NOTHROW(c.validate());

    const SweepConfig d = parse_config(R"({"preset": {"name": "cbeta", "params": {"seed": 3}}, "n_list": [4]})");
    CHECK(d.seed == 3);
    CHECK(d.mu_list == std::vector<cplx>{1.0});

    CHECK(code_of([] { (void)parse_config("{"); }) == ErrorCode::InvalidParams);
    CHECK(code_of([] { (void)parse_config(R"({"preset": {"name": "zeta"}})"); }) ==
          ErrorCode::InvalidParams);
    CHECK(code_of([] { (void)parse_config(R"({"preset": {"name": "geom", "params": {"q": 1}}})"); }) ==
          ErrorCode::InvalidParams);
    CHECK(code_of([] { (void)parse_config(R"({"n_list": [1.5]})"); }) == ErrorCode::InvalidParams);
    CHECK(code_of([] { (void)parse_config(R"({"mu_list": ["a"]})"); }) == ErrorCode::InvalidParams);
    CHECK(code_of([] { (void)load_config("/nonexistent/config.json"); }) == ErrorCode::InvalidParams);

    SweepConfig bad = geom_config({2, 1}, {});
    CHECK(code_of([&] { bad.validate(); }) == ErrorCode::InvalidParams);
    bad = geom_config({}, {});
    CHECK(code_of([&] { bad.validate(); }) == ErrorCode::InvalidParams);
    bad = geom_config({1}, {-1});
    CHECK(code_of([&] { bad.validate(); }) == ErrorCode::InvalidParams);
    bad = geom_config({1}, {});
    bad.mu_list = {0.0};
    CHECK(code_of([&] { bad.validate(); }) == ErrorCode::InvalidParams);
}

TEST_CASE("Szego-only sweep of geom") {
    const auto rows = run_sweep(geom_config({1, 2, 3}, {}));
    const double expected[] = {0.0225, 0.003375, 0.00050625};
    for (int n = 1; n <= 3; ++n) {
        const auto* r = find(rows, "szego_rel_err", n, 0);
        REQUIRE(r != nullptr);
        CHECK(r->rel_err.value() == doctest::Approx(expected[n - 1]).epsilon(1e-6));
        CHECK(r->status == "INFO");
        const auto* bo = find(rows, "bo_rhs", n, 0);
        REQUIRE(bo != nullptr);
        CHECK(bo->status == "PASS");
    }
    const auto* e = find(rows, "e_spread", 0, 0);
    REQUIRE(e != nullptr);
    CHECK(e->status == "PASS");
    CHECK(std::abs(e->value.value() - 1.0 / 0.85) < 1e-12);
    CHECK(rows.size() == 1 + 3 * 3);
    CHECK(rows.front().quantity == "e_spread");
    CHECK(rows.front().param_json.find("inner_level") != std::string::npos);
}

TEST_CASE("monomial(0) has no error anywhere") {
    SweepConfig c;
    c.preset = PresetParams::monomial(0);
    c.n_list = {1, 3, 6};
    c.kappa_list = {1};
    for (const auto& r : run_sweep(c)) {
        INFO(r.quantity << " n=" << r.n);
        if (r.abs_err) CHECK(*r.abs_err == 0.0);
        if (r.rel_err) CHECK(*r.rel_err == 0.0);
        CHECK(r.status.rfind("ERROR", 0) == std::string::npos);
    }
}

TEST_CASE("winding rows of a geom sweep") {
    const auto rows = run_sweep(geom_config({2}, {1}));
    const auto* d = find(rows, "d_exact", 2, 1);
    REQUIRE(d != nullptr);
    CHECK(std::abs(d->value.value() - 0.25) < 1e-12);
    CHECK(d->status == "PASS");
    const auto* f = find(rows, "f_12", 2, 1);
    REQUIRE(f != nullptr);
    CHECK(std::abs(f->value.value() - 0.21260764) < 1e-8);
    for (const char* q : {"f_11", "y_det"}) CHECK(find(rows, q, 2, 1)->status == "PASS");
    CHECK(find(rows, "f_tilde", 2, 1)->status == "INFO");
    CHECK(find(rows, "leading", 2, 1)->status == "INFO");
}

TEST_CASE("CSV output") {
    CHECK(std::string(kCsvHeader) ==
          "preset,param_json,n,kappa,mu_re,mu_im,level,quantity,value_re,value_im,ref_re,ref_im,"
          "abs_err,rel_err,status");
    SweepConfig c = geom_config({1, 2, 3, 4}, {1, 2});
    c.mu_list = {1.0, cplx(0.0, 1.0)};
    const std::string once = to_csv(run_sweep(c));
    CHECK(once == to_csv(run_sweep(c)));
    c.jobs = 4;
    CHECK(once == to_csv(run_sweep(c)));

    std::istringstream in(once);
    std::string line;
    std::getline(in, line);
    CHECK(line == kCsvHeader);
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        // every row has 15 fields once the quoted param_json is skipped
        const auto close = line.find("\",");
        REQUIRE(close != std::string::npos);
        const std::string rest = line.substr(close + 2);
        CHECK(std::count(rest.begin(), rest.end(), ',') == 12);
    }
    CHECK(rows > 0);
}

TEST_CASE("rate fits") {
    std::vector<double> x, y;
    for (int n = 8; n <= 64; n += 8) {
        x.push_back(n);
        y.push_back(std::pow(n, -2.0));
    }
    const RateFit p = fit_rate(x, y);
    CHECK(p.classification == RateClass::power);
    CHECK(p.slope == doctest::Approx(-2.0).epsilon(0.005));
    CHECK(p.r_squared == doctest::Approx(1.0));

    std::vector<double> ye;
    for (double n : x) ye.push_back(std::pow(0.15, n));
    const RateFit e = fit_rate(x, ye);
    CHECK(e.classification == RateClass::exponential);
    CHECK(std::exp(e.slope) == doctest::Approx(0.15));

    const std::vector<double> zeros(x.size(), 0.0);
    CHECK(fit_rate(x, zeros).classification == RateClass::flat);
    const std::vector<double> few = {1, 2, 3};
    CHECK(code_of([&] { (void)fit_rate(few, few); }) == ErrorCode::InsufficientData);
    std::vector<double> negative = y;
    negative[2] = -1.0;
    CHECK(code_of([&] { (void)fit_rate(x, negative); }) == ErrorCode::InvalidParams);

    const auto rows = run_sweep(geom_config({1, 2, 3, 4, 5, 6}, {}));
    std::vector<ConvergenceRecord> rel;
    for (const auto& r : rows) {
        if (r.quantity == "szego_rel_err") rel.push_back(r);
    }
    const RateFit g = fit_rate(rel, "n", "rel_err");
    CHECK(g.classification == RateClass::exponential);
    CHECK(std::exp(g.slope) == doctest::Approx(0.15).epsilon(1e-4));
    CHECK(code_of([&] { (void)fit_rate(rel, "n", "bogus"); }) == ErrorCode::InvalidParams);
}

TEST_CASE("report exit codes") {
    CHECK(report({}, {}).exit_code == 2);

    const auto rows = run_sweep(geom_config({1, 2, 3}, {1}));
    const Summary ok = report(rows, {});
    CHECK(ok.exit_code == 0);
    CHECK(ok.text.find("bo_rhs") != std::string::npos);
    CHECK(ok.text.find("result: PASS") != std::string::npos);

    auto skipped = rows;
    skipped[3].status = "SKIPPED(hypothesis)";
    CHECK(report(skipped, {}).exit_code == 0);

    auto failed = rows;
    for (auto& r : failed) {
        if (r.quantity == "f_11") r.status = "FAIL";
    }
    const Summary bad = report(failed, {{"x", RateFit{}}});
    CHECK(bad.exit_code == 1);
    CHECK(bad.text.find("fit x") != std::string::npos);

    auto errored = rows;
    errored[0].status = "ERROR(TailNotResolved)";
    CHECK(report(errored, {}).exit_code == 1);
}
