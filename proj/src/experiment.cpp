#include "szego/experiment.hpp"

#include "szego/determinant.hpp"
#include "szego/error.hpp"
#include "szego/szego_bo.hpp"
#include "szego/winding.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <thread>

namespace szego {

using nlohmann::json;

namespace {

// Assertion tolerances of the identity rows.
constexpr double kBoTol = 1e-9;
constexpr double kSpreadTol = 1e-7;
constexpr double kExactTol = 1e-9;
constexpr double kYTol = 1e-7;

cplx complex_from_json(const json& j, const char* what) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<double>(), j[1].get<double>()};
    }
    if (j.is_object() && j.contains("re")) {
        return {j.at("re").get<double>(), j.value("im", 0.0)};
    }
    throw Error(ErrorCode::InvalidParams, std::string(what) + " is not a complex value");
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

std::vector<int> int_list(const json& j, const char* what) {
    if (!j.is_array()) throw Error(ErrorCode::InvalidParams, std::string(what) + " must be a list");
    std::vector<int> out;
    for (const auto& v : j) {
        if (!v.is_number_integer()) {
            throw Error(ErrorCode::InvalidParams, std::string(what) + " holds a non-integer");
        }
        out.push_back(v.get<int>());
    }
    return out;
}

PresetParams preset_from_json(const json& j) {
    if (!j.is_object() || !j.contains("name")) {
        throw Error(ErrorCode::InvalidParams, "preset needs a name");
    }
    PresetParams p;
    p.name = preset_name_from_string(j.at("name").get<std::string>());
    if (!j.contains("params")) return p;
    for (const auto& [key, v] : j.at("params").items()) {
        if (key == "r") {
            p.r = complex_from_json(v, "r");
        } else if (key == "s") {
            p.s = complex_from_json(v, "s");
        } else if (key == "alpha") {
            p.alpha = complex_from_json(v, "alpha");
        } else if (key == "beta_coef") {
            p.beta_coef = complex_from_json(v, "beta_coef");
        } else if (key == "beta_smooth" || key == "beta") {
            p.beta_smooth = v.get<double>();
        } else if (key == "seed") {
            p.seed = v.get<std::uint64_t>();
        } else if (key == "amplitude") {
            p.amplitude = v.get<double>();
        } else if (key == "cutoff") {
            p.cutoff = v.get<int>();
        } else if (key == "hermitian") {
            p.hermitian = v.get<bool>();
        } else if (key == "power") {
            p.power = v.get<int>();
        } else {
            throw Error(ErrorCode::InvalidParams, "unknown preset parameter '" + key + "'");
        }
    }
    return p;
}

json preset_params_object(const PresetParams& p) {
    json j = json::object();
    switch (p.name) {
        case PresetName::geom:
            j["r"] = complex_to_json(p.r);
            j["s"] = complex_to_json(p.s);
            break;
        case PresetName::exp2:
            j["alpha"] = complex_to_json(p.alpha);
            j["beta_coef"] = complex_to_json(p.beta_coef);
            break;
        case PresetName::cbeta:
            j["beta_smooth"] = p.beta_smooth;
            j["seed"] = p.seed;
            j["amplitude"] = p.amplitude;
            j["cutoff"] = p.cutoff;
            j["hermitian"] = p.hermitian;
            break;
        case PresetName::monomial:
            j["power"] = p.power;
            break;
    }
    return j;
}

// ---------------------------------------------------------------------------

// Row factory carrying the columns shared by every row of one task.
struct RowStamp {
    const std::string* preset;
    const json* params;
    int n;
    int kappa;
    cplx mu;
    int level;
    int inner_level;

    ConvergenceRecord make(const std::string& quantity) const {
        ConvergenceRecord r;
        r.preset = *preset;
        json pj = *params;
        pj["inner_level"] = inner_level;
        r.param_json = pj.dump();
        r.n = n;
        r.kappa = kappa;
        r.mu = mu;
        r.level = level;
        r.quantity = quantity;
        return r;
    }
};

std::string failure_status(const Error& e) {
    if (e.code() == ErrorCode::NearSingular) return "SKIPPED(hypothesis)";
    return "ERROR(" + std::string(to_string(e.code())) + ")";
}

void mark_failed(ConvergenceRecord& r, const std::exception& e) {
    if (const auto* err = dynamic_cast<const Error*>(&e)) {
        r.status = failure_status(*err);
    } else {
        r.status = "ERROR(Internal)";
    }
}

// PASS/FAIL against a reference; `floor` = 1 scales by max(1, |ref|).
void assert_close(ConvergenceRecord& r, cplx value, cplx ref, double tol, double floor) {
    r.value = value;
    r.ref = ref;
    r.abs_err = std::abs(value - ref);
    r.rel_err = *r.abs_err / std::max(floor, std::abs(ref));
    r.status = *r.rel_err < tol ? "PASS" : "FAIL";
}

void info(ConvergenceRecord& r, cplx value, std::optional<cplx> ref, double floor) {
    r.value = value;
    r.ref = ref;
    if (ref) {
        r.abs_err = std::abs(value - *ref);
        r.rel_err = *r.abs_err / std::max(floor, std::abs(*ref));
    }
    r.status = "INFO";
}

template <class F>
void guarded(std::vector<ConvergenceRecord>& out, ConvergenceRecord row, F&& fill) {
    try {
        fill(row);
    } catch (const std::exception& e) {
        mark_failed(row, e);
    }
    out.push_back(std::move(row));
}

int quantity_rank(const std::string& q) {
    static const std::map<std::string, int> rank = {
        {"e_spread", 0}, {"d_exact", 1}, {"bo_rhs", 2}, {"szego_rel_err", 3}, {"f_11", 4},
        {"f_12", 5},     {"f_tilde", 6}, {"leading", 7}, {"y_det", 8}};
    const auto it = rank.find(q);
    return it == rank.end() ? 99 : it->second;
}

using Task = std::function<std::vector<ConvergenceRecord>()>;

std::vector<std::vector<ConvergenceRecord>> run_tasks(const std::vector<Task>& tasks, int jobs) {
    std::vector<std::vector<ConvergenceRecord>> results(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) results[i] = tasks[i]();
    };
    const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(tasks.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return results;
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

}  // namespace

// ---------------------------------------------------------------------------

void SweepConfig::validate() const {
    preset.validate();
    level_policy.validate();
    if (n_list.empty()) throw Error(ErrorCode::InvalidParams, "n_list is empty");
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        if (n_list[i] < 1) throw Error(ErrorCode::InvalidParams, "n_list entries must be >= 1");
        if (i > 0 && n_list[i] <= n_list[i - 1]) {
            throw Error(ErrorCode::InvalidParams, "n_list must be strictly increasing");
        }
    }
    for (int k : kappa_list) {
        if (k < 0) throw Error(ErrorCode::InvalidParams, "kappa_list entries must be >= 0");
    }
    if (mu_list.empty()) throw Error(ErrorCode::InvalidParams, "mu_list is empty");
    for (cplx mu : mu_list) {
        if (mu == cplx{}) throw Error(ErrorCode::InvalidParams, "mu must be nonzero");
    }
    if (jobs < 1) throw Error(ErrorCode::InvalidParams, "jobs must be >= 1");
}

SweepConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidParams, std::string("config is not valid JSON: ") + e.what());
    }
    SweepConfig c;
    try {
        if (j.contains("preset")) c.preset = preset_from_json(j.at("preset"));
        c.seed = c.preset.seed;
        if (j.contains("n_list")) c.n_list = int_list(j.at("n_list"), "n_list");
        if (j.contains("kappa_list")) c.kappa_list = int_list(j.at("kappa_list"), "kappa_list");
        if (j.contains("mu_list")) {
            c.mu_list.clear();
            for (const auto& v : j.at("mu_list")) c.mu_list.push_back(complex_from_json(v, "mu"));
        }
        if (j.contains("policy")) {
            const json& p = j.at("policy");
            c.level_policy.target_level = p.value("target_level", c.level_policy.target_level);
            c.level_policy.tail_tol = p.value("tail_tol", c.level_policy.tail_tol);
            c.level_policy.doubling_check = p.value("doubling_check", c.level_policy.doubling_check);
            c.level_policy.max_inner = p.value("max_inner", c.level_policy.max_inner);
        }
        c.out_path = j.value("out", std::string{});
        c.seed = j.value("seed", c.seed);
        c.jobs = j.value("jobs", c.jobs);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidParams, std::string("bad config field: ") + e.what());
    }
    return c;
}

SweepConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidParams, "cannot read config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string preset_params_json(const PresetParams& p) { return preset_params_object(p).dump(); }

std::vector<ConvergenceRecord> run_sweep(const SweepConfig& config) {
    config.validate();
    PresetParams params = config.preset;
    params.seed = config.seed;
    const Symbol a = preset(params);
    const std::string name = to_string(params.name);
    const json pjson = preset_params_object(params);
    const TruncationPolicy& policy = config.level_policy;
    const int max_n = config.n_list.back();

    std::vector<Task> tasks;

    // Errors raised while building shared state are replayed on every row
    // that depends on it.
    std::shared_ptr<const BorodinOkounkov> bo;
    std::shared_ptr<const Error> bo_error;
    try {
        bo = std::make_shared<const BorodinOkounkov>(factorize(a), max_n, policy);
    } catch (const Error& e) {
        bo_error = std::make_shared<const Error>(e);
    }

    tasks.push_back([&, bo] {
        std::vector<ConvergenceRecord> out;
        int level = bo ? working_level(bo->factorization(), 0, policy) : 0;
        const RowStamp stamp{&name, &pjson, 0, 0, 1.0, level, bo ? bo->inner_level() : 0};
        guarded(out, stamp.make("e_spread"), [&](ConvergenceRecord& r) {
            const EBundle e = e_four_ways(a, policy);
            r.value = e.e_op;
            r.ref = e.e_series_a;
            r.abs_err = std::abs(e.e_op - e.e_series_a);
            r.rel_err = e.spread;
            r.status = e.spread < kSpreadTol ? "PASS" : "FAIL";
        });
        return out;
    });

    for (int n : config.n_list) {
        tasks.push_back([&, bo, bo_error, n] {
            std::vector<ConvergenceRecord> out;
            const RowStamp stamp{&name,  &pjson, n, 0, 1.0, bo ? bo->level() : 0,
                                 bo ? bo->inner_level() : 0};
            std::optional<cplx> d_n;
            guarded(out, stamp.make("d_exact"), [&](ConvergenceRecord& r) {
                d_n = dn_exact(a, n);
                info(r, *d_n, std::nullopt, 1.0);
            });
            guarded(out, stamp.make("bo_rhs"), [&](ConvergenceRecord& r) {
                if (bo_error) throw *bo_error;
                const cplx rhs = bo->rhs(n);
                if (!d_n) throw Error(ErrorCode::Internal, "D_n unavailable");
                assert_close(r, rhs, *d_n, kBoTol, 0.0);
            });
            guarded(out, stamp.make("szego_rel_err"), [&](ConvergenceRecord& r) {
                if (bo_error) throw *bo_error;
                if (!d_n) throw Error(ErrorCode::Internal, "D_n unavailable");
                const cplx g_pow_e = std::pow(bo->factorization().g_mean, n) * bo->e_op();
                const double rel = g_pow_e == cplx{} ? 0.0 : std::abs(*d_n / g_pow_e - 1.0);
                r.value = rel;
                r.abs_err = rel;
                r.rel_err = rel;
                r.status = "INFO";
            });
            return out;
        });
    }

    std::vector<int> kappas;
    for (int k : config.kappa_list) {
        if (k >= 1) kappas.push_back(k);
    }
    std::sort(kappas.begin(), kappas.end());
    kappas.erase(std::unique(kappas.begin(), kappas.end()), kappas.end());

    if (!kappas.empty()) {
        const int max_m = max_n + kappas.back();
        for (cplx mu : config.mu_list) {
            std::shared_ptr<const WindingContext> ctx;
            std::shared_ptr<const Error> ctx_error;
            try {
                ctx = std::make_shared<const WindingContext>(factorize(a, mu), max_m, policy);
            } catch (const Error& e) {
                ctx_error = std::make_shared<const Error>(e);
            }
            for (int kappa : kappas) {
                for (int n : config.n_list) {
                    tasks.push_back([&, ctx, ctx_error, mu, kappa, n] {
                        std::vector<ConvergenceRecord> out;
                        const RowStamp stamp{&name, &pjson, n, kappa, mu, ctx ? ctx->level() : 0,
                                             ctx ? ctx->inner_level() : 0};
                        auto need_ctx = [&] {
                            if (ctx_error) throw *ctx_error;
                        };
                        std::optional<cplx> f12;
                        std::optional<Error> f12_error;
                        try {
                            need_ctx();
                            f12 = ctx->f_12(n, kappa);
                        } catch (const Error& e) {
                            f12_error = e;
                        }
                        auto need_f12 = [&] {
                            if (f12_error) throw *f12_error;
                        };

                        guarded(out, stamp.make("d_exact"), [&](ConvergenceRecord& r) {
                            const cplx brute = dn_exact(shift(a, -kappa), n);
                            r.value = brute;
                            const Matrix t = toeplitz_section(a, n + kappa).entries;
                            require_invertible(t, "T_{n+kappa}(a)");
                            need_f12();
                            const Factorization& f = ctx->factorization();
                            const cplx g_ratio = g_mean_of(f.c) / f.g_mean;
                            const cplx rhs = static_cast<double>(winding_sign(n, kappa)) *
                                             det_lu(t).value * std::pow(g_ratio, kappa) * *f12;
                            assert_close(r, brute, rhs, kExactTol, 1.0);
                        });
                        guarded(out, stamp.make("f_11"), [&](ConvergenceRecord& r) {
                            need_f12();
                            assert_close(r, ctx->f_11(n, kappa), *f12, kExactTol, 1.0);
                        });
                        guarded(out, stamp.make("f_12"), [&](ConvergenceRecord& r) {
                            need_f12();
                            info(r, *f12, std::nullopt, 1.0);
                        });
                        if (n > kappa) {
                            guarded(out, stamp.make("f_tilde"), [&](ConvergenceRecord& r) {
                                need_f12();
                                info(r, ctx->f_tilde(n, kappa), *f12, 1.0);
                            });
                        }
                        guarded(out, stamp.make("leading"), [&](ConvergenceRecord& r) {
                            need_f12();
                            info(r, ctx->leading(n, kappa), *f12, 1.0);
                        });
                        guarded(out, stamp.make("y_det"), [&](ConvergenceRecord& r) {
                            need_f12();
                            const YDet y = y_matrix_det(ctx->factorization(), n, kappa, ctx->level());
                            assert_close(r, y.value, *f12, kYTol, 1.0);
                        });
                        return out;
                    });
                }
            }
        }
    }

    std::vector<ConvergenceRecord> records;
    for (auto& chunk : run_tasks(tasks, config.jobs)) {
        for (auto& r : chunk) records.push_back(std::move(r));
    }
    std::stable_sort(records.begin(), records.end(),
                     [](const ConvergenceRecord& x, const ConvergenceRecord& y) {
                         if (x.kappa != y.kappa) return x.kappa < y.kappa;
                         if (x.n != y.n) return x.n < y.n;
                         if (x.mu.real() != y.mu.real()) return x.mu.real() < y.mu.real();
                         if (x.mu.imag() != y.mu.imag()) return x.mu.imag() < y.mu.imag();
                         return quantity_rank(x.quantity) < quantity_rank(y.quantity);
                     });
    return records;
}

// ---------------------------------------------------------------------------

void write_csv(const std::vector<ConvergenceRecord>& records, std::ostream& out) {
    auto opt_complex = [&](const std::optional<cplx>& z) {
        if (z) {
            out << format_double(z->real()) << ',' << format_double(z->imag());
        } else {
            out << ',';
        }
    };
    auto opt_real = [&](const std::optional<double>& x) {
        if (x) out << format_double(*x);
    };
    out << kCsvHeader << '\n';
    for (const auto& r : records) {
        out << r.preset << ',' << csv_quote(r.param_json) << ',' << r.n << ',' << r.kappa << ','
            << format_double(r.mu.real()) << ',' << format_double(r.mu.imag()) << ',' << r.level
            << ',' << r.quantity << ',';
        opt_complex(r.value);
        out << ',';
        opt_complex(r.ref);
        out << ',';
        opt_real(r.abs_err);
        out << ',';
        opt_real(r.rel_err);
        out << ',' << r.status << '\n';
    }
}

std::string to_csv(const std::vector<ConvergenceRecord>& records) {
    std::ostringstream ss;
    write_csv(records, ss);
    return ss.str();
}

void write_csv_file(const std::vector<ConvergenceRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidParams, "cannot write " + path);
    write_csv(records, out);
    if (!out) throw Error(ErrorCode::Internal, "write to " + path + " failed");
}

// ---------------------------------------------------------------------------

std::string to_string(RateClass c) {
    switch (c) {
        case RateClass::power: return "power";
        case RateClass::exponential: return "exponential";
        case RateClass::flat: return "flat";
    }
    return "flat";
}

namespace {

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw Error(ErrorCode::InsufficientData, "x values are all equal");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy == 0.0 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
    return fit;
}

}  // namespace

RateFit fit_rate(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw Error(ErrorCode::InvalidParams, "x and y differ in length");
    if (x.size() < 4) {
        throw Error(ErrorCode::InsufficientData,
                    "rate fits need at least 4 points, got " + std::to_string(x.size()));
    }
    RateFit out;
    if (std::all_of(y.begin(), y.end(), [](double v) { return std::abs(v) < 1e-13; })) {
        out.classification = RateClass::flat;
        out.r_squared = 1.0;
        return out;
    }
    std::vector<double> xs(x.begin(), x.end());
    std::vector<double> log_x;
    std::vector<double> log_y;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!(y[i] > 0.0)) throw Error(ErrorCode::InvalidParams, "rate fits need positive y");
        log_y.push_back(std::log(y[i]));
        log_x.push_back(x[i] > 0.0 ? std::log(x[i]) : 0.0);
    }
    out.exponential = least_squares(xs, log_y);
    const bool positive_x = std::all_of(x.begin(), x.end(), [](double v) { return v > 0.0; });
    if (positive_x) out.power = least_squares(log_x, log_y);

    const LinearFit& best =
        positive_x && out.power.r_squared >= out.exponential.r_squared ? out.power : out.exponential;
    out.classification = &best == &out.power ? RateClass::power : RateClass::exponential;
    out.slope = best.slope;
    out.intercept = best.intercept;
    out.r_squared = best.r_squared;
    return out;
}

RateFit fit_rate(const std::vector<ConvergenceRecord>& records, const std::string& x_field,
                 const std::string& y_field) {
    auto field = [](const ConvergenceRecord& r, const std::string& f) -> std::optional<double> {
        if (f == "n") return r.n;
        if (f == "kappa") return r.kappa;
        if (f == "level") return r.level;
        if (f == "abs_err") return r.abs_err;
        if (f == "rel_err") return r.rel_err;
        if (f == "value_abs") {
            if (r.value) return std::abs(*r.value);
            return std::nullopt;
        }
        throw Error(ErrorCode::InvalidParams, "unknown record field '" + f + "'");
    };
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& r : records) {
        const auto x = field(r, x_field);
        const auto y = field(r, y_field);
        if (x && y) {
            xs.push_back(*x);
            ys.push_back(*y);
        }
    }
    return fit_rate(xs, ys);
}

Summary report(const std::vector<ConvergenceRecord>& records, const std::vector<NamedFit>& fits) {
    Summary s;
    if (records.empty()) {
        s.text = "error: no records to report\n";
        s.exit_code = 2;
        return s;
    }
    struct Tally {
        int pass = 0, fail = 0, info = 0, skipped = 0, error = 0;
        double max_rel = 0.0;
    };
    std::map<int, std::pair<std::string, Tally>> by_quantity;
    for (const auto& r : records) {
        auto& [q, t] = by_quantity[quantity_rank(r.quantity)];
        q = r.quantity;
        if (r.status == "PASS" || r.status == "FAIL") {
            (r.status == "PASS" ? t.pass : t.fail)++;
            if (r.rel_err) t.max_rel = std::max(t.max_rel, *r.rel_err);
        } else if (r.status == "INFO") {
            ++t.info;
        } else if (r.status.rfind("SKIPPED", 0) == 0) {
            ++t.skipped;
        } else {
            ++t.error;
        }
    }
    std::ostringstream out;
    bool ok = true;
    char line[200];
    for (const auto& [rank, entry] : by_quantity) {
        const auto& [q, t] = entry;
        std::snprintf(line, sizeof line,
                      "%-14s pass %4d  fail %4d  info %4d  skipped %4d  error %4d", q.c_str(),
                      t.pass, t.fail, t.info, t.skipped, t.error);
        out << line;
        if (t.pass + t.fail > 0) {
            std::snprintf(line, sizeof line, "  max rel_err %.3e", t.max_rel);
            out << line;
        }
        out << '\n';
        ok = ok && t.fail == 0 && t.error == 0;
    }
    for (const auto& f : fits) {
        std::snprintf(line, sizeof line, "fit %-24s %-11s slope %+.4f  r^2 %.4f", f.name.c_str(),
                      to_string(f.fit.classification).c_str(), f.fit.slope, f.fit.r_squared);
        out << line << '\n';
    }
    out << (ok ? "result: PASS" : "result: FAIL") << '\n';
    s.text = out.str();
    s.exit_code = ok ? 0 : 1;
    return s;
}

}  // namespace szego
