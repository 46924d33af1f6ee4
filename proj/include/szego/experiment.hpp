#pragma once

#include "szego/sections.hpp"
#include "szego/symbol.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace szego {

struct SweepConfig {
    PresetParams preset;
    std::vector<int> n_list;
    std::vector<int> kappa_list;  // empty: Szego rows only
    TruncationPolicy level_policy;
    std::vector<cplx> mu_list{1.0};
    std::string out_path;
    std::uint64_t seed = 7;  // replaces preset.seed for the random families
    int jobs = 1;

    /// Throws InvalidParams.
    void validate() const;
};

/// Config from JSON text. Complex values may be numbers, [re, im] or
/// {"re": .., "im": ..}; the preset is {"name": .., "params": {..}}.
SweepConfig parse_config(const std::string& json_text);
SweepConfig load_config(const std::string& path);

/// Canonical JSON for the preset family's parameters (used in every CSV row).
std::string preset_params_json(const PresetParams& p);

struct ConvergenceRecord {
    std::string preset;
    std::string param_json;
    int n = 0;
    int kappa = 0;
    cplx mu = 1.0;
    int level = 0;
    std::string quantity;
    std::optional<cplx> value;
    std::optional<cplx> ref;
    std::optional<double> abs_err;
    std::optional<double> rel_err;
    std::string status;  // PASS, FAIL, INFO, SKIPPED(hypothesis) or ERROR(<code>)
};

inline constexpr const char* kCsvHeader =
    "preset,param_json,n,kappa,mu_re,mu_im,level,quantity,value_re,value_im,ref_re,ref_im,"
    "abs_err,rel_err,status";

/// Rows are independent and may run on up to config.jobs threads; the result
/// is sorted by (kappa, n, mu, quantity) so it does not depend on scheduling.
std::vector<ConvergenceRecord> run_sweep(const SweepConfig& config);

void write_csv(const std::vector<ConvergenceRecord>& records, std::ostream& out);
std::string to_csv(const std::vector<ConvergenceRecord>& records);
void write_csv_file(const std::vector<ConvergenceRecord>& records, const std::string& path);

enum class RateClass { power, exponential, flat };
std::string to_string(RateClass c);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    RateClass classification = RateClass::flat;
    LinearFit power;        // log y against log x
    LinearFit exponential;  // log y against x
};

/// Least-squares rate fit picking the better of the power and exponential
/// models. Needs at least four points; all y below 1e-13 counts as flat.
RateFit fit_rate(std::span<const double> x, std::span<const double> y);

/// x_field / y_field: n, kappa, level, abs_err, rel_err or value_abs.
RateFit fit_rate(const std::vector<ConvergenceRecord>& records, const std::string& x_field,
                 const std::string& y_field);

struct NamedFit {
    std::string name;
    RateFit fit;
};

struct Summary {
    std::string text;
    int exit_code = 0;  // 0 all identities pass, 1 a violation or error, 2 nothing to report
};

Summary report(const std::vector<ConvergenceRecord>& records, const std::vector<NamedFit>& fits);

}  // namespace szego
