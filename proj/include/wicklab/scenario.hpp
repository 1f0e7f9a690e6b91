#ifndef WICKLAB_SCENARIO_HPP
#define WICKLAB_SCENARIO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "wicklab/config.hpp"
#include "wicklab/report.hpp"

namespace wicklab::scenario {

struct RunOptions {
    std::string out_dir = "out";
    std::uint64_t seed = 20260809ull;
    int workers = 2;
    bool strict = false;
    bool quiet = false;  // suppress the per-certificate stdout lines
};

struct RunReport {
    std::string scenario;
    std::string digest;
    std::vector<CertificateReport> rows;
    std::vector<std::string> step_csv;  // optional per-step experiment lines
    double wall_ms = 0.0;
    bool overall_pass = true;
    int warnings = 0;

    std::string csv(bool with_header) const;
    std::string json() const;
};

/// Execute one scenario from parsed config text.  Relative file references
/// inside the config resolve against base_dir.  Throws config_error or
/// model_error on invalid input; certificate failures are recorded in the
/// report, not thrown.
RunReport run_scenario(const Config& cfg, const std::string& raw_text,
                       const RunOptions& opts,
                       const std::string& base_dir = ".");

/// Names of the bundled scenarios, default suite first.
std::vector<std::string> bundled_names();
std::vector<std::string> default_suite();
std::string bundled_text(const std::string& name);

/// Run a config file, a bundled scenario name, or (empty argument) the
/// whole default suite.  Writes per-scenario CSV/JSON under opts.out_dir,
/// plus suite.csv when more than one scenario runs.  Returns the process
/// exit code: 0 all pass, 1 certificate failure, 2 config/model error.
int run_cli(const std::string& target, const RunOptions& opts);

} // namespace wicklab::scenario

#endif
