#ifndef WICKLAB_REPORT_HPP
#define WICKLAB_REPORT_HPP

#include <string>
#include <utility>
#include <vector>

namespace wicklab {

/// Outcome of one certified inequality, identity or convergence check.
/// Convention: pass  <=>  worst_residual <= tolerance.  For identities the
/// residual is an absolute deviation; for operator inequalities it is the
/// negated minimum eigenvalue, so large negative values are comfortable
/// passes.
struct CertificateReport {
    std::string name;
    std::string statement;  // what is being certified, in plain words
    std::vector<std::pair<std::string, double>> constants;
    int probes = 0;
    double worst_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::vector<std::string> notes;     // informational
    std::vector<std::string> warnings;  // counted under --strict

    void set_outcome(double worst, double tol) {
        worst_residual = worst;
        tolerance = tol;
        pass = worst <= tol;
    }
    void constant(const std::string& n, double v) { constants.emplace_back(n, v); }
};

} // namespace wicklab

#endif
