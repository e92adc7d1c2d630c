#pragma once

#include <string>
#include <vector>

namespace dqm {

// Outcome of one acceptance criterion.
struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

// Tolerances and sizes of the acceptance suite. The defaults are the
// contract; only conjecture_tol is exposed on the command line.
struct AcceptanceConfig {
    double identity_tol = 1e-9;       // quantum dilogarithm relations
    double casoratian_exp_tol = 1e-10;
    double tau_tol = 1e-9;
    double eigen_tol = 1e-7;
    double refless_tol = 1e-9;
    double unitarity_tol = 1e-8;
    double inversion_tol = 1e-10;
    double position_tol = 1e-6;       // pole census
    double census_step = 1e-3;
    double terminating_tol = 1e-9;
    double conjecture_tol = 1e-6;     // series-limited checks
    double gauss_tol = 1e-9;
    int identity_samples = 200;
    int k_points = 50;
    int jobs = 0;                     // 0: DQM_JOBS or hardware concurrency
};

// Criteria 1..10. Each runs independently.
CriterionResult run_criterion(int id, const AcceptanceConfig& cfg = {});
std::vector<CriterionResult> run_acceptance(const AcceptanceConfig& cfg = {});
std::string criterion_name(int id);
constexpr int criterion_count = 10;

}  // namespace dqm
