#ifndef FLD_ACCEPTANCE_HPP
#define FLD_ACCEPTANCE_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace fld {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string measured;
  std::string expected;
  double seconds = 0.0;
};

struct ConvergenceLevel {
  double h = 0.0;
  double delta = 0.0;
  double L1 = 0.0;
  double Linf = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergenceLevel> levels;
  double order = 0.0;
};

/// Self-similar datum (m = 2, N = 1) on [-4, 4], implicit, free boundary, to
/// t = 1 at (h, delta) = (1/128, 4e-3), (1/256, 2e-3), (1/512, 1e-3).
ConvergenceReport convergence_study();
std::string convergence_report_json(const ConvergenceReport& report);

/// Runs every criterion; `progress` is called as each one finishes. The seed
/// drives the randomized comparison-principle pairs.
std::vector<CriterionResult> run_acceptance(std::uint64_t seed = 0,
                                            const std::function<void(const CriterionResult&)>& progress = {});

/// "[PASS] 1 name: measured ... (expected ...) 1.2 s"
std::string format_result(const CriterionResult& r);

}  // namespace fld

#endif  // FLD_ACCEPTANCE_HPP
