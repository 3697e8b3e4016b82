#pragma once

#include <string>
#include <vector>

namespace capgrav {

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool greater_is_better = false;  // pass iff measured >= tolerance
  bool pass = false;
  double wall_ms = 0.0;
};

struct VerifyOptions {
  /// Test-only fault injection: adds `fault_injection` to the measured
  /// value of the named check before the pass/fail decision, so the
  /// harness itself can be exercised.
  std::string fault_injection_check;
  double fault_injection = 0.0;
  /// When nonempty, only checks whose name starts with this prefix run.
  std::string only_prefix;
  unsigned seed = 20260809;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  double total_wall_ms = 0.0;

  bool all_pass() const;
  const CheckResult* find(const std::string& name) const;
  std::string to_json() const;  // machine-readable report
  std::string summary() const;  // one line per check
};

/// Run the full invariant suite: special-function identities, linear-field
/// residuals, frame consistency, first-integral conservation, closed-form
/// residuals and oracle equivalence for both cases, and serialization
/// determinism.
VerificationReport run_verification(const VerifyOptions& opts = {});

}  // namespace capgrav
