#pragma once

/**
 * @file
 * Fast invariant battery behind `qfm selfcheck`. Every check uses at most
 * three qubits except the kernel check (four), and the whole run takes a few
 * seconds.
 */

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qfm {

struct SelfcheckOptions {
    std::uint64_t seed = 7;
    /// Test hook: perturbs the adjoint gradient before it is compared.
    bool corrupt_gradient = false;
};

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

std::vector<CheckResult> run_selfcheck(const SelfcheckOptions& options = {});

/// Fixed-width table, one row per check.
void print_selfcheck(std::ostream& out, const std::vector<CheckResult>& results);

bool all_passed(const std::vector<CheckResult>& results);

} // namespace qfm
