// SPDX-License-Identifier: Apache-2.0
//
// Oracle suite behind the `verify` command. Every check compares a
// production path against an independent computation or a statistical bound.
// ------------------------------------------------------------------------

#ifndef JPA_VERIFY_HPP
#define JPA_VERIFY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jpa/kernels.hpp"
#include "jpa/optimizer.hpp"
#include "jpa/system_model.hpp"

namespace jpa
{

struct CheckResult
{
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerifyOptions
{
    Scenario scenario;
    std::uint64_t seed = 1;
    std::size_t frames = 100000;
    unsigned workers = 0;
    std::optional<kernels::Isa> isa;
    // Harness self-test: scales the closed-form signal term by 1.05 before
    // it is compared with the simulation.
    bool inject_fault = false;
};

// Per-user structure of an optimum: every user sits on its C4 row unless its
// C3 row binds instead (a user pinned at the threshold is not the bottleneck).
struct BindingReport
{
    std::size_t users = 0;
    std::size_t c4_active = 0;
    std::size_t c3_active = 0;
    std::size_t unexplained = 0; // neither row active
    double max_violation = 0.0;  // max over C1, C3, C4 relative violations
    double lambda_mismatch = 0.0; // |lambda - min_k c_k ASINR_k| / lambda
};

BindingReport binding_structure(const SystemConfig& cfg, const LargeScaleProfile& profile,
                                const Solution& sol, double active_tol = 1e-5);

std::vector<CheckResult> run_verify(const VerifyOptions& opts);

} // namespace jpa

#endif
