#pragma once

#include <string>
#include <vector>

#include "acmlab/harmonic.hpp"

namespace acmlab {

enum class IdentityStatus { Pass, Fail, NotApplicable };

std::string status_name(IdentityStatus s);

// One evaluated registry entry. `residual` is the max-abs of left minus right
// over the free frame slots divided by `scale` = max(1, largest term).
// Conditional records (harmonic iff ..., type ... is harmonic) report in
// `residual` the relative residual of whichever side should vanish.
struct IdentityRecord {
    std::string id;
    std::string anchor;  // the displayed formula or statement it checks
    IdentityStatus status = IdentityStatus::NotApplicable;
    double residual = 0.0;
    double raw_residual = 0.0;
    double scale = 1.0;
    double tol = 1e-8;
    bool gating = true;  // counts towards the suite verdict
    std::string detail;
};

// Registered ids in evaluation order.
std::vector<std::string> identity_ids();

// Throws std::invalid_argument for an unknown id.
IdentityRecord evaluate_identity(const std::string& id, const Analysis& a, double tol = 1e-8);

struct SuiteResult {
    std::vector<IdentityRecord> records;
    int passed = 0;
    int failed = 0;
    int not_applicable = 0;
    int informational_failed = 0;  // failures of non-gating records
    std::vector<std::string> failures;  // ids of failed gating records
    bool ok() const { return failed == 0; }
};

SuiteResult run_identity_suite(const Analysis& a, double tol = 1e-8);

// Linear identities are sums sum_j c_j T_j = 0. The referee stacks the term
// values c_j T_j over a pool of models and fits multipliers m_j with
// sum_j m_j c_j T_j = 0 (displayed identity: every m_j = 1, fit normalized to
// m_0 = 1). It also lists every single multiplier change that makes the
// identity hold on the whole pool.
struct CoefficientRepair {
    int term = -1;
    std::string label;
    double displayed = 0.0;
    double fitted = 0.0;
    double residual = 0.0;
};

struct RefereeResult {
    std::string id;
    bool linear = false;
    int samples = 0;
    std::vector<std::string> labels;
    std::vector<double> displayed;
    std::vector<double> fitted;
    double displayed_residual = 0.0;  // relative, over the pool
    double fit_residual = 0.0;        // smallest singular value / largest
    int nullity = 0;                  // dimension of the numerical null space
    std::vector<std::string> unexercised;  // terms that vanish on the whole pool
    std::vector<CoefficientRepair> repairs;
};

RefereeResult referee_identity(const std::string& id, const std::vector<const Analysis*>& pool);

}  // namespace acmlab
