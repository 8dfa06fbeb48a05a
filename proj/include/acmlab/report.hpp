#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "acmlab/bending.hpp"
#include "acmlab/catalog.hpp"
#include "acmlab/identities.hpp"

namespace acmlab {

struct ReportOptions {
    double tol = 1e-9;           // classification / harmonicity tolerance
    double identity_tol = 1e-8;  // identity-suite tolerance
    bool identities = false;
    bool flow = false;
    bool invariants = false;  // module invariants (verify)
    int flow_iters = 200;
};

// A named numerical check with its threshold.
struct InvariantCheck {
    std::string id;
    double value = 0.0;
    double tol = 0.0;
    bool ok = true;
    bool gating = true;  // informational checks do not affect the verdict
};

struct FlowSummary {
    double initial_bending = 0.0;
    FlowTrace trace;
};

struct ModelReport {
    LoadedModel loaded;
    Analysis analysis;
    bool has_suite = false;
    SuiteResult suite;
    bool has_flow = false;
    FlowSummary flow;
    std::vector<InvariantCheck> invariants;

    bool invariants_ok() const;
    bool ok() const { return invariants_ok() && (!has_suite || suite.ok()); }
};

// Orbit point whose structure is the given one: g maps the standard frame to
// an adapted frame (v_1, phi v_1, ..., v_n, phi v_n, zeta).
OrbitPoint orbit_point_of(const ACMStructure& acm);

// Decomposition, invariant-identity, harmonicity and bending checks of one
// model. Random directions and conjugations come from `seed`.
std::vector<InvariantCheck> module_invariants(const LoadedModel& lm, const Analysis& a, std::uint64_t seed);

ModelReport build_report(const LoadedModel& lm, const ReportOptions& opt, std::uint64_t seed = 0);

// Deterministic JSON document: model echo, classification, harmonicity and
// the optional identity, invariant and flow sections for each model.
std::string render_report(const std::string& command, const std::vector<ModelReport>& reports,
                          const ReportOptions& opt);

// Plain-text table, one line per model.
std::string summary_table(const std::vector<ModelReport>& reports);

}  // namespace acmlab
