#include "acmlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "json.hpp"

namespace acmlab {

namespace {

using ojson = nlohmann::ordered_json;

std::vector<double> as_vector(const Tensor& t) { return t.data(); }

ojson matrix_json(const Tensor& t) {
    ojson rows = ojson::array();
    for (int i = 0; i < t.dim(); ++i) {
        ojson row = ojson::array();
        for (int j = 0; j < t.dim(); ++j) row.push_back(t(i, j));
        rows.push_back(row);
    }
    return rows;
}

InvariantCheck check(std::string id, double value, double tol) {
    return {std::move(id), value, tol, std::isfinite(value) && value <= tol};
}

// Random unit direction in the span of `basis`.
Tensor random_direction(const std::vector<Tensor>& basis, int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    Tensor b(2, dim);
    for (const Tensor& q : basis) b = b + nd(rng) * q;
    const double nb = b.norm();
    return nb > 0.0 ? (1.0 / nb) * b : b;
}

}  // namespace

bool ModelReport::invariants_ok() const {
    return std::all_of(invariants.begin(), invariants.end(), [](const InvariantCheck& c) { return c.ok || !c.gating; });
}

OrbitPoint orbit_point_of(const ACMStructure& acm) {
    const int D = acm.dim();
    const int n = acm.n;
    Tensor g(2, D);
    std::vector<Tensor> cols;
    cols.push_back(acm.zeta);
    // Unitary frame of zeta-perp by Gram-Schmidt on the standard vectors.
    for (int e = 0; e < D && static_cast<int>(cols.size()) < D; ++e) {
        Tensor v = basis_vector(D, e);
        for (const Tensor& c : cols) v = v - inner_product(v, c) * c;
        if (v.norm() < 1e-6) continue;
        v = (1.0 / v.norm()) * v;
        const Tensor pv = apply(acm.phi, v);
        const int k = (static_cast<int>(cols.size()) - 1) / 2;
        for (int i = 0; i < D; ++i) {
            g(i, 2 * k) = v(i);
            g(i, 2 * k + 1) = pv(i);
        }
        cols.push_back(v);
        cols.push_back(pv);
    }
    for (int i = 0; i < D; ++i) g(i, 2 * n) = acm.zeta(i);
    return orbit_point(n, g);
}

std::vector<InvariantCheck> module_invariants(const LoadedModel& lm, const Analysis& a, std::uint64_t seed) {
    std::vector<InvariantCheck> out;
    const double xi2 = std::max(1.0, a.torsion.xi.norm() * a.torsion.xi.norm());

    // Torsion decomposition.
    out.push_back(check("decomposition.reconstruction", max_abs_diff(a.comps.sum(), a.torsion.xi), 1e-10));
    double ortho = 0.0;
    double membership = 0.0;
    double sq = 0.0;
    for (int i = 0; i < kNumClasses; ++i) {
        membership = std::max(membership, membership_residual(a.comps.comp[i], a.acm));
        sq += a.comps.norms[i] * a.comps.norms[i];
        for (int j = i + 1; j < kNumClasses; ++j)
            ortho = std::max(ortho, std::fabs(inner_product(a.comps.comp[i], a.comps.comp[j])));
    }
    out.push_back(check("decomposition.orthogonality", ortho / xi2, 1e-10));
    out.push_back(check("decomposition.pythagoras", std::fabs(sq - a.comps.xi_norm * a.comps.xi_norm) / xi2, 1e-9));
    out.push_back(check("decomposition.membership", membership, 1e-10));

    std::mt19937_64 rng(seed);
    double equiv = 0.0;
    for (int k = 0; k < 2; ++k) {
        const Tensor g = random_orthogonal(lm.model.dim(), rng());
        const LoadedModel moved = load_model(conjugate_spec(lm.spec, g));
        const TorsionComponents c = decompose_torsion(
            intrinsic_torsion(connection(moved.model), moved.acm).xi, moved.acm);
        for (int i = 0; i < kNumClasses; ++i) equiv = std::max(equiv, std::fabs(c.norms[i] - a.comps.norms[i]));
    }
    out.push_back(check("decomposition.equivariance", equiv, 1e-10));

    // Curvature and the scalar invariants.
    out.push_back(check("curvature.first_bianchi", first_bianchi_residual(a.conn.riemann), 1e-9));
    out.push_back(check("curvature.second_bianchi", second_bianchi_residual(a.conn), 1e-9));
    out.push_back(check("invariants.lee_form", a.inv_res.lee, 1e-8));
    out.push_back(check("invariants.trace", a.inv_res.trace, 1e-8));

    // Harmonicity.
    out.push_back(check("harmonic.d_star_xi_agreement", a.harm.d_star_xi_agreement, 1e-8));
    out.push_back(check("harmonic.laplacian_agreement", a.harm.laplacian_agreement, 1e-8));
    const ClassMask reeb_family = mask_of({5, 6, 7, 8, 9, 10, 12});
    if (mask_within(a.cls.type_mask, reeb_family))
        out.push_back(check("harmonic.structure_iff_reeb",
                            a.harm.harmonic_structure == a.harm.reeb_harmonic ? 0.0 : 1.0, 0.0));

    // First variation of the bending at the model's own structure. The d* xi
    // form gates only where the divergence term xi_H vanishes.
    const OrbitPoint p = orbit_point_of(lm.acm);
    const Analysis body = analyze(body_model(p, lm.model),
                                  make_acm(standard_phi(lm.acm.n), basis_vector(lm.model.dim(), 2 * lm.acm.n)));
    const Tensor grad = bending_gradient(body);
    const Tensor hgrad = homogeneous_bending_gradient(body);
    // Central differences at h = 1e-5 carry rounding of order eps |xi|^2 / h,
    // so near critical points the mismatch is measured against that floor.
    const double floor = 1e-4 * std::max(1.0, bending(p, lm.model));
    const std::vector<Tensor> mb = m_block_basis(lm.acm.n);
    double worst = 0.0;
    double hworst = 0.0;
    for (int k = 0; k < 5; ++k) {
        const Tensor b = random_direction(mb, lm.model.dim(), rng);
        const double fd = fd_directional_derivative(p, lm.model, b);
        worst = std::max(worst, std::fabs(inner_product(grad, b) - fd) / std::max(grad.norm(), floor));
        hworst = std::max(hworst, std::fabs(inner_product(hgrad, b) - fd) / std::max(hgrad.norm(), floor));
    }
    InvariantCheck gc = check("bending.gradient_check", worst, 1e-5);
    gc.gating = max_abs_diff(grad, hgrad) <= 1e-9 * std::max(1.0, grad.norm());
    out.push_back(gc);
    out.push_back(check("bending.homogeneous_gradient_check", hworst, 1e-5));
    double stab = 0.0;
    for (const Tensor& q : u_block_basis(lm.acm.n))
        stab = std::max(stab, std::fabs(fd_directional_derivative(p, lm.model, q)));
    out.push_back(check("bending.stabilizer_invariance", stab, 1e-9));
    return out;
}

ModelReport build_report(const LoadedModel& lm, const ReportOptions& opt, std::uint64_t seed) {
    ModelReport r;
    r.loaded = lm;
    r.analysis = analyze(lm.model, lm.acm, opt.tol);
    if (opt.identities) {
        r.has_suite = true;
        r.suite = run_identity_suite(r.analysis, opt.identity_tol);
    }
    if (opt.invariants) r.invariants = module_invariants(lm, r.analysis, seed);
    if (opt.flow) {
        r.has_flow = true;
        const OrbitPoint p = orbit_point_of(lm.acm);
        r.flow.initial_bending = bending(p, lm.model);
        r.flow.trace = minimize_bending(p, lm.model, opt.flow_iters);
    }
    return r;
}

namespace {

ojson model_json(const ModelReport& r) {
    ojson m;
    const ModelSpec& s = r.loaded.spec;
    m["name"] = s.name;
    m["n"] = s.n;
    m["params"] = s.params;
    ojson c = ojson::array();
    const int D = 2 * s.n + 1;
    for (int a = 0; a < D; ++a)
        for (int b = a + 1; b < D; ++b)
            for (int k = 0; k < D; ++k)
                if (s.c(a, b, k) != 0.0) c.push_back({{"i", a + 1}, {"j", b + 1}, {"k", k + 1}, {"value", s.c(a, b, k)}});
    m["c"] = c;
    m["phi"] = matrix_json(s.phi);
    m["zeta"] = as_vector(s.zeta);
    return m;
}

ojson classification_json(const Analysis& a) {
    ojson c;
    c["type"] = a.cls.type_name;
    c["xi_norm"] = a.cls.xi_norm;
    ojson norms = ojson::object();
    ojson strict = ojson::array();
    for (int i = 0; i < kNumClasses; ++i) {
        norms["C" + std::to_string(i + 1)] = a.cls.norms[i];
        if (a.cls.strict[i]) strict.push_back("C" + std::to_string(i + 1));
    }
    c["norms"] = norms;
    c["strict_classes"] = strict;
    c["warnings"] = a.cls.admissibility_warnings;
    return c;
}

ojson harmonicity_json(const Analysis& a) {
    const HarmonicityReport& h = a.harm;
    ojson j;
    j["harmonic_structure"] = h.harmonic_structure;
    j["harmonic_map"] = h.harmonic_map;
    j["reeb_harmonic"] = h.reeb_harmonic;
    j["weakly_ac_einstein"] = h.weakly_ac_einstein;
    j["s_star"] = h.s_star;
    j["d_star_eta"] = a.inv.d_star_eta;
    j["d_star_F_zeta"] = a.inv.d_star_F_zeta;
    j["theta_norm"] = a.inv.has_theta ? a.inv.theta.norm() : 0.0;
    j["d_star_xi_norm"] = h.d_star_xi_norm;
    j["nu_norm"] = h.nu_norm;
    j["scalar_curvature"] = a.conn.scalar;
    return j;
}

ojson identities_json(const SuiteResult& s) {
    ojson j;
    j["passed"] = s.passed;
    j["failed"] = s.failed;
    j["not_applicable"] = s.not_applicable;
    j["informational_failed"] = s.informational_failed;
    j["failures"] = s.failures;
    ojson recs = ojson::array();
    for (const IdentityRecord& r : s.records) {
        ojson e;
        e["id"] = r.id;
        e["status"] = status_name(r.status);
        e["residual"] = r.residual;
        e["gating"] = r.gating;
        if (!r.detail.empty()) e["detail"] = r.detail;
        recs.push_back(e);
    }
    j["records"] = recs;
    return j;
}

ojson flow_json(const FlowSummary& f) {
    const FlowTrace& t = f.trace;
    ojson j;
    j["initial_bending"] = f.initial_bending;
    j["final_bending"] = t.final_bending;
    j["iterations"] = t.steps.size();
    j["converged"] = t.converged;
    j["stagnated"] = t.stagnated;
    j["monotone"] = t.monotone;
    j["gradient_check"] = t.gradient_check;
    j["homogeneous_gradient_check"] = t.homogeneous_gradient_check;
    j["gradient_source"] = t.gradient_source;
    j["fd_fallback"] = t.fd_fallback;
    j["final_d_star_xi_norm"] = t.final_d_star_xi_norm;
    j["final_harmonic_structure"] = t.final_harmonic_structure;
    ojson steps = ojson::array();
    for (const FlowStep& s : t.steps) steps.push_back({s.bending, s.grad_norm, s.step});
    j["steps"] = steps;
    return j;
}

}  // namespace

std::string render_report(const std::string& command, const std::vector<ModelReport>& reports,
                          const ReportOptions& opt) {
    ojson doc;
    doc["command"] = command;
    doc["tolerance"] = opt.tol;
    doc["identity_tolerance"] = opt.identity_tol;
    ojson models = ojson::array();
    int failing = 0;
    for (const ModelReport& r : reports) {
        ojson m;
        m["model"] = model_json(r);
        m["classification"] = classification_json(r.analysis);
        m["harmonicity"] = harmonicity_json(r.analysis);
        if (r.has_suite) m["identities"] = identities_json(r.suite);
        if (opt.invariants) {
            ojson inv = ojson::array();
            for (const InvariantCheck& c : r.invariants)
                inv.push_back({{"id", c.id}, {"value", c.value}, {"tol", c.tol}, {"ok", c.ok}, {"gating", c.gating}});
            m["invariants"] = inv;
        }
        if (r.has_flow) m["flow"] = flow_json(r.flow);
        m["ok"] = r.ok();
        if (!r.ok()) ++failing;
        models.push_back(m);
    }
    doc["models"] = models;
    doc["summary"] = {{"models", reports.size()}, {"failing", failing}};
    return doc.dump(2) + "\n";
}

std::string summary_table(const std::vector<ModelReport>& reports) {
    std::ostringstream os;
    char line[256];
    std::snprintf(line, sizeof line, "%-34s %-22s %5s %5s %9s %9s  %s\n", "model", "type", "harm", "reeb", "identity",
                  "invariant", "failures");
    os << line;
    for (const ModelReport& r : reports) {
        std::string fails;
        if (r.has_suite)
            for (const std::string& id : r.suite.failures) fails += (fails.empty() ? "" : ",") + id;
        for (const InvariantCheck& c : r.invariants)
            if (!c.ok) fails += (fails.empty() ? "" : ",") + c.id + (c.gating ? "" : "(info)");
        const std::string ids =
            r.has_suite ? std::to_string(r.suite.passed) + "/" + std::to_string(r.suite.passed + r.suite.failed) : "-";
        std::snprintf(line, sizeof line, "%-34s %-22s %5s %5s %9s %9s  ", r.loaded.spec.name.c_str(),
                      r.analysis.cls.type_name.c_str(), r.analysis.harm.harmonic_structure ? "yes" : "no",
                      r.analysis.harm.reeb_harmonic ? "yes" : "no", ids.c_str(),
                      r.invariants.empty() ? "-" : (r.invariants_ok() ? "ok" : "FAIL"));
        os << line << (fails.empty() ? "-" : fails) << "\n";
    }
    return os.str();
}

}  // namespace acmlab
