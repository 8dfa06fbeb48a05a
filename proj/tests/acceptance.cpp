// Acceptance run: one PASS/FAIL line per criterion, followed by indented
// details. Exits nonzero when any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "acmlab/report.hpp"

using namespace acmlab;

namespace {

struct Criterion {
    int number;
    std::string title;
    bool pass = true;
    std::vector<std::string> details;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            details.push_back("failed: " + what);
        }
    }
    void note(const std::string& what) { details.push_back(what); }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

struct PoolModel {
    std::string label;
    LoadedModel lm;
};

std::vector<PoolModel> pool() {
    std::vector<PoolModel> out;
    for (const std::string& name : catalog_names())
        for (int n = 1; n <= 3; ++n)
            out.push_back({name + " n=" + std::to_string(n), build_catalog_model(name, {{"n", n}})});
    for (const std::string p : {"n=2,c=1,k1=0.6,k5=0.8", "n=2,c=1,k1=1", "n=2,c=1,k5=1", "n=1,c=1,k3=1",
                                 "n=3,c=2,k1=1,k2=1,k4=1"})
        out.push_back({"hyperbolic " + p, build_catalog_model("hyperbolic", parse_params(p))});
    const std::vector<ModelSpec> rnd = random_model_specs(50, 7);
    for (std::size_t i = 0; i < rnd.size(); ++i)
        out.push_back({rnd[i].name + " (seed 7, index " + std::to_string(i) + ")", load_model(rnd[i])});
    return out;
}

Criterion hyperbolic_regression() {
    Criterion c{1, "hyperbolic regression"};
    auto timed = [&](const std::string& params, double& secs) {
        const auto t0 = std::chrono::steady_clock::now();
        const LoadedModel lm = build_catalog_model("hyperbolic", parse_params(params));
        Analysis a = analyze(lm.model, lm.acm);
        secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        c.check(secs < 0.1, params + " took " + fmt(secs) + " s");
        return a;
    };
    double s = 0.0;
    {
        const Analysis a = timed("n=2,c=1,k1=0.6", s);
        c.check(a.cls.type_name == "C4+C5+C12", "general k type " + a.cls.type_name);
        c.check(std::fabs(a.inv.d_star_eta - 2.4) <= 1e-9, "general k d*eta " + fmt(a.inv.d_star_eta));
        c.check(!a.harm.harmonic_structure, "general k harmonic_structure");
        c.check(!a.harm.reeb_harmonic, "general k reeb_harmonic");
        c.note("k1=0.6: " + a.cls.type_name + ", d*eta=" + fmt(a.inv.d_star_eta) + ", " + fmt(s) + " s");
    }
    {
        const Analysis a = timed("n=2,c=1,k1=0", s);
        c.check(a.cls.type_name == "C4+C12" && a.cls.strict[3] && a.cls.strict[11], "k1=0 type " + a.cls.type_name);
        c.check(a.harm.harmonic_structure && !a.harm.harmonic_map, "k1=0 harmonic verdicts");
        c.check(max_abs_diff(a.harm.laplacian_zeta, a.acm.zeta) <= 1e-9, "k1=0 rough Laplacian");
        c.note("k1=0: " + a.cls.type_name + ", " + fmt(s) + " s");
    }
    {
        const Analysis a = timed("n=2,c=1,k1=1", s);
        c.check(a.cls.type_name == "C5" && a.cls.strict[4], "k1=c type " + a.cls.type_name);
        c.check(std::fabs(a.inv.d_star_eta - 4.0) <= 1e-9, "k1=c d*eta " + fmt(a.inv.d_star_eta));
        c.check(a.harm.harmonic_structure && !a.harm.harmonic_map, "k1=c harmonic verdicts");
        c.check(max_abs_diff(a.harm.laplacian_zeta, 4.0 * a.acm.zeta) <= 1e-9, "k1=c rough Laplacian");
        c.note("k1=c: " + a.cls.type_name + ", " + fmt(s) + " s");
    }
    {
        const Analysis a = timed("n=1,c=1,k1=0", s);
        c.check(a.cls.type_name == "C12" && a.cls.strict[11], "n=1 type " + a.cls.type_name);
        c.check(a.harm.harmonic_structure && !a.harm.harmonic_map, "n=1 harmonic verdicts");
        c.check(max_abs_diff(a.harm.laplacian_zeta, a.acm.zeta) <= 1e-9, "n=1 rough Laplacian");
        c.note("n=1, k1=0: " + a.cls.type_name + ", " + fmt(s) + " s");
    }
    return c;
}

Criterion star_curvature() {
    Criterion c{2, "*-curvature"};
    for (const std::string p : {"n=2,c=1,k1=0.6", "n=2,c=1,k1=0", "n=2,c=1,k1=1"}) {
        const LoadedModel lm = build_catalog_model("hyperbolic", parse_params(p));
        const Analysis a = analyze(lm.model, lm.acm);
        c.check(std::fabs(a.harm.s_star + 4.0) <= 1e-9, p + " s* = " + fmt(a.harm.s_star));
        c.check(a.harm.weakly_ac_einstein, p + " weakly ac-Einstein");
        c.check(a.harm.ric_star_alt.max_abs() <= 1e-9, p + " Ric*_alt " + fmt(a.harm.ric_star_alt.max_abs()));
        c.check(a.harm.ric_star_zeta.max_abs() <= 1e-9, p + " Ric*(zeta) " + fmt(a.harm.ric_star_zeta.max_abs()));
        c.check(a.conn.weyl.max_abs() <= 1e-9, p + " Weyl " + fmt(a.conn.weyl.max_abs()));
    }
    return c;
}

Criterion decomposition(const std::vector<PoolModel>& models) {
    Criterion c{3, "torsion decomposition"};
    double worst_rec = 0, worst_orth = 0, worst_pyth = 0, worst_mem = 0, worst_eq = 0;
    for (const PoolModel& pm : models) {
        const Analysis a = analyze(pm.lm.model, pm.lm.acm);
        const TorsionComponents& t = a.comps;
        const double xi2 = std::max(1.0, t.xi_norm * t.xi_norm);
        const double rec = max_abs_diff(t.sum(), a.torsion.xi);
        double orth = 0.0, mem = 0.0, sq = 0.0;
        for (int i = 0; i < kNumClasses; ++i) {
            sq += t.norms[i] * t.norms[i];
            mem = std::max(mem, membership_residual(t.comp[i], pm.lm.acm));
            for (int j = i + 1; j < kNumClasses; ++j) orth = std::max(orth, std::fabs(inner_product(t.comp[i], t.comp[j])) / xi2);
        }
        const double pyth = std::fabs(sq - t.xi_norm * t.xi_norm) / xi2;
        double eq = 0.0;
        for (std::uint64_t k = 0; k < 10; ++k) {
            const LoadedModel cm = load_model(conjugate_spec(pm.lm.spec, random_orthogonal(pm.lm.model.dim(), 500 + k)));
            const TorsionComponents ct = decompose_torsion(intrinsic_torsion(connection(cm.model), cm.acm).xi, cm.acm);
            for (int i = 0; i < kNumClasses; ++i) eq = std::max(eq, std::fabs(ct.norms[i] - t.norms[i]));
        }
        c.check(rec <= 1e-10, pm.label + " reconstruction " + fmt(rec));
        c.check(orth <= 1e-10, pm.label + " orthogonality " + fmt(orth));
        c.check(pyth <= 1e-9, pm.label + " Pythagoras " + fmt(pyth));
        c.check(mem <= 1e-10, pm.label + " membership " + fmt(mem));
        c.check(eq <= 1e-10, pm.label + " equivariance " + fmt(eq));
        worst_rec = std::max(worst_rec, rec);
        worst_orth = std::max(worst_orth, orth);
        worst_pyth = std::max(worst_pyth, pyth);
        worst_mem = std::max(worst_mem, mem);
        worst_eq = std::max(worst_eq, eq);
    }
    c.note(std::to_string(models.size()) + " models; worst reconstruction " + fmt(worst_rec) + ", orthogonality " +
           fmt(worst_orth) + ", Pythagoras " + fmt(worst_pyth) + ", membership " + fmt(worst_mem) + ", equivariance " +
           fmt(worst_eq));
    return c;
}

Criterion identity_suite(const std::vector<PoolModel>& models) {
    Criterion c{4, "identity suite"};
    std::map<std::string, std::vector<std::string>> failures;
    std::map<std::string, double> worst;
    std::size_t evaluated = 0;
    for (const PoolModel& pm : models) {
        const SuiteResult s = run_identity_suite(analyze(pm.lm.model, pm.lm.acm));
        for (const IdentityRecord& r : s.records) {
            if (r.status == IdentityStatus::NotApplicable) continue;
            ++evaluated;
            if (r.status == IdentityStatus::Fail) {
                failures[r.id].push_back(pm.label);
                worst[r.id] = std::max(worst[r.id], r.residual);
            }
        }
    }
    for (const auto& [id, labels] : failures) {
        c.pass = false;
        std::string line = "failed: " + id + " on " + std::to_string(labels.size()) + " models (worst residual " +
                           fmt(worst[id]) + "), e.g. " + labels.front();
        if (labels.size() > 1) line += "; " + labels[1];
        c.details.push_back(line);
    }
    c.note(std::to_string(evaluated) + " applicable record evaluations on " + std::to_string(models.size()) +
           " models; " + std::to_string(failures.size()) + " records fail as displayed");
    return c;
}

Criterion harmonicity(const std::vector<PoolModel>& models) {
    Criterion c{5, "harmonicity cross-checks"};
    for (int n = 1; n <= 2; ++n) {
        const LoadedModel lm = build_catalog_model("heisenberg", {{"n", n}});
        const Analysis a = analyze(lm.model, lm.acm);
        c.check(a.cls.type_name == "C6" && a.cls.strict[5], "heisenberg n=" + std::to_string(n) + " type " + a.cls.type_name);
        c.check(a.harm.harmonic_structure, "heisenberg n=" + std::to_string(n) + " harmonic");
    }
    const ClassMask family = mask_of({5, 6, 7, 8, 9, 10, 12});
    int exercised = 0;
    for (const PoolModel& pm : models) {
        const Analysis a = analyze(pm.lm.model, pm.lm.acm);
        if (!mask_within(a.cls.type_mask, family)) continue;
        ++exercised;
        c.check(a.harm.harmonic_structure == a.harm.reeb_harmonic,
                pm.label + " (" + a.cls.type_name + ") harmonic_structure != reeb_harmonic");
    }
    c.check(exercised > 0, "no model with type in C5..C10+C12");
    c.note(std::to_string(exercised) + " models with type in C5..C10+C12");
    return c;
}

Criterion optimizer(const std::vector<PoolModel>& models) {
    Criterion c{6, "bending optimizer"};
    const LoadedModel flat = build_catalog_model("flat-cosymplectic", {{"n", 2}});
    double worst_flat = 0.0;
    for (std::uint64_t s = 0; s < 10; ++s) {
        const FlowTrace t = minimize_bending(orbit_point(2, random_orthogonal(5, 1000 + s)), flat.model);
        worst_flat = std::max(worst_flat, t.final_bending);
        c.check(t.final_bending < 1e-12, "flat start " + std::to_string(s) + " bending " + fmt(t.final_bending));
    }
    const LoadedModel hyp = build_catalog_model("hyperbolic", parse_params("n=2,c=1,k1=0.6"));
    double worst_hyp = 0.0;
    for (std::uint64_t s = 0; s < 10; ++s) {
        const FlowTrace t = minimize_bending(orbit_point(2, random_orthogonal(5, 2000 + s)), hyp.model);
        worst_hyp = std::max(worst_hyp, t.final_d_star_xi_norm);
        c.check(t.final_d_star_xi_norm <= 1e-8 && t.final_harmonic_structure,
                "hyperbolic start " + std::to_string(s) + " |d*xi| " + fmt(t.final_d_star_xi_norm));
    }
    c.note("flat: worst final bending " + fmt(worst_flat) + "; hyperbolic: worst final |d*xi| " + fmt(worst_hyp));

    // Gradient agreement for the gradient the optimizer uses: d* xi, which
    // on non-unimodular algebras carries the divergence term -xi_H.
    std::mt19937_64 rng(17);
    std::normal_distribution<double> nd(0.0, 1.0);
    double worst = 0.0;
    int dstar_off = 0, dstar_off_catalog = 0;
    for (const PoolModel& pm : models) {
        const int n = pm.lm.acm.n;
        const OrbitPoint p = orbit_point(n, random_orthogonal(pm.lm.model.dim(), 3000));
        const Analysis a = analyze(body_model(p, pm.lm.model), orbit_point(n, Tensor::identity(2 * n + 1)).acm);
        const Tensor g = homogeneous_bending_gradient(a);
        const Tensor d = bending_gradient(a);
        const double scale = std::max(g.norm(), 1e-4 * std::max(1.0, bending(p, pm.lm.model)));
        double model_worst = 0.0, dstar_worst = 0.0;
        for (int k = 0; k < 20; ++k) {
            Tensor b(2, 2 * n + 1);
            for (const Tensor& q : m_block_basis(n)) b = b + nd(rng) * q;
            b = (1.0 / b.norm()) * b;
            const double fd = fd_directional_derivative(p, pm.lm.model, b);
            model_worst = std::max(model_worst, std::fabs(inner_product(g, b) - fd) / scale);
            dstar_worst = std::max(dstar_worst, std::fabs(inner_product(d, b) - fd) / scale);
        }
        if (dstar_worst > 1e-5) {
            ++dstar_off;
            if (pm.label.rfind("random-", 0) != 0) ++dstar_off_catalog;
        }
        worst = std::max(worst, model_worst);
        c.check(model_worst <= 1e-5, pm.label + " gradient agreement " + fmt(model_worst));
    }
    c.note("gradient vs finite differences on " + std::to_string(models.size()) + " models x 20 directions: worst " +
           fmt(worst) + " relative");
    c.note("d*xi without the divergence term disagrees on " + std::to_string(dstar_off) +
           " non-unimodular models, " +
           std::to_string(dstar_off_catalog) + " of them catalog models");
    return c;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Criterion determinism() {
    Criterion c{7, "determinism"};
    const std::filesystem::path dir = std::filesystem::temp_directory_path() / "acmlab_acceptance";
    std::filesystem::create_directories(dir);
    std::string texts[2];
    for (int i = 0; i < 2; ++i) {
        const std::filesystem::path out = dir / ("verify" + std::to_string(i) + ".json");
        const std::string cmd =
            std::string(ACMLAB_CLI) + " verify --random 50 --seed 7 --out " + out.string() + " > /dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        c.check(code == 0 || code == 1, "verify exited with " + std::to_string(code));
        texts[i] = read_file(out);
    }
    c.check(!texts[0].empty(), "empty report");
    c.check(texts[0] == texts[1], "reports differ between runs");
    c.note("report size " + std::to_string(texts[0].size()) + " bytes");
    return c;
}

}  // namespace

int main() {
    const std::vector<PoolModel> models = pool();
    std::vector<Criterion> results;
    results.push_back(hyperbolic_regression());
    results.push_back(star_curvature());
    results.push_back(decomposition(models));
    results.push_back(identity_suite(models));
    results.push_back(harmonicity(models));
    results.push_back(optimizer(models));
    results.push_back(determinism());

    bool all = true;
    for (const Criterion& c : results) {
        std::cout << (c.pass ? "PASS" : "FAIL") << " criterion " << c.number << ": " << c.title << "\n";
        for (const std::string& d : c.details) std::cout << "    " << d << "\n";
        all = all && c.pass;
    }
    return all ? 0 : 1;
}
