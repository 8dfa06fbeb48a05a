#include "acmlab/catalog.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"

namespace acmlab {

using nlohmann::json;

namespace {

int param_int(const Params& p, const std::string& key, int fallback) {
    auto it = p.find(key);
    if (it == p.end()) return fallback;
    const double v = it->second;
    if (v != std::floor(v) || v < 1 || v > 5) throw ValidationError("params." + key, "expected an integer in 1..5");
    return static_cast<int>(v);
}

double param_double(const Params& p, const std::string& key, double fallback) {
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

Tensor hyperbolic_brackets(int n, double c) {
    const int D = 2 * n + 1;
    Tensor t(3, D);
    for (int j = 1; j < D; ++j) {
        t(0, j, j) = c;
        t(j, 0, j) = -c;
    }
    return t;
}

Tensor heisenberg_brackets(int n, double s) {
    const int D = 2 * n + 1;
    Tensor t(3, D);
    for (int i = 0; i < n; ++i) {
        t(2 * i, 2 * i + 1, D - 1) = s;
        t(2 * i + 1, 2 * i, D - 1) = -s;
    }
    return t;
}

// phi compatible with a unit zeta: rotate the standard structure so that its
// Reeb vector becomes zeta.
Tensor phi_for_zeta(int n, const Tensor& zeta) {
    const Tensor h = frame_aligning(zeta);
    return matmul(matmul(h, standard_phi(n)), transpose(h));
}

// Makes c(b,a,.) = -c(a,b,.) exactly, so that storing only a<b loses nothing.
Tensor exact_brackets(Tensor c) {
    const int D = c.dim();
    for (int a = 0; a < D; ++a)
        for (int k = 0; k < D; ++k) {
            c(a, a, k) = 0.0;
            for (int b = a + 1; b < D; ++b) c(b, a, k) = -c(a, b, k);
        }
    return c;
}

ModelSpec make_spec(std::string name, int n, Tensor c, Tensor phi, Tensor zeta, Params params) {
    ModelSpec s;
    s.name = std::move(name);
    s.n = n;
    s.c = exact_brackets(std::move(c));
    s.phi = std::move(phi);
    s.zeta = std::move(zeta);
    s.params = std::move(params);
    return s;
}

std::mt19937_64 engine_for(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

Tensor random_orthogonal_from(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    Eigen::MatrixXd a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = nd(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; ++j)
        if (r(j, j) < 0) q.col(j) = -q.col(j);
    if (q.determinant() < 0) q.col(0) = -q.col(0);
    Tensor g(2, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = q(i, j);
    return g;
}

}  // namespace

LoadedModel load_model(const ModelSpec& spec, double tol) {
    const int D = 2 * spec.n + 1;
    if (spec.n < 1) throw ValidationError("n", "must be a positive integer");
    if (spec.c.order() != 3 || spec.c.dim() != D) throw ValidationError("c", "shape does not match n");
    if (spec.phi.order() != 2 || spec.phi.dim() != D) throw ValidationError("phi", "must be a (2n+1)x(2n+1) matrix");
    if (spec.zeta.order() != 1 || spec.zeta.dim() != D) throw ValidationError("zeta", "must have 2n+1 entries");
    FrameModel m = make_model(spec.n, spec.name);
    m.c = spec.c;
    const ModelDiagnostics md = validate_model(m, tol);
    if (!md.finite) throw ValidationError("c", "non-finite structure coefficient");
    if (md.antisymmetry_residual > tol) throw ValidationError("c", "brackets are not antisymmetric");
    if (md.jacobi_residual > tol) throw ValidationError("c", "Jacobi identity fails");
    const AcmDiagnostics ad = validate_acm(m, spec.phi, spec.zeta, tol);
    if (!ad.pass) {
        const std::string& v = ad.violated.front();
        const bool zeta_field = v == "|zeta| = 1";
        throw ValidationError(zeta_field ? "zeta" : "phi", "violates " + v);
    }
    NormalizedModel nm = normalize_frame(m, spec.phi, spec.zeta);
    LoadedModel out;
    out.spec = spec;
    out.model = std::move(nm.model);
    out.acm = std::move(nm.acm);
    out.frame = std::move(nm.frame);
    return out;
}

std::vector<std::string> catalog_names() { return {"flat-cosymplectic", "heisenberg", "hyperbolic"}; }

ModelSpec catalog_spec(const std::string& name, const Params& params) {
    const int n = param_int(params, "n", name == "hyperbolic" ? 2 : 1);
    const int D = 2 * n + 1;
    if (name == "flat-cosymplectic") {
        return make_spec(name, n, Tensor(3, D), standard_phi(n), basis_vector(D, D - 1), params);
    }
    if (name == "heisenberg") {
        const double s = param_double(params, "s", 1.0);
        return make_spec(name, n, heisenberg_brackets(n, s), standard_phi(n), basis_vector(D, D - 1), params);
    }
    if (name == "hyperbolic") {
        const double c = param_double(params, "c", 1.0);
        if (!(c > 0.0)) throw ValidationError("params.c", "must be positive");
        Tensor k(1, D);
        bool any = false;
        double rest = 0.0;
        for (int i = 0; i < D; ++i) {
            auto it = params.find("k" + std::to_string(i + 1));
            if (it != params.end()) {
                k(i) = it->second;
                any = true;
                if (i != D - 1) rest += k(i) * k(i);
            }
        }
        const std::string last = "k" + std::to_string(D);
        if (!params.count(last)) {
            // Unspecified last component: complete k to length c.
            const double r = c * c - rest;
            if (r < -1e-12 * c * c) throw ValidationError("params.k", "k_1^2 + ... + k_{2n+1}^2 must equal c^2");
            k(D - 1) = std::sqrt(std::max(0.0, r));
        }
        (void)any;
        const double ksq = inner_product(k, k);
        if (std::fabs(ksq - c * c) > 1e-12 * std::max(1.0, c * c))
            throw ValidationError("params.k", "k_1^2 + ... + k_{2n+1}^2 must equal c^2");
        Tensor zeta = (1.0 / c) * k;
        zeta *= 1.0 / zeta.norm();
        Params p = params;
        p["n"] = n;
        p["c"] = c;
        for (int i = 0; i < D; ++i) p["k" + std::to_string(i + 1)] = k(i);
        return make_spec(name, n, hyperbolic_brackets(n, c), phi_for_zeta(n, zeta), zeta, p);
    }
    throw ValidationError("catalog", "unknown model '" + name + "'");
}

LoadedModel build_catalog_model(const std::string& name, const Params& params) {
    return load_model(catalog_spec(name, params));
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

}  // namespace

Params parse_params(const std::string& text) {
    Params p;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (trim(item).empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw ValidationError("params", "expected key=value, got '" + item + "'");
        const std::string key = trim(item.substr(0, eq));
        const std::string val = trim(item.substr(eq + 1));
        try {
            std::size_t used = 0;
            const double v = std::stod(val, &used);
            if (used != val.size()) throw std::invalid_argument(val);
            p[key] = v;
        } catch (const std::exception&) {
            throw ValidationError("params." + key, "not a number: '" + val + "'");
        }
    }
    return p;
}

Tensor random_orthogonal(int dim, std::uint64_t seed) {
    auto rng = engine_for(seed, 0x9e3779b97f4a7c15ULL);
    return random_orthogonal_from(dim, rng);
}

ModelSpec conjugate_spec(const ModelSpec& spec, const Tensor& g) {
    ModelSpec out = spec;
    out.c = exact_brackets(transform_tensor(spec.c, g));
    // phi is a (1,1)-tensor: new phi(a,b) = sum g(k,a) phi(k,j) g(j,b).
    out.phi = matmul(matmul(transpose(g), spec.phi), g);
    out.zeta = apply(transpose(g), spec.zeta);
    return out;
}

namespace {

// Random horizontal two-form on the first 2n frame vectors, restricted to a
// U(n)-part: 0 any, 1 Hermitian (a(JX,JY) = a(X,Y)), 2 anti-Hermitian,
// 3 a multiple of the Kaehler form.
Tensor random_horizontal_form(int n, int mode, std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    const int D = 2 * n + 1;
    const Tensor J = standard_phi(n);
    Tensor a(2, D);
    for (int i = 0; i < 2 * n; ++i)
        for (int j = i + 1; j < 2 * n; ++j) {
            const double v = 0.5 * nd(rng);
            a(i, j) = v;
            a(j, i) = -v;
        }
    if (mode == 1) a = 0.5 * (a + pullback(a, J));
    if (mode == 2) a = 0.5 * (a - pullback(a, J));
    if (mode == 3) a = nd(rng) * J;
    return a;
}

// Random endomorphism of the first 2n frame vectors: 0 any, 1 symmetric,
// 2 skew, 3 commuting with J, 4 anticommuting with J.
Tensor random_horizontal_map(int n, int mode, std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    const int D = 2 * n + 1;
    const Tensor J = standard_phi(n);
    Tensor a(2, D);
    for (int i = 0; i < 2 * n; ++i)
        for (int j = 0; j < 2 * n; ++j) a(i, j) = 0.5 * nd(rng);
    if (mode == 1) a = sym_part(a);
    if (mode == 2) a = skew_part(a);
    // J^{-1} = -J on the horizontal space
    if (mode == 3) a = 0.5 * (a - matmul(matmul(J, a), J));
    if (mode == 4) a = 0.5 * (a + matmul(matmul(J, a), J));
    return a;
}

// Structure coefficients of [E_s, E_j] = sum_k A(k,j) E_k for j, k in `span`.
void add_derivation(Tensor& c, int s, const Tensor& a, const std::vector<int>& span) {
    for (int j : span)
        for (int k : span) {
            if (j == s) continue;
            c(s, j, k) += a(k, j);
            c(j, s, k) -= a(k, j);
        }
}

}  // namespace

ModelSpec random_model_spec(std::uint64_t seed, std::size_t index) {
    auto rng = engine_for(seed, index);
    std::uniform_int_distribution<int> pick_n(1, 3);
    std::uniform_real_distribution<double> unit(0.5, 2.0);
    std::normal_distribution<double> nd(0.0, 1.0);
    const int family = static_cast<int>(index % 9);
    int n = pick_n(rng);
    if (family == 7 && n == 1) n = 2;
    const int D = 2 * n + 1;
    const int z = D - 1;
    Tensor c(3, D);
    std::string fam;
    // Families 0-4 get a random compatible structure; 5-8 keep the standard
    // one (zeta = last vector) because their brackets are adapted to it.
    bool adapted = false;
    std::vector<int> horizontal;
    for (int i = 0; i < 2 * n; ++i) horizontal.push_back(i);
    switch (family) {
        case 0:
            fam = "hyperbolic";
            c = hyperbolic_brackets(n, unit(rng));
            break;
        case 1:
            fam = "heisenberg";
            c = heisenberg_brackets(n, unit(rng));
            break;
        case 2: {
            // [E_0, E_j] = sum_k A(k,j) E_k on an abelian ideal.
            fam = "almost-abelian";
            for (int j = 1; j < D; ++j)
                for (int k = 1; k < D; ++k) {
                    const double a = 0.5 * nd(rng);
                    c(0, j, k) = a;
                    c(j, 0, k) = -a;
                }
            break;
        }
        case 3: {
            // Two-step nilpotent: brackets of the first block land in a centre
            // spanned by the last `cdim` vectors.
            fam = "nilpotent";
            const int cdim = std::min(2, D - 2);
            for (int i = 0; i < D - cdim; ++i)
                for (int j = i + 1; j < D - cdim; ++j)
                    for (int k = D - cdim; k < D; ++k) {
                        const double a = 0.5 * nd(rng);
                        c(i, j, k) = a;
                        c(j, i, k) = -a;
                    }
            break;
        }
        case 4:
            fam = "flat";
            break;
        case 5: {
            // [X, Y] = a(X, Y) zeta with zeta central.
            std::uniform_int_distribution<int> pick(0, 3);
            const int mode = pick(rng);
            fam = "central-" + std::to_string(mode);
            const Tensor a = random_horizontal_form(n, mode, rng);
            for (int i : horizontal)
                for (int j : horizontal) c(i, j, z) = a(i, j);
            adapted = true;
            break;
        }
        case 6: {
            // [zeta, X] = A X on the abelian ideal zeta-perp.
            std::uniform_int_distribution<int> pick(0, 4);
            const int mode = pick(rng);
            fam = "reeb-extension-" + std::to_string(mode);
            add_derivation(c, z, random_horizontal_map(n, mode, rng), horizontal);
            adapted = true;
            break;
        }
        case 7: {
            // Realified complex almost-abelian algebra [w_0, w_j] = A w_j times
            // a central zeta, with phi the complex structure.
            fam = "complex-product";
            Tensor a(2, D);
            for (int j = 1; j < n; ++j)
                for (int k = 1; k < n; ++k) {
                    const double re = 0.5 * nd(rng), im = 0.5 * nd(rng);
                    a(2 * k, 2 * j) = re;
                    a(2 * k + 1, 2 * j) = im;
                    a(2 * k, 2 * j + 1) = -im;
                    a(2 * k + 1, 2 * j + 1) = re;
                }
            std::vector<int> ideal;
            for (int i = 2; i < 2 * n; ++i) ideal.push_back(i);
            add_derivation(c, 0, a, ideal);
            add_derivation(c, 1, matmul(standard_phi(n), a), ideal);
            adapted = true;
            break;
        }
        default: {
            // Almost-abelian algebra on zeta-perp times a central zeta, with a
            // random compatible structure on zeta-perp.
            fam = "hermitian-product";
            Tensor a(2, D);
            for (int j = 1; j < 2 * n; ++j)
                for (int k = 1; k < 2 * n; ++k) a(k, j) = 0.5 * nd(rng);
            add_derivation(c, 0, a, horizontal);
            adapted = true;
            break;
        }
    }
    Tensor phi = standard_phi(n);
    Tensor zeta = basis_vector(D, z);
    if (!adapted) {
        // Random compatible structure.
        const Tensor h = random_orthogonal_from(D, rng);
        phi = matmul(matmul(h, phi), transpose(h));
        zeta = apply(h, zeta);
    } else if (family == 8) {
        // Random complex structure on zeta-perp.
        const Tensor hh = random_orthogonal_from(2 * n, rng);
        Tensor h(2, D);
        for (int i = 0; i < 2 * n; ++i)
            for (int j = 0; j < 2 * n; ++j) h(i, j) = hh(i, j);
        h(z, z) = 1.0;
        phi = matmul(matmul(h, phi), transpose(h));
    }
    Params p{{"n", n}, {"seed", static_cast<double>(seed)}, {"index", static_cast<double>(index)}};
    ModelSpec s = make_spec("random-" + fam + "-" + std::to_string(index), n, c, phi, zeta, p);
    const Tensor g = random_orthogonal_from(D, rng);
    return conjugate_spec(s, g);
}

std::vector<ModelSpec> random_model_specs(std::size_t count, std::uint64_t seed) {
    std::vector<ModelSpec> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(random_model_spec(seed, i));
    return out;
}

std::string spec_to_json(const ModelSpec& spec) {
    const int D = 2 * spec.n + 1;
    json j;
    j["name"] = spec.name;
    j["n"] = spec.n;
    json c = json::array();
    for (int a = 0; a < D; ++a)
        for (int b = a + 1; b < D; ++b)
            for (int k = 0; k < D; ++k)
                if (spec.c(a, b, k) != 0.0) c.push_back({{"i", a + 1}, {"j", b + 1}, {"k", k + 1}, {"value", spec.c(a, b, k)}});
    j["c"] = c;
    json phi = json::array();
    for (int r = 0; r < D; ++r) {
        json row = json::array();
        for (int col = 0; col < D; ++col) row.push_back(spec.phi(r, col));
        phi.push_back(row);
    }
    j["phi"] = phi;
    j["zeta"] = spec.zeta.data();
    j["params"] = spec.params;
    return j.dump(2);
}

ModelSpec spec_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError("$", std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("$", "expected an object");
    ModelSpec s;
    auto need = [&](const char* key) -> const json& {
        if (!j.contains(key)) throw ValidationError(key, "missing field");
        return j.at(key);
    };
    const json& jn = need("n");
    if (!jn.is_number_integer() || jn.get<int>() < 1 || jn.get<int>() > 5)
        throw ValidationError("n", "expected an integer in 1..5");
    s.n = jn.get<int>();
    const int D = 2 * s.n + 1;
    s.name = j.value("name", std::string("model"));
    s.c = Tensor(3, D);
    const json& jc = need("c");
    if (!jc.is_array()) throw ValidationError("c", "expected a list of {i,j,k,value}");
    for (std::size_t e = 0; e < jc.size(); ++e) {
        const std::string path = "c[" + std::to_string(e) + "]";
        const json& r = jc[e];
        if (!r.is_object()) throw ValidationError(path, "expected an object");
        int idx[3];
        const char* keys[3] = {"i", "j", "k"};
        for (int q = 0; q < 3; ++q) {
            if (!r.contains(keys[q]) || !r[keys[q]].is_number_integer())
                throw ValidationError(path + "." + keys[q], "expected an integer frame index");
            idx[q] = r[keys[q]].get<int>();
            if (idx[q] < 1 || idx[q] > D) throw ValidationError(path + "." + keys[q], "index out of range 1..2n+1");
        }
        if (idx[0] >= idx[1]) throw ValidationError(path, "only i<j brackets are stored");
        if (!r.contains("value") || !r["value"].is_number()) throw ValidationError(path + ".value", "expected a number");
        const double v = r["value"].get<double>();
        s.c(idx[0] - 1, idx[1] - 1, idx[2] - 1) = v;
        s.c(idx[1] - 1, idx[0] - 1, idx[2] - 1) = -v;
    }
    const json& jp = need("phi");
    if (!jp.is_array() || static_cast<int>(jp.size()) != D) throw ValidationError("phi", "expected 2n+1 rows");
    s.phi = Tensor(2, D);
    for (int r = 0; r < D; ++r) {
        const std::string path = "phi[" + std::to_string(r) + "]";
        if (!jp[r].is_array() || static_cast<int>(jp[r].size()) != D)
            throw ValidationError(path, "expected 2n+1 entries");
        for (int col = 0; col < D; ++col) {
            if (!jp[r][col].is_number()) throw ValidationError(path + "[" + std::to_string(col) + "]", "expected a number");
            s.phi(r, col) = jp[r][col].get<double>();
        }
    }
    s.zeta = basis_vector(D, D - 1);
    if (j.contains("zeta")) {
        const json& jz = j["zeta"];
        if (!jz.is_array() || static_cast<int>(jz.size()) != D) throw ValidationError("zeta", "expected 2n+1 entries");
        for (int i = 0; i < D; ++i) {
            if (!jz[i].is_number()) throw ValidationError("zeta[" + std::to_string(i) + "]", "expected a number");
            s.zeta(i) = jz[i].get<double>();
        }
    }
    if (j.contains("params")) {
        const json& pj = j["params"];
        if (!pj.is_object()) throw ValidationError("params", "expected an object");
        for (auto it = pj.begin(); it != pj.end(); ++it) {
            if (!it.value().is_number()) throw ValidationError("params." + it.key(), "expected a number");
            s.params[it.key()] = it.value().get<double>();
        }
    }
    return s;
}

ModelSpec read_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("$", "cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return spec_from_json(ss.str());
}

void write_spec_file(const ModelSpec& spec, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << spec_to_json(spec) << "\n";
}

}  // namespace acmlab
