#pragma once

#include <array>
#include <string>
#include <vector>

#include "acmlab/acm_structure.hpp"

namespace acmlab {

constexpr int kNumClasses = 12;
using ClassMask = std::array<bool, kNumClasses>;

// comp[i] holds the C_{i+1} component in the xi layout.
struct TorsionComponents {
    std::array<Tensor, kNumClasses> comp;
    std::array<double, kNumClasses> norms{};
    double xi_norm = 0.0;

    const Tensor& operator[](int cls) const { return comp[cls - 1]; }
    Tensor sum() const;
};

TorsionComponents decompose_torsion(const Tensor& xi, const ACMStructure& acm);

// Classes that can be nonzero in dimension 2n+1.
ClassMask admissible_classes(int n);

struct ClassificationReport {
    ClassMask type_mask{};
    ClassMask strict{};
    std::array<double, kNumClasses> norms{};
    double xi_norm = 0.0;
    double tol = 1e-9;
    std::string type_name;
    std::vector<std::string> admissibility_warnings;
};

ClassificationReport classify_type(const TorsionComponents& comps, int n, double tol = 1e-9);
std::string type_string(const ClassMask& mask);
ClassMask mask_of(std::initializer_list<int> classes);
bool mask_within(const ClassMask& type, const ClassMask& family);

// Non-existence rules: on a connected manifold whose type
// lies in `family` (and the side condition holds), the type must lie in one
// of the two conclusions.
enum class SideCondition { None, DDStarEtaPropEta, DDStarFZetaPropEta, DXiZetaEtaFZero };

struct AdmissibilityRule {
    std::string id;
    int min_n;
    int max_n;
    ClassMask family;
    ClassMask first;
    ClassMask second;
    SideCondition side = SideCondition::None;
};

const std::vector<AdmissibilityRule>& admissibility_rules();

struct AdmissibilityInputs {
    int n = 1;
    // On frame-constant models d(d*eta) = 0 and d(d*F(zeta)) = 0, so the
    // proportionality side conditions hold; only <d xi_zeta eta, F> varies.
    double d_xi_zeta_eta_F = 0.0;
};

// <d(xi_zeta eta), F> for a frame-constant structure, the side condition of
// the last higher-dimensional rule.
double d_xi_zeta_eta_pair_F(const Tensor& xi, const Tensor& gamma, const ACMStructure& acm);

std::vector<std::string> admissibility_check(const ClassificationReport& report, const AdmissibilityInputs& in,
                                             double tol = 1e-9);

}  // namespace acmlab
