#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "acmlab/acm_structure.hpp"
#include "acmlab/frame_model.hpp"

namespace acmlab {

// Input that fails validation; `path` names the offending field.
class ValidationError : public std::runtime_error {
public:
    ValidationError(std::string path, const std::string& what)
        : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

using Params = std::map<std::string, double>;

// A model as given by the user (before the frame is rotated so that zeta is
// last) together with its normalized form.
struct ModelSpec {
    std::string name;
    int n = 1;
    Tensor c;     // structure coefficients
    Tensor phi;   // phi(k,j) = <phi e_j, e_k>
    Tensor zeta;  // unit Reeb vector
    Params params;
};

struct LoadedModel {
    ModelSpec spec;
    FrameModel model;  // normalized frame, zeta = last vector
    ACMStructure acm;
    Tensor frame;      // normalized frame expressed in the input frame
};

// Validates the spec (Jacobi, ACM axioms) and rotates zeta to the last slot.
LoadedModel load_model(const ModelSpec& spec, double tol = 1e-10);

std::vector<std::string> catalog_names();
ModelSpec catalog_spec(const std::string& name, const Params& params);
LoadedModel build_catalog_model(const std::string& name, const Params& params);

// "n=2,c=1,k1=0.6" -> {n:2, c:1, k1:0.6}
Params parse_params(const std::string& text);

// Random orthogonal matrix (Haar-distributed, det +1) from a seeded engine.
Tensor random_orthogonal(int dim, std::uint64_t seed);

// Deterministic pool of Jacobi-safe random models, cycling through nine
// families: the catalog algebras and generic almost-abelian / two-step
// nilpotent algebras with a random compatible structure, plus structured
// families whose brackets are adapted to the standard structure so that they
// land in restricted types (zeta central with [X,Y] = a(X,Y) zeta; [zeta,X] =
// AX on an abelian zeta-perp; realified complex algebras times a central
// zeta; almost-abelian algebras times a central zeta). Every model is finally
// conjugated by a random orthogonal change of frame.
ModelSpec random_model_spec(std::uint64_t seed, std::size_t index);
std::vector<ModelSpec> random_model_specs(std::size_t count, std::uint64_t seed);

// Conjugate the whole spec (c, phi, zeta) by an orthogonal map.
ModelSpec conjugate_spec(const ModelSpec& spec, const Tensor& g);

// JSON model file (1-based frame indices, only i<j brackets stored).
std::string spec_to_json(const ModelSpec& spec);
ModelSpec spec_from_json(const std::string& text);
ModelSpec read_spec_file(const std::string& path);
void write_spec_file(const ModelSpec& spec, const std::string& path);

}  // namespace acmlab
