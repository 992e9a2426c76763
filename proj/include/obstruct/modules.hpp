#pragma once

// Finitely presented graded left modules F1 -> F0 -> X -> 0 and their windowed
// materialisation as quotient spaces of free modules.

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "obstruct/graded.hpp"
#include "obstruct/presentation.hpp"

namespace obstruct {

struct ModulePresentation {
    /// A homogeneous relation sum_i c_i e_i; coeffs[i] lives in algebra degree (degree - |e_i|)
    /// and is empty when that degree carries no basis.
    struct Relation {
        int degree = 0;
        std::vector<Vec> coeffs;
    };

    std::shared_ptr<GradedAlgebra const> algebra;
    std::vector<Generator> generators;
    std::vector<Relation> relations;

    /// Checks homogeneity and vector shapes.
    void validate() const;
    bool involves(std::size_t generator) const;
};

/// {"generators": [{"name","degree"}], "relations": [{"e": "X", "f": "-Y"}]}.
ModulePresentation module_from_json(nlohmann::json const& j, std::shared_ptr<PresentedAlgebra const> algebra);
nlohmann::json module_to_json(ModulePresentation const& m);

/// The free module on a single generator of the given degree.
ModulePresentation free_module(std::shared_ptr<GradedAlgebra const> algebra, int degree = 0);
/// Lambda / (a . Lambda) for a homogeneous element a.
ModulePresentation cyclic_quotient(std::shared_ptr<GradedAlgebra const> algebra, int degree, Vec const& a);
ModulePresentation direct_sum(ModulePresentation const& a, ModulePresentation const& b);

/// Splits off generators that appear in no relation; returns the rest and the free part.
std::pair<ModulePresentation, std::vector<Generator>> split_free_summands(ModulePresentation const& m);

/// Pushes coefficients along an algebra map (used for localisation).
ModulePresentation base_change(ModulePresentation const& m, std::shared_ptr<GradedAlgebra const> target,
                               AlgebraMap const& map);

/// The module materialised on the degree window [lo, hi]. In each degree the quotient basis
/// consists of the free-module coordinates that are not rref pivots of the relation span.
class PresentedModule : public LeftModule {
  public:
    PresentedModule(ModulePresentation presentation, int lo, int hi);

    GradedAlgebra const& algebra() const override { return *p_.algebra; }
    int window_lo() const override { return lo_; }
    int window_hi() const override { return hi_; }
    std::size_t dim(int d) const override;
    Vec act(BasisRef a, int d, Vec const& x) const override;
    std::string label(BasisRef x) const override;

    ModulePresentation const& presentation() const { return p_; }
    bool is_zero_on_window() const;
    /// Free-module coordinates of a quotient vector and back.
    Vec lift(int d, Vec const& x) const;
    Vec reduce(int d, Vec const& free_coords) const;

  private:
    struct Degree {
        std::vector<std::size_t> gen_offset; // offset of generator i in the free coordinates
        std::vector<std::size_t> gen_dim;
        std::size_t free_dim = 0;
        FpMatrix relations{PrimeField(2), 0, 0}; // rref of the relation span
        std::vector<std::size_t> pivots;
        std::vector<std::size_t> quotient_cols;
    };
    Degree const& degree(int d) const;

    ModulePresentation p_;
    int lo_, hi_;
    std::vector<Degree> degrees_;
};

} // namespace obstruct
