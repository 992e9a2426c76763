#pragma once

// Graded rings and modules of fractions for presented graded-commutative algebras, graded
// primes of the supported family, the obstruction kappa(X) and its local-global comparison.

#include <memory>
#include <string>
#include <vector>

#include "obstruct/hochschild.hpp"
#include "obstruct/modules.hpp"
#include "obstruct/presentation.hpp"

namespace obstruct {

struct LocalisedAlgebra {
    std::shared_ptr<PresentedAlgebra const> base;
    std::shared_ptr<GradedAlgebra const> algebra;
    /// Generators made invertible; empty when the localisation is the identity.
    std::vector<std::string> inverted;
    AlgebraMap::Fn can;
    bool zero_ring = false;

    bool identity() const { return inverted.empty() && !zero_ring; }
    AlgebraMap map() const { return AlgebraMap(*base, *algebra, can); }
};

/// r |-> r / 1 between presentations on the same generators.
AlgebraMap::Fn monomial_map(std::shared_ptr<PresentedAlgebra const> r, std::shared_ptr<PresentedAlgebra const> t);

/// Inverts homogeneous elements. Supported: a nilpotent element (zero ring) or scalar multiples
/// of powers of one generator that is a nonzerodivisor on the window. `window` bounds the
/// Laurent window of the result; the default keeps the base window.
LocalisedAlgebra localise_algebra(std::shared_ptr<PresentedAlgebra const> r, std::vector<std::string> const& invert,
                                  std::optional<int> window = {});

ModulePresentation localise_module(ModulePresentation const& x, LocalisedAlgebra const& t);

/// Generator indices whose powers vanish on the window.
std::vector<std::size_t> nilpotent_generators(PresentedAlgebra const& r);

struct GradedPrime {
    std::vector<std::string> generators;
    bool maximal = false;
    std::string label() const;
};

/// Spec_gr for algebras whose quotient by nilpotent generators is k or k[g] with |g| != 0.
std::vector<GradedPrime> graded_primes(PresentedAlgebra const& r);
/// Localisation at p: inverts the non-nilpotent generators outside p.
LocalisedAlgebra localise_at(std::shared_ptr<PresentedAlgebra const> r, GradedPrime const& p,
                             std::optional<int> window = {});
/// ab in p implies a in p or b in p, checked on monomials of total degree <= max_total.
bool check_prime(PresentedAlgebra const& r, GradedPrime const& p, int max_total);

/// kappa(X) = id_X . mu in Hom(Rbar^{(x)s} (x) X, N) together with its class.
struct RealisabilityResult {
    ObstructionVerdict verdict;
    std::vector<Generator> free_part;
    std::size_t remaining_generators = 0;
    std::shared_ptr<ModuleContext const> context;
    std::optional<HochschildCochain> kappa;
};

/// Global check: values in X. `split_free` removes free summands first.
RealisabilityResult realisability_verdict(ModulePresentation const& x, HochschildCochain const& mu, int window,
                                          bool split_free = true);
/// Local check at a localisation R -> T: values in T (x) X, arguments in R.
RealisabilityResult local_realisability_verdict(ModulePresentation const& x, HochschildCochain const& mu,
                                                LocalisedAlgebra const& t, int window);

struct LocalGlobalRow {
    GradedPrime prime;
    LocalisedAlgebra localisation;
    RealisabilityResult result;
};

struct LocalGlobalReport {
    RealisabilityResult global;
    std::vector<LocalGlobalRow> rows;
    /// Global triviality implies triviality at every prime.
    bool consistent() const;
};

LocalGlobalReport local_global_check(ModulePresentation const& x, HochschildCochain const& mu, int window,
                                     std::vector<GradedPrime> primes = {});

nlohmann::json realisability_to_json(RealisabilityResult const& r);
nlohmann::json local_global_to_json(LocalGlobalReport const& r);

} // namespace obstruct
