#pragma once

// Cyclic p-groups: kG = k[T]/(T^r), the 2-periodic injective resolution of k, its
// endomorphism dg algebra, the cohomology and Tate rings, and the class of m3.

#include <memory>
#include <string>
#include <vector>

#include "obstruct/dgcore.hpp"
#include "obstruct/hochschild.hpp"
#include "obstruct/kadeishvili.hpp"
#include "obstruct/presentation.hpp"

namespace obstruct {

struct CyclicGroupData {
    std::uint32_t p = 2;
    int n = 1;
    int r = 2;
    PrimeField field{2};

    static CyclicGroupData make(std::uint32_t p, int n);
    /// Order p^n given as an integer.
    static CyclicGroupData of_order(long long order);
    std::string name() const;
};

/// I_0 -> I_1 -> ... -> I_N with I_j = kG and differentials alternating T and -T^{r-1}.
std::shared_ptr<FreeComplex> periodic_injective_resolution(CyclicGroupData const& g, int length);

/// Resolution length used to trust End-degrees up to `max_degree`.
int resolution_length(int max_degree);
/// End of the resolution, with the coordinates hitting the top of the truncation negligible.
std::shared_ptr<EndDga> end_dga(CyclicGroupData const& g, int max_degree);

/// The explicit cycles x (degree 1), y (degree 2) and the homotopy q with dq = x^2 (r >= 3).
Vec chain_map_x(EndDga const& e);
Vec chain_map_y(EndDga const& e);
Vec homotopy_q(EndDga const& e);

/// k[X] when r = 2, otherwise k[X, Y]/(X^2) with |X| = 1, |Y| = 2.
AlgebraSpec group_cohomology_spec(CyclicGroupData const& g, int window);
std::shared_ptr<PresentedAlgebra> group_cohomology_ring(CyclicGroupData const& g, int window);
/// The cohomology ring with the periodicity generator inverted (X when r = 2, Y otherwise).
std::shared_ptr<PresentedAlgebra> tate_ring(CyclicGroupData const& g, int window);

/// Transfer with f1(X^e Y^i) = x^e y^i on degrees [0, max_degree].
std::shared_ptr<AInfinityTransfer> cyclic_transfer(CyclicGroupData const& g, int max_degree);

/// m3(XY^i, XY^j, XY^l) = Y^{i+j+l+1}, zero on all other monomial triples.
HochschildCochain m3_table_z3(std::shared_ptr<HochschildContext const> ctx, int window);

struct MuResult {
    std::shared_ptr<HochschildContext const> context;
    HochschildCochain m3;
    ObstructionVerdict verdict;
};

/// m3 on totals <= window + 4 and its class decided at window and window + 4.
MuResult mu_G(CyclicGroupData const& g, int window);
/// The image of mu_G under R -> R[periodicity^{-1}], decided in C(R, Tate ring) with the
/// Tate ring on the Laurent window [-(window + 4), window + 4].
MuResult mu_G_tate(CyclicGroupData const& g, int window);
/// Kunneth combination over the tensor product of the cohomology rings.
MuResult mu_product(std::vector<CyclicGroupData> const& groups, int window);

/// Names "cyclic:3", "cyclic:3^2", "cyclic:9", "product:2,2", "tate:cyclic:3".
struct GroupExample {
    std::vector<CyclicGroupData> factors;
    bool tate = false;
};
GroupExample parse_group_example(std::string const& name);
MuResult mu_example(GroupExample const& ex, int window);

} // namespace obstruct
