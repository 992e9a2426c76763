#pragma once

// Transfer of the product of a dg algebra A to its cohomology: cycle selection f1, the
// homotopy f2, the cycle-valued map Phi3 and the secondary multiplication m3 = pi(Phi3).

#include <map>
#include <memory>
#include <mutex>

#include "obstruct/dgcore.hpp"
#include "obstruct/hochschild.hpp"
#include "obstruct/presentation.hpp"

namespace obstruct {

class AInfinityTransfer {
  public:
    /// `lambda` is a graded algebra with the same dimensions as H*A on [lo, hi]; `reps[n][i]`
    /// is the chosen cycle f1 of the i-th basis element of lambda in degree n.
    AInfinityTransfer(std::shared_ptr<DgAlgebra const> a, std::shared_ptr<GradedAlgebra const> lambda,
                      std::map<int, std::vector<Vec>> reps, int lo, int hi);

    DgAlgebra const& source() const { return *a_; }
    std::shared_ptr<DgAlgebra const> source_ptr() const { return a_; }
    std::shared_ptr<GradedAlgebra const> cohomology_algebra() const { return lambda_; }
    Cohomology const& cohomology() const { return h_; }
    int lo() const { return lo_; }
    int hi() const { return hi_; }

    Vec f1(BasisRef x) const;
    Vec f1(int d, Vec const& v) const;
    /// Chosen preimage of f1(xy) - f1(x)f1(y) under the differential.
    Vec f2(BasisRef x, BasisRef y) const;
    Vec f2(int dx, Vec const& x, BasisRef y) const;
    Vec f2(BasisRef x, int dy, Vec const& y) const;
    Vec phi3(BasisRef a, BasisRef b, BasisRef c) const;
    Vec m3(BasisRef a, BasisRef b, BasisRef c) const;

    /// m3 on all normalised triples of total degree <= window, as a (3, -1)-cochain.
    HochschildCochain m3_cochain(std::shared_ptr<HochschildContext const> ctx, int window) const;

    /// Basis pairs where pi(f1(x) f1(y)) differs from xy in lambda.
    std::vector<std::string> product_defects(int max_total) const;
    /// Basis pairs where d f2(x, y) != f1(xy) - f1(x) f1(y).
    std::vector<std::string> homotopy_defects(int max_total) const;

  private:
    std::shared_ptr<DgAlgebra const> a_;
    std::shared_ptr<GradedAlgebra const> lambda_;
    std::map<int, std::vector<Vec>> reps_;
    int lo_, hi_;
    Cohomology h_;
    mutable std::mutex mu_;
    mutable std::map<std::pair<BasisRef, BasisRef>, Vec> f2_cache_;
};

/// Cohomology of A on [lo, hi] as an explicit table algebra, with the unit class first in
/// degree 0, together with the chosen representatives.
struct CohomologyModel {
    std::shared_ptr<TableAlgebra> algebra;
    std::map<int, std::vector<Vec>> reps;
};
CohomologyModel cohomology_model(DgAlgebra const& a, int lo, int hi);

/// Transfer for a dg algebra through its canonical cohomology model.
std::shared_ptr<AInfinityTransfer> canonical_transfer(std::shared_ptr<DgAlgebra const> a, int lo, int hi);

/// The same transfer with f1(x) replaced by f1(x) + d(h_x) for pseudo-random h_x; the unit is kept.
std::shared_ptr<AInfinityTransfer> perturbed_transfer(AInfinityTransfer const& t, std::uint64_t seed);

bool verify_m3_cocycle(HochschildCochain const& m3, int window);

/// m(x1 y1, x2 y2, x3 y3) = (-1)^{|x3||y1|+|x3||y2|+|x2||y1|} mA(x1,x2,x3) y1y2y3 + x1x2x3 mB(y1,y2,y3)
/// on normalised triples of the tensor algebra underlying `ctx`.
HochschildCochain kunneth_m3(HochschildCochain const& ma, HochschildCochain const& mb,
                             std::shared_ptr<HochschildContext const> ctx, int window);

nlohmann::json m3_to_json(HochschildCochain const& m3);

} // namespace obstruct
