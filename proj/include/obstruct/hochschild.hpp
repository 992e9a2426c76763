#pragma once

// Windowed cochain complexes of Hochschild type: the bigraded Hochschild complex C(R, V)
// for an algebra map R -> V, and the complex Hom_k(R^{(x) s} (x) X, N) computing
// Ext_R(X, N) through the bar resolution of X. Coboundary decisions, cup and Yoneda
// products, the bar resolution and the comparison maps built on them.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "obstruct/graded.hpp"

namespace obstruct {

/// Arguments (lambda_1, ..., lambda_s), followed by one module basis element in module contexts.
using Tuple = std::vector<BasisRef>;

int total_degree(Tuple const& t);

/// One term of (delta g)(t), linear in g(u).
struct DeltaTerm {
    enum class Kind { Plain, Left, Right };
    Kind kind = Kind::Plain;
    Tuple u;
    PrimeField::Elem coeff = 1;
    BasisRef act{}; // for Left / Right
};

/// Shape of a windowed cochain complex: the argument tuples, the value spaces and the
/// differential, expressed through DeltaTerm lists. (delta g)(t) only involves g on tuples of
/// total degree <= that of t, so every window is a quotient complex of the full one.
class CochainContext {
  public:
    virtual ~CochainContext() = default;

    virtual PrimeField const& field() const = 0;
    virtual GradedAlgebra const& arguments() const = 0;
    /// Tuples of arity s and total degree t; normalised tuples avoid the unit.
    virtual std::vector<Tuple> tuples(int arity, int total, bool normalised) const = 0;
    /// Smallest total degree carrying a tuple of arity s.
    virtual int min_total(int arity, bool normalised) const = 0;
    virtual std::size_t value_dim(int degree) const = 0;
    virtual std::string value_label(BasisRef v) const = 0;
    virtual std::string tuple_label(Tuple const& t) const;
    virtual Vec act_left(BasisRef a, int d, Vec const& v) const = 0;
    virtual Vec act_right(int d, Vec const& v, BasisRef a) const = 0;
    /// Terms of (delta g)(t) for g of the given internal degree.
    virtual std::vector<DeltaTerm> delta_terms(Tuple const& t, int degree) const = 0;
    /// True when a module basis element trails the arguments.
    virtual bool trailing() const { return false; }

    bool connected() const;
    bool is_normalised_tuple(Tuple const& t) const;
};

/// C^{s, m}(R, V): k-linear maps R^{(x) s} -> V of degree m, with V an R-bimodule through
/// an algebra map R -> V (V = R when no map is given).
class HochschildContext : public CochainContext {
  public:
    explicit HochschildContext(std::shared_ptr<GradedAlgebra const> r);
    HochschildContext(std::shared_ptr<GradedAlgebra const> r, std::shared_ptr<GradedAlgebra const> v,
                      AlgebraMap::Fn can);

    PrimeField const& field() const override { return r_->field(); }
    GradedAlgebra const& arguments() const override { return *r_; }
    GradedAlgebra const& values() const { return *v_; }
    std::shared_ptr<GradedAlgebra const> arguments_ptr() const { return r_; }
    std::shared_ptr<GradedAlgebra const> values_ptr() const { return v_; }
    bool identity_values() const { return !can_; }
    Vec can(BasisRef a) const;

    std::vector<Tuple> tuples(int arity, int total, bool normalised) const override;
    int min_total(int arity, bool normalised) const override;
    std::size_t value_dim(int degree) const override { return v_->dim_or_zero(degree); }
    std::string value_label(BasisRef v) const override { return v_->label(v); }
    Vec act_left(BasisRef a, int d, Vec const& v) const override;
    Vec act_right(int d, Vec const& v, BasisRef a) const override;
    std::vector<DeltaTerm> delta_terms(Tuple const& t, int degree) const override;

  private:
    std::shared_ptr<GradedAlgebra const> r_, v_;
    AlgebraMap::Fn can_;
};

/// Hom_k(R^{(x) s} (x) X, N) = Hom_R(B_s (x)_R X, N) for left R-modules X and N, where N may
/// be a module over V restricted along R -> V. The differential is
/// (delta c)(l_1..l_{s+1}; x) = (-1)^{m|l_1|} l_1 c(l_2..; x) + sum_i (-1)^i c(..l_i l_{i+1}..; x)
///                              + (-1)^{s+1} c(l_1..l_s; l_{s+1} x).
class ModuleContext : public CochainContext {
  public:
    /// N is taken to vanish below its window when `target_bounded_below` is set.
    ModuleContext(std::shared_ptr<GradedAlgebra const> r, std::shared_ptr<LeftModule const> x,
                  std::shared_ptr<LeftModule const> n, bool target_bounded_below, AlgebraMap::Fn can = {});

    PrimeField const& field() const override { return r_->field(); }
    GradedAlgebra const& arguments() const override { return *r_; }
    LeftModule const& source() const { return *x_; }
    LeftModule const& target() const { return *n_; }
    bool trailing() const override { return true; }

    std::vector<Tuple> tuples(int arity, int total, bool normalised) const override;
    int min_total(int arity, bool normalised) const override;
    std::size_t value_dim(int degree) const override;
    std::string value_label(BasisRef v) const override { return n_->label(v); }
    std::string tuple_label(Tuple const& t) const override;
    Vec act_left(BasisRef a, int d, Vec const& v) const override;
    Vec act_right(int d, Vec const& v, BasisRef a) const override;
    std::vector<DeltaTerm> delta_terms(Tuple const& t, int degree) const override;

  private:
    std::shared_ptr<GradedAlgebra const> r_;
    std::shared_ptr<LeftModule const> x_, n_;
    bool n_bounded_;
    AlgebraMap::Fn can_;
};

/// A cochain of arity s and internal degree m, stored sparsely on basis tuples.
class HochschildCochain {
  public:
    HochschildCochain(std::shared_ptr<CochainContext const> ctx, int arity, int degree);

    CochainContext const& context() const { return *ctx_; }
    std::shared_ptr<CochainContext const> context_ptr() const { return ctx_; }
    int arity() const { return arity_; }
    int degree() const { return degree_; }
    std::size_t value_dim(Tuple const& t) const { return ctx_->value_dim(total_degree(t) + degree_); }

    Vec value(Tuple const& t) const;
    void set(Tuple const& t, Vec v);
    void add(Tuple const& t, PrimeField::Elem c, Vec const& v);
    std::map<Tuple, Vec> const& entries() const { return values_; }

    bool is_zero() const { return values_.empty(); }
    bool is_normalised() const;
    /// Entries with total degree <= window.
    HochschildCochain restricted(int window) const;
    HochschildCochain operator-(HochschildCochain const& o) const;
    HochschildCochain operator+(HochschildCochain const& o) const;
    HochschildCochain scaled(PrimeField::Elem c) const;
    bool operator==(HochschildCochain const& o) const;

    /// The contribution of one differential term: coeff * g(u), acted on when required.
    Vec evaluate(DeltaTerm const& term) const;

  private:
    std::shared_ptr<CochainContext const> ctx_;
    int arity_, degree_;
    std::map<Tuple, Vec> values_;
};

/// delta g on every tuple of total degree <= window.
HochschildCochain delta(HochschildCochain const& g, int window);
/// Tuples of total degree <= window where phi and psi differ.
std::vector<Tuple> differences(HochschildCochain const& phi, HochschildCochain const& psi, int window);

struct SolveStats {
    int window = 0;
    std::size_t rows = 0, cols = 0, rank = 0;
    bool consistent = true;
};

/// NONTRIVIAL is exact: the windowed system is a quotient of the full one. Triviality is
/// reported only when the systems at both windows are solvable.
struct ObstructionVerdict {
    enum class Kind { Nontrivial, TrivialUpToWindow };
    Kind kind = Kind::TrivialUpToWindow;
    std::vector<int> windows;
    std::vector<SolveStats> stats;
    /// delta(witness) = phi on the first window when trivial.
    std::optional<HochschildCochain> witness;
    std::string note;

    bool trivial() const { return kind == Kind::TrivialUpToWindow; }
};

std::string to_string(ObstructionVerdict::Kind k);

/// Solves delta g = phi on tuples of total degree <= window.
struct CoboundarySolution {
    SolveStats stats;
    std::optional<HochschildCochain> witness;
};
CoboundarySolution solve_coboundary(HochschildCochain const& phi, int window);

/// Decides phi at windows D and D + 4. Throws NotACocycle if delta phi != 0 on the window.
ObstructionVerdict coboundary_decide(HochschildCochain const& phi, int window);

/// Cochains of arity s and degree m on the window that are cocycles: a basis.
std::vector<HochschildCochain> cocycle_basis(std::shared_ptr<CochainContext const> ctx, int arity, int degree,
                                             int window, bool normalised = true);

/// All normalised tuples of the window, grouped by total degree.
std::vector<Tuple> window_tuples(CochainContext const& ctx, int arity, int window, bool normalised);

// Bar resolution and products. Cochains below are over a HochschildContext with V = R.

/// An element of B_s = R^{(x)(s+2)} as a sparse combination of basis tuples.
using BarElement = std::map<Tuple, PrimeField::Elem>;

BarElement bar_differential(GradedAlgebra const& r, Tuple const& t);
BarElement bar_differential(GradedAlgebra const& r, BarElement const& b);
/// Expands (v_0, ..., v_{s+1}) for homogeneous vectors v_i into basis tuples.
BarElement bar_tensor(PrimeField const& f, std::vector<std::pair<int, Vec>> const& factors);

/// f~(l_0, ..., l_{s+1}) = (-1)^{t|l_0|} l_0 f(l_1..l_s) l_{s+1}.
Vec tilde(HochschildCochain const& f, Tuple const& t);
Vec tilde(HochschildCochain const& f, BarElement const& b);
/// Inverse of tilde: restriction to l_0 = l_{s+1} = 1, as a cochain on the window.
HochschildCochain untilde(std::shared_ptr<CochainContext const> ctx, int arity, int degree,
                          std::function<Vec(Tuple const&)> const& bimodule_map, int window);

/// (zeta u eta)(l_1..l_{m+n}) = (-1)^{|l_1..l_m| j} zeta(l_1..l_m) eta(l_{m+1}..l_{m+n}).
HochschildCochain cup(HochschildCochain const& zeta, HochschildCochain const& eta, int window);
/// The bimodule form of the cup product on B_{m+n}.
Vec cup_tilde(HochschildCochain const& zeta, HochschildCochain const& eta, Tuple const& t);

/// Lifting of eta through the diagonal: B_{p+n} -> B_p,
/// (l_0..l_{p+n+1}) -> (-1)^{j|l_0..l_p|} (l_0, .., l_p, eta~(1, l_{p+1}, .., l_{p+n+1})).
BarElement lift_diagonal(HochschildCochain const& eta, int p, Tuple const& t);
/// Lifting of zeta: B_{m+p} -> B_p, (l_0..l_{m+p+1}) -> (-1)^{mp} (zeta~(l_0..l_m, 1), l_{m+1}, ..).
BarElement lift_shift(HochschildCochain const& zeta, int p, Tuple const& t);
/// zeta~ o (diagonal lifting of eta) on a tuple of B_{m+n}.
Vec yoneda_diagonal(HochschildCochain const& zeta, HochschildCochain const& eta, Tuple const& t);
/// eta~ o (shift lifting of zeta) on a tuple of B_{m+n}.
Vec yoneda_shift(HochschildCochain const& eta, HochschildCochain const& zeta, Tuple const& t);

/// Bar tuples (l_0..l_{s+1}) of total degree <= window, units allowed.
std::vector<Tuple> bar_tuples(GradedAlgebra const& r, int s, int window);

/// Pushes a cochain over R -> R into C(R, V) along R -> V.
HochschildCochain push_forward(HochschildCochain const& zeta, std::shared_ptr<HochschildContext const> target,
                               int window);
/// psi o can^{(x) s} for a cochain psi over V, as a cochain in C(R, V).
HochschildCochain pull_back(HochschildCochain const& psi, std::shared_ptr<HochschildContext const> target,
                            int window);

/// c(l_1..l_s; x) = phi(l_1..l_s) f(x): the cup pairing of a degree-0 module map f: X -> N
/// with a Hochschild cochain phi over R.
HochschildCochain cup_pairing(HochschildCochain const& phi, std::shared_ptr<ModuleContext const> ctx,
                              std::function<Vec(BasisRef)> const& f, int window);

nlohmann::json cochain_to_json(HochschildCochain const& c);
HochschildCochain cochain_from_json(nlohmann::json const& j, std::shared_ptr<CochainContext const> ctx);
nlohmann::json verdict_to_json(ObstructionVerdict const& v);

/// Finds a basis element by label in degrees [lo, hi].
std::optional<BasisRef> find_label(GradedAlgebra const& a, std::string const& label, int lo, int hi);

} // namespace obstruct
