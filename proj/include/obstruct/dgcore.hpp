#pragma once

// Cochain complexes of based vector spaces, dg algebras, cohomology with explicit
// splittings, complexes of free modules over k[T]/(T^r) with their Hom complexes and
// endomorphism dg algebras, and the pullback construction for dg algebras.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "obstruct/graded.hpp"

namespace obstruct {

/// Sparse vector: (index, nonzero coefficient) pairs, not necessarily sorted.
using SparseVec = std::vector<std::pair<std::uint32_t, PrimeField::Elem>>;

Vec to_dense(PrimeField const& f, SparseVec const& s, std::size_t n);
SparseVec to_sparse(Vec const& v);

/// A cochain complex of finite-dimensional based spaces; degrees outside the support have
/// dimension zero.
class Complex {
  public:
    virtual ~Complex() = default;
    virtual PrimeField const& field() const = 0;
    virtual std::size_t degree_dim(int n) const = 0;
    /// d of a basis element, as a sparse vector in degree n + 1.
    virtual SparseVec d_basis(BasisRef x) const = 0;
    /// Coordinates in degree n that are ignored when forming cohomology (truncation artefacts).
    virtual std::vector<std::size_t> negligible(int) const { return {}; }

    FpMatrix differential(int n) const;
    Vec apply_d(int n, Vec const& v) const;
};

/// Complex given by explicit dimensions and dense differentials on [lo, hi].
class CochainComplex : public Complex {
  public:
    CochainComplex(PrimeField field, int lo, std::vector<std::size_t> dims);
    void set_differential(int n, FpMatrix d);

    PrimeField const& field() const override { return field_; }
    std::size_t degree_dim(int n) const override;
    SparseVec d_basis(BasisRef x) const override;
    int lo() const { return lo_; }
    int hi() const { return lo_ + static_cast<int>(dims_.size()) - 1; }

  private:
    PrimeField field_;
    int lo_;
    std::vector<std::size_t> dims_;
    std::map<int, FpMatrix> d_;
};

std::vector<std::string> check_d_squared(Complex const& c, int lo, int hi);

/// A dg algebra: a graded algebra whose underlying space is a complex.
class DgAlgebra : public GradedAlgebra, public Complex {
  public:
    PrimeField const& field() const override = 0;
    std::size_t degree_dim(int n) const override { return dim_or_zero(n); }
    /// Left factors of degree left_deg whose product with `right` (or with d of `right`,
    /// when slack > 0) can be nonzero; empty optional means "all of them".
    virtual std::optional<std::vector<std::uint32_t>> left_partners(BasisRef right, int left_deg, int slack) const;
    /// Appends c * xy to `out` as sparse entries (possibly repeated indices).
    virtual void accumulate_sparse(BasisRef x, BasisRef y, PrimeField::Elem c, SparseVec& out) const;
};

/// d(xy) = d(x)y + (-1)^{|x|} x d(y) for all basis pairs with factor and product degrees in [lo, hi].
std::vector<std::string> check_leibniz(DgAlgebra const& a, int lo, int hi);
/// Associativity on basis triples with all partial degrees in [lo, hi], using left_partners.
std::vector<std::string> check_dga_associativity(DgAlgebra const& a, int lo, int hi);

/// H^n = Z^n / (Z^n cap (B^n + N^n)), where N^n is spanned by the negligible coordinates.
class Cohomology {
  public:
    /// `representatives` optionally fixes the cycle chosen for each cohomology basis vector.
    Cohomology(Complex const& c, int lo, int hi, std::map<int, std::vector<Vec>> representatives = {});

    int lo() const { return lo_; }
    int hi() const { return hi_; }
    std::size_t dim(int n) const { return degree(n).reps.size(); }
    /// dim Z^n - dim B^n, before discarding negligible classes.
    std::size_t raw_dim(int n) const { return degree(n).raw_dim; }
    Vec const& representative(int n, std::size_t i) const { return degree(n).reps.at(i); }
    std::vector<Vec> const& cycle_basis(int n) const { return degree(n).cycles; }
    bool is_cycle(int n, Vec const& z) const;
    /// Coordinates of the class of a cycle; throws NotACocycle otherwise.
    Vec project(int n, Vec const& z) const;
    /// Canonical x with d x = b, or empty when b is not a boundary.
    std::optional<Vec> boundary_preimage(int n, Vec const& b) const;

    GradedVectorSpace space() const;

  private:
    struct Degree {
        std::vector<Vec> cycles;
        std::vector<Vec> reps;
        std::size_t raw_dim = 0;
        std::size_t span_cols = 0; // number of leading columns of the projector that span B + N
        std::unique_ptr<LinearSolver<PrimeField>> projector;
        std::unique_ptr<LinearSolver<PrimeField>> preimage;
    };
    Degree const& degree(int n) const;

    Complex const* c_;
    int lo_, hi_;
    std::vector<Degree> degrees_;
};

/// Matrix with entries in k[T]/(T^r): entry (i, j) is a coefficient vector of length r.
struct PolyMatrix {
    std::size_t rows = 0, cols = 0;
    int r = 1;
    Vec c; // ((i * cols) + j) * r + e

    PolyMatrix() = default;
    PolyMatrix(std::size_t rows_, std::size_t cols_, int r_) : rows(rows_), cols(cols_), r(r_), c(rows_ * cols_ * r_, 0) {}
    PrimeField::Elem& at(std::size_t i, std::size_t j, int e) { return c[(i * cols + j) * r + e]; }
    PrimeField::Elem at(std::size_t i, std::size_t j, int e) const { return c[(i * cols + j) * r + e]; }
    bool is_zero() const { return vec_is_zero(c); }
};

PolyMatrix poly_mul(PrimeField const& f, PolyMatrix const& a, PolyMatrix const& b);

/// A bounded complex of finitely generated free modules over k[T]/(T^r) on [lo, hi].
struct FreeComplex {
    PrimeField field{2};
    int r = 1;
    int lo = 0;
    std::vector<std::size_t> ranks;
    std::vector<PolyMatrix> d; // d[i]: X_{lo+i} -> X_{lo+i+1}

    int hi() const { return lo + static_cast<int>(ranks.size()) - 1; }
    std::size_t rank(int j) const;
    PolyMatrix const* differential(int j) const;
    std::vector<std::string> check_d_squared() const;
};

/// Complex over k (r = 1) with the given dimensions and differential matrices.
FreeComplex vector_space_complex(PrimeField f, int lo, std::vector<FpMatrix> const& d, std::vector<std::size_t> dims);
FreeComplex direct_sum(FreeComplex const& a, FreeComplex const& b);

/// Hom complex of module maps X -> Y with d(f) = d_Y f - (-1)^n f d_X. A degree-n map has
/// components X_j -> Y_{j+n}; the basis is (component j, row, column, power of T).
class HomComplex : public Complex {
  public:
    struct Entry {
        int source = 0;
        std::size_t row = 0, col = 0;
        int power = 0;
    };

    HomComplex(std::shared_ptr<FreeComplex const> x, std::shared_ptr<FreeComplex const> y);

    PrimeField const& field() const override { return x_->field; }
    std::size_t degree_dim(int n) const override;
    SparseVec d_basis(BasisRef f) const override;

    int degree_lo() const { return y_->lo - x_->hi(); }
    int degree_hi() const { return y_->hi() - x_->lo; }
    FreeComplex const& source() const { return *x_; }
    FreeComplex const& target() const { return *y_; }

    Entry decode(BasisRef f) const;
    std::optional<std::uint32_t> encode(int n, Entry const& e) const;
    std::string label(BasisRef f) const;
    /// Builds a degree-n map from per-component matrices (missing components are zero).
    Vec from_components(int n, std::map<int, PolyMatrix> const& comps) const;
    PolyMatrix component(int n, Vec const& f, int j) const;
    /// Components j of degree n that exist.
    std::pair<int, int> component_range(int n) const;

  private:
    struct Block {
        int source;
        std::size_t offset, rows, cols;
    };
    std::vector<Block> const& blocks(int n) const;
    Block const* block(int n, int j) const;

    std::shared_ptr<FreeComplex const> x_, y_;
    std::vector<std::vector<Block>> blocks_; // indexed by degree - degree_lo()
    std::vector<std::size_t> dims_;
};

/// g o f for f in Hom(X, Y) of degree nf and g in Hom(Y, Z) of degree ng.
Vec compose(HomComplex const& gz, int ng, Vec const& g, HomComplex const& fy, int nf, Vec const& f,
            HomComplex const& out);

/// End(X) with composition; components whose target index exceeds `negligible_above`
/// are ignored for cohomology.
class EndDga : public DgAlgebra {
  public:
    explicit EndDga(std::shared_ptr<FreeComplex const> x, std::optional<int> negligible_above = {});

    PrimeField const& field() const override { return hom_.field(); }
    int window_lo() const override { return hom_.degree_lo(); }
    int window_hi() const override { return hom_.degree_hi(); }
    bool finite() const override { return true; }
    std::size_t dim(int d) const override { return hom_.degree_dim(d); }
    Vec multiply_basis(BasisRef a, BasisRef b) const override;
    void accumulate_product(BasisRef a, BasisRef b, PrimeField::Elem c, Vec& out) const override;
    std::string label(BasisRef a) const override { return hom_.label(a); }
    std::optional<std::uint32_t> unit_index() const override;
    Vec unit() const override;
    SparseVec d_basis(BasisRef x) const override { return hom_.d_basis(x); }
    std::vector<std::size_t> negligible(int n) const override;
    std::optional<std::vector<std::uint32_t>> left_partners(BasisRef right, int left_deg, int slack) const override;
    void accumulate_sparse(BasisRef x, BasisRef y, PrimeField::Elem c, SparseVec& out) const override;

    HomComplex const& hom() const { return hom_; }
    std::shared_ptr<FreeComplex const> complex() const { return x_; }

  private:
    std::shared_ptr<FreeComplex const> x_;
    HomComplex hom_;
    std::optional<int> negligible_above_;
};

/// A finite dg algebra given by explicit tables.
class TableDgAlgebra : public DgAlgebra {
  public:
    TableDgAlgebra(PrimeField field, int lo, std::vector<std::vector<std::string>> labels);

    void set_product(BasisRef a, BasisRef b, Vec value);
    void set_differential(BasisRef a, Vec value);
    void set_unit(Vec unit) { unit_ = std::move(unit); }

    PrimeField const& field() const override { return field_; }
    int window_lo() const override { return lo_; }
    int window_hi() const override { return lo_ + static_cast<int>(labels_.size()) - 1; }
    bool finite() const override { return true; }
    std::size_t dim(int d) const override;
    Vec multiply_basis(BasisRef a, BasisRef b) const override;
    std::string label(BasisRef a) const override;
    std::optional<std::uint32_t> unit_index() const override;
    Vec unit() const override { return unit_.empty() ? zero_vec(field_, dim(0)) : unit_; }
    SparseVec d_basis(BasisRef x) const override;

    std::optional<BasisRef> find(std::string const& label) const;

  private:
    PrimeField field_;
    int lo_;
    std::vector<std::vector<std::string>> labels_;
    std::map<std::pair<BasisRef, BasisRef>, Vec> products_;
    std::map<BasisRef, Vec> d_;
    Vec unit_;
};

/// {"char": p, "degrees": [{"degree": n, "basis": [labels]}], "unit": {"label": c},
///  "differential": [{"from": label, "to": {label: c}}],
///  "products": [{"left": label, "right": label, "value": {label: c}}]}
std::shared_ptr<TableDgAlgebra> dga_from_json(nlohmann::json const& j);
nlohmann::json dga_to_json(DgAlgebra const& a);

/// Copies any finite dg algebra into table form.
std::shared_ptr<TableDgAlgebra> tabulate(DgAlgebra const& a);

/// A linear map between two complexes, one matrix per source degree.
struct ChainMap {
    Complex const* source = nullptr;
    Complex const* target = nullptr;
    int degree = 0;
    std::map<int, FpMatrix> blocks;
    Vec apply(int n, Vec const& v) const;
};

/// Degrees in [lo, hi] where d f != (-1)^{|f|} f d.
std::vector<int> chain_map_defects(ChainMap const& f, int lo, int hi);
/// True iff H^n(f) is bijective for all n in [lo, hi].
bool quasi_iso_check(ChainMap const& f, int lo, int hi);
/// Degrees in [lo, hi] where f fails to be multiplicative on basis pairs or to preserve the unit.
std::vector<std::string> dga_map_defects(ChainMap const& f, DgAlgebra const& a, DgAlgebra const& b, int lo, int hi);

/// X = {(a, b) : alpha(a) = beta(b)} as a sub dg algebra of A x B, with both projections.
struct Pullback {
    std::shared_ptr<TableDgAlgebra> algebra;
    ChainMap p1, p2;
};
Pullback pullback_dga(DgAlgebra const& a, DgAlgebra const& b, Complex const& m, ChainMap const& alpha,
                      ChainMap const& beta);

/// Checks that H^n X -> H^n A x_{H^n M} H^n B is bijective for n in [lo, hi].
bool cohomology_pullback_check(Pullback const& pb, DgAlgebra const& a, DgAlgebra const& b, Complex const& m,
                               ChainMap const& alpha, ChainMap const& beta, int lo, int hi);

} // namespace obstruct
