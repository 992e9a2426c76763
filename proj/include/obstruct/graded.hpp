#pragma once

// Graded vector spaces, graded algebras (abstract), graded maps with the Koszul sign
// rule, and the bimodule / module interfaces that cochain complexes are built over.

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "obstruct/exactla.hpp"

namespace obstruct {

/// A basis element of a graded space: degree and index within that degree.
struct BasisRef {
    int deg = 0;
    std::uint32_t idx = 0;
    auto operator<=>(BasisRef const&) const = default;
};

inline bool is_odd(long long n) { return (n % 2) != 0; }

/// Per-degree labelled bases on a degree window.
struct GradedVectorSpace {
    int lo = 0;
    int hi = -1;
    std::vector<std::vector<std::string>> labels; // labels[d - lo]

    std::size_t dim(int d) const {
        if (d < lo || d > hi)
            return 0;
        return labels[static_cast<std::size_t>(d - lo)].size();
    }
};

Vec zero_vec(PrimeField const& f, std::size_t n);
Vec unit_vec(PrimeField const& f, std::size_t n, std::size_t i);
bool vec_is_zero(Vec const& v);
void vec_axpy(PrimeField const& f, Vec& y, PrimeField::Elem a, Vec const& x);
Vec vec_scale(PrimeField const& f, PrimeField::Elem a, Vec v);
Vec vec_sub(PrimeField const& f, Vec a, Vec const& b);
Vec vec_add(PrimeField const& f, Vec a, Vec const& b);
/// Kronecker product: index i * b.size() + j.
Vec kron(PrimeField const& f, Vec const& a, Vec const& b);

/// A graded algebra materialised on a degree window. Degrees outside the window raise
/// WindowOverflow rather than being silently truncated.
class GradedAlgebra {
  public:
    virtual ~GradedAlgebra() = default;

    virtual PrimeField const& field() const = 0;
    virtual int window_lo() const = 0;
    virtual int window_hi() const = 0;
    /// Basis size in degree d; throws WindowOverflow outside the window.
    virtual std::size_t dim(int d) const = 0;
    virtual Vec multiply_basis(BasisRef a, BasisRef b) const = 0;
    virtual std::string label(BasisRef a) const = 0;
    /// Index of the unit in degree 0; empty for the zero ring.
    virtual std::optional<std::uint32_t> unit_index() const = 0;
    /// True when the algebra vanishes outside [window_lo, window_hi], so every degree is known.
    virtual bool finite() const { return false; }
    /// True when the algebra vanishes below window_lo.
    virtual bool bounded_below() const { return finite(); }
    /// out += c * (a b). Implementations with sparse products override this.
    virtual void accumulate_product(BasisRef a, BasisRef b, PrimeField::Elem c, Vec& out) const;

    bool in_window(int d) const {
        return (d >= window_lo() || bounded_below()) && (d <= window_hi() || finite());
    }
    /// dim(d), or 0 where the algebra is known to vanish.
    std::size_t dim_or_zero(int d) const;
    void require_window(int d, char const* what) const;

    Vec multiply(int da, Vec const& a, int db, Vec const& b) const;
    /// a . b for a basis element a on the left.
    Vec left_multiply(BasisRef a, int db, Vec const& b) const;
    Vec right_multiply(int da, Vec const& a, BasisRef b) const;
    /// The unit as a vector in degree 0; the default reads it off unit_index().
    virtual Vec unit() const;
    bool is_unit(BasisRef a) const;
    GradedVectorSpace space() const;
    std::string format(int d, Vec const& v) const;
};

/// Exhaustive window checks shared by every algebra implementation. Each returns a list of
/// human-readable violations; empty means the property holds on the window.
std::vector<std::string> check_associativity(GradedAlgebra const& a, int max_total);
std::vector<std::string> check_unit(GradedAlgebra const& a, int max_deg);
std::vector<std::string> check_graded_commutativity(GradedAlgebra const& a, int max_total);

/// A homogeneous graded linear map of fixed degree between two graded spaces, stored as one
/// matrix per source degree (target dim x source dim).
class GradedMap {
  public:
    GradedMap(PrimeField field, int degree) : field_(field), degree_(degree) {}

    int degree() const { return degree_; }
    PrimeField const& field() const { return field_; }

    void set(int source_deg, FpMatrix m);
    bool defined_at(int source_deg) const { return blocks_.contains(source_deg); }
    FpMatrix const& at(int source_deg) const;
    Vec apply(int source_deg, Vec const& v) const;

    /// (this o g), defined wherever both pieces are.
    GradedMap compose(GradedMap const& g) const;

    static GradedMap identity(GradedVectorSpace const& space, PrimeField field);

  private:
    PrimeField field_;
    int degree_;
    std::map<int, FpMatrix> blocks_;
};

/// A homogeneous element of M (x) N: m of degree p, n of degree q, coefficients in the
/// Kronecker layout of dim(M_p) x dim(N_q).
struct HomogeneousTensor {
    int left_deg = 0;
    int right_deg = 0;
    std::size_t left_dim = 0;
    std::size_t right_dim = 0;
    Vec coeffs;
};

/// (f (x) g)(m (x) n) = (-1)^{|g||m|} f(m) (x) g(n).
HomogeneousTensor tensor_map(GradedMap const& f, GradedMap const& g, HomogeneousTensor const& t);

/// A degree-0 map of graded algebras given on basis elements.
class AlgebraMap {
  public:
    using Fn = std::function<Vec(BasisRef)>;
    AlgebraMap(GradedAlgebra const& source, GradedAlgebra const& target, Fn fn)
        : source_(&source), target_(&target), fn_(std::move(fn)) {}

    GradedAlgebra const& source() const { return *source_; }
    GradedAlgebra const& target() const { return *target_; }
    Vec apply_basis(BasisRef a) const { return fn_(a); }
    Vec apply(int d, Vec const& v) const;

  private:
    GradedAlgebra const* source_;
    GradedAlgebra const* target_;
    Fn fn_;
};

/// A graded (A, A)-bimodule.
class Bimodule {
  public:
    virtual ~Bimodule() = default;
    virtual GradedAlgebra const& algebra() const = 0;
    virtual int window_lo() const = 0;
    virtual int window_hi() const = 0;
    virtual std::size_t dim(int d) const = 0;
    virtual Vec act_left(BasisRef a, int d, Vec const& m) const = 0;
    virtual Vec act_right(int d, Vec const& m, BasisRef a) const = 0;
    virtual std::string label(BasisRef m) const = 0;

    virtual bool finite() const { return false; }

    PrimeField const& field() const { return algebra().field(); }
    bool in_window(int d) const { return finite() || (d >= window_lo() && d <= window_hi()); }
};

/// A graded left A-module.
class LeftModule {
  public:
    virtual ~LeftModule() = default;
    virtual GradedAlgebra const& algebra() const = 0;
    virtual int window_lo() const = 0;
    virtual int window_hi() const = 0;
    virtual std::size_t dim(int d) const = 0;
    virtual Vec act(BasisRef a, int d, Vec const& x) const = 0;
    virtual std::string label(BasisRef x) const = 0;

    virtual bool finite() const { return false; }

    PrimeField const& field() const { return algebra().field(); }
    bool in_window(int d) const { return finite() || (d >= window_lo() && d <= window_hi()); }
};

/// The algebra as a bimodule over itself.
class AlgebraBimodule : public Bimodule {
  public:
    explicit AlgebraBimodule(GradedAlgebra const& a) : a_(&a) {}
    GradedAlgebra const& algebra() const override { return *a_; }
    int window_lo() const override { return a_->window_lo(); }
    int window_hi() const override { return a_->window_hi(); }
    std::size_t dim(int d) const override { return a_->dim_or_zero(d); }
    bool finite() const override { return a_->finite(); }
    Vec act_left(BasisRef a, int d, Vec const& m) const override { return a_->left_multiply(a, d, m); }
    Vec act_right(int d, Vec const& m, BasisRef a) const override { return a_->right_multiply(d, m, a); }
    std::string label(BasisRef m) const override { return a_->label(m); }

  private:
    GradedAlgebra const* a_;
};

/// M[t]: (M[t])^i = M^{i+t}; r . (S^t m) . s = (-1)^{t|r|} S^t(r m s).
class ShiftedBimodule : public Bimodule {
  public:
    ShiftedBimodule(Bimodule const& m, int shift) : m_(&m), t_(shift) {}
    GradedAlgebra const& algebra() const override { return m_->algebra(); }
    int window_lo() const override { return m_->window_lo() - t_; }
    int window_hi() const override { return m_->window_hi() - t_; }
    std::size_t dim(int d) const override { return m_->dim(d + t_); }
    bool finite() const override { return m_->finite(); }
    Vec act_left(BasisRef a, int d, Vec const& m) const override;
    Vec act_right(int d, Vec const& m, BasisRef a) const override { return m_->act_right(d + t_, m, a); }
    std::string label(BasisRef m) const override;

  private:
    Bimodule const* m_;
    int t_;
};

/// A bimodule over T viewed as a bimodule over R through an algebra map R -> T.
class RestrictedBimodule : public Bimodule {
  public:
    RestrictedBimodule(Bimodule const& over_target, AlgebraMap const& map) : m_(&over_target), map_(&map) {}
    GradedAlgebra const& algebra() const override { return map_->source(); }
    int window_lo() const override { return m_->window_lo(); }
    int window_hi() const override { return m_->window_hi(); }
    std::size_t dim(int d) const override { return m_->dim(d); }
    bool finite() const override { return m_->finite(); }
    Vec act_left(BasisRef a, int d, Vec const& m) const override;
    Vec act_right(int d, Vec const& m, BasisRef a) const override;
    std::string label(BasisRef m) const override { return m_->label(m); }

  private:
    Bimodule const* m_;
    AlgebraMap const* map_;
};

/// The algebra as a left module over itself.
class RegularModule : public LeftModule {
  public:
    explicit RegularModule(GradedAlgebra const& a) : a_(&a) {}
    GradedAlgebra const& algebra() const override { return *a_; }
    int window_lo() const override { return a_->window_lo(); }
    int window_hi() const override { return a_->window_hi(); }
    std::size_t dim(int d) const override { return a_->dim_or_zero(d); }
    bool finite() const override { return a_->finite(); }
    Vec act(BasisRef a, int d, Vec const& x) const override { return a_->left_multiply(a, d, x); }
    std::string label(BasisRef x) const override { return a_->label(x); }

  private:
    GradedAlgebra const* a_;
};

/// A left T-module viewed as a left R-module through R -> T.
class RestrictedModule : public LeftModule {
  public:
    RestrictedModule(LeftModule const& over_target, AlgebraMap const& map) : m_(&over_target), map_(&map) {}
    GradedAlgebra const& algebra() const override { return map_->source(); }
    int window_lo() const override { return m_->window_lo(); }
    int window_hi() const override { return m_->window_hi(); }
    std::size_t dim(int d) const override { return m_->dim(d); }
    bool finite() const override { return m_->finite(); }
    Vec act(BasisRef a, int d, Vec const& x) const override;
    std::string label(BasisRef x) const override { return m_->label(x); }

  private:
    LeftModule const* m_;
    AlgebraMap const* map_;
};

} // namespace obstruct
