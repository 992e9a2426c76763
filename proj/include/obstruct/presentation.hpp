#pragma once

// Finitely presented graded algebras with monomial normal forms, plus the derived algebras
// built from them (tensor products, opposites, enveloping algebras, explicit tables).

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "obstruct/graded.hpp"

namespace obstruct {

struct Generator {
    std::string name;
    int degree = 0;
};

/// Exponent vector (graded-commutative mode) or word of generator indices (free mode).
using Monomial = std::vector<int>;

/// lhs -> coeff * rhs, or lhs -> 0 when rhs is empty.
struct RewriteRule {
    Monomial lhs;
    PrimeField::Elem coeff = 1;
    std::optional<Monomial> rhs;
};

struct AlgebraSpec {
    std::uint32_t characteristic = 2;
    std::vector<Generator> generators;
    /// Pairs of element strings: {"X^2", "0"}, {"Y*X", "-X*Y"}.
    std::vector<std::pair<std::string, std::string>> relations;
    bool graded_commutative = true;
    int window = 12;
    std::vector<std::string> invertible;
};

AlgebraSpec algebra_spec_from_json(nlohmann::json const& j);
nlohmann::json algebra_spec_to_json(AlgebraSpec const& s);

class PresentedAlgebra : public GradedAlgebra {
  public:
    /// Materialises degrees [0, window], or [-window, window] when a generator is invertible.
    explicit PresentedAlgebra(AlgebraSpec spec);

    PrimeField const& field() const override { return field_; }
    int window_lo() const override { return lo_; }
    int window_hi() const override { return hi_; }
    bool bounded_below() const override { return !invertible_; }
    std::size_t dim(int d) const override;
    Vec multiply_basis(BasisRef a, BasisRef b) const override;
    void accumulate_product(BasisRef a, BasisRef b, PrimeField::Elem c, Vec& out) const override;
    std::string label(BasisRef a) const override;
    std::optional<std::uint32_t> unit_index() const override;

    AlgebraSpec const& spec() const { return spec_; }
    std::vector<Generator> const& generators() const { return spec_.generators; }
    bool graded_commutative() const { return spec_.graded_commutative; }
    std::optional<std::size_t> invertible_generator() const { return invertible_; }
    bool is_zero_ring() const { return !unit_index().has_value(); }

    Monomial const& monomial(BasisRef a) const;
    std::optional<BasisRef> find(Monomial const& m) const;
    int degree_of(Monomial const& m) const;
    /// Normal form: coefficient and monomial, or empty when the monomial rewrites to zero.
    std::optional<std::pair<PrimeField::Elem, Monomial>> normal_form(Monomial const& m) const;
    /// The element represented by a (possibly reducible) monomial, as a vector in its degree.
    Vec monomial_vector(Monomial const& m) const;
    /// Basis element for a generator power g^e (e may be negative for the invertible generator).
    Monomial generator_power(std::size_t g, int e) const;

    /// Parses "2*X*Y^3 - Y", "Y^-1", "1", "0". Returns the degree (empty for the zero element
    /// unless `expected_degree` is given) and the coordinate vector.
    std::pair<std::optional<int>, Vec> parse_element(std::string const& text,
                                                     std::optional<int> expected_degree = {}) const;

    /// Critical-pair test for the rewriting system up to the window.
    std::vector<std::string> check_confluence() const;

    /// Same presentation with a different window.
    std::shared_ptr<PresentedAlgebra> with_window(int window) const;

  private:
    struct DegreeBasis {
        std::vector<Monomial> monomials;
        std::map<Monomial, std::uint32_t> index;
    };

    std::pair<PrimeField::Elem, Monomial> mono_mul(Monomial const& a, Monomial const& b) const;
    bool divides(Monomial const& lhs, Monomial const& m) const;
    std::optional<std::pair<PrimeField::Elem, Monomial>> rewrite_once(Monomial const& m, std::size_t rule) const;
    std::optional<std::size_t> first_applicable(Monomial const& m) const;
    DegreeBasis const& basis(int d) const;
    void enumerate(int d, DegreeBasis& out) const;
    Monomial parse_monomial(std::string const& text, PrimeField::Elem& coeff) const;

    AlgebraSpec spec_;
    PrimeField field_;
    int lo_ = 0, hi_ = 0;
    std::optional<std::size_t> invertible_;
    std::vector<RewriteRule> rules_;
    std::vector<int> exponent_bound_; // -1 for unbounded
    mutable std::mutex mu_;
    mutable std::map<int, std::unique_ptr<DegreeBasis>> bases_;
    mutable std::map<Monomial, std::optional<std::pair<PrimeField::Elem, Monomial>>> nf_cache_;
};

/// A (x) B with (a (x) b)(a' (x) b') = (-1)^{|b||a'|} aa' (x) bb'.
class TensorAlgebra : public GradedAlgebra {
  public:
    TensorAlgebra(std::shared_ptr<GradedAlgebra const> a, std::shared_ptr<GradedAlgebra const> b);

    PrimeField const& field() const override { return a_->field(); }
    int window_lo() const override { return lo_; }
    int window_hi() const override { return hi_; }
    bool finite() const override { return a_->finite() && b_->finite(); }
    bool bounded_below() const override { return a_->bounded_below() && b_->bounded_below(); }
    std::size_t dim(int d) const override;
    Vec multiply_basis(BasisRef x, BasisRef y) const override;
    std::string label(BasisRef x) const override;
    std::optional<std::uint32_t> unit_index() const override;

    GradedAlgebra const& left() const { return *a_; }
    GradedAlgebra const& right() const { return *b_; }
    std::pair<BasisRef, BasisRef> split(BasisRef x) const;
    BasisRef join(BasisRef a, BasisRef b) const;
    /// a (x) b for homogeneous vectors.
    Vec tensor(int da, Vec const& a, int db, Vec const& b) const;

  private:
    struct Block {
        int left_deg;
        std::size_t offset;
        std::size_t left_dim, right_dim;
    };
    std::vector<Block> const& blocks(int d) const;

    std::shared_ptr<GradedAlgebra const> a_, b_;
    int lo_, hi_;
    mutable std::mutex mu_;
    mutable std::map<int, std::vector<Block>> blocks_;
};

/// Same underlying space; r . r' = (-1)^{|r||r'|} r' r.
class OppositeAlgebra : public GradedAlgebra {
  public:
    explicit OppositeAlgebra(std::shared_ptr<GradedAlgebra const> a) : a_(std::move(a)) {}
    PrimeField const& field() const override { return a_->field(); }
    int window_lo() const override { return a_->window_lo(); }
    int window_hi() const override { return a_->window_hi(); }
    bool finite() const override { return a_->finite(); }
    bool bounded_below() const override { return a_->bounded_below(); }
    std::size_t dim(int d) const override { return a_->dim_or_zero(d); }
    Vec multiply_basis(BasisRef x, BasisRef y) const override;
    std::string label(BasisRef x) const override { return a_->label(x); }
    std::optional<std::uint32_t> unit_index() const override { return a_->unit_index(); }

  private:
    std::shared_ptr<GradedAlgebra const> a_;
};

/// Lambda^e = Lambda^op (x) Lambda.
std::shared_ptr<TensorAlgebra> enveloping(std::shared_ptr<GradedAlgebra const> a);

/// A finite graded algebra given by explicit structure constants.
class TableAlgebra : public GradedAlgebra {
  public:
    TableAlgebra(PrimeField field, int lo, std::vector<std::vector<std::string>> labels,
                 std::optional<std::uint32_t> unit);

    /// Sets the product of two basis elements; the vector lives in degree a.deg + b.deg.
    void set_product(BasisRef a, BasisRef b, Vec value);

    PrimeField const& field() const override { return field_; }
    int window_lo() const override { return lo_; }
    int window_hi() const override { return lo_ + static_cast<int>(labels_.size()) - 1; }
    bool finite() const override { return true; }
    std::size_t dim(int d) const override;
    Vec multiply_basis(BasisRef a, BasisRef b) const override;
    std::string label(BasisRef a) const override;
    std::optional<std::uint32_t> unit_index() const override { return unit_; }

  private:
    PrimeField field_;
    int lo_;
    std::vector<std::vector<std::string>> labels_;
    std::optional<std::uint32_t> unit_;
    std::map<std::pair<BasisRef, BasisRef>, Vec> products_;
};

} // namespace obstruct
