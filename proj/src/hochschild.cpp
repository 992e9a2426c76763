#include "obstruct/hochschild.hpp"

#include <algorithm>
#include <sstream>

namespace obstruct {

int total_degree(Tuple const& t) {
    int s = 0;
    for (auto const& b : t)
        s += b.deg;
    return s;
}

namespace {

/// Lowest degree holding a basis element other than (when normalised) the unit.
std::optional<int> first_degree(GradedAlgebra const& r, bool normalised) {
    if (!r.bounded_below())
        throw Unsupported("cochains need an argument algebra bounded below");
    for (int d = r.window_lo(); d <= r.window_hi(); ++d) {
        std::size_t n = r.dim_or_zero(d);
        if (normalised && d == 0 && r.unit_index())
            --n;
        if (n > 0)
            return d;
    }
    return std::nullopt;
}

void enumerate(GradedAlgebra const& r, int arity, int total, int lo, bool normalised, Tuple& cur,
               std::vector<Tuple>& out) {
    if (arity == 0) {
        if (total == 0)
            out.push_back(cur);
        return;
    }
    int hi = total - (arity - 1) * lo;
    if (r.finite())
        hi = std::min(hi, r.window_hi());
    for (int d = lo; d <= hi; ++d) {
        auto n = r.dim_or_zero(d);
        for (std::uint32_t i = 0; i < n; ++i) {
            BasisRef b{d, i};
            if (normalised && r.is_unit(b))
                continue;
            cur.push_back(b);
            enumerate(r, arity - 1, total - d, lo, normalised, cur, out);
            cur.pop_back();
        }
    }
}

std::vector<Tuple> algebra_tuples(GradedAlgebra const& r, int arity, int total, bool normalised) {
    std::vector<Tuple> out;
    if (arity == 0) {
        if (total == 0)
            out.emplace_back();
        return out;
    }
    auto lo = first_degree(r, normalised);
    if (!lo)
        return out;
    Tuple cur;
    enumerate(r, arity, total, *lo, normalised, cur, out);
    return out;
}

int algebra_min_total(GradedAlgebra const& r, int arity, bool normalised) {
    if (arity == 0)
        return 0;
    auto lo = first_degree(r, normalised);
    if (!lo)
        return std::numeric_limits<int>::max() / 4;
    return arity * *lo;
}


/// Mid terms sum_i (-1)^i g(.., l_i l_{i+1}, ..) over argument positions [0, count).
void mid_terms(GradedAlgebra const& r, Tuple const& t, std::size_t count, std::vector<DeltaTerm>& out) {
    auto const& f = r.field();
    for (std::size_t i = 0; i + 1 < count; ++i) {
        auto p = r.multiply_basis(t[i], t[i + 1]);
        int d = t[i].deg + t[i + 1].deg;
        for (std::uint32_t c = 0; c < p.size(); ++c) {
            if (p[c] == 0)
                continue;
            DeltaTerm term;
            term.u.assign(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(i));
            term.u.push_back({d, c});
            term.u.insert(term.u.end(), t.begin() + static_cast<std::ptrdiff_t>(i + 2), t.end());
            term.coeff = f.mul(f.sign(static_cast<long long>(i + 1)), p[c]);
            out.push_back(std::move(term));
        }
    }
}

} // namespace

std::string CochainContext::tuple_label(Tuple const& t) const {
    std::string s = "(";
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i)
            s += ", ";
        s += arguments().label(t[i]);
    }
    return s + ")";
}

bool CochainContext::connected() const {
    auto const& r = arguments();
    return r.bounded_below() && r.window_lo() >= 0 && r.dim_or_zero(0) == 1 && r.unit_index().has_value();
}

bool CochainContext::is_normalised_tuple(Tuple const& t) const {
    std::size_t n = trailing() ? t.size() - 1 : t.size();
    for (std::size_t i = 0; i < n; ++i)
        if (arguments().is_unit(t[i]))
            return false;
    return true;
}

HochschildContext::HochschildContext(std::shared_ptr<GradedAlgebra const> r) : r_(r), v_(r) {}

HochschildContext::HochschildContext(std::shared_ptr<GradedAlgebra const> r, std::shared_ptr<GradedAlgebra const> v,
                                     AlgebraMap::Fn can)
    : r_(std::move(r)), v_(std::move(v)), can_(std::move(can)) {
    if (!(r_->field() == v_->field()))
        throw InvalidInput("algebra map between different fields");
}

Vec HochschildContext::can(BasisRef a) const {
    if (!can_)
        return unit_vec(r_->field(), r_->dim(a.deg), a.idx);
    return can_(a);
}

std::vector<Tuple> HochschildContext::tuples(int arity, int total, bool normalised) const {
    return algebra_tuples(*r_, arity, total, normalised);
}

int HochschildContext::min_total(int arity, bool normalised) const { return algebra_min_total(*r_, arity, normalised); }

Vec HochschildContext::act_left(BasisRef a, int d, Vec const& v) const {
    if (!can_)
        return r_->left_multiply(a, d, v);
    return v_->multiply(a.deg, can_(a), d, v);
}

Vec HochschildContext::act_right(int d, Vec const& v, BasisRef a) const {
    if (!can_)
        return r_->right_multiply(d, v, a);
    return v_->multiply(d, v, a.deg, can_(a));
}

std::vector<DeltaTerm> HochschildContext::delta_terms(Tuple const& t, int degree) const {
    auto const& f = field();
    std::vector<DeltaTerm> out;
    if (t.empty())
        return out;
    auto n = t.size() - 1;
    DeltaTerm left{DeltaTerm::Kind::Left, Tuple(t.begin() + 1, t.end()),
                   f.sign(static_cast<long long>(degree) * t[0].deg), t[0]};
    out.push_back(std::move(left));
    mid_terms(*r_, t, t.size(), out);
    DeltaTerm right{DeltaTerm::Kind::Right, Tuple(t.begin(), t.end() - 1), f.sign(static_cast<long long>(n + 1)),
                    t.back()};
    out.push_back(std::move(right));
    return out;
}

ModuleContext::ModuleContext(std::shared_ptr<GradedAlgebra const> r, std::shared_ptr<LeftModule const> x,
                             std::shared_ptr<LeftModule const> n, bool target_bounded_below, AlgebraMap::Fn can)
    : r_(std::move(r)), x_(std::move(x)), n_(std::move(n)), n_bounded_(target_bounded_below), can_(std::move(can)) {
    if (&x_->algebra() != r_.get())
        throw InvalidInput("source module is not over the argument algebra");
}

std::vector<Tuple> ModuleContext::tuples(int arity, int total, bool normalised) const {
    std::vector<Tuple> out;
    int xlo = x_->window_lo();
    int alo = algebra_min_total(*r_, arity, normalised);
    for (int a = alo; a <= total - xlo; ++a) {
        int xd = total - a;
        auto nx = x_->dim(xd);
        if (nx == 0)
            continue;
        for (auto const& args : algebra_tuples(*r_, arity, a, normalised))
            for (std::uint32_t i = 0; i < nx; ++i) {
                auto t = args;
                t.push_back({xd, i});
                out.push_back(std::move(t));
            }
    }
    return out;
}

int ModuleContext::min_total(int arity, bool normalised) const {
    return algebra_min_total(*r_, arity, normalised) + x_->window_lo();
}

std::size_t ModuleContext::value_dim(int degree) const {
    if (n_bounded_ && degree < n_->window_lo())
        return 0;
    return n_->dim(degree);
}

std::string ModuleContext::tuple_label(Tuple const& t) const {
    std::string s = "(";
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        if (i)
            s += ", ";
        s += r_->label(t[i]);
    }
    return s + "; " + x_->label(t.back()) + ")";
}

Vec ModuleContext::act_left(BasisRef a, int d, Vec const& v) const {
    if (!can_)
        return n_->act(a, d, v);
    auto w = can_(a);
    Vec out = zero_vec(field(), value_dim(a.deg + d));
    for (std::uint32_t c = 0; c < w.size(); ++c)
        if (w[c] != 0)
            vec_axpy(field(), out, w[c], n_->act({a.deg, c}, d, v));
    return out;
}

Vec ModuleContext::act_right(int, Vec const&, BasisRef) const {
    throw InvalidInput("module cochains carry no right action");
}

std::vector<DeltaTerm> ModuleContext::delta_terms(Tuple const& t, int degree) const {
    auto const& f = field();
    std::vector<DeltaTerm> out;
    if (t.size() < 2)
        return out;
    auto s = t.size() - 2; // arity of g
    auto x = t.back();
    DeltaTerm left{DeltaTerm::Kind::Left, Tuple(t.begin() + 1, t.end()),
                   f.sign(static_cast<long long>(degree) * t[0].deg), t[0]};
    out.push_back(std::move(left));
    mid_terms(*r_, t, s + 1, out);
    auto lam = t[s];
    auto p = x_->act(lam, x.deg, unit_vec(f, x_->dim(x.deg), x.idx));
    for (std::uint32_t c = 0; c < p.size(); ++c) {
        if (p[c] == 0)
            continue;
        DeltaTerm term;
        term.u.assign(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(s));
        term.u.push_back({lam.deg + x.deg, c});
        term.coeff = f.mul(f.sign(static_cast<long long>(s + 1)), p[c]);
        out.push_back(std::move(term));
    }
    return out;
}

HochschildCochain::HochschildCochain(std::shared_ptr<CochainContext const> ctx, int arity, int degree)
    : ctx_(std::move(ctx)), arity_(arity), degree_(degree) {}

Vec HochschildCochain::value(Tuple const& t) const {
    auto it = values_.find(t);
    if (it != values_.end())
        return it->second;
    return zero_vec(ctx_->field(), value_dim(t));
}

void HochschildCochain::set(Tuple const& t, Vec v) {
    if (v.size() != value_dim(t))
        throw InvalidInput("cochain value has the wrong dimension at " + ctx_->tuple_label(t));
    if (vec_is_zero(v))
        values_.erase(t);
    else
        values_[t] = std::move(v);
}

void HochschildCochain::add(Tuple const& t, PrimeField::Elem c, Vec const& v) {
    if (c == 0 || vec_is_zero(v))
        return;
    auto cur = value(t);
    vec_axpy(ctx_->field(), cur, c, v);
    set(t, std::move(cur));
}

bool HochschildCochain::is_normalised() const {
    for (auto const& [t, v] : values_)
        if (!ctx_->is_normalised_tuple(t))
            return false;
    return true;
}

HochschildCochain HochschildCochain::restricted(int window) const {
    HochschildCochain out(ctx_, arity_, degree_);
    for (auto const& [t, v] : values_)
        if (total_degree(t) <= window)
            out.values_.emplace(t, v);
    return out;
}

namespace {
void require_compatible(HochschildCochain const& a, HochschildCochain const& b) {
    if (&a.context() != &b.context() || a.arity() != b.arity() || a.degree() != b.degree())
        throw InvalidInput("cochains live in different spaces");
}
} // namespace

HochschildCochain HochschildCochain::operator+(HochschildCochain const& o) const {
    require_compatible(*this, o);
    auto out = *this;
    for (auto const& [t, v] : o.values_)
        out.add(t, 1, v);
    return out;
}

HochschildCochain HochschildCochain::operator-(HochschildCochain const& o) const {
    require_compatible(*this, o);
    auto out = *this;
    auto m1 = ctx_->field().neg(1);
    for (auto const& [t, v] : o.values_)
        out.add(t, m1, v);
    return out;
}

HochschildCochain HochschildCochain::scaled(PrimeField::Elem c) const {
    HochschildCochain out(ctx_, arity_, degree_);
    if (c == 0)
        return out;
    for (auto const& [t, v] : values_)
        out.values_.emplace(t, vec_scale(ctx_->field(), c, v));
    return out;
}

bool HochschildCochain::operator==(HochschildCochain const& o) const {
    return arity_ == o.arity_ && degree_ == o.degree_ && values_ == o.values_;
}

Vec HochschildCochain::evaluate(DeltaTerm const& term) const {
    auto const& f = ctx_->field();
    int du = total_degree(term.u) + degree_;
    auto v = value(term.u);
    switch (term.kind) {
    case DeltaTerm::Kind::Plain:
        return vec_scale(f, term.coeff, std::move(v));
    case DeltaTerm::Kind::Left:
        return vec_scale(f, term.coeff, ctx_->act_left(term.act, du, v));
    case DeltaTerm::Kind::Right:
        return vec_scale(f, term.coeff, ctx_->act_right(du, v, term.act));
    }
    return v;
}

std::vector<Tuple> window_tuples(CochainContext const& ctx, int arity, int window, bool normalised) {
    std::vector<Tuple> out;
    for (int t = ctx.min_total(arity, normalised); t <= window; ++t)
        for (auto& u : ctx.tuples(arity, t, normalised))
            out.push_back(std::move(u));
    return out;
}

HochschildCochain delta(HochschildCochain const& g, int window) {
    auto const& ctx = g.context();
    auto const& f = ctx.field();
    bool norm = g.is_normalised();
    HochschildCochain out(g.context_ptr(), g.arity() + 1, g.degree());
    for (auto const& t : window_tuples(ctx, g.arity() + 1, window, norm)) {
        Vec v = zero_vec(f, out.value_dim(t));
        for (auto const& term : ctx.delta_terms(t, g.degree()))
            vec_axpy(f, v, 1, g.evaluate(term));
        out.set(t, std::move(v));
    }
    return out;
}

std::vector<Tuple> differences(HochschildCochain const& phi, HochschildCochain const& psi, int window) {
    std::vector<Tuple> out;
    auto check = [&](Tuple const& t) {
        if (total_degree(t) <= window && phi.value(t) != psi.value(t))
            out.push_back(t);
    };
    for (auto const& [t, v] : phi.entries())
        check(t);
    for (auto const& [t, v] : psi.entries())
        if (!phi.entries().contains(t))
            check(t);
    return out;
}

std::string to_string(ObstructionVerdict::Kind k) {
    return k == ObstructionVerdict::Kind::Nontrivial ? "NONTRIVIAL" : "TRIVIAL_UP_TO_WINDOW";
}

namespace {

struct UnknownIndex {
    std::map<Tuple, std::size_t> offset;
    std::vector<Tuple> tuples;
    std::size_t cols = 0;
};

UnknownIndex index_unknowns(CochainContext const& ctx, int arity, int degree, int window, bool normalised) {
    UnknownIndex idx;
    for (auto const& u : window_tuples(ctx, arity, window, normalised)) {
        idx.offset.emplace(u, idx.cols);
        idx.tuples.push_back(u);
        idx.cols += ctx.value_dim(total_degree(u) + degree);
    }
    return idx;
}

/// Rows of (delta g)(t), one per value coordinate, as sparse combinations of unknowns.
std::vector<SparseRow> delta_rows(CochainContext const& ctx, UnknownIndex const& idx, Tuple const& t, int degree) {
    auto const& f = ctx.field();
    std::vector<SparseRow> rows(ctx.value_dim(total_degree(t) + degree));
    for (auto const& term : ctx.delta_terms(t, degree)) {
        auto it = idx.offset.find(term.u);
        if (it == idx.offset.end())
            continue;
        int du = total_degree(term.u) + degree;
        auto ud = ctx.value_dim(du);
        for (std::uint32_t k = 0; k < ud; ++k) {
            auto col = it->second + k;
            if (term.kind == DeltaTerm::Kind::Plain) {
                rows[k].emplace_back(col, term.coeff);
                continue;
            }
            auto ek = unit_vec(f, ud, k);
            auto v = term.kind == DeltaTerm::Kind::Left ? ctx.act_left(term.act, du, ek)
                                                         : ctx.act_right(du, ek, term.act);
            for (std::size_t o = 0; o < v.size(); ++o)
                if (v[o] != 0)
                    rows[o].emplace_back(col, f.mul(term.coeff, v[o]));
        }
    }
    return rows;
}

} // namespace

CoboundarySolution solve_coboundary(HochschildCochain const& phi, int window) {
    if (phi.arity() == 0)
        throw InvalidInput("a 0-cochain is never a coboundary target");
    auto const& ctx = phi.context();
    auto const& f = ctx.field();
    bool norm = phi.is_normalised();
    int m = phi.degree();
    auto idx = index_unknowns(ctx, phi.arity() - 1, m, window, norm);
    SparseSystem sys(f, idx.cols);
    for (auto const& t : window_tuples(ctx, phi.arity(), window, norm)) {
        auto rows = delta_rows(ctx, idx, t, m);
        auto rhs = phi.value(t);
        for (std::size_t o = 0; o < rows.size(); ++o)
            if (!rows[o].empty() || rhs[o] != 0)
                sys.add_equation(std::move(rows[o]), rhs[o]);
    }
    auto res = sys.solve();
    CoboundarySolution out;
    out.stats = {window, res.rows, res.cols, res.rank, res.consistent};
    if (!res.consistent)
        return out;
    HochschildCochain g(phi.context_ptr(), phi.arity() - 1, m);
    for (auto const& u : idx.tuples) {
        auto off = idx.offset.at(u);
        auto n = ctx.value_dim(total_degree(u) + m);
        g.set(u, Vec(res.solution.begin() + static_cast<std::ptrdiff_t>(off),
                     res.solution.begin() + static_cast<std::ptrdiff_t>(off + n)));
    }
    out.witness = std::move(g);
    return out;
}

ObstructionVerdict coboundary_decide(HochschildCochain const& phi, int window) {
    ObstructionVerdict v;
    v.windows = {window, window + 4};
    for (int w : v.windows)
        if (!delta(phi.restricted(w), w).is_zero())
            throw NotACocycle("delta phi != 0 on the window " + std::to_string(w));
    if (phi.restricted(window + 4).is_zero()) {
        v.kind = ObstructionVerdict::Kind::TrivialUpToWindow;
        v.witness = HochschildCochain(phi.context_ptr(), std::max(phi.arity() - 1, 0), phi.degree());
        v.note = "zero cochain";
        return v;
    }
    for (int w : v.windows) {
        auto sol = solve_coboundary(phi.restricted(w), w);
        v.stats.push_back(sol.stats);
        if (!sol.witness) {
            v.kind = ObstructionVerdict::Kind::Nontrivial;
            v.note = "delta g = phi has no solution on the window " + std::to_string(w);
            v.witness.reset();
            return v;
        }
        if (w == window)
            v.witness = std::move(sol.witness);
    }
    v.kind = ObstructionVerdict::Kind::TrivialUpToWindow;
    return v;
}

std::vector<HochschildCochain> cocycle_basis(std::shared_ptr<CochainContext const> ctx, int arity, int degree,
                                             int window, bool normalised) {
    auto const& f = ctx->field();
    auto idx = index_unknowns(*ctx, arity, degree, window, normalised);
    std::vector<SparseRow> all;
    for (auto const& t : window_tuples(*ctx, arity + 1, window, normalised))
        for (auto& r : delta_rows(*ctx, idx, t, degree))
            if (!r.empty())
                all.push_back(std::move(r));
    FpMatrix m(f, all.size(), idx.cols);
    for (std::size_t i = 0; i < all.size(); ++i)
        for (auto [c, x] : all[i])
            m(i, c) = f.add(m(i, c), x);
    std::vector<HochschildCochain> out;
    for (auto const& k : kernel_basis(m)) {
        HochschildCochain z(ctx, arity, degree);
        for (auto const& u : idx.tuples) {
            auto off = idx.offset.at(u);
            auto n = ctx->value_dim(total_degree(u) + degree);
            z.set(u, Vec(k.begin() + static_cast<std::ptrdiff_t>(off), k.begin() + static_cast<std::ptrdiff_t>(off + n)));
        }
        out.push_back(std::move(z));
    }
    return out;
}

BarElement bar_differential(GradedAlgebra const& r, Tuple const& t) {
    auto const& f = r.field();
    BarElement out;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        auto p = r.multiply_basis(t[i], t[i + 1]);
        int d = t[i].deg + t[i + 1].deg;
        for (std::uint32_t c = 0; c < p.size(); ++c) {
            if (p[c] == 0)
                continue;
            Tuple u(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(i));
            u.push_back({d, c});
            u.insert(u.end(), t.begin() + static_cast<std::ptrdiff_t>(i + 2), t.end());
            auto& e = out[u];
            e = f.add(e, f.mul(f.sign(static_cast<long long>(i)), p[c]));
            if (e == 0)
                out.erase(u);
        }
    }
    return out;
}

BarElement bar_differential(GradedAlgebra const& r, BarElement const& b) {
    auto const& f = r.field();
    BarElement out;
    for (auto const& [t, c] : b)
        for (auto const& [u, x] : bar_differential(r, t)) {
            auto& e = out[u];
            e = f.add(e, f.mul(c, x));
            if (e == 0)
                out.erase(u);
        }
    return out;
}

namespace {
void expand(PrimeField const& f, std::vector<std::pair<int, Vec>> const& factors, std::size_t i, Tuple& cur,
            PrimeField::Elem c, BarElement& out) {
    if (i == factors.size()) {
        auto& e = out[cur];
        e = f.add(e, c);
        if (e == 0)
            out.erase(cur);
        return;
    }
    auto const& [d, v] = factors[i];
    for (std::uint32_t k = 0; k < v.size(); ++k) {
        if (v[k] == 0)
            continue;
        cur.push_back({d, k});
        expand(f, factors, i + 1, cur, f.mul(c, v[k]), out);
        cur.pop_back();
    }
}

BasisRef unit_ref(GradedAlgebra const& r) {
    auto u = r.unit_index();
    if (!u)
        throw InvalidInput("the algebra has no unit basis element");
    return {0, *u};
}

HochschildContext const& hochschild_context(HochschildCochain const& c) {
    auto p = dynamic_cast<HochschildContext const*>(&c.context());
    if (!p)
        throw InvalidInput("expected a Hochschild cochain");
    return *p;
}

} // namespace

BarElement bar_tensor(PrimeField const& f, std::vector<std::pair<int, Vec>> const& factors) {
    BarElement out;
    Tuple cur;
    expand(f, factors, 0, cur, 1, out);
    return out;
}

Vec tilde(HochschildCochain const& f, Tuple const& t) {
    auto const& ctx = hochschild_context(f);
    auto const& fld = ctx.field();
    if (t.size() != static_cast<std::size_t>(f.arity()) + 2)
        throw InvalidInput("tilde: tuple length does not match the arity");
    Tuple inner(t.begin() + 1, t.end() - 1);
    int d = total_degree(inner) + f.degree();
    auto v = f.value(inner);
    v = ctx.act_left(t.front(), d, v);
    v = ctx.act_right(d + t.front().deg, v, t.back());
    return vec_scale(fld, fld.sign(static_cast<long long>(f.degree()) * t.front().deg), std::move(v));
}

namespace {
Vec tilde_sum(HochschildCochain const& f, BarElement const& b, int total) {
    auto const& ctx = hochschild_context(f);
    Vec out = zero_vec(ctx.field(), ctx.value_dim(total + f.degree()));
    for (auto const& [t, c] : b)
        vec_axpy(ctx.field(), out, c, tilde(f, t));
    return out;
}
} // namespace

Vec tilde(HochschildCochain const& f, BarElement const& b) {
    if (b.empty())
        throw InvalidInput("tilde of an empty bar element has no degree");
    return tilde_sum(f, b, total_degree(b.begin()->first));
}

HochschildCochain untilde(std::shared_ptr<CochainContext const> ctx, int arity, int degree,
                          std::function<Vec(Tuple const&)> const& bimodule_map, int window) {
    auto one = unit_ref(ctx->arguments());
    HochschildCochain out(ctx, arity, degree);
    for (auto const& t : window_tuples(*ctx, arity, window, false)) {
        Tuple full{one};
        full.insert(full.end(), t.begin(), t.end());
        full.push_back(one);
        out.set(t, bimodule_map(full));
    }
    return out;
}

HochschildCochain cup(HochschildCochain const& zeta, HochschildCochain const& eta, int window) {
    auto const& ctx = hochschild_context(zeta);
    if (&zeta.context() != &eta.context())
        throw InvalidInput("cup of cochains over different contexts");
    auto const& f = ctx.field();
    int m = zeta.arity(), j = eta.degree();
    bool norm = zeta.is_normalised() && eta.is_normalised();
    HochschildCochain out(zeta.context_ptr(), m + eta.arity(), zeta.degree() + j);
    for (auto const& t : window_tuples(ctx, out.arity(), window, norm)) {
        Tuple a(t.begin(), t.begin() + m), b(t.begin() + m, t.end());
        auto za = zeta.value(a);
        if (vec_is_zero(za))
            continue;
        auto eb = eta.value(b);
        if (vec_is_zero(eb))
            continue;
        int da = total_degree(a);
        auto v = ctx.values().multiply(da + zeta.degree(), za, total_degree(b) + j, eb);
        out.set(t, vec_scale(f, f.sign(static_cast<long long>(da) * j), std::move(v)));
    }
    return out;
}

Vec cup_tilde(HochschildCochain const& zeta, HochschildCochain const& eta, Tuple const& t) {
    auto const& ctx = hochschild_context(zeta);
    auto const& f = ctx.field();
    auto one = unit_ref(ctx.arguments());
    std::size_t m = static_cast<std::size_t>(zeta.arity());
    if (t.size() != m + static_cast<std::size_t>(eta.arity()) + 2)
        throw InvalidInput("cup_tilde: tuple length does not match the arities");
    Tuple left(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(m + 1));
    left.push_back(one);
    Tuple right{one};
    right.insert(right.end(), t.begin() + static_cast<std::ptrdiff_t>(m + 1), t.end());
    int dl = total_degree(left), dr = total_degree(right);
    auto v = ctx.values().multiply(dl + zeta.degree(), tilde(zeta, left), dr + eta.degree(), tilde(eta, right));
    return vec_scale(f, f.sign(static_cast<long long>(dl) * eta.degree()), std::move(v));
}

BarElement lift_diagonal(HochschildCochain const& eta, int p, Tuple const& t) {
    auto const& ctx = hochschild_context(eta);
    if (!ctx.identity_values())
        throw InvalidInput("liftings need cochains with values in the argument algebra");
    auto const& f = ctx.field();
    auto one = unit_ref(ctx.arguments());
    auto pp = static_cast<std::size_t>(p);
    if (t.size() != pp + static_cast<std::size_t>(eta.arity()) + 2)
        throw InvalidInput("lift_diagonal: tuple length does not match");
    Tuple right{one};
    right.insert(right.end(), t.begin() + static_cast<std::ptrdiff_t>(pp + 1), t.end());
    auto w = tilde(eta, right);
    std::vector<std::pair<int, Vec>> factors;
    int dl = 0;
    for (std::size_t i = 0; i <= pp; ++i) {
        factors.emplace_back(t[i].deg, unit_vec(f, ctx.arguments().dim(t[i].deg), t[i].idx));
        dl += t[i].deg;
    }
    factors.emplace_back(total_degree(right) + eta.degree(), w);
    auto b = bar_tensor(f, factors);
    auto s = f.sign(static_cast<long long>(eta.degree()) * dl);
    for (auto& [u, c] : b)
        c = f.mul(c, s);
    return b;
}

BarElement lift_shift(HochschildCochain const& zeta, int p, Tuple const& t) {
    auto const& ctx = hochschild_context(zeta);
    if (!ctx.identity_values())
        throw InvalidInput("liftings need cochains with values in the argument algebra");
    auto const& f = ctx.field();
    auto one = unit_ref(ctx.arguments());
    auto m = static_cast<std::size_t>(zeta.arity());
    if (t.size() != m + static_cast<std::size_t>(p) + 2)
        throw InvalidInput("lift_shift: tuple length does not match");
    Tuple left(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(m + 1));
    left.push_back(one);
    std::vector<std::pair<int, Vec>> factors;
    factors.emplace_back(total_degree(left) + zeta.degree(), tilde(zeta, left));
    for (std::size_t i = m + 1; i < t.size(); ++i)
        factors.emplace_back(t[i].deg, unit_vec(f, ctx.arguments().dim(t[i].deg), t[i].idx));
    auto b = bar_tensor(f, factors);
    auto s = f.sign(static_cast<long long>(m) * p);
    for (auto& [u, c] : b)
        c = f.mul(c, s);
    return b;
}

Vec yoneda_diagonal(HochschildCochain const& zeta, HochschildCochain const& eta, Tuple const& t) {
    auto b = lift_diagonal(eta, zeta.arity(), t);
    return tilde_sum(zeta, b, total_degree(t) + eta.degree());
}

Vec yoneda_shift(HochschildCochain const& eta, HochschildCochain const& zeta, Tuple const& t) {
    auto b = lift_shift(zeta, eta.arity(), t);
    return tilde_sum(eta, b, total_degree(t) + zeta.degree());
}

std::vector<Tuple> bar_tuples(GradedAlgebra const& r, int s, int window) {
    std::vector<Tuple> out;
    int lo = algebra_min_total(r, s + 2, false);
    for (int t = lo; t <= window; ++t)
        for (auto& u : algebra_tuples(r, s + 2, t, false))
            out.push_back(std::move(u));
    return out;
}

HochschildCochain push_forward(HochschildCochain const& zeta, std::shared_ptr<HochschildContext const> target,
                               int window) {
    auto const& src = hochschild_context(zeta);
    if (&src.arguments() != &target->arguments() || !src.identity_values())
        throw InvalidInput("push_forward: the cochain must take values in the argument algebra");
    auto const& f = target->field();
    HochschildCochain out(target, zeta.arity(), zeta.degree());
    for (auto const& [t, v] : zeta.entries()) {
        if (total_degree(t) > window)
            continue;
        int d = total_degree(t) + zeta.degree();
        Vec w = zero_vec(f, target->value_dim(d));
        for (std::uint32_t c = 0; c < v.size(); ++c)
            if (v[c] != 0)
                vec_axpy(f, w, v[c], target->can({d, c}));
        out.set(t, std::move(w));
    }
    return out;
}

HochschildCochain pull_back(HochschildCochain const& psi, std::shared_ptr<HochschildContext const> target,
                            int window) {
    auto const& src = hochschild_context(psi);
    if (&src.arguments() != &target->values())
        throw InvalidInput("pull_back: the cochain must be over the target algebra");
    auto const& f = target->field();
    bool norm = psi.is_normalised();
    HochschildCochain out(target, psi.arity(), psi.degree());
    for (auto const& t : window_tuples(*target, psi.arity(), window, norm)) {
        std::vector<std::pair<int, Vec>> factors;
        for (auto const& b : t)
            factors.emplace_back(b.deg, target->can(b));
        Vec v = zero_vec(f, target->value_dim(total_degree(t) + psi.degree()));
        for (auto const& [u, c] : bar_tensor(f, factors))
            vec_axpy(f, v, c, psi.value(u));
        out.set(t, std::move(v));
    }
    return out;
}

HochschildCochain cup_pairing(HochschildCochain const& phi, std::shared_ptr<ModuleContext const> ctx,
                              std::function<Vec(BasisRef)> const& fmap, int window) {
    auto const& src = hochschild_context(phi);
    if (&src.arguments() != &ctx->arguments() || !src.identity_values())
        throw InvalidInput("cup_pairing: cochain and module live over different algebras");
    auto const& f = ctx->field();
    bool norm = phi.is_normalised();
    HochschildCochain out(ctx, phi.arity(), phi.degree());
    for (auto const& t : window_tuples(*ctx, phi.arity(), window, norm)) {
        Tuple args(t.begin(), t.end() - 1);
        auto w = phi.value(args);
        if (vec_is_zero(w))
            continue;
        auto x = t.back();
        auto fx = fmap(x);
        int dw = total_degree(args) + phi.degree();
        Vec v = zero_vec(f, out.value_dim(t));
        for (std::uint32_t c = 0; c < w.size(); ++c)
            if (w[c] != 0)
                vec_axpy(f, v, w[c], ctx->act_left({dw, c}, x.deg, fx));
        out.set(t, std::move(v));
    }
    return out;
}

std::optional<BasisRef> find_label(GradedAlgebra const& a, std::string const& label, int lo, int hi) {
    for (int d = lo; d <= hi; ++d) {
        if (!a.in_window(d))
            continue;
        for (std::uint32_t i = 0; i < a.dim_or_zero(d); ++i)
            if (a.label({d, i}) == label)
                return BasisRef{d, i};
    }
    return std::nullopt;
}

namespace {

std::optional<BasisRef> find_module_label(LeftModule const& m, std::string const& label) {
    for (int d = m.window_lo(); d <= m.window_hi(); ++d)
        for (std::uint32_t i = 0; i < m.dim(d); ++i)
            if (m.label({d, i}) == label)
                return BasisRef{d, i};
    return std::nullopt;
}

} // namespace

nlohmann::json cochain_to_json(HochschildCochain const& c) {
    auto const& ctx = c.context();
    auto const& f = ctx.field();
    nlohmann::json j;
    j["arity"] = c.arity();
    j["degree"] = c.degree();
    j["entries"] = nlohmann::json::array();
    for (auto const& [t, v] : c.entries()) {
        nlohmann::json args = nlohmann::json::array();
        std::size_t n = ctx.trailing() ? t.size() - 1 : t.size();
        for (std::size_t i = 0; i < n; ++i)
            args.push_back(ctx.arguments().label(t[i]));
        nlohmann::json val = nlohmann::json::object();
        int d = total_degree(t) + c.degree();
        for (std::uint32_t k = 0; k < v.size(); ++k)
            if (v[k] != 0)
                val[ctx.value_label({d, k})] = f.to_signed(v[k]);
        nlohmann::json e{{"args", args}, {"value", val}};
        if (ctx.trailing()) {
            auto const& mc = dynamic_cast<ModuleContext const&>(ctx);
            e["x"] = mc.source().label(t.back());
        }
        j["entries"].push_back(std::move(e));
    }
    return j;
}

HochschildCochain cochain_from_json(nlohmann::json const& j, std::shared_ptr<CochainContext const> ctx) {
    try {
        auto const& f = ctx->field();
        auto const& r = ctx->arguments();
        int lo = r.bounded_below() ? r.window_lo() : -r.window_hi();
        HochschildCochain c(ctx, j.at("arity").get<int>(), j.at("degree").get<int>());
        for (auto const& e : j.at("entries")) {
            Tuple t;
            for (auto const& a : e.at("args")) {
                auto b = find_label(r, a.get<std::string>(), lo, r.window_hi());
                if (!b)
                    throw InvalidInput("unknown argument label '" + a.get<std::string>() + "'");
                t.push_back(*b);
            }
            if (static_cast<int>(t.size()) != c.arity())
                throw InvalidInput("cochain entry has the wrong arity");
            if (ctx->trailing()) {
                auto const& mc = dynamic_cast<ModuleContext const&>(*ctx);
                auto x = find_module_label(mc.source(), e.at("x").get<std::string>());
                if (!x)
                    throw InvalidInput("unknown module label '" + e.at("x").get<std::string>() + "'");
                t.push_back(*x);
            }
            int d = total_degree(t) + c.degree();
            Vec v = zero_vec(f, ctx->value_dim(d));
            for (auto const& [label, coeff] : e.at("value").items()) {
                bool found = false;
                for (std::uint32_t k = 0; k < v.size() && !found; ++k)
                    if (ctx->value_label({d, k}) == label) {
                        v[k] = f.add(v[k], f.from_int(coeff.get<long long>()));
                        found = true;
                    }
                if (!found)
                    throw InvalidInput("unknown value label '" + label + "' in degree " + std::to_string(d));
            }
            c.add(t, 1, v);
        }
        return c;
    } catch (nlohmann::json::exception const& e) {
        throw InvalidInput(std::string("cochain: ") + e.what());
    }
}

nlohmann::json verdict_to_json(ObstructionVerdict const& v) {
    nlohmann::json j;
    j["verdict"] = to_string(v.kind);
    j["windows"] = v.windows;
    j["systems"] = nlohmann::json::array();
    for (auto const& s : v.stats)
        j["systems"].push_back(
            {{"window", s.window}, {"rows", s.rows}, {"cols", s.cols}, {"rank", s.rank}, {"consistent", s.consistent}});
    j["witness"] = v.witness ? cochain_to_json(*v.witness) : nlohmann::json(nullptr);
    if (!v.note.empty())
        j["note"] = v.note;
    return j;
}

} // namespace obstruct
