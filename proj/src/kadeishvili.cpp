#include "obstruct/kadeishvili.hpp"

#include <algorithm>
#include <random>

namespace obstruct {

AInfinityTransfer::AInfinityTransfer(std::shared_ptr<DgAlgebra const> a, std::shared_ptr<GradedAlgebra const> lambda,
                                     std::map<int, std::vector<Vec>> reps, int lo, int hi)
    : a_(std::move(a)), lambda_(std::move(lambda)), reps_(std::move(reps)), lo_(lo), hi_(hi),
      h_(*a_, lo, hi, reps_) {
    if (!(a_->field() == lambda_->field()))
        throw InvalidInput("transfer between different fields");
    for (int n = lo; n <= hi; ++n) {
        auto want = lambda_->dim_or_zero(n);
        auto it = reps_.find(n);
        std::size_t given = it == reps_.end() ? 0 : it->second.size();
        if (given != want || h_.dim(n) != want)
            throw InvalidInput("cohomology in degree " + std::to_string(n) + " has dimension " +
                               std::to_string(h_.dim(n)) + ", expected " + std::to_string(want));
    }
    if (lo <= 0 && hi >= 0) {
        auto u = lambda_->unit_index();
        if (!u || reps_.at(0).at(*u) != a_->unit())
            throw InvalidInput("the cycle selection must send the unit to the unit");
    }
}

Vec AInfinityTransfer::f1(BasisRef x) const {
    if (x.deg < lo_ || x.deg > hi_)
        throw WindowOverflow("cycle selection outside [" + std::to_string(lo_) + ", " + std::to_string(hi_) + "]");
    return reps_.at(x.deg).at(x.idx);
}

Vec AInfinityTransfer::f1(int d, Vec const& v) const {
    Vec out = zero_vec(a_->field(), a_->dim_or_zero(d));
    for (std::uint32_t i = 0; i < v.size(); ++i)
        if (v[i] != 0)
            vec_axpy(a_->field(), out, v[i], f1({d, i}));
    return out;
}

Vec AInfinityTransfer::f2(BasisRef x, BasisRef y) const {
    {
        std::lock_guard lock(mu_);
        auto it = f2_cache_.find({x, y});
        if (it != f2_cache_.end())
            return it->second;
    }
    auto const& f = a_->field();
    int d = x.deg + y.deg;
    auto defect = f1(d, lambda_->multiply_basis(x, y));
    vec_axpy(f, defect, f.neg(1), a_->multiply(x.deg, f1(x), y.deg, f1(y)));
    Vec out;
    if (vec_is_zero(defect)) {
        out = zero_vec(f, a_->dim_or_zero(d - 1));
    } else {
        auto pre = h_.boundary_preimage(d, defect);
        if (!pre)
            throw NotACocycle("f1(xy) - f1(x)f1(y) is not a boundary for " + lambda_->label(x) + ", " +
                              lambda_->label(y));
        out = std::move(*pre);
    }
    std::lock_guard lock(mu_);
    f2_cache_.emplace(std::pair{x, y}, out);
    return out;
}

Vec AInfinityTransfer::f2(int dx, Vec const& x, BasisRef y) const {
    Vec out = zero_vec(a_->field(), a_->dim_or_zero(dx + y.deg - 1));
    for (std::uint32_t i = 0; i < x.size(); ++i)
        if (x[i] != 0)
            vec_axpy(a_->field(), out, x[i], f2({dx, i}, y));
    return out;
}

Vec AInfinityTransfer::f2(BasisRef x, int dy, Vec const& y) const {
    Vec out = zero_vec(a_->field(), a_->dim_or_zero(x.deg + dy - 1));
    for (std::uint32_t i = 0; i < y.size(); ++i)
        if (y[i] != 0)
            vec_axpy(a_->field(), out, y[i], f2(x, {dy, i}));
    return out;
}

Vec AInfinityTransfer::phi3(BasisRef a, BasisRef b, BasisRef c) const {
    auto const& f = a_->field();
    auto const& l = *lambda_;
    auto out = vec_scale(f, f.sign(a.deg), a_->multiply(a.deg, f1(a), b.deg + c.deg - 1, f2(b, c)));
    vec_axpy(f, out, f.neg(1), a_->multiply(a.deg + b.deg - 1, f2(a, b), c.deg, f1(c)));
    vec_axpy(f, out, f.neg(1), f2(a.deg + b.deg, l.multiply_basis(a, b), c));
    vec_axpy(f, out, 1, f2(a, b.deg + c.deg, l.multiply_basis(b, c)));
    return out;
}

Vec AInfinityTransfer::m3(BasisRef a, BasisRef b, BasisRef c) const {
    return h_.project(a.deg + b.deg + c.deg - 1, phi3(a, b, c));
}

HochschildCochain AInfinityTransfer::m3_cochain(std::shared_ptr<HochschildContext const> ctx, int window) const {
    if (&ctx->arguments() != lambda_.get() || !ctx->identity_values())
        throw InvalidInput("m3 lives in the Hochschild complex of the cohomology algebra");
    HochschildCochain out(ctx, 3, -1);
    auto const& l = *lambda_;
    for (auto const& t : window_tuples(*ctx, 3, window, true)) {
        int d = total_degree(t) - 1;
        if (l.finite() && (d < l.window_lo() || d > l.window_hi()))
            continue;
        if (d < lo_ || d > hi_)
            throw WindowOverflow("m3 value in degree " + std::to_string(d) + " outside the transfer window [" +
                                 std::to_string(lo_) + ", " + std::to_string(hi_) + "]");
        out.set(t, m3(t[0], t[1], t[2]));
    }
    return out;
}

std::vector<std::string> AInfinityTransfer::product_defects(int max_total) const {
    std::vector<std::string> out;
    auto const& l = *lambda_;
    for (int d1 = lo_; d1 <= hi_; ++d1)
        for (int d2 = lo_; d2 <= hi_ && d1 + d2 <= std::min(max_total, hi_); ++d2) {
            if (d1 + d2 < lo_)
                continue;
            for (std::uint32_t i = 0; i < l.dim_or_zero(d1); ++i)
                for (std::uint32_t j = 0; j < l.dim_or_zero(d2); ++j) {
                    BasisRef x{d1, i}, y{d2, j};
                    auto got = h_.project(d1 + d2, a_->multiply(d1, f1(x), d2, f1(y)));
                    if (got != l.multiply_basis(x, y))
                        out.push_back(l.label(x) + " * " + l.label(y));
                }
        }
    return out;
}

std::vector<std::string> AInfinityTransfer::homotopy_defects(int max_total) const {
    std::vector<std::string> out;
    auto const& f = a_->field();
    auto const& l = *lambda_;
    for (int d1 = lo_; d1 <= hi_; ++d1)
        for (int d2 = lo_; d2 <= hi_ && d1 + d2 <= std::min(max_total, hi_); ++d2) {
            if (d1 + d2 < lo_)
                continue;
            for (std::uint32_t i = 0; i < l.dim_or_zero(d1); ++i)
                for (std::uint32_t j = 0; j < l.dim_or_zero(d2); ++j) {
                    BasisRef x{d1, i}, y{d2, j};
                    auto want = f1(d1 + d2, l.multiply_basis(x, y));
                    vec_axpy(f, want, f.neg(1), a_->multiply(d1, f1(x), d2, f1(y)));
                    if (a_->apply_d(d1 + d2 - 1, f2(x, y)) != want)
                        out.push_back(l.label(x) + ", " + l.label(y));
                }
        }
    return out;
}

CohomologyModel cohomology_model(DgAlgebra const& a, int lo, int hi) {
    auto const& f = a.field();
    lo = std::min(std::max(lo, a.window_lo()), 0);
    Cohomology h(a, lo, hi);
    CohomologyModel out;
    std::vector<std::vector<std::string>> labels;
    for (int n = lo; n <= hi; ++n) {
        std::vector<Vec> reps;
        for (std::size_t i = 0; i < h.dim(n); ++i)
            reps.push_back(h.representative(n, i));
        if (n == 0) {
            auto c = h.project(0, a.unit());
            auto k = std::find_if(c.begin(), c.end(), [](auto x) { return x != 0; });
            if (k == c.end())
                throw InvalidInput("the unit of the dg algebra is a boundary");
            reps.erase(reps.begin() + (k - c.begin()));
            reps.insert(reps.begin(), a.unit());
        }
        std::vector<std::string> names;
        for (std::size_t i = 0; i < reps.size(); ++i)
            names.push_back(n == 0 && i == 0 ? "1" : "h" + std::to_string(n) + "_" + std::to_string(i));
        labels.push_back(std::move(names));
        out.reps[n] = std::move(reps);
    }
    Cohomology hr(a, lo, hi, out.reps);
    auto t = std::make_shared<TableAlgebra>(f, lo, labels, std::optional<std::uint32_t>(0));
    for (int d1 = lo; d1 <= hi; ++d1)
        for (int d2 = lo; d2 <= hi; ++d2) {
            int d = d1 + d2;
            if (d < lo || d > hi)
                continue;
            for (std::uint32_t i = 0; i < out.reps[d1].size(); ++i)
                for (std::uint32_t j = 0; j < out.reps[d2].size(); ++j)
                    t->set_product({d1, i}, {d2, j},
                                   hr.project(d, a.multiply(d1, out.reps[d1][i], d2, out.reps[d2][j])));
        }
    out.algebra = t;
    return out;
}

std::shared_ptr<AInfinityTransfer> canonical_transfer(std::shared_ptr<DgAlgebra const> a, int lo, int hi) {
    auto model = cohomology_model(*a, lo, hi);
    int l = std::min(std::max(lo, a->window_lo()), 0);
    return std::make_shared<AInfinityTransfer>(a, model.algebra, model.reps, l, hi);
}

std::shared_ptr<AInfinityTransfer> perturbed_transfer(AInfinityTransfer const& t, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto const& a = t.source();
    auto const& f = a.field();
    auto const& l = *t.cohomology_algebra();
    std::map<int, std::vector<Vec>> reps;
    for (int d = t.lo(); d <= t.hi(); ++d)
        for (std::uint32_t i = 0; i < l.dim_or_zero(d); ++i) {
            auto z = t.f1({d, i});
            if (!l.is_unit({d, i})) {
                Vec h(a.dim_or_zero(d - 1));
                for (auto& c : h)
                    c = static_cast<PrimeField::Elem>(rng() % f.characteristic());
                vec_axpy(f, z, 1, a.apply_d(d - 1, h));
            }
            reps[d].push_back(std::move(z));
        }
    return std::make_shared<AInfinityTransfer>(t.source_ptr(), t.cohomology_algebra(), std::move(reps), t.lo(), t.hi());
}

bool verify_m3_cocycle(HochschildCochain const& m3, int window) { return delta(m3, window).is_zero(); }

HochschildCochain kunneth_m3(HochschildCochain const& ma, HochschildCochain const& mb,
                             std::shared_ptr<HochschildContext const> ctx, int window) {
    auto const* t = dynamic_cast<TensorAlgebra const*>(&ctx->arguments());
    if (!t || !ctx->identity_values())
        throw InvalidInput("the Kunneth cochain lives over a tensor algebra");
    if (&t->left() != &ma.context().arguments() || &t->right() != &mb.context().arguments())
        throw InvalidInput("the tensor factors do not match the input cochains");
    if (ma.arity() != 3 || mb.arity() != 3 || ma.degree() != -1 || mb.degree() != -1)
        throw InvalidInput("Kunneth combination expects two (3, -1)-cochains");
    auto const& f = ctx->field();
    auto const& a = t->left();
    auto const& b = t->right();
    HochschildCochain out(ctx, 3, -1);
    for (auto const& tu : window_tuples(*ctx, 3, window, true)) {
        auto [x1, y1] = t->split(tu[0]);
        auto [x2, y2] = t->split(tu[1]);
        auto [x3, y3] = t->split(tu[2]);
        Vec v = zero_vec(f, out.value_dim(tu));
        Tuple xs{x1, x2, x3}, ys{y1, y2, y3};
        int dx = total_degree(xs), dy = total_degree(ys);
        auto mx = ma.value(xs);
        if (!vec_is_zero(mx)) {
            auto yy = b.multiply(y1.deg + y2.deg, b.multiply_basis(y1, y2), y3.deg, unit_vec(f, b.dim(y3.deg), y3.idx));
            long long e = static_cast<long long>(x3.deg) * y1.deg + static_cast<long long>(x3.deg) * y2.deg +
                          static_cast<long long>(x2.deg) * y1.deg;
            vec_axpy(f, v, f.sign(e), t->tensor(dx - 1, mx, dy, yy));
        }
        auto my = mb.value(ys);
        if (!vec_is_zero(my)) {
            auto xx = a.multiply(x1.deg + x2.deg, a.multiply_basis(x1, x2), x3.deg, unit_vec(f, a.dim(x3.deg), x3.idx));
            vec_axpy(f, v, 1, t->tensor(dx, xx, dy - 1, my));
        }
        out.set(tu, std::move(v));
    }
    return out;
}

nlohmann::json m3_to_json(HochschildCochain const& m3) { return cochain_to_json(m3); }

} // namespace obstruct
