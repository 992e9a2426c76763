#include "obstruct/graded.hpp"

#include <sstream>

namespace obstruct {

Vec zero_vec(PrimeField const& f, std::size_t n) { return Vec(n, f.zero()); }

Vec unit_vec(PrimeField const& f, std::size_t n, std::size_t i) {
    Vec v(n, f.zero());
    v.at(i) = f.one();
    return v;
}

bool vec_is_zero(Vec const& v) {
    for (auto e : v)
        if (e != 0)
            return false;
    return true;
}

void vec_axpy(PrimeField const& f, Vec& y, PrimeField::Elem a, Vec const& x) {
    if (a == 0)
        return;
    if (y.size() != x.size())
        throw InvalidInput("vector length mismatch");
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] != 0)
            y[i] = f.add(y[i], f.mul(a, x[i]));
}

Vec vec_scale(PrimeField const& f, PrimeField::Elem a, Vec v) {
    for (auto& e : v)
        e = f.mul(a, e);
    return v;
}

Vec vec_sub(PrimeField const& f, Vec a, Vec const& b) {
    vec_axpy(f, a, f.neg(1), b);
    return a;
}

Vec vec_add(PrimeField const& f, Vec a, Vec const& b) {
    vec_axpy(f, a, 1, b);
    return a;
}

Vec kron(PrimeField const& f, Vec const& a, Vec const& b) {
    Vec out(a.size() * b.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0)
            continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            out[i * b.size() + j] = f.mul(a[i], b[j]);
    }
    return out;
}

void GradedAlgebra::require_window(int d, char const* what) const {
    if (!in_window(d))
        throw WindowOverflow(std::string(what) + ": degree " + std::to_string(d) + " outside window [" +
                             std::to_string(window_lo()) + ", " + std::to_string(window_hi()) + "]");
}

void GradedAlgebra::accumulate_product(BasisRef a, BasisRef b, PrimeField::Elem c, Vec& out) const {
    vec_axpy(field(), out, c, multiply_basis(a, b));
}

std::size_t GradedAlgebra::dim_or_zero(int d) const {
    if ((bounded_below() && d < window_lo()) || (finite() && d > window_hi()))
        return 0;
    return dim(d);
}

Vec GradedAlgebra::multiply(int da, Vec const& a, int db, Vec const& b) const {
    require_window(da + db, "multiply");
    auto const& f = field();
    Vec out = zero_vec(f, dim_or_zero(da + db));
    if (out.empty())
        return out;
    for (std::uint32_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0)
            continue;
        for (std::uint32_t j = 0; j < b.size(); ++j) {
            if (b[j] == 0)
                continue;
            accumulate_product({da, i}, {db, j}, f.mul(a[i], b[j]), out);
        }
    }
    return out;
}

Vec GradedAlgebra::left_multiply(BasisRef a, int db, Vec const& b) const {
    require_window(a.deg + db, "multiply");
    Vec out = zero_vec(field(), dim_or_zero(a.deg + db));
    if (out.empty())
        return out;
    for (std::uint32_t j = 0; j < b.size(); ++j)
        if (b[j] != 0)
            accumulate_product(a, {db, j}, b[j], out);
    return out;
}

Vec GradedAlgebra::right_multiply(int da, Vec const& a, BasisRef b) const {
    require_window(da + b.deg, "multiply");
    Vec out = zero_vec(field(), dim_or_zero(da + b.deg));
    if (out.empty())
        return out;
    for (std::uint32_t i = 0; i < a.size(); ++i)
        if (a[i] != 0)
            accumulate_product({da, i}, b, a[i], out);
    return out;
}

Vec GradedAlgebra::unit() const {
    auto u = unit_index();
    if (!u)
        return zero_vec(field(), dim_or_zero(0));
    return unit_vec(field(), dim(0), *u);
}

bool GradedAlgebra::is_unit(BasisRef a) const {
    if (a.deg != 0)
        return false;
    auto u = unit_index();
    return u && *u == a.idx;
}

GradedVectorSpace GradedAlgebra::space() const {
    GradedVectorSpace s;
    s.lo = window_lo();
    s.hi = window_hi();
    for (int d = s.lo; d <= s.hi; ++d) {
        std::vector<std::string> labels;
        for (std::uint32_t i = 0; i < dim(d); ++i)
            labels.push_back(label({d, i}));
        s.labels.push_back(std::move(labels));
    }
    return s;
}

std::string GradedAlgebra::format(int d, Vec const& v) const {
    std::ostringstream os;
    bool first = true;
    auto const& f = field();
    for (std::uint32_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0)
            continue;
        auto c = f.to_signed(v[i]);
        if (!first)
            os << (c < 0 ? " - " : " + ");
        else if (c < 0)
            os << "-";
        auto a = c < 0 ? -c : c;
        if (a != 1)
            os << a << "*";
        os << label({d, i});
        first = false;
    }
    if (first)
        os << "0";
    return os.str();
}

namespace {

template <class Fn> void for_each_basis_upto(GradedAlgebra const& a, int lo, int hi, Fn&& fn) {
    for (int d = std::max(lo, a.window_lo()); d <= std::min(hi, a.window_hi()); ++d)
        for (std::uint32_t i = 0; i < a.dim(d); ++i)
            fn(BasisRef{d, i});
}

} // namespace

std::vector<std::string> check_associativity(GradedAlgebra const& a, int max_total) {
    std::vector<std::string> bad;
    int lo = a.window_lo();
    int hi = a.window_hi();
    for_each_basis_upto(a, lo, hi, [&](BasisRef x) {
        for_each_basis_upto(a, lo, hi, [&](BasisRef y) {
            if (!a.in_window(x.deg + y.deg))
                return;
            for_each_basis_upto(a, lo, hi, [&](BasisRef z) {
                int t = x.deg + y.deg + z.deg;
                if (t > max_total || !a.in_window(t) || !a.in_window(y.deg + z.deg))
                    return;
                auto xy = a.multiply_basis(x, y);
                auto lhs = a.right_multiply(x.deg + y.deg, xy, z);
                auto yz = a.multiply_basis(y, z);
                auto rhs = a.left_multiply(x, y.deg + z.deg, yz);
                if (lhs != rhs)
                    bad.push_back("(" + a.label(x) + "*" + a.label(y) + ")*" + a.label(z));
            });
        });
    });
    return bad;
}

std::vector<std::string> check_unit(GradedAlgebra const& a, int max_deg) {
    std::vector<std::string> bad;
    auto one = a.unit();
    if (vec_is_zero(one))
        return bad;
    for_each_basis_upto(a, a.window_lo(), max_deg, [&](BasisRef x) {
        auto e = unit_vec(a.field(), a.dim(x.deg), x.idx);
        if (a.left_multiply(x, 0, one) != e || a.right_multiply(0, one, x) != e)
            bad.push_back(a.label(x));
    });
    return bad;
}

std::vector<std::string> check_graded_commutativity(GradedAlgebra const& a, int max_total) {
    std::vector<std::string> bad;
    auto const& f = a.field();
    for_each_basis_upto(a, a.window_lo(), a.window_hi(), [&](BasisRef x) {
        for_each_basis_upto(a, a.window_lo(), a.window_hi(), [&](BasisRef y) {
            int t = x.deg + y.deg;
            if (t > max_total || !a.in_window(t))
                return;
            auto xy = a.multiply_basis(x, y);
            auto yx = a.multiply_basis(y, x);
            if (xy != vec_scale(f, f.sign(static_cast<long long>(x.deg) * y.deg), yx))
                bad.push_back(a.label(x) + "," + a.label(y));
        });
    });
    return bad;
}

void GradedMap::set(int source_deg, FpMatrix m) {
    blocks_.erase(source_deg);
    blocks_.emplace(source_deg, std::move(m));
}

FpMatrix const& GradedMap::at(int source_deg) const {
    auto it = blocks_.find(source_deg);
    if (it == blocks_.end())
        throw WindowOverflow("graded map undefined in degree " + std::to_string(source_deg));
    return it->second;
}

Vec GradedMap::apply(int source_deg, Vec const& v) const { return at(source_deg).apply(v); }

GradedMap GradedMap::compose(GradedMap const& g) const {
    GradedMap out(field_, degree_ + g.degree_);
    for (auto const& [d, m] : g.blocks_) {
        auto it = blocks_.find(d + g.degree_);
        if (it != blocks_.end())
            out.set(d, it->second * m);
    }
    return out;
}

GradedMap GradedMap::identity(GradedVectorSpace const& space, PrimeField field) {
    GradedMap id(field, 0);
    for (int d = space.lo; d <= space.hi; ++d)
        id.set(d, FpMatrix::identity(field, space.dim(d)));
    return id;
}

HomogeneousTensor tensor_map(GradedMap const& f, GradedMap const& g, HomogeneousTensor const& t) {
    auto const& field = f.field();
    auto const& fm = f.at(t.left_deg);
    auto const& gm = g.at(t.right_deg);
    if (fm.cols() != t.left_dim || gm.cols() != t.right_dim || t.coeffs.size() != t.left_dim * t.right_dim)
        throw InvalidInput("tensor_map: dimension mismatch");
    HomogeneousTensor out;
    out.left_deg = t.left_deg + f.degree();
    out.right_deg = t.right_deg + g.degree();
    out.left_dim = fm.rows();
    out.right_dim = gm.rows();
    out.coeffs.assign(out.left_dim * out.right_dim, 0);
    auto sign = field.sign(static_cast<long long>(g.degree()) * t.left_deg);
    for (std::size_t i = 0; i < t.left_dim; ++i)
        for (std::size_t j = 0; j < t.right_dim; ++j) {
            auto c = t.coeffs[i * t.right_dim + j];
            if (c == 0)
                continue;
            auto fi = fm.column(i);
            auto gj = gm.column(j);
            vec_axpy(field, out.coeffs, field.mul(sign, c), kron(field, fi, gj));
        }
    return out;
}

Vec AlgebraMap::apply(int d, Vec const& v) const {
    auto const& f = target_->field();
    Vec out = zero_vec(f, target_->dim(d));
    for (std::uint32_t i = 0; i < v.size(); ++i)
        if (v[i] != 0)
            vec_axpy(f, out, v[i], fn_({d, i}));
    return out;
}

Vec ShiftedBimodule::act_left(BasisRef a, int d, Vec const& m) const {
    auto const& f = field();
    return vec_scale(f, f.sign(static_cast<long long>(t_) * a.deg), m_->act_left(a, d + t_, m));
}

std::string ShiftedBimodule::label(BasisRef m) const {
    return "S^" + std::to_string(t_) + "(" + m_->label({m.deg + t_, m.idx}) + ")";
}

Vec RestrictedBimodule::act_left(BasisRef a, int d, Vec const& m) const {
    auto image = map_->apply_basis(a);
    auto const& f = field();
    Vec out = zero_vec(f, dim(a.deg + d));
    for (std::uint32_t i = 0; i < image.size(); ++i)
        if (image[i] != 0)
            vec_axpy(f, out, image[i], m_->act_left({a.deg, i}, d, m));
    return out;
}

Vec RestrictedBimodule::act_right(int d, Vec const& m, BasisRef a) const {
    auto image = map_->apply_basis(a);
    auto const& f = field();
    Vec out = zero_vec(f, dim(a.deg + d));
    for (std::uint32_t i = 0; i < image.size(); ++i)
        if (image[i] != 0)
            vec_axpy(f, out, image[i], m_->act_right(d, m, {a.deg, i}));
    return out;
}

Vec RestrictedModule::act(BasisRef a, int d, Vec const& x) const {
    auto image = map_->apply_basis(a);
    auto const& f = field();
    Vec out = zero_vec(f, m_->dim(a.deg + d));
    for (std::uint32_t i = 0; i < image.size(); ++i)
        if (image[i] != 0)
            vec_axpy(f, out, image[i], m_->act({a.deg, i}, d, x));
    return out;
}

} // namespace obstruct
