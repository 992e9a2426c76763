#include "obstruct/dgcore.hpp"

#include <algorithm>
#include <sstream>

namespace obstruct {

Vec to_dense(PrimeField const& f, SparseVec const& s, std::size_t n) {
    Vec v(n, 0);
    for (auto [i, c] : s)
        v.at(i) = f.add(v[i], c);
    return v;
}

SparseVec to_sparse(Vec const& v) {
    SparseVec s;
    for (std::uint32_t i = 0; i < v.size(); ++i)
        if (v[i] != 0)
            s.emplace_back(i, v[i]);
    return s;
}

FpMatrix Complex::differential(int n) const {
    auto const& f = field();
    std::size_t src = degree_dim(n), tgt = degree_dim(n + 1);
    FpMatrix m(f, tgt, src);
    if (tgt == 0)
        return m;
    for (std::uint32_t j = 0; j < src; ++j)
        for (auto [i, c] : d_basis({n, j}))
            m(i, j) = f.add(m(i, j), c);
    return m;
}

Vec Complex::apply_d(int n, Vec const& v) const {
    auto const& f = field();
    Vec out(degree_dim(n + 1), 0);
    if (out.empty())
        return out;
    for (std::uint32_t j = 0; j < v.size(); ++j)
        if (v[j] != 0)
            for (auto [i, c] : d_basis({n, j}))
                out[i] = f.add(out[i], f.mul(v[j], c));
    return out;
}

CochainComplex::CochainComplex(PrimeField field, int lo, std::vector<std::size_t> dims)
    : field_(field), lo_(lo), dims_(std::move(dims)) {}

void CochainComplex::set_differential(int n, FpMatrix d) {
    if (d.rows() != degree_dim(n + 1) || d.cols() != degree_dim(n))
        throw InvalidInput("differential in degree " + std::to_string(n) + " has the wrong shape");
    d_.erase(n);
    d_.emplace(n, std::move(d));
}

std::size_t CochainComplex::degree_dim(int n) const {
    if (n < lo_ || n > hi())
        return 0;
    return dims_[static_cast<std::size_t>(n - lo_)];
}

SparseVec CochainComplex::d_basis(BasisRef x) const {
    auto it = d_.find(x.deg);
    if (it == d_.end())
        return {};
    return to_sparse(it->second.column(x.idx));
}

std::vector<std::string> check_d_squared(Complex const& c, int lo, int hi) {
    std::vector<std::string> bad;
    for (int n = lo; n <= hi; ++n) {
        auto dd = c.differential(n + 1) * c.differential(n);
        if (!dd.is_zero())
            bad.push_back("d^2 != 0 in degree " + std::to_string(n));
    }
    return bad;
}

std::optional<std::vector<std::uint32_t>> DgAlgebra::left_partners(BasisRef, int, int) const { return std::nullopt; }

void DgAlgebra::accumulate_sparse(BasisRef x, BasisRef y, PrimeField::Elem c, SparseVec& out) const {
    if (c == 0 || dim_or_zero(x.deg + y.deg) == 0)
        return;
    Vec v(dim(x.deg + y.deg), 0);
    accumulate_product(x, y, c, v);
    for (std::uint32_t i = 0; i < v.size(); ++i)
        if (v[i] != 0)
            out.emplace_back(i, v[i]);
}

namespace {

/// Sparse accumulator; `v` is the normal form (sorted, no zeros) after `normalise`.
struct Acc {
    PrimeField const& f;
    SparseVec v;
    explicit Acc(PrimeField const& field) : f(field) {}
    void add(SparseVec const& s, PrimeField::Elem c) {
        if (c == 0)
            return;
        for (auto [i, x] : s)
            v.emplace_back(i, f.mul(c, x));
    }
    void add_product(DgAlgebra const& a, BasisRef x, BasisRef y, PrimeField::Elem c) {
        a.accumulate_sparse(x, y, c, v);
    }
    SparseVec const& normalise() {
        std::sort(v.begin(), v.end(), [](auto const& a, auto const& b) { return a.first < b.first; });
        std::size_t n = 0;
        for (std::size_t k = 0; k < v.size(); ++k) {
            if (n > 0 && v[n - 1].first == v[k].first)
                v[n - 1].second = f.add(v[n - 1].second, v[k].second);
            else
                v[n++] = v[k];
            if (v[n - 1].second == 0)
                --n;
        }
        v.resize(n);
        return v;
    }
    bool operator!=(Acc& o) { return normalise() != o.normalise(); }
};

SparseVec product_sparse(DgAlgebra const& a, BasisRef x, BasisRef y) {
    SparseVec out;
    a.accumulate_sparse(x, y, 1, out);
    return out;
}

std::vector<std::uint32_t> partners_or_all(DgAlgebra const& a, BasisRef right, int left_deg, int slack) {
    auto p = a.left_partners(right, left_deg, slack);
    if (p)
        return *p;
    std::vector<std::uint32_t> all(a.dim_or_zero(left_deg));
    for (std::uint32_t i = 0; i < all.size(); ++i)
        all[i] = i;
    return all;
}

} // namespace

std::vector<std::string> check_leibniz(DgAlgebra const& a, int lo, int hi) {
    std::vector<std::string> bad;
    auto const& f = a.field();
    lo = std::max(lo, a.window_lo());
    hi = std::min(hi, a.window_hi());
    for (int dy = lo; dy <= hi; ++dy)
        for (std::uint32_t iy = 0; iy < a.dim(dy); ++iy) {
            BasisRef y{dy, iy};
            auto dy_vec = a.d_basis(y);
            for (int dx = lo; dx <= hi; ++dx) {
                int t = dx + dy;
                if (t < lo || t > hi || a.dim_or_zero(t + 1) == 0)
                    continue;
                for (auto ix : partners_or_all(a, y, dx, 1)) {
                    BasisRef x{dx, ix};
                    Acc lhs(f);
                    for (auto [k, c] : product_sparse(a, x, y))
                        lhs.add(a.d_basis({t, k}), c);
                    Acc rhs(f);
                    for (auto [k, c] : a.d_basis(x))
                        rhs.add(product_sparse(a, {dx + 1, k}, y), c);
                    auto s = f.sign(dx);
                    for (auto [k, c] : dy_vec)
                        rhs.add(product_sparse(a, x, {dy + 1, k}), f.mul(s, c));
                    if (lhs != rhs)
                        bad.push_back(a.label(x) + " * " + a.label(y));
                }
            }
        }
    return bad;
}

std::vector<std::string> check_dga_associativity(DgAlgebra const& a, int lo, int hi) {
    std::vector<std::string> bad;
    auto const& f = a.field();
    lo = std::max(lo, a.window_lo());
    hi = std::min(hi, a.window_hi());
    auto ok = [&](int d) { return d >= lo && d <= hi; };
    Acc lhs(f), rhs(f);
    SparseVec xy;
    for (int dz = lo; dz <= hi; ++dz)
        for (std::uint32_t iz = 0; iz < a.dim(dz); ++iz) {
            BasisRef z{dz, iz};
            for (int dy = lo; dy <= hi; ++dy) {
                if (!ok(dy + dz))
                    continue;
                for (auto iy : partners_or_all(a, z, dy, 0)) {
                    BasisRef y{dy, iy};
                    auto yz = product_sparse(a, y, z);
                    for (int dx = lo; dx <= hi; ++dx) {
                        int t = dx + dy + dz;
                        if (!ok(dx + dy) || !ok(t) || a.dim_or_zero(t) == 0)
                            continue;
                        for (auto ix : partners_or_all(a, y, dx, 0)) {
                            BasisRef x{dx, ix};
                            xy.clear();
                            lhs.v.clear();
                            rhs.v.clear();
                            a.accumulate_sparse(x, y, 1, xy);
                            for (auto [k, c] : xy)
                                lhs.add_product(a, {dx + dy, k}, z, c);
                            for (auto [k, c] : yz)
                                rhs.add_product(a, x, {dy + dz, k}, c);
                            if (lhs != rhs)
                                bad.push_back("(" + a.label(x) + " " + a.label(y) + ") " + a.label(z));
                        }
                    }
                }
            }
        }
    return bad;
}

Cohomology::Cohomology(Complex const& c, int lo, int hi, std::map<int, std::vector<Vec>> representatives)
    : c_(&c), lo_(lo), hi_(hi) {
    auto const& f = c.field();
    for (int n = lo; n <= hi; ++n) {
        Degree deg;
        std::size_t dim = c.degree_dim(n);
        auto dn = c.differential(n);
        auto dprev = c.differential(n - 1);
        deg.cycles = kernel_basis(dn);
        deg.raw_dim = deg.cycles.size() - rank(dprev);
        // spanning set of B + N
        std::vector<Vec> span;
        for (std::size_t j = 0; j < dprev.cols(); ++j)
            span.push_back(dprev.column(j));
        for (auto k : c.negligible(n))
            span.push_back(unit_vec(f, dim, k));
        std::vector<Vec> candidates;
        auto supplied = representatives.find(n);
        if (supplied != representatives.end()) {
            for (auto const& z : supplied->second) {
                if (z.size() != dim || !vec_is_zero(dn.apply(z)))
                    throw NotACocycle("supplied representative in degree " + std::to_string(n) + " is not a cycle");
                candidates.push_back(z);
            }
        } else {
            candidates = deg.cycles;
        }
        FpMatrix m(f, dim, span.size() + candidates.size());
        for (std::size_t j = 0; j < span.size(); ++j)
            for (std::size_t i = 0; i < dim; ++i)
                m(i, j) = span[j][i];
        for (std::size_t j = 0; j < candidates.size(); ++j)
            for (std::size_t i = 0; i < dim; ++i)
                m(i, span.size() + j) = candidates[j][i];
        auto piv = rref(m).pivots;
        std::vector<std::size_t> span_piv;
        for (auto p : piv) {
            if (p < span.size())
                span_piv.push_back(p);
            else
                deg.reps.push_back(candidates[p - span.size()]);
        }
        if (supplied != representatives.end()) {
            if (deg.reps.size() != candidates.size())
                throw InvalidInput("supplied representatives in degree " + std::to_string(n) +
                                   " are dependent modulo boundaries");
            // they must span every cycle class as well
            FpMatrix all(f, dim, span_piv.size() + deg.reps.size() + deg.cycles.size());
            std::size_t col = 0;
            for (auto p : span_piv) {
                for (std::size_t i = 0; i < dim; ++i)
                    all(i, col) = span[p][i];
                ++col;
            }
            for (auto const& z : deg.reps) {
                for (std::size_t i = 0; i < dim; ++i)
                    all(i, col) = z[i];
                ++col;
            }
            for (auto const& z : deg.cycles) {
                for (std::size_t i = 0; i < dim; ++i)
                    all(i, col) = z[i];
                ++col;
            }
            if (rank(all) != span_piv.size() + deg.reps.size())
                throw InvalidInput("supplied representatives in degree " + std::to_string(n) +
                                   " do not span the cohomology");
        }
        FpMatrix proj(f, dim, span_piv.size() + deg.reps.size());
        for (std::size_t j = 0; j < span_piv.size(); ++j)
            for (std::size_t i = 0; i < dim; ++i)
                proj(i, j) = span[span_piv[j]][i];
        for (std::size_t j = 0; j < deg.reps.size(); ++j)
            for (std::size_t i = 0; i < dim; ++i)
                proj(i, span_piv.size() + j) = deg.reps[j][i];
        deg.span_cols = span_piv.size();
        deg.projector = std::make_unique<LinearSolver<PrimeField>>(proj);
        deg.preimage = std::make_unique<LinearSolver<PrimeField>>(dprev);
        degrees_.push_back(std::move(deg));
    }
}

Cohomology::Degree const& Cohomology::degree(int n) const {
    if (n < lo_ || n > hi_)
        throw WindowOverflow("cohomology degree " + std::to_string(n) + " outside [" + std::to_string(lo_) + ", " +
                             std::to_string(hi_) + "]");
    return degrees_[static_cast<std::size_t>(n - lo_)];
}

bool Cohomology::is_cycle(int n, Vec const& z) const { return vec_is_zero(c_->apply_d(n, z)); }

Vec Cohomology::project(int n, Vec const& z) const {
    auto const& deg = degree(n);
    if (!is_cycle(n, z))
        throw NotACocycle("projection of a non-cycle in degree " + std::to_string(n));
    auto sol = deg.projector->solve(z);
    if (!sol)
        throw NotACocycle("cycle outside the computed span in degree " + std::to_string(n));
    return Vec(sol->begin() + static_cast<std::ptrdiff_t>(deg.span_cols), sol->end());
}

std::optional<Vec> Cohomology::boundary_preimage(int n, Vec const& b) const {
    return degree(n).preimage->solve(b);
}

GradedVectorSpace Cohomology::space() const {
    GradedVectorSpace s;
    s.lo = lo_;
    s.hi = hi_;
    for (int n = lo_; n <= hi_; ++n) {
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < dim(n); ++i)
            labels.push_back("h" + std::to_string(n) + "_" + std::to_string(i));
        s.labels.push_back(std::move(labels));
    }
    return s;
}

PolyMatrix poly_mul(PrimeField const& f, PolyMatrix const& a, PolyMatrix const& b) {
    if (a.cols != b.rows || a.r != b.r)
        throw InvalidInput("polynomial matrix product: shape mismatch");
    PolyMatrix out(a.rows, b.cols, a.r);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k)
            for (int e = 0; e < a.r; ++e) {
                auto x = a.at(i, k, e);
                if (x == 0)
                    continue;
                for (std::size_t j = 0; j < b.cols; ++j)
                    for (int e2 = 0; e + e2 < a.r; ++e2) {
                        auto y = b.at(k, j, e2);
                        if (y != 0)
                            out.at(i, j, e + e2) = f.add(out.at(i, j, e + e2), f.mul(x, y));
                    }
            }
    return out;
}

std::size_t FreeComplex::rank(int j) const {
    if (j < lo || j > hi())
        return 0;
    return ranks[static_cast<std::size_t>(j - lo)];
}

PolyMatrix const* FreeComplex::differential(int j) const {
    if (j < lo || j >= hi())
        return nullptr;
    return &d[static_cast<std::size_t>(j - lo)];
}

std::vector<std::string> FreeComplex::check_d_squared() const {
    std::vector<std::string> bad;
    for (int j = lo; j + 2 <= hi(); ++j)
        if (!poly_mul(field, *differential(j + 1), *differential(j)).is_zero())
            bad.push_back("d^2 != 0 at " + std::to_string(j));
    return bad;
}

FreeComplex vector_space_complex(PrimeField f, int lo, std::vector<FpMatrix> const& d, std::vector<std::size_t> dims) {
    FreeComplex x;
    x.field = f;
    x.r = 1;
    x.lo = lo;
    x.ranks = std::move(dims);
    if (d.size() + 1 != x.ranks.size())
        throw InvalidInput("complex needs one differential between consecutive terms");
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i].rows() != x.ranks[i + 1] || d[i].cols() != x.ranks[i])
            throw InvalidInput("differential has the wrong shape");
        PolyMatrix m(d[i].rows(), d[i].cols(), 1);
        for (std::size_t a = 0; a < d[i].rows(); ++a)
            for (std::size_t b = 0; b < d[i].cols(); ++b)
                m.at(a, b, 0) = d[i](a, b);
        x.d.push_back(std::move(m));
    }
    return x;
}

FreeComplex direct_sum(FreeComplex const& a, FreeComplex const& b) {
    if (!(a.field == b.field) || a.r != b.r)
        throw InvalidInput("direct sum of complexes over different rings");
    FreeComplex s;
    s.field = a.field;
    s.r = a.r;
    s.lo = std::min(a.lo, b.lo);
    int hi = std::max(a.hi(), b.hi());
    for (int j = s.lo; j <= hi; ++j)
        s.ranks.push_back(a.rank(j) + b.rank(j));
    for (int j = s.lo; j < hi; ++j) {
        PolyMatrix m(s.rank(j + 1), s.rank(j), s.r);
        if (auto da = a.differential(j))
            for (std::size_t i = 0; i < da->rows; ++i)
                for (std::size_t k = 0; k < da->cols; ++k)
                    for (int e = 0; e < s.r; ++e)
                        m.at(i, k, e) = da->at(i, k, e);
        if (auto db = b.differential(j))
            for (std::size_t i = 0; i < db->rows; ++i)
                for (std::size_t k = 0; k < db->cols; ++k)
                    for (int e = 0; e < s.r; ++e)
                        m.at(a.rank(j + 1) + i, a.rank(j) + k, e) = db->at(i, k, e);
        s.d.push_back(std::move(m));
    }
    return s;
}

HomComplex::HomComplex(std::shared_ptr<FreeComplex const> x, std::shared_ptr<FreeComplex const> y)
    : x_(std::move(x)), y_(std::move(y)) {
    if (!(x_->field == y_->field) || x_->r != y_->r)
        throw InvalidInput("Hom complex between complexes over different rings");
    for (int n = degree_lo(); n <= degree_hi(); ++n) {
        std::vector<Block> bl;
        std::size_t off = 0;
        auto [a, b] = component_range(n);
        for (int j = a; j <= b; ++j) {
            Block blk{j, off, y_->rank(j + n), x_->rank(j)};
            off += blk.rows * blk.cols * static_cast<std::size_t>(x_->r);
            bl.push_back(blk);
        }
        blocks_.push_back(std::move(bl));
        dims_.push_back(off);
    }
}

std::pair<int, int> HomComplex::component_range(int n) const {
    return {std::max(x_->lo, y_->lo - n), std::min(x_->hi(), y_->hi() - n)};
}

std::vector<HomComplex::Block> const& HomComplex::blocks(int n) const {
    static const std::vector<Block> none;
    if (n < degree_lo() || n > degree_hi())
        return none;
    return blocks_[static_cast<std::size_t>(n - degree_lo())];
}

HomComplex::Block const* HomComplex::block(int n, int j) const {
    auto const& bl = blocks(n);
    if (bl.empty() || j < bl.front().source || j > bl.back().source)
        return nullptr;
    return &bl[static_cast<std::size_t>(j - bl.front().source)];
}

std::size_t HomComplex::degree_dim(int n) const {
    if (n < degree_lo() || n > degree_hi())
        return 0;
    return dims_[static_cast<std::size_t>(n - degree_lo())];
}

HomComplex::Entry HomComplex::decode(BasisRef f) const {
    auto const& bl = blocks(f.deg);
    auto it = std::upper_bound(bl.begin(), bl.end(), static_cast<std::size_t>(f.idx),
                               [](std::size_t v, Block const& b) { return v < b.offset; });
    if (it == bl.begin())
        throw InvalidInput("Hom basis index out of range");
    auto const& b = *(it - 1);
    std::size_t local = f.idx - b.offset;
    auto r = static_cast<std::size_t>(x_->r);
    Entry e;
    e.source = b.source;
    e.power = static_cast<int>(local % r);
    local /= r;
    e.col = local % b.cols;
    e.row = local / b.cols;
    if (e.row >= b.rows)
        throw InvalidInput("Hom basis index out of range");
    return e;
}

std::optional<std::uint32_t> HomComplex::encode(int n, Entry const& e) const {
    auto b = block(n, e.source);
    if (!b || e.row >= b->rows || e.col >= b->cols || e.power < 0 || e.power >= x_->r)
        return std::nullopt;
    return static_cast<std::uint32_t>(b->offset + (e.row * b->cols + e.col) * static_cast<std::size_t>(x_->r) +
                                      static_cast<std::size_t>(e.power));
}

std::string HomComplex::label(BasisRef f) const {
    auto e = decode(f);
    std::ostringstream os;
    if (e.power == 0)
        os << "1";
    else if (e.power == 1)
        os << "T";
    else
        os << "T^" << e.power;
    os << "[" << e.source << "->" << e.source + f.deg;
    if (x_->rank(e.source) > 1 || y_->rank(e.source + f.deg) > 1)
        os << ";" << e.row << "," << e.col;
    os << "]";
    return os.str();
}

SparseVec HomComplex::d_basis(BasisRef f) const {
    auto const& fld = field();
    auto e = decode(f);
    int n = f.deg;
    int r = x_->r;
    SparseVec out;
    if (auto dy = y_->differential(e.source + n))
        for (std::size_t row2 = 0; row2 < dy->rows; ++row2)
            for (int p = 0; p + e.power < r; ++p) {
                auto c = dy->at(row2, e.row, p);
                if (c == 0)
                    continue;
                if (auto idx = encode(n + 1, {e.source, row2, e.col, e.power + p}))
                    out.emplace_back(*idx, c);
            }
    if (auto dx = x_->differential(e.source - 1)) {
        auto s = fld.neg(fld.sign(n));
        for (std::size_t col2 = 0; col2 < dx->cols; ++col2)
            for (int p = 0; p + e.power < r; ++p) {
                auto c = dx->at(e.col, col2, p);
                if (c == 0)
                    continue;
                if (auto idx = encode(n + 1, {e.source - 1, e.row, col2, e.power + p}))
                    out.emplace_back(*idx, fld.mul(s, c));
            }
    }
    return out;
}

Vec HomComplex::from_components(int n, std::map<int, PolyMatrix> const& comps) const {
    Vec v(degree_dim(n), 0);
    for (auto const& [j, m] : comps) {
        auto b = block(n, j);
        if (!b) {
            if (!m.is_zero())
                throw WindowOverflow("map component " + std::to_string(j) + " outside the Hom window");
            continue;
        }
        if (m.rows != b->rows || m.cols != b->cols)
            throw InvalidInput("map component has the wrong shape");
        for (std::size_t i = 0; i < m.rows; ++i)
            for (std::size_t k = 0; k < m.cols; ++k)
                for (int e = 0; e < m.r; ++e)
                    v[*encode(n, {j, i, k, e})] = m.at(i, k, e);
    }
    return v;
}

PolyMatrix HomComplex::component(int n, Vec const& f, int j) const {
    auto b = block(n, j);
    if (!b)
        return PolyMatrix(y_->rank(j + n), x_->rank(j), x_->r);
    PolyMatrix m(b->rows, b->cols, x_->r);
    std::copy(f.begin() + static_cast<std::ptrdiff_t>(b->offset),
              f.begin() + static_cast<std::ptrdiff_t>(b->offset + m.c.size()), m.c.begin());
    return m;
}

Vec compose(HomComplex const& gz, int ng, Vec const& g, HomComplex const& fy, int nf, Vec const& f,
            HomComplex const& out) {
    auto const& fld = out.field();
    std::map<int, PolyMatrix> comps;
    auto [a, b] = out.component_range(nf + ng);
    for (int j = a; j <= b; ++j) {
        auto fj = fy.component(nf, f, j);
        auto gj = gz.component(ng, g, j + nf);
        if (fj.is_zero() || gj.is_zero())
            continue;
        comps[j] = poly_mul(fld, gj, fj);
    }
    return out.from_components(nf + ng, comps);
}

EndDga::EndDga(std::shared_ptr<FreeComplex const> x, std::optional<int> negligible_above)
    : x_(x), hom_(x, x), negligible_above_(negligible_above) {}

Vec EndDga::multiply_basis(BasisRef a, BasisRef b) const {
    Vec out(dim_or_zero(a.deg + b.deg), 0);
    accumulate_product(a, b, 1, out);
    return out;
}

void EndDga::accumulate_product(BasisRef a, BasisRef b, PrimeField::Elem c, Vec& out) const {
    if (c == 0)
        return;
    auto ea = hom_.decode(a);
    auto eb = hom_.decode(b);
    if (ea.source != eb.source + b.deg || ea.col != eb.row || ea.power + eb.power >= x_->r)
        return;
    auto idx = hom_.encode(a.deg + b.deg, {eb.source, ea.row, eb.col, ea.power + eb.power});
    if (idx)
        out[*idx] = field().add(out[*idx], c);
}

void EndDga::accumulate_sparse(BasisRef a, BasisRef b, PrimeField::Elem c, SparseVec& out) const {
    if (c == 0)
        return;
    auto ea = hom_.decode(a);
    auto eb = hom_.decode(b);
    if (ea.source != eb.source + b.deg || ea.col != eb.row || ea.power + eb.power >= x_->r)
        return;
    if (auto idx = hom_.encode(a.deg + b.deg, {eb.source, ea.row, eb.col, ea.power + eb.power}))
        out.emplace_back(*idx, c);
}

std::optional<std::uint32_t> EndDga::unit_index() const {
    if (dim(0) == 1)
        return 0;
    return std::nullopt;
}

Vec EndDga::unit() const {
    std::map<int, PolyMatrix> comps;
    for (int j = x_->lo; j <= x_->hi(); ++j) {
        PolyMatrix m(x_->rank(j), x_->rank(j), x_->r);
        for (std::size_t i = 0; i < m.rows; ++i)
            m.at(i, i, 0) = 1;
        comps[j] = std::move(m);
    }
    return hom_.from_components(0, comps);
}

std::vector<std::size_t> EndDga::negligible(int n) const {
    std::vector<std::size_t> out;
    if (!negligible_above_)
        return out;
    for (std::uint32_t i = 0; i < dim_or_zero(n); ++i)
        if (hom_.decode({n, i}).source + n > *negligible_above_)
            out.push_back(i);
    return out;
}

std::optional<std::vector<std::uint32_t>> EndDga::left_partners(BasisRef right, int left_deg, int slack) const {
    auto e = hom_.decode(right);
    int s = e.source + right.deg;
    std::vector<std::uint32_t> out;
    for (int j = s - slack; j <= s + slack; ++j)
        for (std::size_t row = 0; row < x_->rank(j + left_deg); ++row)
            for (std::size_t col = 0; col < x_->rank(j); ++col) {
                if (slack == 0 && col != e.row)
                    continue;
                for (int p = 0; p < (slack == 0 ? x_->r - e.power : x_->r); ++p)
                    if (auto idx = hom_.encode(left_deg, {j, row, col, p}))
                        out.push_back(*idx);
            }
    return out;
}

TableDgAlgebra::TableDgAlgebra(PrimeField field, int lo, std::vector<std::vector<std::string>> labels)
    : field_(field), lo_(lo), labels_(std::move(labels)) {}

std::size_t TableDgAlgebra::dim(int d) const {
    if (d < lo_ || d > window_hi())
        return 0;
    return labels_[static_cast<std::size_t>(d - lo_)].size();
}

void TableDgAlgebra::set_product(BasisRef a, BasisRef b, Vec value) {
    if (value.size() != dim(a.deg + b.deg))
        throw InvalidInput("product value has the wrong dimension");
    if (vec_is_zero(value))
        products_.erase({a, b});
    else
        products_[{a, b}] = std::move(value);
}

void TableDgAlgebra::set_differential(BasisRef a, Vec value) {
    if (value.size() != dim(a.deg + 1))
        throw InvalidInput("differential value has the wrong dimension");
    if (vec_is_zero(value))
        d_.erase(a);
    else
        d_[a] = std::move(value);
}

Vec TableDgAlgebra::multiply_basis(BasisRef a, BasisRef b) const {
    auto it = products_.find({a, b});
    if (it == products_.end())
        return zero_vec(field_, dim(a.deg + b.deg));
    return it->second;
}

std::string TableDgAlgebra::label(BasisRef a) const { return labels_.at(static_cast<std::size_t>(a.deg - lo_)).at(a.idx); }

std::optional<std::uint32_t> TableDgAlgebra::unit_index() const {
    if (unit_.empty())
        return std::nullopt;
    auto s = to_sparse(unit_);
    if (s.size() == 1 && s[0].second == 1)
        return s[0].first;
    return std::nullopt;
}

SparseVec TableDgAlgebra::d_basis(BasisRef x) const {
    auto it = d_.find(x);
    if (it == d_.end())
        return {};
    return to_sparse(it->second);
}

std::optional<BasisRef> TableDgAlgebra::find(std::string const& label) const {
    for (std::size_t d = 0; d < labels_.size(); ++d)
        for (std::size_t i = 0; i < labels_[d].size(); ++i)
            if (labels_[d][i] == label)
                return BasisRef{lo_ + static_cast<int>(d), static_cast<std::uint32_t>(i)};
    return std::nullopt;
}

namespace {

Vec parse_combination(TableDgAlgebra const& a, nlohmann::json const& j, int& degree) {
    Vec v;
    bool first = true;
    for (auto const& [name, coeff] : j.items()) {
        auto b = a.find(name);
        if (!b)
            throw InvalidInput("unknown basis label '" + name + "'");
        if (first) {
            degree = b->deg;
            v = zero_vec(a.field(), a.dim(degree));
            first = false;
        } else if (b->deg != degree) {
            throw InvalidInput("inhomogeneous combination in dg algebra table");
        }
        v[b->idx] = a.field().add(v[b->idx], a.field().from_int(coeff.get<long long>()));
    }
    if (first)
        degree = std::numeric_limits<int>::min();
    return v;
}

nlohmann::json combination_json(GradedAlgebra const& a, int d, Vec const& v) {
    nlohmann::json j = nlohmann::json::object();
    for (std::uint32_t i = 0; i < v.size(); ++i)
        if (v[i] != 0)
            j[a.label({d, i})] = a.field().to_signed(v[i]);
    return j;
}

} // namespace

std::shared_ptr<TableDgAlgebra> dga_from_json(nlohmann::json const& j) {
    try {
        PrimeField f(j.at("char").get<std::uint32_t>());
        std::map<int, std::vector<std::string>> by_degree;
        for (auto const& d : j.at("degrees"))
            by_degree[d.at("degree").get<int>()] = d.at("basis").get<std::vector<std::string>>();
        if (by_degree.empty())
            throw InvalidInput("dg algebra without degrees");
        int lo = by_degree.begin()->first, hi = by_degree.rbegin()->first;
        std::vector<std::vector<std::string>> labels;
        for (int d = lo; d <= hi; ++d)
            labels.push_back(by_degree.count(d) ? by_degree[d] : std::vector<std::string>{});
        auto a = std::make_shared<TableDgAlgebra>(f, lo, labels);
        if (j.contains("unit")) {
            int d = 0;
            auto u = parse_combination(*a, j.at("unit"), d);
            if (d != 0)
                throw InvalidInput("unit must lie in degree 0");
            a->set_unit(u);
        }
        if (j.contains("differential"))
            for (auto const& e : j.at("differential")) {
                auto src = a->find(e.at("from").get<std::string>());
                if (!src)
                    throw InvalidInput("unknown basis label in differential");
                int d = 0;
                auto v = parse_combination(*a, e.at("to"), d);
                if (d == std::numeric_limits<int>::min())
                    continue;
                if (d != src->deg + 1)
                    throw InvalidInput("differential must raise degree by one");
                a->set_differential(*src, v);
            }
        if (j.contains("products"))
            for (auto const& e : j.at("products")) {
                auto x = a->find(e.at("left").get<std::string>());
                auto y = a->find(e.at("right").get<std::string>());
                if (!x || !y)
                    throw InvalidInput("unknown basis label in product table");
                int d = 0;
                auto v = parse_combination(*a, e.at("value"), d);
                if (d == std::numeric_limits<int>::min())
                    continue;
                if (d != x->deg + y->deg)
                    throw InvalidInput("product table entry has the wrong degree");
                a->set_product(*x, *y, v);
            }
        return a;
    } catch (nlohmann::json::exception const& e) {
        throw InvalidInput(std::string("dg algebra: ") + e.what());
    }
}

nlohmann::json dga_to_json(DgAlgebra const& a) {
    nlohmann::json j;
    j["char"] = a.field().characteristic();
    j["degrees"] = nlohmann::json::array();
    for (int d = a.window_lo(); d <= a.window_hi(); ++d) {
        std::vector<std::string> labels;
        for (std::uint32_t i = 0; i < a.dim(d); ++i)
            labels.push_back(a.label({d, i}));
        if (!labels.empty())
            j["degrees"].push_back({{"degree", d}, {"basis", labels}});
    }
    j["unit"] = combination_json(a, 0, a.unit());
    j["differential"] = nlohmann::json::array();
    j["products"] = nlohmann::json::array();
    for (int d = a.window_lo(); d <= a.window_hi(); ++d)
        for (std::uint32_t i = 0; i < a.dim(d); ++i) {
            auto dv = a.apply_d(d, unit_vec(a.field(), a.dim(d), i));
            if (!vec_is_zero(dv))
                j["differential"].push_back({{"from", a.label({d, i})}, {"to", combination_json(a, d + 1, dv)}});
            for (int e = a.window_lo(); e <= a.window_hi(); ++e)
                for (std::uint32_t k = 0; k < a.dim(e); ++k) {
                    if (a.dim_or_zero(d + e) == 0)
                        continue;
                    auto p = a.multiply_basis({d, i}, {e, k});
                    if (!vec_is_zero(p))
                        j["products"].push_back({{"left", a.label({d, i})},
                                                 {"right", a.label({e, k})},
                                                 {"value", combination_json(a, d + e, p)}});
                }
        }
    return j;
}

std::shared_ptr<TableDgAlgebra> tabulate(DgAlgebra const& a) {
    if (!a.finite())
        throw Unsupported("only finite dg algebras can be tabulated");
    std::vector<std::vector<std::string>> labels;
    for (int d = a.window_lo(); d <= a.window_hi(); ++d) {
        std::vector<std::string> l;
        for (std::uint32_t i = 0; i < a.dim(d); ++i)
            l.push_back(a.label({d, i}));
        labels.push_back(std::move(l));
    }
    auto t = std::make_shared<TableDgAlgebra>(a.field(), a.window_lo(), labels);
    t->set_unit(a.unit());
    for (int d = a.window_lo(); d <= a.window_hi(); ++d)
        for (std::uint32_t i = 0; i < a.dim(d); ++i) {
            t->set_differential({d, i}, a.apply_d(d, unit_vec(a.field(), a.dim(d), i)));
            for (int e = a.window_lo(); e <= a.window_hi(); ++e)
                for (std::uint32_t k = 0; k < a.dim(e); ++k)
                    if (a.dim_or_zero(d + e) > 0)
                        t->set_product({d, i}, {e, k}, a.multiply_basis({d, i}, {e, k}));
        }
    return t;
}

Vec ChainMap::apply(int n, Vec const& v) const {
    auto it = blocks.find(n);
    if (it == blocks.end())
        return zero_vec(source->field(), target->degree_dim(n + degree));
    return it->second.apply(v);
}

std::vector<int> chain_map_defects(ChainMap const& f, int lo, int hi) {
    std::vector<int> bad;
    auto const& fld = f.source->field();
    for (int n = lo; n <= hi; ++n) {
        auto sn = f.source->degree_dim(n);
        for (std::uint32_t i = 0; i < sn; ++i) {
            auto e = unit_vec(fld, sn, i);
            auto lhs = f.target->apply_d(n + f.degree, f.apply(n, e));
            auto rhs = vec_scale(fld, fld.sign(f.degree), f.apply(n + 1, f.source->apply_d(n, e)));
            if (lhs != rhs) {
                bad.push_back(n);
                break;
            }
        }
    }
    return bad;
}

bool quasi_iso_check(ChainMap const& f, int lo, int hi) {
    Cohomology hx(*f.source, lo, hi);
    Cohomology hy(*f.target, lo + f.degree, hi + f.degree);
    auto const& fld = f.source->field();
    for (int n = lo; n <= hi; ++n) {
        if (hx.dim(n) != hy.dim(n + f.degree))
            return false;
        FpMatrix m(fld, hy.dim(n + f.degree), hx.dim(n));
        for (std::size_t i = 0; i < hx.dim(n); ++i) {
            auto img = hy.project(n + f.degree, f.apply(n, hx.representative(n, i)));
            for (std::size_t k = 0; k < img.size(); ++k)
                m(k, i) = img[k];
        }
        if (rank(m) != hx.dim(n))
            return false;
    }
    return true;
}

std::vector<std::string> dga_map_defects(ChainMap const& f, DgAlgebra const& a, DgAlgebra const& b, int lo, int hi) {
    std::vector<std::string> bad;
    if (f.apply(0, a.unit()) != b.unit())
        bad.push_back("unit not preserved");
    for (int d = lo; d <= hi; ++d)
        for (int e = lo; e <= hi; ++e) {
            if (d + e < lo || d + e > hi || a.dim_or_zero(d + e) == 0)
                continue;
            for (std::uint32_t i = 0; i < a.dim_or_zero(d); ++i)
                for (std::uint32_t k = 0; k < a.dim_or_zero(e); ++k) {
                    auto lhs = f.apply(d + e, a.multiply_basis({d, i}, {e, k}));
                    auto fi = f.apply(d, unit_vec(a.field(), a.dim(d), i));
                    auto fk = f.apply(e, unit_vec(a.field(), a.dim(e), k));
                    auto rhs = b.multiply(d, fi, e, fk);
                    if (lhs != rhs)
                        bad.push_back(a.label({d, i}) + " * " + a.label({e, k}));
                }
        }
    return bad;
}

Pullback pullback_dga(DgAlgebra const& a, DgAlgebra const& b, Complex const& m, ChainMap const& alpha,
                      ChainMap const& beta) {
    auto const& f = a.field();
    if (alpha.apply(0, a.unit()) != beta.apply(0, b.unit()))
        throw InvalidInput("pullback: alpha(1) != beta(1)");
    int lo = std::min(a.window_lo(), b.window_lo());
    int hi = std::max(a.window_hi(), b.window_hi());
    std::vector<std::vector<Vec>> basis; // (a, b) stacked
    std::vector<std::vector<std::string>> labels;
    for (int n = lo; n <= hi; ++n) {
        std::size_t da = a.dim_or_zero(n), db = b.dim_or_zero(n), dm = m.degree_dim(n);
        FpMatrix k(f, dm, da + db);
        for (std::size_t i = 0; i < da; ++i) {
            auto col = alpha.apply(n, unit_vec(f, da, i));
            for (std::size_t r = 0; r < dm; ++r)
                k(r, i) = col[r];
        }
        for (std::size_t i = 0; i < db; ++i) {
            auto col = beta.apply(n, unit_vec(f, db, i));
            for (std::size_t r = 0; r < dm; ++r)
                k(r, da + i) = f.neg(col[r]);
        }
        auto ker = kernel_basis(k);
        if (n == 0) {
            // put the unit first so that it is a basis element
            Vec u = a.unit();
            auto ub = b.unit();
            u.insert(u.end(), ub.begin(), ub.end());
            std::vector<Vec> with_unit{u};
            for (auto const& v : ker) {
                FpMatrix cand(f, da + db, with_unit.size() + 1);
                for (std::size_t c = 0; c < with_unit.size(); ++c)
                    for (std::size_t r = 0; r < da + db; ++r)
                        cand(r, c) = with_unit[c][r];
                for (std::size_t r = 0; r < da + db; ++r)
                    cand(r, with_unit.size()) = v[r];
                if (rank(cand) == with_unit.size() + 1)
                    with_unit.push_back(v);
            }
            ker = std::move(with_unit);
        }
        std::vector<std::string> l;
        for (std::size_t i = 0; i < ker.size(); ++i)
            l.push_back("x" + std::to_string(n) + "_" + std::to_string(i));
        basis.push_back(std::move(ker));
        labels.push_back(std::move(l));
    }
    auto x = std::make_shared<TableDgAlgebra>(f, lo, labels);
    auto deg_basis = [&](int n) -> std::vector<Vec> const& { return basis[static_cast<std::size_t>(n - lo)]; };
    std::map<int, std::unique_ptr<LinearSolver<PrimeField>>> solvers;
    auto coords = [&](int n, Vec const& v) {
        auto& s = solvers[n];
        auto const& bs = deg_basis(n);
        if (!s) {
            FpMatrix mat(f, a.dim_or_zero(n) + b.dim_or_zero(n), bs.size());
            for (std::size_t c = 0; c < bs.size(); ++c)
                for (std::size_t r = 0; r < mat.rows(); ++r)
                    mat(r, c) = bs[c][r];
            s = std::make_unique<LinearSolver<PrimeField>>(mat);
        }
        auto sol = s->solve(v);
        if (!sol)
            throw InvalidInput("pullback: subspace not closed (alpha or beta is not a dg map)");
        return *sol;
    };
    auto split = [&](int n, Vec const& v) {
        std::size_t da = a.dim_or_zero(n);
        return std::pair<Vec, Vec>{Vec(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(da)),
                                   Vec(v.begin() + static_cast<std::ptrdiff_t>(da), v.end())};
    };
    auto join = [](Vec u, Vec const& w) {
        u.insert(u.end(), w.begin(), w.end());
        return u;
    };
    x->set_unit(unit_vec(f, deg_basis(0).size(), 0));
    for (int n = lo; n <= hi; ++n)
        for (std::uint32_t i = 0; i < deg_basis(n).size(); ++i) {
            auto [va, vb] = split(n, deg_basis(n)[i]);
            if (n + 1 <= hi && !deg_basis(n + 1).empty())
                x->set_differential({n, i}, coords(n + 1, join(a.apply_d(n, va), b.apply_d(n, vb))));
            for (int e = lo; e <= hi; ++e) {
                if (n + e < lo || n + e > hi || deg_basis(n + e).empty())
                    continue;
                for (std::uint32_t k = 0; k < deg_basis(e).size(); ++k) {
                    auto [wa, wb] = split(e, deg_basis(e)[k]);
                    Vec pa = a.dim_or_zero(n + e) ? a.multiply(n, va, e, wa) : Vec{};
                    Vec pb = b.dim_or_zero(n + e) ? b.multiply(n, vb, e, wb) : Vec{};
                    x->set_product({n, i}, {e, k}, coords(n + e, join(pa, pb)));
                }
            }
        }
    Pullback pb;
    pb.algebra = x;
    pb.p1 = ChainMap{x.get(), &a, 0, {}};
    pb.p2 = ChainMap{x.get(), &b, 0, {}};
    for (int n = lo; n <= hi; ++n) {
        auto const& bs = deg_basis(n);
        std::size_t da = a.dim_or_zero(n), db = b.dim_or_zero(n);
        FpMatrix m1(f, da, bs.size()), m2(f, db, bs.size());
        for (std::size_t c = 0; c < bs.size(); ++c) {
            for (std::size_t r = 0; r < da; ++r)
                m1(r, c) = bs[c][r];
            for (std::size_t r = 0; r < db; ++r)
                m2(r, c) = bs[c][da + r];
        }
        pb.p1.blocks.emplace(n, std::move(m1));
        pb.p2.blocks.emplace(n, std::move(m2));
    }
    return pb;
}

bool cohomology_pullback_check(Pullback const& pb, DgAlgebra const& a, DgAlgebra const& b, Complex const& m,
                               ChainMap const& alpha, ChainMap const& beta, int lo, int hi) {
    auto const& f = a.field();
    Cohomology hx(*pb.algebra, lo, hi), ha(a, lo, hi), hb(b, lo, hi), hm(m, lo, hi);
    for (int n = lo; n <= hi; ++n) {
        // the pullback of H^n A -> H^n M <- H^n B
        std::size_t da = ha.dim(n), db = hb.dim(n), dm = hm.dim(n);
        FpMatrix k(f, dm, da + db);
        for (std::size_t i = 0; i < da; ++i) {
            auto img = hm.project(n, alpha.apply(n, ha.representative(n, i)));
            for (std::size_t r = 0; r < dm; ++r)
                k(r, i) = img[r];
        }
        for (std::size_t i = 0; i < db; ++i) {
            auto img = hm.project(n, beta.apply(n, hb.representative(n, i)));
            for (std::size_t r = 0; r < dm; ++r)
                k(r, da + i) = f.neg(img[r]);
        }
        auto pull_dim = da + db - rank(k);
        if (hx.dim(n) != pull_dim)
            return false;
        // H^n X -> H^n A x H^n B must be injective with image in the pullback
        FpMatrix img(f, da + db, hx.dim(n));
        for (std::size_t i = 0; i < hx.dim(n); ++i) {
            auto ca = ha.project(n, pb.p1.apply(n, hx.representative(n, i)));
            auto cb = hb.project(n, pb.p2.apply(n, hx.representative(n, i)));
            for (std::size_t r = 0; r < da; ++r)
                img(r, i) = ca[r];
            for (std::size_t r = 0; r < db; ++r)
                img(da + r, i) = cb[r];
        }
        if (rank(img) != hx.dim(n))
            return false;
        if (!(k * img).is_zero())
            return false;
    }
    return true;
}

} // namespace obstruct
