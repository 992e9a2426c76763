#include "obstruct/modules.hpp"

#include <algorithm>

namespace obstruct {

void ModulePresentation::validate() const {
    if (!algebra)
        throw InvalidInput("module presentation without an algebra");
    for (auto const& r : relations) {
        if (r.coeffs.size() != generators.size())
            throw InvalidInput("relation has the wrong number of coefficients");
        for (std::size_t i = 0; i < generators.size(); ++i) {
            int d = r.degree - generators[i].degree;
            auto expected = algebra->dim_or_zero(d);
            if (!r.coeffs[i].empty() && r.coeffs[i].size() != expected)
                throw InvalidInput("relation coefficient is not homogeneous of the relation degree");
        }
    }
}

bool ModulePresentation::involves(std::size_t g) const {
    return std::any_of(relations.begin(), relations.end(),
                       [&](auto const& r) { return !r.coeffs[g].empty() && !vec_is_zero(r.coeffs[g]); });
}

ModulePresentation module_from_json(nlohmann::json const& j, std::shared_ptr<PresentedAlgebra const> algebra) {
    ModulePresentation m;
    m.algebra = algebra;
    try {
        for (auto const& g : j.at("generators"))
            m.generators.push_back({g.at("name").get<std::string>(), g.at("degree").get<int>()});
        if (j.contains("relations"))
            for (auto const& r : j.at("relations")) {
                ModulePresentation::Relation rel;
                rel.coeffs.resize(m.generators.size());
                std::optional<int> degree;
                for (auto const& [name, expr] : r.items()) {
                    auto it = std::find_if(m.generators.begin(), m.generators.end(),
                                           [&](auto const& g) { return g.name == name; });
                    if (it == m.generators.end())
                        throw InvalidInput("relation mentions unknown generator '" + name + "'");
                    auto i = static_cast<std::size_t>(it - m.generators.begin());
                    std::optional<int> expected;
                    if (degree)
                        expected = *degree - it->degree;
                    auto [d, v] = algebra->parse_element(expr.get<std::string>(), expected);
                    if (!d)
                        continue;
                    degree = *d + it->degree;
                    rel.coeffs[i] = v;
                }
                if (!degree)
                    continue;
                rel.degree = *degree;
                for (std::size_t i = 0; i < m.generators.size(); ++i)
                    if (rel.coeffs[i].empty())
                        rel.coeffs[i] = zero_vec(algebra->field(), algebra->dim_or_zero(rel.degree - m.generators[i].degree));
                m.relations.push_back(std::move(rel));
            }
    } catch (nlohmann::json::exception const& e) {
        throw InvalidInput(std::string("module presentation: ") + e.what());
    }
    m.validate();
    return m;
}

nlohmann::json module_to_json(ModulePresentation const& m) {
    nlohmann::json j;
    j["generators"] = nlohmann::json::array();
    for (auto const& g : m.generators)
        j["generators"].push_back({{"name", g.name}, {"degree", g.degree}});
    j["relations"] = nlohmann::json::array();
    for (auto const& r : m.relations) {
        nlohmann::json rel = nlohmann::json::object();
        for (std::size_t i = 0; i < m.generators.size(); ++i)
            if (!r.coeffs[i].empty() && !vec_is_zero(r.coeffs[i]))
                rel[m.generators[i].name] = m.algebra->format(r.degree - m.generators[i].degree, r.coeffs[i]);
        j["relations"].push_back(rel);
    }
    return j;
}

ModulePresentation free_module(std::shared_ptr<GradedAlgebra const> algebra, int degree) {
    ModulePresentation m;
    m.algebra = std::move(algebra);
    m.generators.push_back({"e", degree});
    return m;
}

ModulePresentation cyclic_quotient(std::shared_ptr<GradedAlgebra const> algebra, int degree, Vec const& a) {
    auto m = free_module(std::move(algebra), 0);
    m.relations.push_back({degree, {a}});
    m.validate();
    return m;
}

ModulePresentation direct_sum(ModulePresentation const& a, ModulePresentation const& b) {
    if (a.algebra != b.algebra)
        throw InvalidInput("direct sum of modules over different algebras");
    ModulePresentation m;
    m.algebra = a.algebra;
    m.generators = a.generators;
    for (auto g : b.generators) {
        while (std::any_of(m.generators.begin(), m.generators.end(), [&](auto const& h) { return h.name == g.name; }))
            g.name += "'";
        m.generators.push_back(g);
    }
    auto pad = [&](ModulePresentation::Relation const& r, bool first) {
        ModulePresentation::Relation out{r.degree, {}};
        for (std::size_t i = 0; i < m.generators.size(); ++i) {
            bool mine = first ? i < a.generators.size() : i >= a.generators.size();
            if (mine)
                out.coeffs.push_back(r.coeffs[first ? i : i - a.generators.size()]);
            else
                out.coeffs.push_back(zero_vec(m.algebra->field(), m.algebra->dim_or_zero(r.degree - m.generators[i].degree)));
        }
        return out;
    };
    for (auto const& r : a.relations)
        m.relations.push_back(pad(r, true));
    for (auto const& r : b.relations)
        m.relations.push_back(pad(r, false));
    return m;
}

std::pair<ModulePresentation, std::vector<Generator>> split_free_summands(ModulePresentation const& m) {
    ModulePresentation rest;
    rest.algebra = m.algebra;
    std::vector<Generator> free;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < m.generators.size(); ++i) {
        if (m.involves(i))
            keep.push_back(i);
        else
            free.push_back(m.generators[i]);
    }
    for (auto i : keep)
        rest.generators.push_back(m.generators[i]);
    for (auto const& r : m.relations) {
        ModulePresentation::Relation out{r.degree, {}};
        for (auto i : keep)
            out.coeffs.push_back(r.coeffs[i]);
        rest.relations.push_back(std::move(out));
    }
    return {rest, free};
}

ModulePresentation base_change(ModulePresentation const& m, std::shared_ptr<GradedAlgebra const> target,
                               AlgebraMap const& map) {
    ModulePresentation out;
    out.algebra = std::move(target);
    out.generators = m.generators;
    for (auto const& r : m.relations) {
        ModulePresentation::Relation rel{r.degree, {}};
        for (std::size_t i = 0; i < m.generators.size(); ++i) {
            int d = r.degree - m.generators[i].degree;
            if (r.coeffs[i].empty() || vec_is_zero(r.coeffs[i]))
                rel.coeffs.push_back(zero_vec(out.algebra->field(), out.algebra->dim_or_zero(d)));
            else
                rel.coeffs.push_back(map.apply(d, r.coeffs[i]));
        }
        out.relations.push_back(std::move(rel));
    }
    return out;
}

PresentedModule::PresentedModule(ModulePresentation presentation, int lo, int hi)
    : p_(std::move(presentation)), lo_(lo), hi_(hi) {
    p_.validate();
    auto const& a = *p_.algebra;
    auto const& f = a.field();
    for (int d = lo_; d <= hi_; ++d) {
        Degree deg;
        for (auto const& g : p_.generators) {
            int e = d - g.degree;
            if (!a.in_window(e))
                throw WindowOverflow("module degree " + std::to_string(d) + " needs algebra degree " +
                                     std::to_string(e) + " outside its window");
            deg.gen_offset.push_back(deg.free_dim);
            deg.gen_dim.push_back(a.dim_or_zero(e));
            deg.free_dim += deg.gen_dim.back();
        }
        std::vector<Vec> rows;
        for (auto const& r : p_.relations) {
            int e = d - r.degree;
            if (!a.in_window(e))
                throw WindowOverflow("module degree " + std::to_string(d) + " needs algebra degree " +
                                     std::to_string(e) + " outside its window");
            for (std::uint32_t b = 0; b < a.dim_or_zero(e); ++b) {
                Vec row = zero_vec(f, deg.free_dim);
                for (std::size_t i = 0; i < p_.generators.size(); ++i) {
                    if (deg.gen_dim[i] == 0 || r.coeffs[i].empty())
                        continue;
                    auto piece = a.left_multiply({e, b}, r.degree - p_.generators[i].degree, r.coeffs[i]);
                    std::copy(piece.begin(), piece.end(), row.begin() + static_cast<std::ptrdiff_t>(deg.gen_offset[i]));
                }
                rows.push_back(std::move(row));
            }
        }
        FpMatrix m(f, rows.size(), deg.free_dim);
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < deg.free_dim; ++j)
                m(i, j) = rows[i][j];
        auto res = rref(m);
        deg.pivots = res.pivots;
        FpMatrix kept(f, deg.pivots.size(), deg.free_dim);
        for (std::size_t i = 0; i < deg.pivots.size(); ++i)
            for (std::size_t j = 0; j < deg.free_dim; ++j)
                kept(i, j) = res.reduced(i, j);
        deg.relations = std::move(kept);
        std::vector<bool> is_pivot(deg.free_dim, false);
        for (auto p : deg.pivots)
            is_pivot[p] = true;
        for (std::size_t j = 0; j < deg.free_dim; ++j)
            if (!is_pivot[j])
                deg.quotient_cols.push_back(j);
        degrees_.push_back(std::move(deg));
    }
}

PresentedModule::Degree const& PresentedModule::degree(int d) const {
    if (d < lo_ || d > hi_)
        throw WindowOverflow("module degree " + std::to_string(d) + " outside window [" + std::to_string(lo_) + ", " +
                             std::to_string(hi_) + "]");
    return degrees_[static_cast<std::size_t>(d - lo_)];
}

std::size_t PresentedModule::dim(int d) const { return degree(d).quotient_cols.size(); }

Vec PresentedModule::lift(int d, Vec const& x) const {
    auto const& deg = degree(d);
    Vec out = zero_vec(field(), deg.free_dim);
    for (std::size_t k = 0; k < deg.quotient_cols.size(); ++k)
        out[deg.quotient_cols[k]] = x[k];
    return out;
}

Vec PresentedModule::reduce(int d, Vec const& v) const {
    auto const& deg = degree(d);
    auto const& f = field();
    Vec w = v;
    for (std::size_t k = 0; k < deg.pivots.size(); ++k) {
        auto c = w[deg.pivots[k]];
        if (c == 0)
            continue;
        for (std::size_t j = 0; j < deg.free_dim; ++j)
            if (deg.relations(k, j) != 0)
                w[j] = f.sub(w[j], f.mul(c, deg.relations(k, j)));
    }
    Vec out(deg.quotient_cols.size());
    for (std::size_t k = 0; k < deg.quotient_cols.size(); ++k)
        out[k] = w[deg.quotient_cols[k]];
    return out;
}

Vec PresentedModule::act(BasisRef a, int d, Vec const& x) const {
    int t = a.deg + d;
    auto const& src = degree(d);
    auto const& dst = degree(t);
    auto const& alg = *p_.algebra;
    auto free = lift(d, x);
    Vec out = zero_vec(field(), dst.free_dim);
    for (std::size_t i = 0; i < p_.generators.size(); ++i) {
        if (src.gen_dim[i] == 0 || dst.gen_dim[i] == 0)
            continue;
        Vec piece(free.begin() + static_cast<std::ptrdiff_t>(src.gen_offset[i]),
                  free.begin() + static_cast<std::ptrdiff_t>(src.gen_offset[i] + src.gen_dim[i]));
        if (vec_is_zero(piece))
            continue;
        auto prod = alg.left_multiply(a, d - p_.generators[i].degree, piece);
        std::copy(prod.begin(), prod.end(), out.begin() + static_cast<std::ptrdiff_t>(dst.gen_offset[i]));
    }
    return reduce(t, out);
}

std::string PresentedModule::label(BasisRef x) const {
    auto const& deg = degree(x.deg);
    auto col = deg.quotient_cols.at(x.idx);
    for (std::size_t i = 0; i < p_.generators.size(); ++i)
        if (col >= deg.gen_offset[i] && col < deg.gen_offset[i] + deg.gen_dim[i]) {
            auto c = static_cast<std::uint32_t>(col - deg.gen_offset[i]);
            auto a = p_.algebra->label({x.deg - p_.generators[i].degree, c});
            return a == "1" ? p_.generators[i].name : a + "*" + p_.generators[i].name;
        }
    return "?";
}

bool PresentedModule::is_zero_on_window() const {
    return std::all_of(degrees_.begin(), degrees_.end(), [](auto const& d) { return d.quotient_cols.empty(); });
}

} // namespace obstruct
