#include "obstruct/groupcohom.hpp"

#include <sstream>

#include "obstruct/localise.hpp"

namespace obstruct {

namespace {

bool is_prime(long long p) {
    if (p < 2)
        return false;
    for (long long d = 2; d * d <= p; ++d)
        if (p % d == 0)
            return false;
    return true;
}

long long parse_int(std::string const& s) {
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &pos);
    } catch (std::exception const&) {
        throw InvalidInput("expected an integer, got '" + s + "'");
    }
    if (pos != s.size())
        throw InvalidInput("expected an integer, got '" + s + "'");
    return v;
}

} // namespace

CyclicGroupData CyclicGroupData::make(std::uint32_t p, int n) {
    if (!is_prime(p) || p > 65521 || n < 1)
        throw InvalidInput("cyclic group needs a prime p and n >= 1");
    CyclicGroupData g;
    g.p = p;
    g.n = n;
    long long r = 1;
    for (int i = 0; i < n; ++i) {
        r *= p;
        if (r > 4096)
            throw InvalidInput("group order too large");
    }
    g.r = static_cast<int>(r);
    g.field = PrimeField(p);
    return g;
}

CyclicGroupData CyclicGroupData::of_order(long long order) {
    if (order < 2)
        throw InvalidInput("cyclic group order must be at least 2");
    for (long long p = 2; p <= order; ++p) {
        if (order % p != 0)
            continue;
        int n = 0;
        long long m = order;
        while (m % p == 0) {
            m /= p;
            ++n;
        }
        if (m != 1)
            throw InvalidInput("order " + std::to_string(order) + " is not a prime power");
        return make(static_cast<std::uint32_t>(p), n);
    }
    throw InvalidInput("invalid order");
}

std::string CyclicGroupData::name() const {
    return "cyclic:" + std::to_string(p) + (n > 1 ? "^" + std::to_string(n) : "");
}

std::shared_ptr<FreeComplex> periodic_injective_resolution(CyclicGroupData const& g, int length) {
    auto x = std::make_shared<FreeComplex>();
    x->field = g.field;
    x->r = g.r;
    x->lo = 0;
    x->ranks.assign(static_cast<std::size_t>(length + 1), 1);
    for (int j = 0; j < length; ++j) {
        PolyMatrix m(1, 1, g.r);
        if (j % 2 == 0)
            m.at(0, 0, 1) = 1;
        else
            m.at(0, 0, g.r - 1) = g.field.neg(1);
        x->d.push_back(m);
    }
    return x;
}

int resolution_length(int max_degree) { return 2 * (max_degree + 2); }

std::shared_ptr<EndDga> end_dga(CyclicGroupData const& g, int max_degree) {
    int n = resolution_length(max_degree);
    return std::make_shared<EndDga>(periodic_injective_resolution(g, n), n - 4);
}

namespace {

/// Degree-n map with component T^{power_even} on even sources and T^{power_odd} on odd ones
/// (a negative power means zero).
Vec periodic_map(EndDga const& e, int n, int power_even, int power_odd) {
    std::map<int, PolyMatrix> comps;
    auto [a, b] = e.hom().component_range(n);
    int r = e.complex()->r;
    for (int j = a; j <= b; ++j) {
        int p = j % 2 == 0 ? power_even : power_odd;
        PolyMatrix m(1, 1, r);
        if (p >= 0)
            m.at(0, 0, p) = 1;
        comps[j] = m;
    }
    return e.hom().from_components(n, comps);
}

} // namespace

Vec chain_map_x(EndDga const& e) { return periodic_map(e, 1, 0, e.complex()->r - 2); }
Vec chain_map_y(EndDga const& e) { return periodic_map(e, 2, 0, 0); }
Vec homotopy_q(EndDga const& e) {
    if (e.complex()->r < 3)
        throw InvalidInput("the homotopy q exists for r >= 3");
    return periodic_map(e, 1, -1, e.complex()->r - 3);
}

AlgebraSpec group_cohomology_spec(CyclicGroupData const& g, int window) {
    AlgebraSpec s;
    s.characteristic = g.p;
    s.window = window;
    if (g.r == 2) {
        s.generators = {{"X", 1}};
    } else {
        s.generators = {{"X", 1}, {"Y", 2}};
        s.relations = {{"X^2", "0"}};
    }
    return s;
}

std::shared_ptr<PresentedAlgebra> group_cohomology_ring(CyclicGroupData const& g, int window) {
    return std::make_shared<PresentedAlgebra>(group_cohomology_spec(g, window));
}

std::shared_ptr<PresentedAlgebra> tate_ring(CyclicGroupData const& g, int window) {
    auto s = group_cohomology_spec(g, window);
    s.invertible = {g.r == 2 ? "X" : "Y"};
    return std::make_shared<PresentedAlgebra>(s);
}

std::shared_ptr<AInfinityTransfer> cyclic_transfer(CyclicGroupData const& g, int max_degree) {
    auto e = end_dga(g, max_degree);
    auto lambda = group_cohomology_ring(g, max_degree + 2);
    auto x = chain_map_x(*e);
    auto y = chain_map_y(*e);
    std::vector<Vec> ypow{e->unit()};
    for (int i = 1; 2 * i <= max_degree; ++i)
        ypow.push_back(e->multiply(2 * (i - 1), ypow.back(), 2, y));
    std::map<int, std::vector<Vec>> reps;
    for (int d = 0; d <= max_degree; ++d) {
        if (g.r == 2) {
            // X^d = x^d
            reps[d] = {d % 2 == 0 ? ypow[static_cast<std::size_t>(d / 2)]
                                  : e->multiply(1, x, d - 1, ypow[static_cast<std::size_t>(d / 2)])};
        } else {
            auto i = static_cast<std::size_t>(d / 2);
            reps[d] = {d % 2 == 0 ? ypow[i] : e->multiply(1, x, d - 1, ypow[i])};
        }
    }
    return std::make_shared<AInfinityTransfer>(e, lambda, std::move(reps), 0, max_degree);
}

HochschildCochain m3_table_z3(std::shared_ptr<HochschildContext const> ctx, int window) {
    auto const* r = dynamic_cast<PresentedAlgebra const*>(&ctx->arguments());
    if (!r || r->generators().size() != 2)
        throw InvalidInput("the m3 table lives over k[X, Y]/(X^2)");
    HochschildCochain out(ctx, 3, -1);
    for (auto const& t : window_tuples(*ctx, 3, window, true)) {
        int ys = 1;
        bool odd = true;
        for (auto const& b : t) {
            auto const& m = r->monomial(b);
            if (m[0] != 1)
                odd = false;
            ys += m[1];
        }
        if (!odd)
            continue;
        out.set(t, r->monomial_vector({0, ys}));
    }
    return out;
}

MuResult mu_G(CyclicGroupData const& g, int window) {
    int dmax = window + 4;
    auto tr = cyclic_transfer(g, dmax);
    auto ctx = std::make_shared<HochschildContext>(tr->cohomology_algebra());
    auto m3 = tr->m3_cochain(ctx, dmax);
    auto verdict = coboundary_decide(m3, window);
    return {ctx, std::move(m3), std::move(verdict)};
}

MuResult mu_G_tate(CyclicGroupData const& g, int window) {
    int dmax = window + 4;
    auto tr = cyclic_transfer(g, dmax);
    auto r = std::dynamic_pointer_cast<PresentedAlgebra const>(tr->cohomology_algebra());
    auto rctx = std::make_shared<HochschildContext>(r);
    auto m3 = tr->m3_cochain(rctx, dmax);
    auto t = tate_ring(g, dmax);
    auto tctx = std::make_shared<HochschildContext>(r, t, monomial_map(r, t));
    auto gamma = push_forward(m3, tctx, dmax);
    auto verdict = coboundary_decide(gamma, window);
    return {tctx, std::move(gamma), std::move(verdict)};
}

MuResult mu_product(std::vector<CyclicGroupData> const& groups, int window) {
    if (groups.empty())
        throw InvalidInput("empty group product");
    for (auto const& g : groups)
        if (g.p != groups.front().p)
            throw InvalidInput("Kunneth product needs a common characteristic");
    int dmax = window + 4;
    auto first = cyclic_transfer(groups.front(), dmax);
    std::shared_ptr<GradedAlgebra const> alg = first->cohomology_algebra();
    auto ctx = std::make_shared<HochschildContext>(alg);
    auto m = first->m3_cochain(ctx, dmax);
    for (std::size_t i = 1; i < groups.size(); ++i) {
        auto tr = cyclic_transfer(groups[i], dmax);
        auto bctx = std::make_shared<HochschildContext>(tr->cohomology_algebra());
        auto mb = tr->m3_cochain(bctx, dmax);
        auto prod = std::make_shared<TensorAlgebra>(alg, tr->cohomology_algebra());
        auto pctx = std::make_shared<HochschildContext>(prod);
        m = kunneth_m3(m, mb, pctx, dmax);
        alg = prod;
        ctx = pctx;
    }
    auto verdict = coboundary_decide(m, window);
    return {ctx, std::move(m), std::move(verdict)};
}

GroupExample parse_group_example(std::string const& name) {
    GroupExample ex;
    std::string rest = name;
    if (rest.rfind("tate:", 0) == 0) {
        ex.tate = true;
        rest = rest.substr(5);
    }
    if (rest.rfind("cyclic:", 0) == 0) {
        auto body = rest.substr(7);
        auto caret = body.find('^');
        if (caret == std::string::npos) {
            ex.factors.push_back(CyclicGroupData::of_order(parse_int(body)));
        } else {
            auto p = parse_int(body.substr(0, caret));
            auto n = parse_int(body.substr(caret + 1));
            if (p < 2 || p > 65521 || n < 1 || n > 12)
                throw InvalidInput("invalid cyclic group '" + name + "'");
            ex.factors.push_back(CyclicGroupData::make(static_cast<std::uint32_t>(p), static_cast<int>(n)));
        }
    } else if (rest.rfind("product:", 0) == 0 && !ex.tate) {
        std::stringstream ss(rest.substr(8));
        std::string item;
        while (std::getline(ss, item, ','))
            ex.factors.push_back(CyclicGroupData::of_order(parse_int(item)));
        if (ex.factors.size() < 2)
            throw InvalidInput("a product needs at least two factors");
    } else {
        throw InvalidInput("unknown example '" + name + "'");
    }
    return ex;
}

MuResult mu_example(GroupExample const& ex, int window) {
    if (ex.tate)
        return mu_G_tate(ex.factors.front(), window);
    if (ex.factors.size() == 1)
        return mu_G(ex.factors.front(), window);
    return mu_product(ex.factors, window);
}

} // namespace obstruct
