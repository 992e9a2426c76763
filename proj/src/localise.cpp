#include "obstruct/localise.hpp"

#include <algorithm>
#include <set>

namespace obstruct {

AlgebraMap::Fn monomial_map(std::shared_ptr<PresentedAlgebra const> r, std::shared_ptr<PresentedAlgebra const> t) {
    if (r->generators().size() != t->generators().size())
        throw InvalidInput("monomial map between presentations on different generators");
    return [r, t](BasisRef b) { return t->monomial_vector(r->monomial(b)); };
}

namespace {

LocalisedAlgebra identity_localisation(std::shared_ptr<PresentedAlgebra const> r) {
    LocalisedAlgebra out;
    out.base = r;
    out.algebra = r;
    out.can = [r](BasisRef b) { return unit_vec(r->field(), r->dim(b.deg), b.idx); };
    return out;
}

LocalisedAlgebra zero_localisation(std::shared_ptr<PresentedAlgebra const> r, std::vector<std::string> inverted) {
    LocalisedAlgebra out;
    out.base = r;
    auto z = std::make_shared<TableAlgebra>(r->field(), 0, std::vector<std::vector<std::string>>{{}}, std::nullopt);
    out.algebra = z;
    out.inverted = std::move(inverted);
    out.zero_ring = true;
    out.can = [f = r->field()](BasisRef) { return zero_vec(f, 0); };
    return out;
}

bool is_nilpotent(PresentedAlgebra const& r, int deg, Vec const& v) {
    if (deg == 0)
        return false;
    Vec p = v;
    int d = deg;
    while (true) {
        if (vec_is_zero(p))
            return true;
        if (d + deg > r.window_hi() || d + deg < r.window_lo())
            return false;
        p = r.multiply(d, p, deg, v);
        d += deg;
    }
}

/// Multiplication by g is injective on every window degree where it is defined.
bool nonzerodivisor(PresentedAlgebra const& r, std::size_t g) {
    int dg = r.generators()[g].degree;
    auto gm = r.generator_power(g, 1);
    auto gv = r.monomial_vector(gm);
    for (int d = r.window_lo(); d <= r.window_hi(); ++d) {
        if (d + dg < r.window_lo() || d + dg > r.window_hi())
            continue;
        auto n = r.dim(d);
        if (n == 0)
            continue;
        FpMatrix m(r.field(), r.dim(d + dg), n);
        for (std::uint32_t i = 0; i < n; ++i) {
            auto col = r.multiply(dg, gv, d, unit_vec(r.field(), n, i));
            for (std::size_t k = 0; k < col.size(); ++k)
                m(k, i) = col[k];
        }
        if (rank(m) != n)
            return false;
    }
    return true;
}

} // namespace

LocalisedAlgebra localise_algebra(std::shared_ptr<PresentedAlgebra const> r, std::vector<std::string> const& invert,
                                  std::optional<int> window) {
    if (!r->graded_commutative())
        throw Unsupported("localisation needs a graded-commutative presentation");
    std::set<std::size_t> gens;
    for (auto const& e : invert) {
        auto [deg, v] = r->parse_element(e);
        if (!deg || vec_is_zero(v) || is_nilpotent(*r, *deg, v))
            return zero_localisation(r, invert);
        std::size_t nz = 0, idx = 0;
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i] != 0) {
                ++nz;
                idx = i;
            }
        if (nz != 1)
            throw Unsupported("only monomials can be inverted, got '" + e + "'");
        auto const& m = r->monomial({*deg, static_cast<std::uint32_t>(idx)});
        std::vector<std::size_t> support;
        for (std::size_t g = 0; g < m.size(); ++g)
            if (m[g] != 0)
                support.push_back(g);
        if (support.empty())
            continue;
        if (support.size() != 1)
            throw Unsupported("only powers of a single generator can be inverted, got '" + e + "'");
        gens.insert(support[0]);
    }
    if (gens.empty())
        return identity_localisation(r);
    if (gens.size() > 1)
        throw Unsupported("inverting more than one generator is not supported");
    auto g = *gens.begin();
    if (r->generators()[g].degree == 0)
        throw Unsupported("inverting a degree-0 generator is not supported");
    if (auto inv = r->invertible_generator()) {
        if (*inv == g)
            return identity_localisation(r);
        throw Unsupported("the base already has an invertible generator");
    }
    if (!nonzerodivisor(*r, g))
        throw Unsupported("generator " + r->generators()[g].name +
                          " is a zero divisor that is not nilpotent; partial collapse is not supported");
    auto spec = r->spec();
    spec.invertible = {r->generators()[g].name};
    spec.window = window.value_or(spec.window);
    auto t = std::make_shared<PresentedAlgebra>(spec);
    LocalisedAlgebra out;
    out.base = r;
    out.algebra = t;
    out.inverted = {r->generators()[g].name};
    out.can = monomial_map(r, t);
    return out;
}

ModulePresentation localise_module(ModulePresentation const& x, LocalisedAlgebra const& t) {
    if (x.algebra.get() != t.base.get())
        throw InvalidInput("module is not over the localised base ring");
    return base_change(x, t.algebra, t.map());
}

std::vector<std::size_t> nilpotent_generators(PresentedAlgebra const& r) {
    std::vector<std::size_t> out;
    for (std::size_t g = 0; g < r.generators().size(); ++g) {
        if (r.invertible_generator() == g)
            continue;
        int d = r.generators()[g].degree;
        if (is_nilpotent(r, d, r.monomial_vector(r.generator_power(g, 1))))
            out.push_back(g);
    }
    return out;
}

std::string GradedPrime::label() const {
    if (generators.empty())
        return "(0)";
    std::string s = "(";
    for (std::size_t i = 0; i < generators.size(); ++i)
        s += (i ? ", " : "") + generators[i];
    return s + ")";
}

std::vector<GradedPrime> graded_primes(PresentedAlgebra const& r) {
    if (!r.graded_commutative())
        throw Unsupported("graded primes need a graded-commutative presentation");
    auto nil = nilpotent_generators(r);
    std::vector<std::size_t> rest;
    for (std::size_t g = 0; g < r.generators().size(); ++g)
        if (r.invertible_generator() != g && std::find(nil.begin(), nil.end(), g) == nil.end())
            rest.push_back(g);
    GradedPrime n;
    for (auto g : nil)
        n.generators.push_back(r.generators()[g].name);
    if (rest.empty()) {
        n.maximal = true;
        return {n};
    }
    if (rest.size() > 1)
        throw Unsupported("graded primes are only enumerated when one generator survives modulo nilpotents; "
                          "supply the primes explicitly");
    if (r.generators()[rest[0]].degree == 0)
        throw Unsupported("graded primes with a degree-0 polynomial generator are not supported");
    GradedPrime m = n;
    m.generators.push_back(r.generators()[rest[0]].name);
    m.maximal = true;
    return {n, m};
}

LocalisedAlgebra localise_at(std::shared_ptr<PresentedAlgebra const> r, GradedPrime const& p,
                             std::optional<int> window) {
    auto nil = nilpotent_generators(*r);
    std::vector<std::string> invert;
    for (std::size_t g = 0; g < r->generators().size(); ++g) {
        auto const& name = r->generators()[g].name;
        if (r->invertible_generator() == g || std::find(nil.begin(), nil.end(), g) != nil.end())
            continue;
        if (std::find(p.generators.begin(), p.generators.end(), name) == p.generators.end())
            invert.push_back(name);
    }
    if (invert.empty())
        return identity_localisation(r);
    return localise_algebra(r, invert, window);
}

bool check_prime(PresentedAlgebra const& r, GradedPrime const& p, int max_total) {
    std::vector<bool> in(r.generators().size(), false);
    for (auto const& name : p.generators) {
        auto it = std::find_if(r.generators().begin(), r.generators().end(), [&](auto const& g) { return g.name == name; });
        if (it == r.generators().end())
            throw InvalidInput("unknown generator '" + name + "' in prime");
        in[static_cast<std::size_t>(it - r.generators().begin())] = true;
    }
    auto mono_in = [&](BasisRef b) {
        auto const& m = r.monomial(b);
        for (std::size_t g = 0; g < m.size(); ++g)
            if (m[g] != 0 && in[g])
                return true;
        return false;
    };
    auto vec_in = [&](int d, Vec const& v) {
        for (std::uint32_t i = 0; i < v.size(); ++i)
            if (v[i] != 0 && !mono_in({d, i}))
                return false;
        return true;
    };
    if (auto u = r.unit_index(); !u || mono_in({0, *u}))
        return false;
    int lo = r.bounded_below() ? r.window_lo() : -max_total;
    for (int d1 = lo; d1 <= max_total; ++d1)
        for (int d2 = lo; d1 + d2 <= max_total; ++d2) {
            if (!r.in_window(d1) || !r.in_window(d2) || !r.in_window(d1 + d2))
                continue;
            for (std::uint32_t i = 0; i < r.dim(d1); ++i)
                for (std::uint32_t j = 0; j < r.dim(d2); ++j) {
                    BasisRef a{d1, i}, b{d2, j};
                    if (mono_in(a) || mono_in(b))
                        continue;
                    if (vec_in(d1 + d2, r.multiply_basis(a, b)))
                        return false;
                }
        }
    return true;
}

namespace {

int lowest_generator(ModulePresentation const& x) {
    int lo = 0;
    bool first = true;
    for (auto const& g : x.generators) {
        lo = first ? g.degree : std::min(lo, g.degree);
        first = false;
    }
    return lo;
}

int generator_spread(ModulePresentation const& x) {
    int s = 0;
    for (auto const& g : x.generators)
        s = std::max(s, std::abs(g.degree));
    for (auto const& r : x.relations)
        s = std::max(s, std::abs(r.degree));
    return s;
}

void check_mu(ModulePresentation const& x, HochschildCochain const& mu) {
    auto const* ctx = dynamic_cast<HochschildContext const*>(&mu.context());
    if (!ctx || !ctx->identity_values() || &ctx->arguments() != x.algebra.get())
        throw InvalidInput("mu must be a Hochschild cochain over the module's ring");
}

RealisabilityResult decide_kappa(HochschildCochain const& mu, std::shared_ptr<ModuleContext const> ctx,
                                 std::function<Vec(BasisRef)> const& f, int window) {
    RealisabilityResult out;
    out.context = ctx;
    out.kappa = cup_pairing(mu, ctx, f, window + 4);
    out.verdict = coboundary_decide(*out.kappa, window);
    return out;
}

} // namespace

RealisabilityResult realisability_verdict(ModulePresentation const& x, HochschildCochain const& mu, int window,
                                          bool split_free) {
    check_mu(x, mu);
    auto rest = x;
    std::vector<Generator> free;
    if (split_free)
        std::tie(rest, free) = split_free_summands(x);
    int lo = lowest_generator(rest);
    auto m = std::make_shared<PresentedModule>(rest, lo, std::max(window + 4, lo));
    auto ctx = std::make_shared<ModuleContext>(x.algebra, m, m, true);
    auto id = [m](BasisRef b) { return unit_vec(m->field(), m->dim(b.deg), b.idx); };
    auto out = decide_kappa(mu, ctx, id, window);
    out.free_part = free;
    out.remaining_generators = rest.generators.size();
    if (rest.generators.empty())
        out.verdict.note = "free module";
    return out;
}

RealisabilityResult local_realisability_verdict(ModulePresentation const& x, HochschildCochain const& mu,
                                                LocalisedAlgebra const& t, int window) {
    if (t.identity())
        return realisability_verdict(x, mu, window);
    check_mu(x, mu);
    auto [rest, free] = split_free_summands(x);
    int lo = lowest_generator(rest);
    int hi = std::max(window + 4, lo);
    auto m = std::make_shared<PresentedModule>(rest, lo, hi);
    std::shared_ptr<PresentedModule> mp;
    if (t.zero_ring) {
        ModulePresentation zero{x.algebra, {}, {}};
        mp = std::make_shared<PresentedModule>(zero, lo - 1, hi);
        auto ctx = std::make_shared<ModuleContext>(x.algebra, m, mp, true);
        auto out = decide_kappa(mu, ctx, [f = x.algebra->field()](BasisRef) { return zero_vec(f, 0); }, window);
        out.free_part = free;
        out.remaining_generators = rest.generators.size();
        out.verdict.note = "zero ring";
        return out;
    }
    mp = std::make_shared<PresentedModule>(localise_module(rest, t), lo - 1, hi);
    auto ctx = std::make_shared<ModuleContext>(x.algebra, m, mp, false, t.can);
    auto const& f = x.algebra->field();
    auto push = [m, mp, &rest, &t, &f](BasisRef b) {
        auto free_coords = m->lift(b.deg, unit_vec(f, m->dim(b.deg), b.idx));
        Vec out;
        std::size_t off = 0;
        for (auto const& g : rest.generators) {
            int e = b.deg - g.degree;
            auto n = rest.algebra->dim_or_zero(e);
            Vec block(free_coords.begin() + static_cast<std::ptrdiff_t>(off),
                      free_coords.begin() + static_cast<std::ptrdiff_t>(off + n));
            off += n;
            auto img = t.map().apply(e, block);
            if (img.size() != t.algebra->dim_or_zero(e))
                img = zero_vec(f, t.algebra->dim_or_zero(e));
            out.insert(out.end(), img.begin(), img.end());
        }
        return mp->reduce(b.deg, out);
    };
    auto out = decide_kappa(mu, ctx, push, window);
    out.free_part = free;
    out.remaining_generators = rest.generators.size();
    return out;
}

bool LocalGlobalReport::consistent() const {
    if (!global.verdict.trivial())
        return true;
    return std::all_of(rows.begin(), rows.end(), [](auto const& r) { return r.result.verdict.trivial(); });
}

LocalGlobalReport local_global_check(ModulePresentation const& x, HochschildCochain const& mu, int window,
                                     std::vector<GradedPrime> primes) {
    auto r = std::dynamic_pointer_cast<PresentedAlgebra const>(x.algebra);
    if (!r)
        throw InvalidInput("local-global checks need a presented base ring");
    if (primes.empty())
        primes = graded_primes(*r);
    LocalGlobalReport out;
    out.global = realisability_verdict(x, mu, window);
    int w = window + 8 + generator_spread(x);
    for (auto const& p : primes) {
        auto t = localise_at(r, p, w);
        auto res = local_realisability_verdict(x, mu, t, window);
        out.rows.push_back({p, std::move(t), std::move(res)});
    }
    return out;
}

nlohmann::json realisability_to_json(RealisabilityResult const& r) {
    nlohmann::json j = verdict_to_json(r.verdict);
    nlohmann::json free = nlohmann::json::array();
    for (auto const& g : r.free_part)
        free.push_back(g.name);
    j["free_summands"] = free;
    j["remaining_generators"] = r.remaining_generators;
    return j;
}

nlohmann::json local_global_to_json(LocalGlobalReport const& r) {
    nlohmann::json j;
    j["global"] = realisability_to_json(r.global);
    j["primes"] = nlohmann::json::array();
    for (auto const& row : r.rows)
        j["primes"].push_back({{"prime", row.prime.label()},
                               {"maximal", row.prime.maximal},
                               {"inverted", row.localisation.inverted},
                               {"zero_ring", row.localisation.zero_ring},
                               {"result", realisability_to_json(row.result)}});
    j["consistent"] = r.consistent();
    return j;
}

} // namespace obstruct
