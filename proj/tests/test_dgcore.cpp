#include <doctest.h>

#include "obstruct/dgcore.hpp"

using namespace obstruct;

namespace {

std::shared_ptr<FreeComplex> periodic(std::uint32_t p, int r, int n) {
    auto x = std::make_shared<FreeComplex>();
    x->field = PrimeField(p);
    x->r = r;
    x->lo = 0;
    x->ranks.assign(static_cast<std::size_t>(n + 1), 1);
    for (int j = 0; j < n; ++j) {
        PolyMatrix m(1, 1, r);
        if (j % 2 == 0)
            m.at(0, 0, 1) = 1;
        else
            m.at(0, 0, r - 1) = x->field.neg(1);
        x->d.push_back(m);
    }
    return x;
}

Vec end_element(EndDga const& e, int n, int power_even, int power_odd) {
    std::map<int, PolyMatrix> comps;
    auto [a, b] = e.hom().component_range(n);
    int r = e.complex()->r;
    for (int j = a; j <= b; ++j) {
        PolyMatrix m(1, 1, r);
        m.at(0, 0, j % 2 == 0 ? power_even : power_odd) = 1;
        comps[j] = m;
    }
    return e.hom().from_components(n, comps);
}

} // namespace

TEST_CASE("cohomology of small complexes") {
    PrimeField f(5);
    CochainComplex exact(f, 0, {1, 1});
    exact.set_differential(0, FpMatrix(f, {{2}}));
    Cohomology h(exact, -1, 2);
    for (int n = -1; n <= 2; ++n)
        CHECK(h.dim(n) == 0);

    CochainComplex zero(f, 0, {2, 0, 3});
    Cohomology hz(zero, 0, 2);
    CHECK(hz.dim(0) == 2);
    CHECK(hz.dim(1) == 0);
    CHECK(hz.dim(2) == 3);
    CHECK(hz.project(2, Vec{1, 2, 3}) == Vec{1, 2, 3});
    CHECK_THROWS_AS(Cohomology(zero, 0, 0, {{0, {Vec{1, 0}}}}), InvalidInput);

    CochainComplex c(f, 0, {2, 2});
    c.set_differential(0, FpMatrix(f, {{1, 1}, {0, 0}}));
    Cohomology hc(c, 0, 1);
    CHECK(hc.dim(0) == 1);
    CHECK(hc.dim(1) == 1);
    CHECK(hc.project(1, Vec{3, 0}).size() == 1);
    CHECK(vec_is_zero(hc.project(1, Vec{3, 0})));
    CHECK_THROWS_AS(hc.project(0, Vec{1, 0}), NotACocycle);
    CHECK(hc.boundary_preimage(1, Vec{3, 0}) == Vec{3, 0});
    CHECK(!hc.boundary_preimage(1, Vec{0, 1}));
}

TEST_CASE("endomorphisms of the periodic resolution") {
    for (auto [p, r] : {std::pair{3u, 3}, std::pair{2u, 2}, std::pair{3u, 9}}) {
        int n = 14;
        auto x = periodic(p, r, n);
        CHECK(x->check_d_squared().empty());
        EndDga e(x, n - 4);
        CHECK(check_d_squared(e, -n, n).empty());
        CHECK(check_leibniz(e, -4, 4).empty());
        CHECK(check_dga_associativity(e, -3, 3).empty());
        auto const& f = e.field();

        auto one = e.unit();
        CHECK(vec_is_zero(e.apply_d(0, one)));
        auto xg = end_element(e, 1, 0, r - 2);
        auto yg = end_element(e, 2, 0, 0);
        CHECK(vec_is_zero(e.apply_d(1, xg)));
        CHECK(vec_is_zero(e.apply_d(2, yg)));
        CHECK(e.multiply(1, xg, 2, yg) == e.multiply(2, yg, 1, xg));
        auto x2 = e.multiply(1, xg, 1, xg);
        if (r == 2) {
            CHECK(x2 == yg);
        } else {
            auto q = end_element(e, 1, 0, r - 3);
            for (std::size_t i = 0; i < q.size(); ++i)
                if (e.hom().decode({1, static_cast<std::uint32_t>(i)}).source % 2 == 0)
                    q[i] = 0;
            CHECK(e.apply_d(1, q) == x2);
        }

        Cohomology h(e, -2, 8);
        for (int d = 0; d <= 8; ++d)
            CHECK(h.dim(d) == 1);
        for (int d = 1; d <= 8; ++d)
            CHECK(h.raw_dim(d) == 1);
        CHECK(h.dim(-1) == 0);
        CHECK(!vec_is_zero(h.project(0, one)));
        CHECK(!vec_is_zero(h.project(1, xg)));
        CHECK(!vec_is_zero(h.project(4, e.multiply(2, yg, 2, yg))));
        CHECK(!vec_is_zero(h.project(5, e.multiply(1, xg, 4, e.multiply(2, yg, 2, yg)))));
        (void)f;
    }
}

TEST_CASE("a corrupted dg algebra table is rejected") {
    auto j = nlohmann::json::parse(R"({
        "char": 3,
        "degrees": [{"degree": 0, "basis": ["1"]}, {"degree": 1, "basis": ["a", "b"]}, {"degree": 2, "basis": ["c"]}],
        "unit": {"1": 1},
        "differential": [{"from": "a", "to": {"c": 1}}],
        "products": [{"left": "1", "right": "1", "value": {"1": 1}},
                     {"left": "1", "right": "a", "value": {"a": 1}}, {"left": "a", "right": "1", "value": {"a": 1}},
                     {"left": "1", "right": "b", "value": {"b": 1}}, {"left": "b", "right": "1", "value": {"b": 1}},
                     {"left": "1", "right": "c", "value": {"c": 1}}, {"left": "c", "right": "1", "value": {"c": 1}},
                     {"left": "b", "right": "b", "value": {"c": 1}}]
    })");
    auto a = dga_from_json(j);
    CHECK(check_d_squared(*a, -1, 2).empty());
    CHECK(check_leibniz(*a, 0, 2).empty());
    CHECK(check_dga_associativity(*a, 0, 2).empty());
    Cohomology h(*a, 0, 2);
    CHECK(h.dim(0) == 1);
    CHECK(h.dim(1) == 1);
    CHECK(h.dim(2) == 0);

    auto round = dga_from_json(dga_to_json(*a));
    CHECK(dga_to_json(*round) == dga_to_json(*a));

    j["differential"].push_back({{"from", "1"}, {"to", {{"a", 1}}}});
    auto bad = dga_from_json(j);
    CHECK(!check_leibniz(*bad, 0, 2).empty());
    j["products"].push_back({{"left", "a"}, {"right", "b"}, {"value", {{"c", 1}}}});
    CHECK_THROWS_AS(dga_from_json(nlohmann::json{{"char", 3}}), InvalidInput);
}

TEST_CASE("pullback of endomorphism algebras along a summand inclusion") {
    PrimeField f(7);
    auto y = std::make_shared<FreeComplex>(vector_space_complex(f, 0, {FpMatrix(f, {{1}, {0}}), FpMatrix(f, {{0, 1}})}, {1, 2, 1}));
    auto cone = std::make_shared<FreeComplex>(vector_space_complex(f, 0, {FpMatrix(f, {{1}})}, {1, 1}));
    auto sum = std::make_shared<FreeComplex>(direct_sum(*y, *cone));
    CHECK(sum->check_d_squared().empty());
    EndDga a(y), b(sum);
    HomComplex m(y, sum);
    ChainMap alpha{&a, &m, 0, {}}, beta{&b, &m, 0, {}};
    for (int n = a.window_lo(); n <= a.window_hi(); ++n) {
        FpMatrix blk(f, m.degree_dim(n), a.dim(n));
        for (std::uint32_t i = 0; i < a.dim(n); ++i) {
            auto e = a.hom().decode({n, i});
            auto idx = m.encode(n, e);
            blk(*idx, i) = 1;
        }
        alpha.blocks.emplace(n, std::move(blk));
    }
    for (int n = b.window_lo(); n <= b.window_hi(); ++n) {
        FpMatrix blk(f, m.degree_dim(n), b.dim(n));
        for (std::uint32_t i = 0; i < b.dim(n); ++i) {
            auto e = b.hom().decode({n, i});
            if (e.col >= y->rank(e.source))
                continue;
            if (auto idx = m.encode(n, e))
                blk(*idx, i) = 1;
        }
        beta.blocks.emplace(n, std::move(blk));
    }
    CHECK(chain_map_defects(alpha, -3, 3).empty());
    CHECK(chain_map_defects(beta, -3, 3).empty());
    auto pb = pullback_dga(a, b, m, alpha, beta);
    auto const& x = *pb.algebra;
    CHECK(check_d_squared(x, -3, 3).empty());
    CHECK(check_leibniz(x, -2, 2).empty());
    CHECK(check_dga_associativity(x, -2, 2).empty());
    CHECK(check_unit(x, 2).empty());
    CHECK(dga_map_defects(pb.p1, x, a, -2, 2).empty());
    CHECK(dga_map_defects(pb.p2, x, b, -2, 2).empty());
    CHECK(cohomology_pullback_check(pb, a, b, m, alpha, beta, -2, 2));
    CHECK(quasi_iso_check(pb.p2, -2, 2));
}
