#include <doctest.h>

#include "obstruct/groupcohom.hpp"
#include "obstruct/localise.hpp"

using namespace obstruct;

TEST_CASE("periodic resolutions and their endomorphism algebras") {
    for (auto [p, n] : {std::pair{2u, 1}, std::pair{2u, 2}, std::pair{3u, 1}, std::pair{3u, 2}, std::pair{5u, 1}}) {
        auto g = CyclicGroupData::make(p, n);
        auto x = periodic_injective_resolution(g, 10);
        CHECK(x->check_d_squared().empty());
        auto e = end_dga(g, 6);
        CHECK(check_d_squared(*e, -3, 6).empty());
        CHECK(check_leibniz(*e, -2, 4).empty());
        CHECK(check_dga_associativity(*e, -2, 3).empty());
        auto xm = chain_map_x(*e);
        auto ym = chain_map_y(*e);
        CHECK(vec_is_zero(e->apply_d(1, xm)));
        CHECK(vec_is_zero(e->apply_d(2, ym)));
        CHECK(e->multiply(1, xm, 2, ym) == e->multiply(2, ym, 1, xm));
        if (g.r == 2)
            CHECK(e->multiply(1, xm, 1, xm) == ym);
        else
            CHECK(e->apply_d(1, homotopy_q(*e)) == e->multiply(1, xm, 1, xm));
    }
}

TEST_CASE("the cohomology of End matches the group cohomology ring") {
    for (auto order : {2, 3, 4, 9}) {
        auto g = CyclicGroupData::of_order(order);
        auto tr = cyclic_transfer(g, 8);
        CHECK(tr->product_defects(8).empty());
        CHECK(tr->homotopy_defects(8).empty());
        for (int d = 0; d <= 8; ++d)
            CHECK(tr->cohomology().dim(d) == 1);
        auto ring = group_cohomology_ring(g, 8);
        CHECK(ring->check_confluence().empty());
        if (g.r >= 3)
            CHECK(vec_is_zero(ring->parse_element("X^2", 2).second));
    }
}

TEST_CASE("names of examples") {
    auto a = parse_group_example("cyclic:3^2");
    CHECK(a.factors.size() == 1);
    CHECK(a.factors[0].r == 9);
    CHECK(parse_group_example("cyclic:9").factors[0].n == 2);
    CHECK(parse_group_example("product:2,2").factors.size() == 2);
    CHECK(parse_group_example("tate:cyclic:3").tate);
    CHECK_THROWS_AS(parse_group_example("cyclic:6"), InvalidInput);
    CHECK_THROWS_AS(parse_group_example("dihedral:8"), InvalidInput);
    CHECK_THROWS_AS(parse_group_example("cyclic:x"), InvalidInput);
}

TEST_CASE("the secondary multiplication of Z/3") {
    auto g = CyclicGroupData::of_order(3);
    auto mu = mu_G(g, 8);
    CHECK(verify_m3_cocycle(mu.m3, 12));
    CHECK(mu.verdict.kind == ObstructionVerdict::Kind::Nontrivial);
    auto table = m3_table_z3(mu.context, 12);
    CHECK(verify_m3_cocycle(table, 12));
    auto diff = coboundary_decide(mu.m3 - table, 8);
    CHECK(diff.trivial());
}

TEST_CASE("the secondary multiplication is trivial for other cyclic groups") {
    for (auto order : {2, 4, 5, 9}) {
        auto mu = mu_G(CyclicGroupData::of_order(order), 8);
        CHECK(verify_m3_cocycle(mu.m3, 12));
        CHECK(mu.verdict.trivial());
    }
}

TEST_CASE("Tate and Kunneth variants") {
    auto t3 = mu_G_tate(CyclicGroupData::of_order(3), 8);
    CHECK(t3.verdict.kind == ObstructionVerdict::Kind::Nontrivial);
    auto t9 = mu_G_tate(CyclicGroupData::of_order(9), 8);
    CHECK(t9.verdict.trivial());
    auto k22 = mu_product({CyclicGroupData::of_order(2), CyclicGroupData::of_order(2)}, 6);
    CHECK(k22.verdict.trivial());
    auto k39 = mu_product({CyclicGroupData::of_order(3), CyclicGroupData::of_order(9)}, 2);
    CHECK(verify_m3_cocycle(k39.m3, 6));
}
