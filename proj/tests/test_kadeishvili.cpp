#include <doctest.h>

#include "obstruct/groupcohom.hpp"
#include "obstruct/kadeishvili.hpp"

using namespace obstruct;

TEST_CASE("a dg algebra with zero differential has vanishing m3") {
    auto j = nlohmann::json::parse(R"({
        "char": 5,
        "degrees": [{"degree": 0, "basis": ["1"]}, {"degree": 1, "basis": ["a"]}, {"degree": 2, "basis": ["b"]}],
        "unit": {"1": 1},
        "products": [{"left": "1", "right": "1", "value": {"1": 1}},
                     {"left": "1", "right": "a", "value": {"a": 1}}, {"left": "a", "right": "1", "value": {"a": 1}},
                     {"left": "1", "right": "b", "value": {"b": 1}}, {"left": "b", "right": "1", "value": {"b": 1}},
                     {"left": "a", "right": "a", "value": {"b": 1}}]
    })");
    std::shared_ptr<DgAlgebra const> a = dga_from_json(j);
    auto tr = canonical_transfer(a, 0, 2);
    CHECK(tr->product_defects(2).empty());
    CHECK(tr->homotopy_defects(2).empty());
    auto ctx = std::make_shared<HochschildContext>(tr->cohomology_algebra());
    auto m3 = tr->m3_cochain(ctx, 2);
    CHECK(m3.is_zero());
    CHECK(verify_m3_cocycle(m3, 2));
}

TEST_CASE("the explicit homotopy for Z/3") {
    auto tr = cyclic_transfer(CyclicGroupData::of_order(3), 8);
    auto const& e = dynamic_cast<EndDga const&>(tr->source());
    auto const& l = *tr->cohomology_algebra();
    auto x = find_label(l, "X", 0, 8);
    REQUIRE(x);
    auto q = homotopy_q(e);
    CHECK(e.apply_d(1, tr->f2(*x, *x)) == vec_scale(l.field(), l.field().neg(1), e.apply_d(1, q)));
    auto one = find_label(l, "1", 0, 0);
    CHECK(vec_is_zero(tr->f2(*one, *x)));
    auto ctx = std::make_shared<HochschildContext>(tr->cohomology_algebra());
    auto m3 = tr->m3_cochain(ctx, 6);
    CHECK(m3.is_normalised());
    CHECK(verify_m3_cocycle(m3, 6));
    auto broken = m3;
    broken.set({*x, *x, *x}, vec_scale(l.field(), 2, m3.value({*x, *x, *x})));
    CHECK(!verify_m3_cocycle(broken, 6));
    CHECK(verify_m3_cocycle(HochschildCochain(ctx, 3, -1), 6));
}

TEST_CASE("m3 does not depend on the cycle selection up to coboundaries") {
    for (auto order : {3, 9}) {
        auto tr = cyclic_transfer(CyclicGroupData::of_order(order), 10);
        auto ctx = std::make_shared<HochschildContext>(tr->cohomology_algebra());
        auto m3 = tr->m3_cochain(ctx, 10);
        for (std::uint64_t seed : {1u, 2u}) {
            auto p = perturbed_transfer(*tr, seed);
            CHECK(p->homotopy_defects(10).empty());
            auto m3p = p->m3_cochain(ctx, 10);
            CHECK(verify_m3_cocycle(m3p, 10));
            CHECK(coboundary_decide(m3p - m3, 6).trivial());
        }
    }
}

TEST_CASE("Kunneth combination of zero cochains is zero") {
    auto a = group_cohomology_ring(CyclicGroupData::of_order(2), 8);
    auto ca = std::make_shared<HochschildContext>(a);
    auto b2 = group_cohomology_ring(CyclicGroupData::of_order(2), 8);
    auto cb2 = std::make_shared<HochschildContext>(b2);
    auto t = std::make_shared<TensorAlgebra>(a, a);
    CHECK_THROWS_AS(kunneth_m3(HochschildCochain(ca, 3, -1), HochschildCochain(cb2, 3, -1),
                               std::make_shared<HochschildContext>(t), 4),
                    InvalidInput);
    auto t2 = std::make_shared<TensorAlgebra>(a, b2);
    CHECK(kunneth_m3(HochschildCochain(ca, 3, -1), HochschildCochain(cb2, 3, -1),
                     std::make_shared<HochschildContext>(t2), 4)
              .is_zero());
}
