#include <doctest.h>

#include "obstruct/groupcohom.hpp"
#include "obstruct/localise.hpp"

using namespace obstruct;

namespace {

std::shared_ptr<PresentedAlgebra> truncated(int window) {
    return group_cohomology_ring(CyclicGroupData::of_order(3), window);
}

ModulePresentation quotient_by_x(std::shared_ptr<PresentedAlgebra const> r) {
    return cyclic_quotient(r, 1, r->parse_element("X", 1).second);
}

} // namespace

TEST_CASE("inverting Y gives the truncated Laurent ring") {
    auto r = truncated(10);
    auto t = localise_algebra(r, {"Y"}, 8);
    REQUIRE(!t.zero_ring);
    CHECK(t.inverted == std::vector<std::string>{"Y"});
    auto const& a = *t.algebra;
    CHECK(a.window_lo() == -8);
    for (int d = -8; d <= 8; ++d)
        CHECK(a.dim(d) == 1);
    CHECK(check_associativity(a, 8).empty());
    auto m = t.map();
    for (int d1 = 0; d1 <= 4; ++d1)
        for (int d2 = 0; d2 <= 4; ++d2) {
            auto lhs = m.apply(d1 + d2, r->multiply_basis({d1, 0}, {d2, 0}));
            auto rhs = a.multiply(d1, t.can({d1, 0}), d2, t.can({d2, 0}));
            CHECK(lhs == rhs);
            CHECK(!vec_is_zero(t.can({d1, 0})));
        }
    CHECK(localise_algebra(r, {"1"}).identity());
    CHECK(localise_algebra(r, {"2*Y^2"}, 8).inverted == std::vector<std::string>{"Y"});
    CHECK(localise_algebra(r, {"X"}).zero_ring);
    CHECK(localise_algebra(r, {"0"}).zero_ring);
    CHECK_THROWS_AS(localise_algebra(r, {"Y + X*Y"}), Error);
}

TEST_CASE("partial collapse is rejected") {
    AlgebraSpec s;
    s.characteristic = 3;
    s.generators = {{"X", 1}, {"Y", 2}};
    s.relations = {{"X^2", "0"}, {"X*Y", "0"}};
    s.window = 8;
    auto r = std::make_shared<PresentedAlgebra>(s);
    CHECK_THROWS_AS(localise_algebra(r, {"Y"}), Unsupported);
}

TEST_CASE("localised modules") {
    auto r = truncated(12);
    auto t = localise_algebra(r, {"Y"}, 10);
    auto x = quotient_by_x(r);
    auto xp = localise_module(x, t);
    PresentedModule m(xp, -6, 6);
    for (int d = -6; d <= 6; ++d)
        CHECK(m.dim(d) == (d % 2 == 0 ? 1u : 0u));
    auto killed = cyclic_quotient(r, 2, r->parse_element("Y", 2).second);
    PresentedModule z(localise_module(killed, t), -4, 4);
    CHECK(z.is_zero_on_window());
    auto same = localise_module(x, localise_algebra(r, {"1"}));
    CHECK(module_to_json(same) == module_to_json(x));
}

TEST_CASE("graded primes of the supported family") {
    auto r = truncated(8);
    auto ps = graded_primes(*r);
    REQUIRE(ps.size() == 2);
    CHECK(ps[0].label() == "(X)");
    CHECK(!ps[0].maximal);
    CHECK(ps[1].label() == "(X, Y)");
    CHECK(ps[1].maximal);
    for (auto const& p : ps)
        CHECK(check_prime(*r, p, 8));
    CHECK(!check_prime(*r, GradedPrime{{"Y"}, false}, 8));
    CHECK(localise_at(r, ps[1]).identity());
    CHECK(localise_at(r, ps[0], 8).inverted == std::vector<std::string>{"Y"});

    auto k2 = group_cohomology_ring(CyclicGroupData::of_order(2), 8);
    auto p2 = graded_primes(*k2);
    REQUIRE(p2.size() == 2);
    CHECK(p2[0].label() == "(0)");
    CHECK(p2[1].label() == "(X)");

    AlgebraSpec s;
    s.characteristic = 5;
    s.generators = {{"A", 1}};
    s.window = 4;
    PresentedAlgebra ext(s);
    auto pe = graded_primes(ext);
    REQUIRE(pe.size() == 1);
    CHECK(pe[0].label() == "(A)");

    AlgebraSpec two;
    two.characteristic = 5;
    two.generators = {{"U", 2}, {"V", 2}};
    two.window = 4;
    CHECK_THROWS_AS(graded_primes(PresentedAlgebra(two)), Unsupported);
}

TEST_CASE("realisability of modules over the cohomology of Z/3") {
    int w = 6;
    auto g = CyclicGroupData::of_order(3);
    auto tr = cyclic_transfer(g, w + 4);
    auto r = std::dynamic_pointer_cast<PresentedAlgebra const>(tr->cohomology_algebra());
    auto ctx = std::make_shared<HochschildContext>(r);
    auto mu = tr->m3_cochain(ctx, w + 4);

    auto free = realisability_verdict(free_module(r), mu, w);
    CHECK(free.verdict.trivial());
    CHECK(free.verdict.witness->is_zero());

    auto x = quotient_by_x(r);
    auto kx = realisability_verdict(x, mu, w);
    CHECK(kx.verdict.kind == ObstructionVerdict::Kind::Nontrivial);
    auto sum = direct_sum(x, free_module(r, 2));
    CHECK(realisability_verdict(sum, mu, w).verdict.kind == kx.verdict.kind);
    CHECK(realisability_verdict(sum, mu, w, false).verdict.kind == kx.verdict.kind);

    auto report = local_global_check(x, mu, w);
    REQUIRE(report.rows.size() == 2);
    for (auto const& row : report.rows)
        CHECK(row.result.verdict.kind == ObstructionVerdict::Kind::Nontrivial);
    CHECK(report.consistent());
    auto j = local_global_to_json(report);
    CHECK(j["primes"].size() == 2);
}
