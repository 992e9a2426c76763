#include <doctest.h>

#include <random>

#include "obstruct/graded.hpp"

using namespace obstruct;

TEST_CASE("rref of the zero matrix has no pivots") {
    PrimeField f(5);
    auto r = rref(FpMatrix(f, 2, 3));
    CHECK(r.pivots.empty());
    CHECK(r.reduced.is_zero());
}

TEST_CASE("rref of the identity is the identity") {
    PrimeField f(3);
    auto r = rref(FpMatrix::identity(f, 3));
    CHECK(r.reduced == FpMatrix::identity(f, 3));
    CHECK(r.pivots == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("rref of a rank one matrix over F5") {
    PrimeField f(5);
    FpMatrix a(f, {{1, 2}, {2, 4}});
    auto r = rref(a);
    CHECK(r.reduced == FpMatrix(f, {{1, 2}, {0, 0}}));
    CHECK(r.pivots == std::vector<std::size_t>{0});
}

TEST_CASE("solve returns the canonical particular solution and kernel") {
    PrimeField f(5);
    FpMatrix a(f, {{1, 2}, {2, 4}});
    auto s = solve(a, Vec{1, 2});
    REQUIRE(s);
    CHECK(s->particular == Vec{1, 0});
    REQUIRE(s->kernel.size() == 1);
    CHECK(s->kernel[0] == Vec{3, 1});
}

TEST_CASE("solve on the identity and on an inconsistent system") {
    PrimeField f(3);
    auto s = solve(FpMatrix::identity(f, 3), Vec{2, 0, 1});
    REQUIRE(s);
    CHECK(s->particular == Vec{2, 0, 1});
    CHECK(s->kernel.empty());
    CHECK_FALSE(solve(FpMatrix(f, {{0}}), Vec{1}));
    CHECK_THROWS_AS(solve(FpMatrix(f, {{0}}), Vec{1, 1}), InvalidInput);
}

TEST_CASE("rational rref and solve") {
    RationalField q;
    QMatrix a(q, {{2, 4}, {1, 3}});
    std::vector<RationalField::Elem> b{RationalField::Elem(1), RationalField::Elem(1)};
    auto s = solve(a, b);
    REQUIRE(s);
    CHECK(s->particular[0] == RationalField::Elem(-1, 2));
    CHECK(s->particular[1] == RationalField::Elem(1, 2));
}

TEST_CASE("random matrices: rank nullity, idempotent rref, solutions verify") {
    std::mt19937 rng(7);
    for (std::uint32_t p : {2u, 3u, 7u}) {
        PrimeField f(p);
        for (int trial = 0; trial < 50; ++trial) {
            std::size_t r = rng() % 6 + 1, c = rng() % 6 + 1;
            FpMatrix a(f, r, c);
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = 0; j < c; ++j)
                    a(i, j) = rng() % 3 == 0 ? rng() % p : 0;
            auto red = rref(a);
            CHECK(rref(red.reduced).reduced == red.reduced);
            auto ker = kernel_basis(a);
            CHECK(red.pivots.size() + ker.size() == c);
            for (auto const& v : ker)
                CHECK(vec_is_zero(a.apply(v)));
            Vec b(r);
            for (auto& e : b)
                e = rng() % p;
            auto s = solve(a, b);
            LinearSolver<PrimeField> ls(a);
            CHECK(ls.in_image(b) == s.has_value());
            if (s) {
                CHECK(a.apply(s->particular) == b);
                CHECK(*ls.solve(b) == s->particular);
            }
        }
    }
}

TEST_CASE("sparse system agrees with dense solve") {
    std::mt19937 rng(11);
    PrimeField f(3);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t r = rng() % 8 + 1, c = rng() % 8 + 1;
        FpMatrix a(f, r, c);
        Vec b(r);
        SparseSystem sys(f, c);
        for (std::size_t i = 0; i < r; ++i) {
            SparseRow row;
            for (std::size_t j = 0; j < c; ++j)
                if (rng() % 3 == 0) {
                    a(i, j) = rng() % 3;
                    if (a(i, j))
                        row.push_back({j, a(i, j)});
                }
            b[i] = rng() % 3;
            sys.add_equation(row, b[i]);
        }
        auto dense = solve(a, b);
        auto sparse = sys.solve();
        CHECK(sparse.consistent == dense.has_value());
        CHECK(sparse.rank == rank(a));
        if (dense)
            CHECK(a.apply(sparse.solution) == b);
    }
}
