#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mbp/ring_model.hpp"
#include "test_support.hpp"

#include <random>

using namespace mbp::ring;
namespace ts = test_support;

namespace {

size_t binom(size_t n, size_t k)
{
    if (k > n)
        return 0;
    size_t r = 1;
    for (size_t i = 0; i < k; ++i)
        r = r * (n - i) / (i + 1);
    return r;
}

}  // namespace

TEST_CASE("rank-1 Koszul basis in low degrees")
{
    auto ctx = Context::make(3, 1, Model::Koszul, 10, 1);
    CHECK(ctx->dim(0) == 1);
    CHECK(ctx->print(ctx->basis(0)[0]) == "1");
    // degree 3 = u * v
    REQUIRE(ctx->dim(3) == 1);
    CHECK(ctx->print(ctx->basis(3)[0]) == "u1*v1");
    REQUIRE(ctx->dim(2) == 1);
    CHECK(ctx->print(ctx->basis(2)[0]) == "v1");
    // every degree of F[v] tensor E[u] is one-dimensional
    for (size_t t = 0; t <= 10; ++t)
        CHECK(ctx->dim(t) == 1);
}

TEST_CASE("rank-2 Koszul basis ordering puts the polynomial part first")
{
    auto ctx = Context::make(3, 2, Model::Koszul, 12, 1);
    // degree 2: polynomial monomials (lex on exponent vectors), then u1 u2
    REQUIRE(ctx->dim(2) == 3);
    CHECK(ctx->print(ctx->basis(2)[0]) == "v2");
    CHECK(ctx->print(ctx->basis(2)[1]) == "v1");
    CHECK(ctx->print(ctx->basis(2)[2]) == "u1*u2");
    // degree 1: u1, u2
    REQUIRE(ctx->dim(1) == 2);
    CHECK(ctx->print(ctx->basis(1)[0]) == "u1");
    CHECK(ctx->print(ctx->basis(1)[1]) == "u2");
}

TEST_CASE("Koszul dimensions match the generating function")
{
    for (size_t d = 1; d <= 4; ++d) {
        auto ctx = Context::make(3, d, Model::Koszul, 14, 0);
        for (size_t t = 0; t <= 14; ++t)
            CHECK(ctx->dim(t) == ts::koszul_dim_oracle(d, t));
    }
}

TEST_CASE("native p=2 dimensions are full polynomial ring dimensions")
{
    for (size_t d = 1; d <= 4; ++d) {
        auto ctx = Context::make(2, d, Model::NativeP2, 14, 0);
        for (size_t t = 0; t <= 14; ++t)
            CHECK(ctx->dim(t) == binom(t + d - 1, d - 1));
    }
    CHECK_THROWS(Context::make(3, 2, Model::NativeP2, 10, 0));
}

TEST_CASE("exterior block ranges are contiguous and exhaustive")
{
    auto ctx = Context::make(3, 3, Model::Koszul, 12, 0);
    for (size_t t = 0; t <= 12; ++t) {
        size_t covered = 0;
        size_t prev_hi = 0;
        for (size_t a = 0; a <= 3; ++a) {
            auto [lo, hi] = exterior_block_range(*ctx, t, a);
            CHECK(lo == prev_hi);
            prev_hi = hi;
            covered += hi - lo;
            for (size_t k = lo; k < hi; ++k)
                CHECK(ctx->basis(t)[k].exterior_degree() == a);
        }
        CHECK(covered == ctx->dim(t));
    }
}

TEST_CASE("multiplication: nilpotence and exterior signs")
{
    auto ctx = Context::make(3, 2, Model::Koszul, 12, 0);
    Element u1 = ctx->parse_element("u1");
    Element u2 = ctx->parse_element("u2");
    CHECK(multiply(u1, u1).is_zero());
    // u1 u2 = -u2 u1
    Element ab = multiply(u1, u2);
    Element ba = multiply(u2, u1);
    CHECK(add(ab, ba).is_zero());
    CHECK(ctx->print(ab) == "u1*u2");
    CHECK(ctx->print(ba) == "2*u1*u2");
    // (u1 v2) * u2 = u1 u2 v2 with a positive sign (one transposition of
    // u2 past v2 costs nothing; u2 past u1 does not occur).
    Element x = ctx->parse_element("u1*v2");
    CHECK(ctx->print(multiply(x, u2)) == "u1*u2*v2");
    CHECK(ctx->print(multiply(u2, x)) == "2*u1*u2*v2");
}

TEST_CASE("multiplication is associative and graded-commutative")
{
    std::mt19937_64 rng(314);
    for (uint32_t p : {2u, 3u, 5u}) {
        for (auto model : {Model::Koszul, Model::NativeP2}) {
            if (model == Model::NativeP2 && p != 2)
                continue;
            auto ctx = Context::make(p, 2, model, 16, 0);
            const auto& F = ctx->field();
            for (int iter = 0; iter < 200; ++iter) {
                size_t ta = rng() % 4, tb = rng() % 4, tc = rng() % 4;
                auto x = ts::random_element(rng, *ctx, ta);
                auto y = ts::random_element(rng, *ctx, tb);
                auto z = ts::random_element(rng, *ctx, tc);
                CHECK(multiply(multiply(x, y), z) ==
                      multiply(x, multiply(y, z)));
                // x y = (-1)^{|x||y|} y x
                Element yx = multiply(y, x);
                if (ta % 2 == 1 && tb % 2 == 1)
                    yx = scale(yx, F.neg(1));
                CHECK(multiply(x, y) == yx);
                // distributivity over a second factor
                CHECK(multiply(add(x, x), y) ==
                      add(multiply(x, y), multiply(x, y)));
            }
        }
    }
}

TEST_CASE("polynomial part subspace")
{
    auto ctx = Context::make(3, 2, Model::Koszul, 10, 0);
    // degree 2: v1, v2 span the polynomial part; u1 u2 does not.
    auto poly = ctx->polynomial_part_subspace(2);
    CHECK(poly.dim() == 2);
    CHECK(mbp::fp::membership(ctx->field(), poly,
                              ctx->parse_element("v1").coeffs));
    CHECK_FALSE(mbp::fp::membership(ctx->field(), poly,
                                    ctx->parse_element("u1*u2").coeffs));
    // odd degrees have no polynomial part
    CHECK(ctx->polynomial_part_subspace(3).dim() == 0);
    // degree 0 excluded (augmentation ideal)
    CHECK(ctx->polynomial_part_subspace(0).dim() == 0);

    auto nat = Context::make(2, 2, Model::NativeP2, 10, 0);
    // native polynomial part = squares: degree 2 has u1^2, u2^2 but not u1 u2
    auto np = nat->polynomial_part_subspace(2);
    CHECK(np.dim() == 2);
    CHECK_FALSE(mbp::fp::membership(nat->field(), np,
                                    nat->parse_element("u1*u2").coeffs));
}

TEST_CASE("print/parse round trip")
{
    std::mt19937_64 rng(55);
    auto ctx = Context::make(5, 3, Model::Koszul, 12, 0);
    for (size_t t = 0; t <= 12; ++t)
        for (int iter = 0; iter < 10; ++iter) {
            auto e = ts::random_element(rng, *ctx, t);
            CHECK(ctx->parse_element(ctx->print(e)) == e);
        }
    CHECK(ctx->print(ctx->zero(4)) == "0");
    CHECK(ctx->parse_element("0").is_zero());
    Element e = ctx->parse_element("2*u1*u2*v1^3 + v1*v2^3");
    CHECK(e.degree == 8);
    CHECK(ctx->print(e) == "v1*v2^3 + 2*u1*u2*v1^3");
}

TEST_CASE("parse errors carry positions")
{
    auto ctx = Context::make(3, 2, Model::Koszul, 10, 0);
    CHECK_THROWS_AS((void)ctx->parse_element("u1 + v1"), parse_error);  // mixed degree
    CHECK_THROWS_AS((void)ctx->parse_element("u3"), parse_error);       // bad index
    CHECK_THROWS_AS((void)ctx->parse_element("u1*u1"), parse_error);    // repeated exterior
    CHECK_THROWS_AS((void)ctx->parse_element("v1^"), parse_error);
    try {
        (void)ctx->parse_element("v1 + @");
        FAIL("expected parse_error");
    } catch (const parse_error& pe) {
        CHECK(pe.position == 5);
    }
}

TEST_CASE("degrees outside the window are rejected")
{
    auto ctx = Context::make(3, 2, Model::Koszul, 10, 1);
    // window = 10 + 2*(2*3 - 1) = 20
    CHECK(ctx->window() == 20);
    CHECK_NOTHROW((void)ctx->basis(20));
    CHECK_THROWS_AS((void)ctx->basis(21), degree_out_of_range);
}

TEST_CASE("context mismatch between elements is rejected")
{
    auto a = Context::make(3, 2, Model::Koszul, 10, 0);
    auto b = Context::make(3, 3, Model::Koszul, 10, 0);
    CHECK_THROWS_AS((void)add(a->parse_element("u1"), b->parse_element("u1")),
                    context_mismatch);
    // inhomogeneous sums are rejected too
    CHECK_THROWS_AS((void)add(a->parse_element("u1"), a->parse_element("v1")),
                    context_mismatch);
    // equal parameters are interchangeable by design
    auto c = Context::make(3, 2, Model::Koszul, 10, 0);
    CHECK_NOTHROW((void)add(a->parse_element("u1"), c->parse_element("u2")));
}
