#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mbp/milnor.hpp"
#include "test_support.hpp"

#include <random>

using namespace mbp;
using milnor::Ops;
using ring::Context;
using ring::Element;
using ring::Model;
namespace ts = test_support;

TEST_CASE("Q_i on generators, rank 1, p = 3")
{
    auto ctx = Context::make(3, 1, Model::Koszul, 30, 2);
    Ops ops(ctx);
    CHECK(ops.shift(0) == 1);
    CHECK(ops.shift(1) == 5);
    CHECK(ops.shift(2) == 17);
    // Q_i u = v^{p^i}
    CHECK(ctx->print(ops.apply(0, ctx->parse_element("u1"))) == "v1");
    CHECK(ctx->print(ops.apply(1, ctx->parse_element("u1"))) == "v1^3");
    CHECK(ctx->print(ops.apply(2, ctx->parse_element("u1"))) == "v1^9");
    // derivations kill the polynomial part
    CHECK(ops.apply(0, ctx->parse_element("v1^3")).is_zero());
    CHECK(ops.apply(1, ctx->parse_element("v1^3")).is_zero());
    // Leibniz on u*v^b
    CHECK(ctx->print(ops.apply(0, ctx->parse_element("u1*v1^2"))) == "v1^3");
}

TEST_CASE("Q_1 on u1 u2 has the Koszul sign on the second factor")
{
    auto ctx = Context::make(3, 2, Model::Koszul, 30, 1);
    Ops ops(ctx);
    Element x = ctx->parse_element("u1*u2");
    // Q_1(u1 u2) = v1^3 u2 - u1 v2^3
    Element expect = ctx->parse_element("u2*v1^3 + 2*u1*v2^3");
    CHECK(ops.apply(1, x) == expect);
    // Degree bookkeeping: |x| = 2, |Q_1| = 5.
    CHECK(ops.apply(1, x).degree == 7);
}

TEST_CASE("operator matrices at small degrees")
{
    auto ctx = Context::make(3, 1, Model::Koszul, 20, 1);
    Ops ops(ctx);
    // degree 1 = span{u1} -> degree 2 = span{v1}: matrix [1]
    const auto& m = ops.matrix(0, 1);
    REQUIRE(m.rows == 1);
    REQUIRE(m.cols == 1);
    CHECK(m.at(0, 0) == 1);
    // even degrees are polynomial, so Q_0 vanishes there
    const auto& z = ops.matrix(0, 2);
    CHECK(z.at(0, 0) == 0);
}

TEST_CASE("native p=2 operator on degree 1: Q_0 u = u^2")
{
    auto ctx = Context::make(2, 2, Model::NativeP2, 20, 1);
    Ops ops(ctx);
    CHECK(ctx->print(ops.apply(0, ctx->parse_element("u1"))) == "u1^2");
    CHECK(ctx->print(ops.apply(1, ctx->parse_element("u1"))) == "u1^4");
    // matrix from basis(1) (2 monomials) to basis(2) (3 monomials)
    const auto& m = ops.matrix(0, 1);
    CHECK(m.rows == ctx->dim(2));
    CHECK(m.cols == ctx->dim(1));
    // each column has exactly one nonzero entry
    for (size_t c = 0; c < m.cols; ++c) {
        size_t nz = 0;
        for (size_t r = 0; r < m.rows; ++r)
            nz += m.at(r, c) != 0;
        CHECK(nz == 1);
    }
    // squares are cycles
    CHECK(ops.apply(0, ctx->parse_element("u1^2")).is_zero());
    CHECK(ops.apply(1, ctx->parse_element("u1^2*u2^4")).is_zero());
    // odd exponents are not
    CHECK(ctx->print(ops.apply(0, ctx->parse_element("u1*u2^2"))) ==
          "u1^2*u2^2");
}

TEST_CASE("composites: ordering, degree shifts, rank-1 vanishing")
{
    auto ctx1 = Context::make(3, 1, Model::Koszul, 30, 1);
    Ops ops1(ctx1);
    // singleton composite is just the derivation
    Element u = ctx1->parse_element("u1");
    CHECK(ops1.apply_composite({0}, u) == ops1.apply(0, u));
    // rank 1: the composite Q_0 Q_1 kills everything (only one u)
    for (size_t t = 0; t <= 20; ++t) {
        Element e = ctx1->zero(t);
        for (auto& c : e.coeffs)
            c = 1;
        CHECK(ops1.apply_composite({0, 1}, e).is_zero());
    }
    CHECK(ops1.composite_shift({0, 1}) == 6);

    auto ctx2 = Context::make(3, 2, Model::Koszul, 30, 1);
    Ops ops2(ctx2);
    // Q_0 Q_1 (u1 u2) = v1^3 v2 - v1 v2^3, landing in degree 2 + 6 = 8
    Element x = ctx2->parse_element("u1*u2");
    Element got = ops2.apply_composite({0, 1}, x);
    CHECK(got.degree == 8);
    CHECK(got == ctx2->parse_element("v1^3*v2 + 2*v1*v2^3"));
    // and it matches Q_0 applied after Q_1 (largest index first)
    CHECK(got == ops2.apply(0, ops2.apply(1, x)));
}

TEST_CASE("composite matrix equals the product of the factor matrices")
{
    auto ctx = Context::make(3, 2, Model::Koszul, 24, 1);
    Ops ops(ctx);
    const auto& F = ctx->field();
    for (size_t t = 0; t <= 10; ++t) {
        fp::Matrix direct = ops.composite_matrix({0, 1}, t);
        // Q_1 first, then Q_0 from the shifted degree
        fp::Matrix product =
            fp::mat_mul(F, ops.matrix(0, t + ops.shift(1)), ops.matrix(1, t));
        CHECK(direct == product);
    }
}

TEST_CASE("sparse columns agree with the dense matrix")
{
    for (uint32_t p : {2u, 3u}) {
        for (auto model : {Model::Koszul, Model::NativeP2}) {
            if (model == Model::NativeP2 && p != 2)
                continue;
            auto ctx = Context::make(p, 3, model, 16, 1);
            Ops ops(ctx);
            for (size_t i = 0; i <= 1; ++i)
                for (size_t t = 0; t <= 12; ++t) {
                    const auto& m = ops.matrix(i, t);
                    auto cols = ops.columns(i, t);
                    REQUIRE(cols.size() == m.cols);
                    fp::Matrix rebuilt(m.rows, m.cols);
                    for (size_t c = 0; c < cols.size(); ++c)
                        for (auto [r, coef] : cols[c])
                            rebuilt.at(r, c) = coef;
                    CHECK(rebuilt == m);
                }
        }
    }
}

TEST_CASE("nilpotence and anticommutation sweeps")
{
    for (uint32_t p : {2u, 3u, 5u}) {
        for (auto model : {Model::Koszul, Model::NativeP2}) {
            if (model == Model::NativeP2 && p != 2)
                continue;
            auto ctx = Context::make(p, 2, model, 20, 2);
            Ops ops(ctx);
            const auto& F = ctx->field();
            for (size_t t = 0; t <= 20; ++t)
                for (size_t i = 0; i <= 2; ++i) {
                    // Q_i^2 = 0
                    fp::Matrix sq = fp::mat_mul(
                        F, ops.matrix(i, t + ops.shift(i)), ops.matrix(i, t));
                    CHECK(sq == fp::Matrix(sq.rows, sq.cols));
                    for (size_t j = i + 1; j <= 2; ++j) {
                        // Q_i Q_j + Q_j Q_i = 0
                        fp::Matrix ij = fp::mat_mul(
                            F, ops.matrix(i, t + ops.shift(j)),
                            ops.matrix(j, t));
                        fp::Matrix ji = fp::mat_mul(
                            F, ops.matrix(j, t + ops.shift(i)),
                            ops.matrix(i, t));
                        for (size_t k = 0; k < ij.entries.size(); ++k)
                            CHECK(F.add(ij.entries[k], ji.entries[k]) == 0);
                    }
                }
        }
    }
}

TEST_CASE("Q_i is a derivation on random products")
{
    std::mt19937_64 rng(777);
    for (uint32_t p : {2u, 3u, 5u}) {
        for (auto model : {Model::Koszul, Model::NativeP2}) {
            if (model == Model::NativeP2 && p != 2)
                continue;
            auto ctx = Context::make(p, 2, model, 24, 1);
            Ops ops(ctx);
            const auto& F = ctx->field();
            for (int iter = 0; iter < 180; ++iter) {
                size_t ta = rng() % 5, tb = rng() % 5;
                size_t i = rng() % 2;
                auto x = ts::random_element(rng, *ctx, ta);
                auto y = ts::random_element(rng, *ctx, tb);
                // Q(xy) = Q(x) y + (-1)^{|x|} x Q(y)
                Element lhs = ops.apply(i, ring::multiply(x, y));
                Element rhs = ring::multiply(ops.apply(i, x), y);
                Element second = ring::multiply(x, ops.apply(i, y));
                if (ta % 2 == 1)
                    second = ring::scale(second, F.neg(1));
                CHECK(lhs == ring::add(rhs, second));
            }
        }
    }
}

TEST_CASE("linearity of apply")
{
    std::mt19937_64 rng(3);
    auto ctx = Context::make(5, 3, Model::Koszul, 20, 1);
    Ops ops(ctx);
    for (int iter = 0; iter < 100; ++iter) {
        size_t t = rng() % 8;
        auto x = ts::random_element(rng, *ctx, t);
        auto y = ts::random_element(rng, *ctx, t);
        fp::Scalar c = fp::Scalar(rng() % 5);
        CHECK(ops.apply(1, ring::add(x, ring::scale(y, c))) ==
              ring::add(ops.apply(1, x), ring::scale(ops.apply(1, y), c)));
    }
}
