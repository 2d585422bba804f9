#include <doctest.h>

#include "thomae/heisenberg.hpp"

using namespace thomae;

namespace {

LPoint pt(int n, int g, std::initializer_list<int> c) {
    Eigen::VectorXi v(c.size());
    int i = 0;
    for (int x : c) v(i++) = x;
    return {n, g, v};
}

// Oracle: exponent of e written out coordinatewise, independent of the matrix form.
int e_oracle(const LPoint& p, const LPoint& q) {
    int g = p.g();
    long long s = 0;
    for (int i = 0; i < g; ++i) s += p[i] * q[g + i] - q[i] * p[g + i];
    return mod(s, p.n());
}

const std::pair<int, int> kAmbients[] = {{2, 1}, {2, 2}, {3, 1}, {3, 2}, {4, 1}};

}  // namespace

TEST_CASE("symplectic and standard pairings") {
    CHECK(symplectic_e(pt(2, 1, {1, 0}), pt(2, 1, {0, 1})).exponent == 1);
    CHECK(std::abs(symplectic_e(pt(2, 1, {1, 0}), pt(2, 1, {0, 1})).value() + 1.0) < 1e-15);
    CHECK(symplectic_e(pt(3, 2, {1, 0, 0, 0}), pt(3, 2, {0, 0, 1, 0})).exponent == 1);
    CHECK(standard_d(pt(2, 1, {1, 0}), pt(2, 1, {0, 1})).exponent == 1);
    CHECK(standard_d(pt(2, 1, {0, 1}), pt(2, 1, {1, 0})).exponent == 0);
    CHECK_THROWS_AS(symplectic_e(pt(2, 1, {1, 0}), pt(3, 1, {0, 1})), AmbientMismatch);
    CHECK_THROWS_AS(canonical_odd_pairing(4, 1), Error);

    for (auto [n, g] : {std::pair{2, 1}, {2, 2}, {3, 1}, {3, 2}, {4, 1}, {4, 2}}) {
        auto pts = all_points(n, g);
        auto d = standard_pairing(n, g);
        for (auto& p : pts) {
            CHECK(standard_d(LPoint(n, g), p).exponent == 0);
            CHECK(symplectic_e(p, p).exponent == 0);
            for (auto& q : pts) {
                REQUIRE(symplectic_e(p, q).exponent == e_oracle(p, q));
                REQUIRE((d(p, q) * d(q, p).inverse()).exponent == e_oracle(p, q));
                if (n % 2 == 1) {
                    auto c = canonical_odd_pairing(n, g);
                    REQUIRE((c(p, q) * c(q, p).inverse()).exponent == e_oracle(p, q));
                }
            }
        }
    }
}

TEST_CASE("canonical odd pairing") {
    auto p = pt(3, 1, {1, 0}), q = pt(3, 1, {0, 1});
    CHECK(symplectic_e(p, q).exponent == 1);
    CHECK(canonical_d_odd(p, q).exponent == 2);
    CHECK(canonical_d_odd(p, p).exponent == 0);
    auto p5 = pt(5, 1, {2, 0}), q5 = pt(5, 1, {0, 1});
    CHECK(symplectic_e(p5, q5).exponent == 2);
    CHECK(canonical_d_odd(p5, q5).exponent == 1);
}

TEST_CASE("theta group law exhaustively") {
    for (auto [n, g] : kAmbients) {
        ThetaGroup grp(standard_pairing(n, g));
        auto pts = all_points(n, g);
        auto e = grp.identity();
        for (auto& p : pts) {
            auto x = grp.element(p, 1);
            auto ex = grp.mul(e, x);
            CHECK(ex.point == x.point);
            CHECK(*ex.scalar.exact() == *x.scalar.exact());
            auto xi = grp.mul(x, grp.inverse(x));
            CHECK(xi.point.is_zero());
            CHECK(xi.scalar.exact()->exponent == 0);
            for (auto& q : pts) {
                auto y = grp.element(q, 2);
                auto c = grp.commutator(x, y);
                REQUIRE(c.point.is_zero());
                REQUIRE(c.scalar.exact()->exponent == e_oracle(p, q));
                for (auto& r : pts) {
                    auto z = grp.element(r);
                    auto l = grp.mul(grp.mul(x, y), z);
                    auto rr = grp.mul(x, grp.mul(y, z));
                    REQUIRE(l.point == rr.point);
                    REQUIRE(*l.scalar.exact() == *rr.scalar.exact());
                }
            }
        }
    }
}

TEST_CASE("group_mul examples") {
    auto d = standard_pairing(2, 1);
    ThetaGroup grp(d);
    auto one = grp.element(pt(2, 1, {1, 0}));
    auto sq = group_mul(one, one, d);
    CHECK(sq.point.is_zero());
    CHECK(sq.scalar.exact()->exponent == 0);

    ThetaGroupElement mu{CentralScalar(cplx(2.0, 1.0)), pt(2, 1, {0, 1})};
    auto r = group_mul(grp.identity(), mu, d);
    CHECK(std::abs(r.scalar.value() - cplx(2.0, 1.0)) < 1e-15);
    CHECK(!r.scalar.exact());

    ThetaGroup g3(standard_pairing(3, 1));
    auto c = g3.commutator(g3.element(pt(3, 1, {1, 0})), g3.element(pt(3, 1, {0, 1})));
    CHECK(c.point.is_zero());
    CHECK(c.scalar.exact()->exponent == 1);
}

TEST_CASE("quasi-trivial automorphisms and iota") {
    const int n = 2, g = 1;
    ThetaGroup grp(standard_pairing(n, g));
    auto pts = all_points(n, g);
    std::vector<Character> chars;
    for (auto& c : pts) chars.emplace_back(n, g, c.coords());

    auto p1 = pt(n, g, {1, 0});
    Character chi(n, g, Eigen::Vector2i(1, 0));
    CHECK(quasi_trivial_automorphism(chi, grp.element(p1)).scalar.exact()->exponent == 1);

    for (auto& x : pts) {
        for (int s = 0; s < n; ++s) {
            auto el = grp.element(x, s);
            auto t = quasi_trivial_automorphism(Character::trivial(n, g), el);
            CHECK(*t.scalar.exact() == *el.scalar.exact());
            for (auto& a : chars)
                for (auto& b : chars) {
                    auto lhs = quasi_trivial_automorphism(a, quasi_trivial_automorphism(b, el));
                    auto rhs = quasi_trivial_automorphism(a * b, el);
                    REQUIRE(*lhs.scalar.exact() == *rhs.scalar.exact());
                }
            // automorphism property
            for (auto& y : pts) {
                auto ey = grp.element(y, 1);
                for (auto& a : chars) {
                    auto l = quasi_trivial_automorphism(a, grp.mul(el, ey));
                    auto r = grp.mul(quasi_trivial_automorphism(a, el), quasi_trivial_automorphism(a, ey));
                    REQUIRE(*l.scalar.exact() == *r.scalar.exact());
                }
            }
        }
    }
    // injectivity: distinct characters differ somewhere
    for (std::size_t i = 0; i < chars.size(); ++i)
        for (std::size_t j = i + 1; j < chars.size(); ++j) {
            bool differ = false;
            for (auto& x : pts) differ |= !(chars[i](x) == chars[j](x));
            CHECK(differ);
        }

    auto e3 = ThetaGroup(standard_pairing(3, 1)).element(pt(3, 1, {1, 0}));
    auto i3 = involution_iota(e3);
    CHECK(i3.point == pt(3, 1, {2, 0}));
    CHECK(involution_iota(i3).point == e3.point);
    CHECK(involution_iota(grp.identity()).point.is_zero());

    // iota is a homomorphism on pairs where d is symmetric
    ThetaGroup g3(standard_pairing(3, 2));
    for (auto& p : all_points(3, 2))
        for (auto& q : all_points(3, 2)) {
            if (!(g3.pairing()(p, q) == g3.pairing()(q, p))) continue;
            auto x = g3.element(p), y = g3.element(q);
            auto l = involution_iota(g3.mul(x, y));
            auto r = g3.mul(involution_iota(x), involution_iota(y));
            REQUIRE(l.point == r.point);
            REQUIRE(*l.scalar.exact() == *r.scalar.exact());
        }
}

TEST_CASE("heisenberg action on functions") {
    for (auto [n, g] : {std::pair{2, 1}, {3, 1}}) {
        auto d = standard_pairing(n, g);
        ThetaGroup grp(d);
        auto pts = all_points(n, g);
        FunctionOnL h(n, g);
        for (long i = 0; i < h.values.size(); ++i) h.values(i) = cplx(1.0 + i, 0.5 * i * i - 1.0);

        auto same = heisenberg_action(grp.identity(), h, d);
        CHECK((same.values - h.values).norm() < 1e-14);

        for (auto& r0 : pts)
            for (auto& p : pts) {
                auto img = heisenberg_action(grp.element(p, 1), FunctionOnL::delta(r0), d);
                FunctionOnL expect(n, g);
                expect(r0 + p) = root_of_unity(1, n) * d(r0 + p, p).inverse().value();
                REQUIRE((img.values - expect.values).norm() < 1e-14);
            }

        for (auto& p : pts)
            for (auto& q : pts)
                for (int s = 0; s < n; ++s) {
                    auto x = grp.element(p, s), y = grp.element(q, 1);
                    auto lhs = heisenberg_action(grp.mul(x, y), h, d);
                    auto rhs = heisenberg_action(x, heisenberg_action(y, h, d), d);
                    REQUIRE((lhs.values - rhs.values).norm() < 1e-12);
                }
    }
}

TEST_CASE("standard representation") {
    auto d = standard_pairing(3, 1);
    ThetaGroup grp(d);
    // translation by m=1: e_0 -> e_{-1} = e_2
    auto t = standard_rep_matrix(grp, grp.element(pt(3, 1, {1, 0})));
    CHECK(std::abs(t(2, 0) - 1.0) < 1e-15);
    CHECK(std::abs(t(0, 1) - 1.0) < 1e-15);
    auto iota = standard_rep_iota(3, 1);
    CHECK(std::abs(iota(2, 1) - 1.0) < 1e-15);
    CHECK((iota * iota - MatrixXc::Identity(3, 3)).norm() < 1e-15);
    auto chi = standard_rep_character(3, 1, Eigen::VectorXi::Constant(1, 1));
    CHECK(std::abs(chi(1, 1) - root_of_unity(1, 3)) < 1e-15);

    for (auto [n, g] : {std::pair{2, 1}, {2, 2}, {3, 1}, {3, 2}}) {
        ThetaGroup gr(standard_pairing(n, g));
        auto pts = all_points(n, g);
        for (auto& p : pts)
            for (auto& q : pts) {
                auto x = gr.element(p, 1), y = gr.element(q);
                MatrixXc lhs = standard_rep_matrix(gr, gr.mul(x, y));
                MatrixXc rhs = standard_rep_matrix(gr, x) * standard_rep_matrix(gr, y);
                REQUIRE((lhs - rhs).norm() < 1e-10);
            }
        CHECK(standard_rep_commutant_dimension(gr) == 1);
    }
    // a second pairing with the same commutator gives the same picture
    ThetaGroup odd(canonical_odd_pairing(3, 1));
    for (auto& p : all_points(3, 1))
        for (auto& q : all_points(3, 1)) {
            auto x = odd.element(p), y = odd.element(q);
            REQUIRE((standard_rep_matrix(odd, odd.mul(x, y)) -
                     standard_rep_matrix(odd, x) * standard_rep_matrix(odd, y)).norm() < 1e-10);
        }
    CHECK(standard_rep_commutant_dimension(odd) == 1);
}
