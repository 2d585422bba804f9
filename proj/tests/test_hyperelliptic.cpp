#include <doctest.h>

#include <set>

#include "thomae/periods.hpp"
#include "thomae/residue.hpp"
#include "thomae/spinor.hpp"

using namespace thomae;

namespace {

HyperellipticCurve sextic() {
    std::vector<cplx> e;
    for (int k = 0; k < 6; ++k) e.push_back(std::polar(1.0, kPi * k / 3));
    return HyperellipticCurve(e);
}

HyperellipticCurve random_curve(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n;
    std::vector<cplx> e;
    for (int i = 0; i < 6; ++i) e.push_back({n(rng), n(rng)});
    return HyperellipticCurve(e);
}

// distance of z from the period lattice
double lattice_distance(const VectorXc& z, const PeriodMatrix& tau) {
    const Eigen::VectorXd c = lattice_coordinates(z, tau);
    double d = 0.0;
    for (int i = 0; i < c.size(); ++i) d = std::max(d, std::abs(c(i) - std::round(c(i))));
    return d;
}

// Order of h at p estimated from |h| at two nearby points, with no series expansion.
double sampled_order(const HyperellipticCurve& c, const CurveFunction& h, const CurvePoint& p) {
    auto near = [&](double eps) {
        if (p.is_infinity()) {
            const cplx x = cplx(1.0, 0.37) / eps;
            CurvePoint q = c.point_over(x, 1);
            const cplx lead = q.y / (x * x * x);
            const int want = p.kind == CurvePoint::Kind::InfinityPlus ? 1 : -1;
            if (std::real(lead) * want < 0) q.y = -q.y;
            return std::make_pair(q, eps);
        }
        const int w = c.weierstrass_index(p);
        if (w >= 0) {
            const CurvePoint q = c.point_over(p.x + eps * eps * cplx(0.6, 0.8), 1);
            return std::make_pair(q, std::abs(q.y));
        }
        const cplx x = p.x + eps * cplx(0.6, 0.8);
        const cplx s = std::sqrt(c.eval_f(x));
        return std::make_pair(CurvePoint::affine(x, std::abs(s - p.y) < std::abs(s + p.y) ? s : -s), eps);
    };
    const auto [q1, t1] = near(1e-3);
    const auto [q2, t2] = near(1e-4);
    return std::log(std::abs(h(q1)) / std::abs(h(q2))) / std::log(t1 / t2);
}

std::vector<CurvePoint> random_points(const HyperellipticCurve& c, int n, std::mt19937_64& rng) {
    std::vector<CurvePoint> out;
    for (int i = 0; i < n; ++i) out.push_back(c.random_point(rng));
    return out;
}

}  // namespace

TEST_CASE("curve construction") {
    CHECK_THROWS_WITH_AS(HyperellipticCurve({0.0, 1.0, 1.0, 2.0, 3.0, 4.0}), doctest::Contains("discriminant"), Error);
    const HyperellipticCurve c = sextic();
    CHECK(c.branch_points()[0] == cplx(-1.0, 0.0) + cplx(0.0, c.branch_points()[0].imag()));
    CHECK(c.branch_points()[5].real() == doctest::Approx(1.0));
    // x^6 - 1
    CHECK(std::abs(c.f()[0] + 1.0) < 1e-14);
    CHECK(std::abs(c.f()[6] - 1.0) < 1e-14);
    const HyperellipticCurve d = HyperellipticCurve::from_coefficients({-2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 2.0});
    for (int i = 0; i < 6; ++i) CHECK(std::abs(d.branch_points()[i] - c.branch_points()[i]) < 1e-12);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 10; ++i) CHECK(c.on_curve(c.random_point(rng)));
}

TEST_CASE("Riemann-Roch spaces") {
    const HyperellipticCurve c = sextic();
    const Divisor k = Divisor::canonical();
    const auto w = [&](int i) { return Divisor::point(c.weierstrass(i)); };
    CHECK(riemann_roch_basis(c, Divisor()).dimension() == 1);
    CHECK(riemann_roch_basis(c, k).dimension() == 2);
    CHECK(riemann_roch_basis(c, k * 2).dimension() == 3);
    CHECK(riemann_roch_basis(c, w(0)).dimension() == 1);
    CHECK(riemann_roch_basis(c, w(0) + w(1) - w(2)).dimension() == 0);
    CHECK(riemann_roch_basis(c, w(0) * 2).dimension() == 2);
    CHECK(riemann_roch_basis(c, Divisor::point(CurvePoint::infinity(1), 3)).dimension() == 2);

    // L(2K) is spanned by 1, x, x^2
    const SectionBasis b = riemann_roch_basis(c, k * 2);
    std::mt19937_64 rng(2);
    const auto pts = random_points(c, 4, rng);
    Eigen::MatrixXcd m(4, 6);
    for (int r = 0; r < 4; ++r) {
        for (int j = 0; j < 3; ++j) m(r, j) = b.functions[j](pts[r]);
        for (int j = 0; j < 3; ++j) m(r, 3 + j) = std::pow(pts[r].x, j);
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    CHECK(svd.singularValues()(3) < 1e-10 * svd.singularValues()(0));

    // orders at a branch point and at infinity
    const CurveFunction y{Poly{}, Poly{1.0}, {}};
    CHECK(order_at(c, y, c.weierstrass(2)) == 1);
    CHECK(order_at(c, y, CurvePoint::infinity(1)) == -3);
    CHECK(order_at(c, CurveFunction{Poly{-c.branch_points()[1], 1.0}, {}, {}}, c.weierstrass(1)) == 2);
}

TEST_CASE("Riemann-Roch dimension and pole bounds on random divisors") {
    for (std::uint64_t seed : {3u, 4u}) {
        const HyperellipticCurve c = seed == 3 ? sextic() : random_curve(seed);
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<int> kind(0, 3), mult(-1, 2), wi(0, 5);
        for (int trial = 0; trial < 10; ++trial) {
            Divisor d;
            for (int k = 0; k < 4; ++k) {
                const int m = mult(rng);
                switch (kind(rng)) {
                    case 0: d = d + Divisor::point(c.random_point(rng), m); break;
                    case 1: d = d + Divisor::point(c.weierstrass(wi(rng)), m); break;
                    case 2: d = d + Divisor::point(CurvePoint::infinity(1), m); break;
                    default: d = d + Divisor::point(CurvePoint::infinity(-1), m); break;
                }
            }
            while (d.degree() < 3) d = d + Divisor::point(c.random_point(rng));
            CAPTURE(d.to_string());
            const SectionBasis b = riemann_roch_basis(c, d);
            CHECK(b.dimension() == d.degree() - 1);
            for (const auto& h : b.functions) {
                CHECK(satisfies_pole_bounds(c, h, d));
                for (const auto& [p, m] : d.terms()) CHECK(sampled_order(c, h, p) > -m - 0.05);
            }
        }
    }
}

TEST_CASE("effective representatives") {
    const HyperellipticCurve c = random_curve(5);
    std::mt19937_64 rng(5);
    const CurvePoint anchor = default_anchor(c);
    const JacobianFrame f(c);
    for (int trial = 0; trial < 5; ++trial) {
        const auto z = random_points(c, 3, rng);
        const Divisor d = sum_of_points(z) + Divisor::point(c.random_point(rng)) - Divisor::point(c.random_point(rng));
        const auto e = reduce_to_effective(c, d, anchor);
        REQUIRE(e.size() == 3);
        for (const auto& p : e) CHECK(c.on_curve(p, 1e-9));
        CHECK(lattice_distance(f.abel_jacobi_vector(sum_of_points(e) - d), f.tau()) < 1e-8);
    }
}

TEST_CASE("period matrix and Abel-Jacobi") {
    for (std::uint64_t seed : {0u, 6u}) {
        const HyperellipticCurve c = seed == 0 ? sextic() : random_curve(seed);
        const JacobianFrame f(c);
        const MatrixXc& tau = f.tau().tau();
        CHECK(f.symmetry_residual() < 1e-10);
        CHECK(f.riemann_residual() < 1e-10);
        CHECK(f.refinement_change() < 1e-10);
        CHECK(f.tau().min_eigenvalue() > 0.0);
        CHECK(lattice_distance(tau.col(0), f.tau()) < 1e-12);

        // 2-torsion lands on half periods, bijectively
        std::set<int> seen;
        for (const auto& t : two_torsion_divisors(c)) {
            const auto tc = torsion_characteristic(f, t.divisor, 2);
            CHECK(tc.residual < 1e-8);
            seen.insert(tc.chi.to_point().index());
            CHECK(lattice_distance(f.abel_jacobi_vector(t.divisor * 2), f.tau()) < 1e-8);
        }
        CHECK(seen.size() == 16);
        const auto labels = analytic_labels(f);
        CHECK(std::set<int>(labels.begin(), labels.end()).size() == 16);

        // principal divisors: y - p(x) with deg p = 3, and fibres p + iota p
        std::mt19937_64 rng(seed + 10);
        std::normal_distribution<double> n;
        for (int trial = 0; trial < 3; ++trial) {
            Poly p(4);
            for (auto& v : p) v = cplx(n(rng), n(rng));
            const CurveFunction h{p, Poly{-1.0}, {}};
            const auto zeros = residual_zeros(c, h, Divisor(), 6);
            const Divisor div = sum_of_points(zeros) - Divisor::canonical() * 3;
            CHECK(lattice_distance(f.abel_jacobi_vector(div), f.tau()) < 1e-8);
            const CurvePoint q = c.random_point(rng);
            const Divisor fibre = Divisor::point(q) + Divisor::point(c.involution(q)) - Divisor::canonical();
            CHECK(lattice_distance(f.abel_jacobi_vector(fibre), f.tau()) < 1e-8);
        }

        // additivity along different paths
        const auto pts = random_points(c, 3, rng);
        const VectorXc s = f.abel_jacobi_vector(Divisor::point(pts[0]) - Divisor::point(pts[1])) +
                           f.abel_jacobi_vector(Divisor::point(pts[1]) - Divisor::point(pts[2]));
        CHECK(lattice_distance(s - f.abel_jacobi_vector(Divisor::point(pts[0]) - Divisor::point(pts[2])), f.tau()) <
              1e-9);
    }
}

TEST_CASE("theta characteristics") {
    const HyperellipticCurve c = sextic();
    const auto th = theta_characteristics(c);
    REQUIRE(th.size() == 16);
    int odd = 0;
    for (const auto& t : th) {
        odd += t.odd;
        CHECK(t.divisor.degree() == 1);
        // div psi = 2L - K
        const Divisor target = t.divisor * 2 - Divisor::canonical();
        for (const auto& [p, m] : target.terms()) CHECK(order_at(c, t.psi, p) == m);
        CHECK(riemann_roch_basis(c, t.divisor).dimension() == (t.odd ? 1 : 0));
    }
    CHECK(odd == 6);
    CHECK(16 - odd == 10);

    // parity of the characteristic of L - delta matches the parity of L
    for (std::uint64_t seed : {0u, 7u}) {
        const HyperellipticCurve cc = seed == 0 ? c : random_curve(seed);
        const JacobianFrame f(cc);
        std::mt19937_64 rng(seed);
        const ThomaeReport rep = thomae_compare(f, rng, 6);
        const auto tcc = theta_characteristics(cc);
        for (const auto& t : tcc) {
            const auto chi = torsion_characteristic(f, t.divisor - tcc[rep.delta].divisor, 2).chi;
            CHECK(parity(chi) == (t.odd ? 1 : 0));
        }
    }
}

TEST_CASE("determinantal Weil functions") {
    const HyperellipticCurve c = random_curve(8);
    const auto tt = two_torsion_divisors(c);
    std::mt19937_64 rng(8);
    for (const auto& t : tt) {
        const DeterminantWeilFunction f(c, t);
        CHECK(f.twisted_basis().dimension() == 3);
        auto z = random_points(c, 3, rng);
        const cplx v = f(z);
        if (t.is_zero()) CHECK(std::abs(v - 1.0) < 1e-12);
        // alternating determinants, symmetric ratio
        std::vector<CurvePoint> swapped{z[1], z[0], z[2]}, cycled{z[1], z[2], z[0]};
        CHECK(std::abs(f.det_twisted(swapped) + f.det_twisted(z)) < 1e-12 * f.hadamard_twisted(z));
        CHECK(std::abs(f(swapped) - v) < 1e-10 * std::abs(v));
        CHECK(std::abs(f(cycled) - v) < 1e-10 * std::abs(v));
        CHECK(std::abs(f(z, 4) - v * v) < 1e-10 * std::abs(v * v));
        std::vector<CurvePoint> diag{z[0], z[0], z[1]};
        CHECK_THROWS_AS(f(diag), PoleProximity);
        // each basis function passes the pole bounds of 2K + D_P
        for (const auto& h : f.twisted_basis().functions)
            CHECK(satisfies_pole_bounds(c, h, Divisor::canonical() * 2 + t.divisor));
    }
}

TEST_CASE("determinant vanishes on the shifted theta divisor") {
    for (std::uint64_t seed : {0u, 9u}) {
        const HyperellipticCurve c = seed == 0 ? sextic() : random_curve(seed);
        const auto tt = two_torsion_divisors(c);
        std::mt19937_64 rng(seed + 20);
        for (std::size_t i = 1; i < tt.size(); ++i) {
            const DeterminantWeilFunction f(c, tt[i]);
            for (int k = 0; k < 10; ++k) {
                const auto z = twisted_vanishing_triple(f, rng);
                CHECK(std::abs(f.det_twisted(z)) < 1e-6 * f.hadamard_twisted(z));
                CHECK(std::abs(f.det_reference(z)) > 1e-4 * f.hadamard_reference(z));
            }
        }
        CHECK_THROWS_AS(twisted_vanishing_triple(DeterminantWeilFunction(c, tt[0]), rng), Error);
    }
}

TEST_CASE("curve family Weil pairing matches the analytic pairing") {
    const HyperellipticCurve c = random_curve(10);
    const JacobianFrame f(c);
    const CurveWeilFamily family(c, analytic_labels(f), default_anchor(c));
    const AnalyticWeilFamily analytic(2, f.tau());
    std::mt19937_64 rng(10);
    const VectorXc x = family.sample_point(rng);
    double snap = 1.0;
    const Eigen::MatrixXi curve_table = weil_pairing_table(family, x, 1e-6, &snap);
    CHECK(snap < 1e-6);
    const Eigen::MatrixXi analytic_table = weil_pairing_table(analytic, analytic.sample_point(rng));
    CHECK(curve_table == analytic_table);
    CHECK(pairing_nondegenerate(curve_table, 2));

    // translation by D_P and negation keep the point on the curve and land in the right class
    const auto z = CurveWeilFamily::unpack(x);
    const Divisor zd = sum_of_points(z);
    for (const auto& p : all_points(2, 2)) {
        const auto tz = CurveWeilFamily::unpack(family.translate(x, p));
        for (const auto& q : tz) CHECK(c.on_curve(q, 1e-9));
        const Divisor diff = sum_of_points(tz) - zd + family.divisor_of(p).divisor;
        CHECK(lattice_distance(f.abel_jacobi_vector(diff), f.tau()) < 1e-8);
    }
    const auto nz = CurveWeilFamily::unpack(family.negate(x));
    CHECK(lattice_distance(f.abel_jacobi_vector(sum_of_points(nz) + zd - Divisor::canonical() * 3), f.tau()) < 1e-8);
}

TEST_CASE("Thomae constancy and moduli") {
    const HyperellipticCurve c = sextic();
    const JacobianFrame f(c);
    std::mt19937_64 rng(11);
    const ThomaeReport rep = thomae_compare(f, rng, 20);
    CHECK(rep.entries.size() == 15);
    CHECK(rep.max_cov < 1e-5);
    CHECK(rep.max_cov_squared < 1e-5);
    int constant = 0;
    for (const auto& [label, cov] : rep.per_delta) constant += cov < 1e-4;
    CHECK(constant == 1);
    const auto th = theta_characteristics(c);
    CHECK_FALSE(th[rep.delta].odd);

    const CurveModuli m = curve_moduli(f, rep.delta, rng, 5);
    CHECK(std::abs(m.squared(0) - 1.0) < 1e-12);
    CHECK(m.max_error < 1e-6);
    CHECK(m.normal_residual < 1e-7);
    CHECK(m.flagged == 15);

    CHECK_THROWS_AS(thomae_compare(f, rng, 4, 1e-30), ToleranceFailure);
}

TEST_CASE("residue pairing spaces") {
    for (std::uint64_t seed : {0u, 12u}) {
        const HyperellipticCurve c = seed == 0 ? sextic() : random_curve(seed);
        std::mt19937_64 rng(seed + 30);
        int ones = 0, zeros = 0;
        for (const auto& t : theta_characteristics(c)) {
            CAPTURE(t.label);
            const ResiduePairingSpace s = residue_pairing_space(c, t, rng);
            CHECK(s.gram.rows() == 6);
            CHECK(s.v0.cols() == 3);
            CHECK(s.symmetry_residual < 1e-8);
            CHECK(s.v0_defect < 1e-7);
            CHECK(s.v1_defect < 1e-7);
            CHECK(s.nondegeneracy > 1e-6);
            const XiCorank x = xi_corank(s);
            const int h0 = riemann_roch_basis(c, t.divisor).dimension();
            CHECK(x.corank == h0);
            ones += x.corank == 1;
            zeros += x.corank == 0;

            const QuadraticSpace<cplx> q(s.gram, 1e-8);
            const Mat<cplx> t_split = hyperbolic_coordinates(q, Mat<cplx>(s.v0));
            const Mat<cplx> split = t_split.transpose() * s.gram * t_split;
            CHECK((split - split_form<cplx>(3)).cwiseAbs().maxCoeff() < 1e-7 * s.gram.cwiseAbs().maxCoeff());
            CHECK(intersection_parity(Mat<cplx>(s.v1), Mat<cplx>(s.v0), q, 1e-7) == h0 % 2);
            const auto sq = spinor_square_check(Mat<cplx>(s.v1), Mat<cplx>(s.v0), q, 1e-7);
            CHECK(sq.opposite_component == (h0 == 1));
            if (h0 == 0) {
                CHECK(std::abs(sq.s) > 1e-8);
                CHECK(std::abs(sq.v) > 1e-8);
                CHECK(sq.residual < 1e-8 * std::abs(sq.s));
            }
        }
        CHECK(ones == 6);
        CHECK(zeros == 10);
    }
}
