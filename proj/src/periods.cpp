#include "thomae/periods.hpp"

#include <functional>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

namespace thomae {

namespace {

using Vec2 = Eigen::Vector2cd;

// One leg of a path, parametrized by t in [0, 1]. The integrand is numerator(t) / w(t) with
// w = sqrt(radicand(t)) continued along the leg.
struct Leg {
    std::function<cplx(double)> loc;
    std::function<cplx(double)> radicand;
    std::function<Vec2(double)> numerator;
    std::vector<cplx> singular;
};

struct LegResult {
    Vec2 value = Vec2::Zero();
    cplx root_end;
};

const std::vector<std::pair<double, double>>& gauss_rule() {
    static const std::vector<std::pair<double, double>> rule = [] {
        using G = boost::math::quadrature::gauss<double, 30>;
        std::vector<std::pair<double, double>> r;
        const auto& x = G::abscissa();
        const auto& w = G::weights();
        for (std::size_t i = 0; i < x.size(); ++i) {
            r.emplace_back(-x[i], w[i]);
            if (x[i] != 0.0) r.emplace_back(x[i], w[i]);
        }
        std::sort(r.begin(), r.end());
        return r;
    }();
    return rule;
}

cplx nearest_root(cplx radicand, cplx ref) {
    const cplx s = std::sqrt(radicand);
    return std::abs(s - ref) <= std::abs(s + ref) ? s : -s;
}

double distance_to(const std::vector<cplx>& pts, cplx z) {
    double d = std::numeric_limits<double>::infinity();
    for (cplx p : pts) d = std::min(d, std::abs(z - p));
    return d;
}

void integrate_piece(const Leg& leg, double a, double b, cplx& root, Vec2& acc, const QuadratureParams& q, int depth,
                     double refine) {
    const double mid = 0.5 * (a + b);
    const double len = std::abs(leg.loc(b) - leg.loc(a));
    const double dist = distance_to(leg.singular, leg.loc(mid));
    if (len > refine * q.step_fraction * dist) {
        if (depth >= q.max_depth) throw ToleranceFailure("integration path runs into a branch point");
        integrate_piece(leg, a, mid, root, acc, q, depth + 1, refine);
        integrate_piece(leg, mid, b, root, acc, q, depth + 1, refine);
        return;
    }
    const cplx start = root;
    const double half = 0.5 * (b - a);
    for (const auto& [x, w] : gauss_rule()) {
        const double t = mid + half * x;
        const cplx r = nearest_root(leg.radicand(t), start);
        acc += (w * half) * leg.numerator(t) / r;
    }
    root = nearest_root(leg.radicand(b), start);
}

LegResult integrate_leg(const Leg& leg, cplx root_start, const QuadratureParams& q, double refine = 1.0) {
    LegResult r;
    r.root_end = root_start;
    integrate_piece(leg, 0.0, 1.0, r.root_end, r.value, q, 0, refine);
    return r;
}

Poly product_except(const std::vector<cplx>& e, std::initializer_list<int> skip) {
    std::vector<cplx> keep;
    for (int j = 0; j < static_cast<int>(e.size()); ++j)
        if (std::find(skip.begin(), skip.end(), j) == skip.end()) keep.push_back(e[j]);
    return poly_from_roots(keep);
}

std::vector<cplx> others(const std::vector<cplx>& e, std::initializer_list<int> skip) {
    std::vector<cplx> out;
    for (int j = 0; j < static_cast<int>(e.size()); ++j)
        if (std::find(skip.begin(), skip.end(), j) == skip.end()) out.push_back(e[j]);
    return out;
}

// int_{e_k}^{e_{k+1}} along the segment with x = e_k + D (1 - cos(pi t)) / 2, where dx / y = dtheta / (i w).
Vec2 half_period(const HyperellipticCurve& c, int k, const QuadratureParams& q, double refine) {
    const auto& e = c.branch_points();
    const cplx e0 = e[k], delta = e[k + 1] - e[k];
    const Poly h = product_except(e, {k, k + 1});
    auto x = [=](double t) { return e0 + delta * (1.0 - std::cos(kPi * t)) / 2.0; };
    Leg leg{x, [=](double t) { return poly_eval(h, x(t)); },
            [=](double t) -> Vec2 { return Vec2(1.0, x(t)) * (kPi / kI); }, others(e, {k, k + 1})};
    return integrate_leg(leg, std::sqrt(poly_eval(h, e0)), q, refine).value;
}

struct PathEnd {
    Vec2 value;
    cplx y;
};

// From W_1 = (e_0, 0) to the point over x_end, leaving e_0 through x = e_0 + s^2.
PathEnd path_from_base(const HyperellipticCurve& c, cplx x_end, const QuadratureParams& q) {
    const auto& e = c.branch_points();
    const cplx e0 = e[0];
    const Poly g0 = product_except(e, {0});
    double rho = 0.5 * distance_to(others(e, {0}), e0);
    const cplx dir = x_end - e0;
    if (std::abs(dir) == 0.0) throw Error("path endpoint is the base point");
    rho = std::min(rho, std::abs(dir));
    const cplx x1 = e0 + rho * dir / std::abs(dir);
    const cplx s_end = std::sqrt(x1 - e0);
    Leg first{[=](double t) { return e0 + t * t * (x1 - e0); },
              [=](double t) { return poly_eval(g0, e0 + t * t * (x1 - e0)); },
              [=](double t) -> Vec2 {
                  const cplx x = e0 + t * t * (x1 - e0);
                  return Vec2(1.0, x) * (2.0 * s_end);
              },
              others(e, {0})};
    LegResult r = integrate_leg(first, std::sqrt(poly_eval(g0, e0)), q);
    PathEnd out{r.value, s_end * r.root_end};
    if (std::abs(x_end - x1) <= 1e-15 * c.scale()) return out;

    // straight on to x_end, detouring around a branch point that sits on the segment
    std::vector<cplx> stops{x1};
    const cplx seg = x_end - x1;
    for (cplx p : e) {
        const double t = std::real((p - x1) * std::conj(seg)) / std::norm(seg);
        if (t <= 0.0 || t >= 1.0) continue;
        if (std::abs(x1 + t * seg - p) < 1e-3 * c.min_separation()) {
            stops.push_back(x1 + t * seg + 0.25 * c.min_separation() * kI * seg / std::abs(seg));
            break;
        }
    }
    stops.push_back(x_end);
    for (std::size_t k = 0; k + 1 < stops.size(); ++k) {
        const cplx xa = stops[k], d = stops[k + 1] - stops[k];
        Leg leg{[=](double t) { return xa + t * d; }, [=, &c](double t) { return c.eval_f(xa + t * d); },
                [=](double t) -> Vec2 { return Vec2(1.0, xa + t * d) * d; }, e};
        LegResult lr = integrate_leg(leg, out.y, q);
        out.value += lr.value;
        out.y = lr.root_end;
    }
    return out;
}

Vec2 integral_to_infinity_plus(const HyperellipticCurve& c, const QuadratureParams& q) {
    const auto& e = c.branch_points();
    cplx centre = 0.0;
    for (cplx z : e) centre += z / 6.0;
    cplx dir = e[0] - centre;
    dir = std::abs(dir) > 1e-12 ? dir / std::abs(dir) : cplx(1.0);
    const cplx xr = e[0] + (2.0 * c.scale() + 2.0) * dir;
    PathEnd p = path_from_base(c, xr, q);
    const cplx tr = 1.0 / xr;
    std::vector<cplx> sing;
    for (cplx z : e)
        if (std::abs(z) > 1e-14) sing.push_back(1.0 / z);
    // x = 1/tau: (1, x) dx / y = (-tau, -1) dtau / w with w = tau^3 y = sqrt(prod (1 - e_j tau))
    auto rad = [e](cplx tau) {
        cplx v = 1.0;
        for (cplx z : e) v *= 1.0 - z * tau;
        return v;
    };
    Leg leg{[=](double t) { return tr * (1.0 - t); }, [=](double t) { return rad(tr * (1.0 - t)); },
            [=](double t) -> Vec2 {
                const cplx tau = tr * (1.0 - t);
                return Vec2(-tau, -1.0) * (-tr);
            },
            sing};
    LegResult r = integrate_leg(leg, p.y * tr * tr * tr, q);
    const Vec2 total = p.value + r.value;
    // w(0) = +1 at oo+
    return std::real(r.root_end) > 0 ? total : Vec2(-total);
}

}  // namespace

JacobianFrame::JacobianFrame(const HyperellipticCurve& c, QuadratureParams q)
    : curve_(c), q_(q), tau_(MatrixXc::Identity(2, 2) * kI) {
    std::array<Vec2, 5> coarse, fine;
    for (int k = 0; k < 5; ++k) {
        coarse[k] = half_period(c, k, q, 1.0);
        fine[k] = half_period(c, k, q, 0.5);
    }
    half_ = fine;

    auto assemble = [&](const std::array<Vec2, 5>& h, const std::array<int, 3>& s, Eigen::Matrix2cd& a,
                        Eigen::Matrix2cd& b) {
        const Vec2 c1 = 2.0 * h[0], c2 = 2.0 * s[0] * h[1], c3 = 2.0 * s[1] * h[2], c4 = 2.0 * s[2] * h[3];
        a.col(0) = c1;
        a.col(1) = c1 + c3;
        b.col(0) = c2;
        b.col(1) = c4;
    };
    double best = std::numeric_limits<double>::infinity();
    for (int mask = 0; mask < 8; ++mask) {
        const std::array<int, 3> s{mask & 1 ? -1 : 1, mask & 2 ? -1 : 1, mask & 4 ? -1 : 1};
        Eigen::Matrix2cd a, b;
        assemble(fine, s, a, b);
        if (std::abs(a.determinant()) < 1e-14 * a.squaredNorm()) continue;
        const Eigen::Matrix2cd t = a.inverse() * b;
        const Eigen::Matrix2d im = (0.5 * (t + t.transpose())).imag();
        if (!(im(0, 0) > 0 && im.determinant() > 0)) continue;
        const double asym = (t - t.transpose()).cwiseAbs().maxCoeff() / t.cwiseAbs().maxCoeff();
        if (asym < best) {
            best = asym;
            signs_ = s;
            a_ = a;
            b_ = b;
        }
    }
    if (!(best < 1e-6)) {
        std::ostringstream os;
        os << "period_matrix: no sign class gives a symmetric tau (best residual " << best << ")";
        throw ToleranceFailure(os.str());
    }
    symmetry_ = best;
    a_inv_ = a_.inverse();
    MatrixXc t = a_inv_ * b_;
    riemann_ = (a_ * b_.transpose() - b_ * a_.transpose()).cwiseAbs().maxCoeff() /
               (a_.cwiseAbs().maxCoeff() * b_.cwiseAbs().maxCoeff());
    {
        Eigen::Matrix2cd a2, b2;
        assemble(coarse, signs_, a2, b2);
        refinement_ = (a2.inverse() * b2 - t).cwiseAbs().maxCoeff();
    }
    tau_ = PeriodMatrix(0.5 * (t + t.transpose()));

    // int_{e_0}^{e_k} along the chain of segments, each on whichever sheet it was computed
    weierstrass_[0] = Vec2::Zero();
    for (int k = 1; k < 6; ++k) weierstrass_[k] = weierstrass_[k - 1] + half_[k - 1];
    inf_plus_ = integral_to_infinity_plus(curve_, q_);
}

Eigen::Vector2cd JacobianFrame::raw_integral(const CurvePoint& p) const {
    if (p.kind == CurvePoint::Kind::InfinityPlus) return inf_plus_;
    if (p.kind == CurvePoint::Kind::InfinityMinus) return -inf_plus_;
    const int w = curve_.weierstrass_index(p, 1e-12);
    if (w >= 0) return weierstrass_[w];
    if (!curve_.on_curve(p, 1e-8)) throw Error("abel_jacobi: point is not on the curve");
    const PathEnd end = path_from_base(curve_, p.x, q_);
    // the involution fixes W_1 and reverses the differentials
    return std::abs(end.y - p.y) <= std::abs(end.y + p.y) ? end.value : Vec2(-end.value);
}

VectorXc JacobianFrame::abel_jacobi_vector(const Divisor& d) const {
    if (d.degree() != 0) throw Error("abel_jacobi needs a divisor of degree 0");
    Vec2 s = Vec2::Zero();
    for (const auto& [p, m] : d.terms()) s += static_cast<double>(m) * raw_integral(p);
    return a_inv_ * s;
}

JacobianFrame period_matrix(const HyperellipticCurve& c, QuadratureParams q) { return JacobianFrame(c, q); }

TorusPoint abel_jacobi(const JacobianFrame& f, const Divisor& d) { return reduce(f.abel_jacobi_vector(d), f.tau()); }

TorsionCharacteristic torsion_characteristic(const JacobianFrame& f, const Divisor& d, int n, double max_residual) {
    const Eigen::VectorXd lc = lattice_coordinates(f.abel_jacobi_vector(d), f.tau()) * n;
    Eigen::VectorXi a(2), b(2);
    double res = 0.0;
    for (int i = 0; i < 2; ++i) {
        const double ra = std::round(lc(i)), rb = std::round(lc(2 + i));
        res = std::max({res, std::abs(lc(i) - ra), std::abs(lc(2 + i) - rb)});
        a(i) = mod(static_cast<long long>(ra), n);
        b(i) = mod(static_cast<long long>(rb), n);
    }
    if (res > max_residual) {
        std::ostringstream os;
        os << "torsion_characteristic: divisor is not " << n << "-torsion (rounding residual " << res << ")";
        throw ToleranceFailure(os.str());
    }
    return {Characteristic(n, a, b), res};
}

std::vector<int> analytic_labels(const JacobianFrame& f) {
    const auto tt = two_torsion_divisors(f.curve());
    std::vector<int> labels(16, -1);
    for (int t = 0; t < 16; ++t) {
        const LPoint p = torsion_characteristic(f, tt[t].divisor, 2).chi.to_point();
        if (labels[p.index()] >= 0) throw ToleranceFailure("two 2-torsion divisors share a characteristic");
        labels[p.index()] = t;
    }
    return labels;
}

CurvePoint default_anchor(const HyperellipticCurve& c) {
    cplx centre = 0.0;
    for (cplx z : c.branch_points()) centre += z / 6.0;
    return c.point_over(centre + (c.scale() - 1.0) * cplx(0.3137, 0.2211) + cplx(0.05, 0.03), 1);
}

namespace {

double coefficient_of_variation(const std::vector<cplx>& v, cplx* mean_out = nullptr) {
    cplx mean = 0.0;
    for (cplx z : v) mean += z;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (cplx z : v) var += std::norm(z - mean);
    var /= static_cast<double>(v.size());
    if (mean_out) *mean_out = mean;
    return std::sqrt(var) / std::abs(mean);
}

}  // namespace

ThomaeReport thomae_compare(const JacobianFrame& f, std::mt19937_64& rng, int samples, double fail_threshold) {
    const HyperellipticCurve& c = f.curve();
    ThomaeReport rep;
    rep.samples = samples;
    rep.labels = analytic_labels(f);
    const auto tt = two_torsion_divisors(c);
    const auto thetas = theta_characteristics(c);
    AnalyticWeilFamily analytic(2, f.tau());
    std::vector<DeterminantWeilFunction> dets;
    for (const auto& t : tt) dets.emplace_back(c, t);

    // per sample: AJ(w - K) and f_P(w) for every divisor index
    const Divisor w1 = Divisor::point(c.weierstrass(0));
    std::vector<VectorXc> base;
    std::vector<std::vector<cplx>> fvals;
    while (static_cast<int>(base.size()) < samples) {
        std::vector<CurvePoint> w;
        for (int k = 0; k < 3; ++k) w.push_back(c.random_point(rng));
        try {
            std::vector<cplx> vals;
            for (const auto& d : dets) vals.push_back(d(w, 2));
            base.push_back(f.abel_jacobi_vector(sum_of_points(w) - Divisor::canonical() - w1));
            fvals.push_back(vals);
        } catch (const PoleProximity&) {
        }
    }

    const auto pts = all_points(2, 2);
    double best = std::numeric_limits<double>::infinity();
    std::vector<ThomaeEntry> best_entries;
    for (int di = 0; di < static_cast<int>(thetas.size()); ++di) {
        if (thetas[di].odd) continue;
        const VectorXc shift = f.abel_jacobi_vector(thetas[di].divisor - w1);
        std::vector<ThomaeEntry> entries;
        double worst = 0.0;
        for (const LPoint& p : pts) {
            if (p.is_zero()) continue;
            const int t = rep.labels[p.index()];
            std::vector<cplx> ratios, squares;
            bool ok = true;
            for (int s = 0; s < samples && ok; ++s) {
                const VectorXc z = reduce(base[s] - shift, f.tau()).z0;
                try {
                    const cplx r = fvals[s][t] / analytic.evaluate(p, z);
                    ratios.push_back(r);
                    squares.push_back(r * r);
                } catch (const PoleProximity&) {
                    ok = false;
                }
            }
            ThomaeEntry e{p, tt[t].label(), 0.0, std::numeric_limits<double>::infinity(),
                          std::numeric_limits<double>::infinity()};
            if (ok) {
                e.cov = coefficient_of_variation(ratios, &e.mean_ratio);
                e.cov_squared = coefficient_of_variation(squares);
            }
            worst = std::max(worst, e.cov);
            entries.push_back(e);
        }
        rep.per_delta.emplace_back(thetas[di].label, worst);
        if (worst < best) {
            best = worst;
            rep.delta = di;
            best_entries = entries;
        }
    }
    rep.entries = best_entries;
    rep.delta_label = thetas[rep.delta].label;
    for (const auto& e : rep.entries) {
        rep.max_cov = std::max(rep.max_cov, e.cov);
        rep.max_cov_squared = std::max(rep.max_cov_squared, e.cov_squared);
    }
    if (!(rep.max_cov < fail_threshold)) {
        std::ostringstream os;
        os << "thomae_compare: no even delta makes the ratios constant (best variation " << rep.max_cov << ")";
        throw ToleranceFailure(os.str());
    }
    return rep;
}

CurveModuli curve_moduli(const JacobianFrame& f, int delta_index, std::mt19937_64& rng, int residual_samples) {
    const HyperellipticCurve& c = f.curve();
    const auto thetas = theta_characteristics(c);
    const auto& delta = thetas.at(delta_index);
    const CurvePoint anchor = default_anchor(c);
    auto family = std::make_shared<CurveWeilFamily>(c, analytic_labels(f), anchor);
    const BilinearPairing d = analytic_normal_pairing(2, 2);
    NormalizationResult r = symmetric_refine(igusa_alpha(family, d, Eigen::VectorXi::Zero(4), rng));

    // a triple in the class K + delta, away from the family's anchor
    const CurvePoint other = c.point_over(c.branch_points()[0] * 0.37 + cplx(0.11, -0.29) * c.scale(), -1);
    const VectorXc x0 = CurveWeilFamily::pack(reduce_to_effective(c, Divisor::canonical() + delta.divisor, other));
    const VectorXc m = moduli_point(r, x0);

    AnalyticWeilFamily analytic(2, f.tau());
    const VectorXc zero = VectorXc::Zero(2);
    CurveModuli out;
    out.squared = m.cwiseProduct(m);
    out.expected.resize(16);
    const auto pts = all_points(2, 2);
    for (const LPoint& p : pts) {
        const cplx q = analytic.quotient(p, zero);
        out.expected(p.index()) = q * q * q * q;
        const double err = std::abs(out.squared(p.index()) - out.expected(p.index())) /
                           std::max(1.0, std::abs(out.expected(p.index())));
        out.max_error = std::max(out.max_error, err);
        if (r.ambiguous[p.index()]) ++out.flagged;
    }
    out.normal_residual = normal_set_residual(r, residual_samples, rng);
    return out;
}

}  // namespace thomae
