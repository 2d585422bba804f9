#include "thomae/hyperelliptic.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include <unsupported/Eigen/Polynomials>

namespace thomae {

// ---------------------------------------------------------------- polynomials

cplx poly_eval(const Poly& p, cplx x) {
    cplx v = 0.0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * x + *it;
    return v;
}

Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

Poly poly_add(const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return r;
}

Poly poly_scale(const Poly& a, cplx c) {
    Poly r = a;
    for (auto& v : r) v *= c;
    return r;
}

Poly poly_from_roots(const std::vector<cplx>& roots) {
    Poly r{1.0};
    for (cplx z : roots) r = poly_mul(r, Poly{-z, 1.0});
    return r;
}

namespace {

Poly poly_derivative(const Poly& p) {
    Poly d;
    for (std::size_t i = 1; i < p.size(); ++i) d.push_back(static_cast<double>(i) * p[i]);
    return d;
}

}  // namespace

std::vector<cplx> poly_roots(const Poly& p, double trim) {
    double big = 0.0;
    for (cplx c : p) big = std::max(big, std::abs(c));
    if (big == 0.0) throw Error("poly_roots: zero polynomial");
    int deg = static_cast<int>(p.size()) - 1;
    while (deg > 0 && std::abs(p[deg]) <= trim * big) --deg;
    if (deg == 0) return {};
    if (deg == 1) return {-p[0] / p[1]};
    Eigen::VectorXcd coeffs(deg + 1);
    for (int i = 0; i <= deg; ++i) coeffs(i) = p[i];
    Eigen::PolynomialSolver<cplx, Eigen::Dynamic> solver(coeffs);
    std::vector<cplx> roots(solver.roots().data(), solver.roots().data() + deg);
    // a few Newton steps against the untrimmed polynomial
    const Poly dp = poly_derivative(p);
    for (cplx& z : roots)
        for (int it = 0; it < 3; ++it) {
            const cplx d = poly_eval(dp, z);
            if (std::abs(d) == 0.0) break;
            const cplx step = poly_eval(p, z) / d;
            if (!(std::abs(step) < 1e-3 * (1.0 + std::abs(z)))) break;
            z -= step;
        }
    return roots;
}

// ---------------------------------------------------------------- points and curve

bool points_coincide(const CurvePoint& a, const CurvePoint& b, double tol) {
    if (a.kind != b.kind) return false;
    if (a.is_infinity()) return true;
    return std::abs(a.x - b.x) <= tol * (1.0 + std::abs(a.x)) && std::abs(a.y - b.y) <= tol * (1.0 + std::abs(a.y));
}

std::string to_string(const CurvePoint& p) {
    if (p.kind == CurvePoint::Kind::InfinityPlus) return "oo+";
    if (p.kind == CurvePoint::Kind::InfinityMinus) return "oo-";
    std::ostringstream os;
    os << "(" << p.x << ", " << p.y << ")";
    return os.str();
}

HyperellipticCurve::HyperellipticCurve(std::vector<cplx> branch_points, double min_separation)
    : e_(std::move(branch_points)) {
    if (e_.size() != 6) throw Error("a genus-2 sextic needs exactly 6 branch points");
    std::sort(e_.begin(), e_.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    min_sep_ = std::numeric_limits<double>::infinity();
    scale_ = 1.0;
    for (std::size_t i = 0; i < 6; ++i) {
        scale_ = std::max(scale_, 1.0 + std::abs(e_[i]));
        for (std::size_t j = i + 1; j < 6; ++j) min_sep_ = std::min(min_sep_, std::abs(e_[i] - e_[j]));
    }
    if (!(min_sep_ > min_separation * scale_))
        throw Error("discriminant of f vanishes numerically: branch points closer than the separation bound");
    f_ = poly_from_roots(e_);
}

HyperellipticCurve HyperellipticCurve::from_coefficients(const Poly& f, double min_separation) {
    if (f.size() != 7 || std::abs(f[6]) == 0.0) throw Error("f must have degree exactly 6");
    const Poly monic = poly_scale(f, 1.0 / f[6]);
    return HyperellipticCurve(poly_roots(monic, 0.0), min_separation);
}

CurvePoint HyperellipticCurve::weierstrass(int i) const {
    if (i < 0 || i >= 6) throw Error("Weierstrass index out of range");
    return CurvePoint::affine(e_[i], 0.0);
}

CurvePoint HyperellipticCurve::point_over(cplx x, int sign) const {
    const cplx y = std::sqrt(eval_f(x));
    return CurvePoint::affine(x, sign >= 0 ? y : -y);
}

double HyperellipticCurve::residual(const CurvePoint& p) const {
    if (p.is_infinity()) return 0.0;
    const cplx fx = eval_f(p.x);
    return std::abs(p.y * p.y - fx) / (1.0 + std::abs(fx));
}

int HyperellipticCurve::weierstrass_index(const CurvePoint& p, double tol) const {
    if (p.is_infinity()) return -1;
    for (int i = 0; i < 6; ++i)
        if (std::abs(p.x - e_[i]) <= tol * scale_ && std::abs(p.y) <= std::sqrt(tol) * scale_) return i;
    return -1;
}

CurvePoint HyperellipticCurve::involution(const CurvePoint& p) const {
    if (p.kind == CurvePoint::Kind::InfinityPlus) return CurvePoint::infinity(-1);
    if (p.kind == CurvePoint::Kind::InfinityMinus) return CurvePoint::infinity(1);
    return CurvePoint::affine(p.x, -p.y);
}

CurvePoint HyperellipticCurve::random_point(std::mt19937_64& rng, double spread) const {
    std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
    std::bernoulli_distribution coin(0.5);
    cplx centre = 0.0;
    for (cplx e : e_) centre += e / 6.0;
    const double r = spread * (scale_ - 1.0 + 0.5);
    const cplx x = centre + r * cplx(nd(rng), nd(rng));
    return point_over(x, coin(rng) ? 1 : -1);
}

// ---------------------------------------------------------------- divisors

Divisor::Divisor(const std::vector<std::pair<CurvePoint, int>>& terms) {
    for (const auto& [p, m] : terms) add(p, m);
}

Divisor Divisor::point(const CurvePoint& p, int m) { return Divisor({{p, m}}); }

Divisor Divisor::canonical() { return Divisor({{CurvePoint::infinity(1), 1}, {CurvePoint::infinity(-1), 1}}); }

void Divisor::add(const CurvePoint& p, int m) {
    if (m == 0) return;
    for (auto it = terms_.begin(); it != terms_.end(); ++it)
        if (points_coincide(it->first, p)) {
            it->second += m;
            if (it->second == 0) terms_.erase(it);
            return;
        }
    terms_.emplace_back(p, m);
}

int Divisor::degree() const {
    int d = 0;
    for (const auto& t : terms_) d += t.second;
    return d;
}

int Divisor::multiplicity(const CurvePoint& p) const {
    for (const auto& [q, m] : terms_)
        if (points_coincide(p, q)) return m;
    return 0;
}

bool Divisor::is_effective() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.second > 0; });
}

Divisor Divisor::positive_part() const {
    Divisor d;
    for (const auto& [p, m] : terms_)
        if (m > 0) d.add(p, m);
    return d;
}

Divisor Divisor::negative_part() const {
    Divisor d;
    for (const auto& [p, m] : terms_)
        if (m < 0) d.add(p, -m);
    return d;
}

Divisor Divisor::operator+(const Divisor& o) const {
    Divisor d = *this;
    for (const auto& [p, m] : o.terms_) d.add(p, m);
    return d;
}

Divisor Divisor::operator-() const { return *this * -1; }
Divisor Divisor::operator-(const Divisor& o) const { return *this + (-o); }

Divisor Divisor::operator*(int k) const {
    Divisor d;
    for (const auto& [p, m] : terms_) d.add(p, m * k);
    return d;
}

std::string Divisor::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [p, m] : terms_) {
        os << (first ? "" : " ") << (m > 0 && !first ? "+" : "") << m << "*" << thomae::to_string(p);
        first = false;
    }
    return os.str();
}

Divisor sum_of_points(const std::vector<CurvePoint>& pts) {
    Divisor d;
    for (const auto& p : pts) d = d + Divisor::point(p);
    return d;
}

// ---------------------------------------------------------------- functions

cplx CurveFunction::denominator(cplx x) const {
    cplx r = 1.0;
    for (cplx rho : poles) r *= x - rho;
    return r;
}

cplx CurveFunction::operator()(const CurvePoint& pt) const {
    if (!pt.is_affine()) throw Error("CurveFunction: evaluation at infinity needs a Laurent expansion");
    const cplx r = denominator(pt.x);
    for (cplx rho : poles)
        if (std::abs(pt.x - rho) < 1e-12 * (1.0 + std::abs(rho)))
            throw PoleProximity("CurveFunction evaluated on the fibre of a denominator root");
    return (poly_eval(p, pt.x) + poly_eval(q, pt.x) * pt.y) / r;
}

namespace {

// Truncated Laurent series sum_k c[k] t^{val + k}, known through exponent val + c.size() - 1.
struct Series {
    int val = 0;
    std::vector<cplx> c;

    int hi() const { return val + static_cast<int>(c.size()); }
    cplx at(int e) const {
        if (e < val) return 0.0;
        if (e >= hi()) throw Error("Laurent series: coefficient beyond the computed precision");
        return c[e - val];
    }
};

Series constant_series(cplx a, int len) {
    Series s{0, std::vector<cplx>(len, 0.0)};
    s.c[0] = a;
    return s;
}

Series add(const Series& a, const Series& b) {
    const int v = std::min(a.val, b.val), h = std::min(a.hi(), b.hi());
    Series s{v, std::vector<cplx>(std::max(h - v, 0), 0.0)};
    for (int e = v; e < h; ++e) {
        cplx t = 0.0;
        if (e >= a.val) t += a.c[e - a.val];
        if (e >= b.val) t += b.c[e - b.val];
        s.c[e - v] = t;
    }
    return s;
}

Series scale(const Series& a, cplx k) {
    Series s = a;
    for (auto& v : s.c) v *= k;
    return s;
}

Series mul(const Series& a, const Series& b) {
    const int v = a.val + b.val;
    const int h = std::min(a.hi() + b.val, b.hi() + a.val);
    Series s{v, std::vector<cplx>(std::max(h - v, 0), 0.0)};
    const int n = h - v;
    for (int i = 0; i < n && i < static_cast<int>(a.c.size()); ++i)
        for (int j = 0; i + j < n && j < static_cast<int>(b.c.size()); ++j) s.c[i + j] += a.c[i] * b.c[j];
    return s;
}

Series strip(Series s) {
    std::size_t k = 0;
    while (k < s.c.size() && s.c[k] == 0.0) ++k;
    if (k == s.c.size()) throw Error("Laurent series vanishes through its precision");
    s.c.erase(s.c.begin(), s.c.begin() + static_cast<long>(k));
    s.val += static_cast<int>(k);
    return s;
}

// Leading zeros of a denominator are exact here (coincident points share coordinates), and the tail of
// a chart can grow geometrically, so only exact zeros are stripped.
Series inverse(Series a) {
    a = strip(std::move(a));
    const int n = static_cast<int>(a.c.size());
    Series s{-a.val, std::vector<cplx>(n, 0.0)};
    s.c[0] = 1.0 / a.c[0];
    for (int k = 1; k < n; ++k) {
        cplx t = 0.0;
        for (int j = 1; j <= k; ++j) t += a.c[j] * s.c[k - j];
        s.c[k] = -t / a.c[0];
    }
    return s;
}

// sqrt of a series with val 0 and c[0] != 0, with leading coefficient `lead` (a chosen root of c[0]).
Series sqrt_series(const Series& a, cplx lead) {
    if (a.val != 0) throw Error("sqrt_series expects a unit");
    const int n = static_cast<int>(a.c.size());
    Series s{0, std::vector<cplx>(n, 0.0)};
    s.c[0] = lead;
    for (int k = 1; k < n; ++k) {
        cplx t = a.c[k];
        for (int j = 1; j < k; ++j) t -= s.c[j] * s.c[k - j];
        s.c[k] = t / (2.0 * lead);
    }
    return s;
}

// A constant known to every exponent below hi.
Series constant_to(cplx a, int hi) { return constant_series(a, std::max(hi, 1)); }

Series compose(const Poly& p, const Series& x) {
    if (p.empty()) return constant_to(0.0, x.hi());
    Series acc = constant_series(p.back(), std::max(x.hi() - x.val, 1));
    for (int i = static_cast<int>(p.size()) - 2; i >= 0; --i) {
        acc = mul(acc, x);
        acc = add(acc, constant_to(p[i], acc.hi()));
    }
    return acc;
}

Series product_of_linear(const std::vector<cplx>& roots, const Series& x) {
    Series acc = constant_series(1.0, std::max(x.hi() - x.val, 1));
    for (cplx rho : roots) acc = mul(acc, add(x, constant_to(-rho, x.hi())));
    return acc;
}

struct LocalChart {
    Series x;
    Series y;
};

LocalChart local_chart(const HyperellipticCurve& c, const CurvePoint& pt, int len) {
    LocalChart ch;
    if (pt.is_infinity()) {
        ch.x = Series{-1, std::vector<cplx>(len, 0.0)};
        ch.x.c[0] = 1.0;
        // t^6 f(1/t) = sum f_k t^{6-k}
        Series rev{0, std::vector<cplx>(len, 0.0)};
        for (int k = 0; k <= 6 && k < len; ++k) rev.c[k] = c.f()[6 - k];
        Series root = sqrt_series(rev, 1.0);
        root.val -= 3;
        ch.y = pt.kind == CurvePoint::Kind::InfinityPlus ? root : scale(root, -1.0);
        return ch;
    }
    const int w = c.weierstrass_index(pt);
    if (w >= 0) {
        const cplx e = c.branch_points()[w];
        std::vector<cplx> others;
        for (int j = 0; j < 6; ++j)
            if (j != w) others.push_back(c.branch_points()[j]);
        const Poly g = poly_from_roots(others);
        // u g(e + u) = T, solved by u <- T / g(e + u) in the variable T = t^2
        const int half = len / 2 + 2;
        Series tser{1, std::vector<cplx>(half, 0.0)};
        tser.c[0] = 1.0;
        Series u = constant_to(0.0, half + 1);
        for (int it = 0; it < half + 1; ++it) u = mul(tser, inverse(compose(g, add(constant_to(e, half + 1), u))));
        Series xs{0, std::vector<cplx>(2 * u.hi(), 0.0)};
        xs.c[0] = e;
        for (int k = 0; k < static_cast<int>(u.c.size()); ++k)
            if (u.val + k > 0) xs.c[2 * (u.val + k)] = u.c[k];
        ch.x = xs;
        ch.y = Series{1, std::vector<cplx>(len, 0.0)};
        ch.y.c[0] = 1.0;
        return ch;
    }
    ch.x = Series{0, std::vector<cplx>(len, 0.0)};
    ch.x.c[0] = pt.x;
    if (len > 1) ch.x.c[1] = 1.0;
    Series fx = compose(c.f(), ch.x);
    fx.c.resize(std::min<std::size_t>(fx.c.size(), len));
    const cplx f0 = fx.c[0];
    Series unit = scale(fx, 1.0 / f0);
    ch.y = scale(sqrt_series(unit, 1.0), pt.y);
    return ch;
}

Series expand(const CurveFunction& h, const LocalChart& ch) {
    Series num = compose(h.p, ch.x);
    if (!h.q.empty()) num = add(num, mul(compose(h.q, ch.x), ch.y));
    if (h.poles.empty()) return num;
    return mul(num, inverse(product_of_linear(h.poles, ch.x)));
}

int chart_length(const CurveFunction& h, int lo, int hi) {
    const int degs = static_cast<int>(h.p.size() + h.q.size() + 2 * h.poles.size());
    return (hi - lo) + 2 * degs + 24;
}

}  // namespace

std::vector<cplx> laurent_coefficients(const HyperellipticCurve& c, const CurveFunction& h, const CurvePoint& pt,
                                       int lo, int hi) {
    const LocalChart ch = local_chart(c, pt, chart_length(h, lo, hi));
    const Series s = expand(h, ch);
    std::vector<cplx> out;
    for (int e = lo; e < hi; ++e) out.push_back(s.at(e));
    return out;
}

int order_at(const HyperellipticCurve& c, const CurveFunction& h, const CurvePoint& pt, int lo, int hi, double tol) {
    const auto co = laurent_coefficients(c, h, pt, lo, hi);
    double big = 0.0;
    for (cplx v : co) big = std::max(big, std::abs(v));
    if (big == 0.0) return hi;
    for (int k = 0; k < static_cast<int>(co.size()); ++k)
        if (std::abs(co[k]) > tol * big) return lo + k;
    return hi;
}

// ---------------------------------------------------------------- Riemann-Roch

namespace {

struct Fibre {
    cplx x;
    bool weierstrass;
    int weierstrass_index;
    int r_power;
};

// The points whose Laurent expansions constrain h: support of D, oo+-, and the full fibres over r's roots.
std::vector<std::pair<CurvePoint, int>> constraint_points(const HyperellipticCurve& c, const Divisor& d,
                                                          const std::vector<Fibre>& fibres) {
    std::vector<std::pair<CurvePoint, int>> pts;
    auto push = [&](const CurvePoint& p) {
        for (const auto& q : pts)
            if (points_coincide(q.first, p)) return;
        pts.emplace_back(p, d.multiplicity(p));
    };
    for (const auto& [p, m] : d.terms()) push(p);
    push(CurvePoint::infinity(1));
    push(CurvePoint::infinity(-1));
    for (const auto& f : fibres) {
        if (f.weierstrass) {
            push(c.weierstrass(f.weierstrass_index));
        } else {
            const CurvePoint a = c.point_over(f.x, 1);
            push(a);
            push(c.involution(a));
        }
    }
    return pts;
}

}  // namespace

SectionBasis riemann_roch_basis(const HyperellipticCurve& c, const Divisor& d, double rel_tol) {
    // fibres over finite x carrying allowed poles
    std::vector<Fibre> fibres;
    for (const auto& [p, m] : d.terms()) {
        if (!p.is_affine()) continue;
        const int w = c.weierstrass_index(p);
        Fibre* fib = nullptr;
        for (auto& f : fibres)
            if (std::abs(f.x - p.x) <= 1e-12 * (1.0 + std::abs(p.x))) fib = &f;
        if (!fib) {
            fibres.push_back({w >= 0 ? c.branch_points()[w] : p.x, w >= 0, w, 0});
            fib = &fibres.back();
        }
        const int need = w >= 0 ? (std::max(m, 0) + 1) / 2 : std::max(m, 0);
        fib->r_power = std::max(fib->r_power, need);
    }
    // canonical x for ordinary points: reuse the stored value so that x - rho is exactly zero on the fibre
    std::vector<cplx> poles;
    std::vector<Fibre> used;
    for (const auto& f : fibres)
        if (f.r_power > 0) {
            used.push_back(f);
            for (int k = 0; k < f.r_power; ++k) poles.push_back(f.x);
        }
    const int rdeg = static_cast<int>(poles.size());
    const int ninf = std::max(d.multiplicity(CurvePoint::infinity(1)), d.multiplicity(CurvePoint::infinity(-1)));
    const int dp = rdeg + ninf, dq = rdeg + ninf - 3;
    const int np = std::max(dp + 1, 0), nq = std::max(dq + 1, 0);
    const int unknowns = np + nq;

    SectionBasis out;
    out.divisor = d;
    if (unknowns == 0) return out;

    std::vector<CurveFunction> monomials;
    for (int i = 0; i < np; ++i) {
        CurveFunction m{Poly(i + 1, 0.0), {}, poles};
        m.p[i] = 1.0;
        monomials.push_back(m);
    }
    for (int j = 0; j < nq; ++j) {
        CurveFunction m{{}, Poly(j + 1, 0.0), poles};
        m.q[j] = 1.0;
        monomials.push_back(m);
    }

    std::vector<Eigen::RowVectorXcd> rows;
    for (const auto& [pt, mult] : constraint_points(c, d, used)) {
        int lo;
        if (pt.is_infinity()) {
            lo = rdeg - std::max(dp, dq + 3);
        } else {
            int k = 0;
            for (const auto& f : used)
                if (std::abs(f.x - pt.x) <= 1e-12 * (1.0 + std::abs(pt.x))) k = f.r_power;
            lo = c.weierstrass_index(pt) >= 0 ? -2 * k : -k;
        }
        const int hi = -mult;
        if (hi <= lo) continue;
        std::vector<std::vector<cplx>> co;
        for (const auto& m : monomials) co.push_back(laurent_coefficients(c, m, pt, lo, hi));
        for (int e = 0; e < hi - lo; ++e) {
            Eigen::RowVectorXcd row(unknowns);
            for (int u = 0; u < unknowns; ++u) row(u) = co[u][e];
            rows.push_back(row);
        }
    }

    Eigen::MatrixXcd cm(static_cast<long>(rows.size()), unknowns);
    for (std::size_t i = 0; i < rows.size(); ++i) cm.row(static_cast<long>(i)) = rows[i];
    Eigen::VectorXd colscale = Eigen::VectorXd::Ones(unknowns);
    for (int u = 0; u < unknowns; ++u) {
        const double nrm = cm.rows() ? cm.col(u).norm() : 0.0;
        if (nrm > 0.0) colscale(u) = 1.0 / nrm;
    }
    Eigen::MatrixXcd null;
    if (cm.rows() == 0) {
        null = Eigen::MatrixXcd::Identity(unknowns, unknowns);
        out.singular_values = Eigen::VectorXd();
        out.gap = std::numeric_limits<double>::infinity();
    } else {
        const Eigen::MatrixXcd scaled = cm * colscale.asDiagonal();
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(scaled, Eigen::ComputeFullV);
        const Eigen::VectorXd sv = svd.singularValues();
        out.singular_values = sv;
        const double smax = sv.size() ? sv(0) : 0.0;
        int rank = 0;
        while (rank < sv.size() && sv(rank) > rel_tol * smax) ++rank;
        out.gap = rank < sv.size() ? (rank > 0 ? sv(rank - 1) / std::max(sv(rank), 1e-300)
                                               : 0.0)
                                   : std::numeric_limits<double>::infinity();
        null = svd.matrixV().rightCols(unknowns - rank);
    }
    const int dim = static_cast<int>(null.cols());
    if (d.degree() >= 3 && dim != d.degree() - 1) {
        std::ostringstream os;
        os << "riemann_roch_basis: dimension " << dim << " but deg D - 1 = " << d.degree() - 1
           << " (singular-value gap " << out.gap << ")";
        throw ToleranceFailure(os.str());
    }
    if (dim == 0) return out;

    // canonical basis: identity on pivot coordinates chosen by column-pivoted QR
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(null.transpose());
    Eigen::MatrixXcd pivots(dim, dim);
    for (int k = 0; k < dim; ++k) pivots.row(k) = null.row(qr.colsPermutation().indices()(k));
    const Eigen::MatrixXcd basis = null * pivots.inverse();
    {
        Eigen::JacobiSVD<Eigen::MatrixXcd> s2(basis);
        out.condition = s2.singularValues()(0) / s2.singularValues()(dim - 1);
    }
    for (int k = 0; k < dim; ++k) {
        CurveFunction h{Poly(np, 0.0), Poly(nq, 0.0), poles};
        for (int i = 0; i < np; ++i) h.p[i] = basis(i, k) * colscale(i);
        for (int j = 0; j < nq; ++j) h.q[j] = basis(np + j, k) * colscale(np + j);
        out.functions.push_back(h);
    }
    return out;
}

bool satisfies_pole_bounds(const HyperellipticCurve& c, const CurveFunction& h, const Divisor& d, double tol) {
    std::vector<CurvePoint> pts;
    for (const auto& t : d.terms()) pts.push_back(t.first);
    pts.push_back(CurvePoint::infinity(1));
    pts.push_back(CurvePoint::infinity(-1));
    for (cplx rho : h.poles) {
        bool w = false;
        for (int i = 0; i < 6; ++i)
            if (std::abs(rho - c.branch_points()[i]) <= 1e-12 * c.scale()) {
                pts.push_back(c.weierstrass(i));
                w = true;
            }
        if (!w) {
            pts.push_back(c.point_over(rho, 1));
            pts.push_back(c.point_over(rho, -1));
        }
    }
    for (const auto& pt : pts) {
        const int need = -d.multiplicity(pt);
        const int lo = std::min(need, 0) - 2 * static_cast<int>(h.poles.size() + h.p.size() + h.q.size()) - 4;
        // the window runs past the bound so that the scale comes from coefficients h actually has
        const auto co = laurent_coefficients(c, h, pt, lo, need + 6);
        double big = 0.0;
        for (cplx v : co) big = std::max(big, std::abs(v));
        for (int e = lo; e < need; ++e)
            if (std::abs(co[e - lo]) > tol * big) return false;
    }
    return true;
}

// ---------------------------------------------------------------- zeros and reduction

CurveFunction random_section(const HyperellipticCurve& c, const SectionBasis& b, std::mt19937_64& rng) {
    if (b.functions.empty()) throw Error("random_section: L(D) is zero");
    const std::vector<cplx>& poles = b.functions[0].poles;
    std::mt19937_64 probe(0x5eed);
    std::vector<CurvePoint> pts;
    while (pts.size() < 8) {
        const CurvePoint p = c.random_point(probe);
        if (std::all_of(poles.begin(), poles.end(), [&](cplx rho) { return std::abs(p.x - rho) > 1e-3 * c.scale(); }))
            pts.push_back(p);
    }
    std::normal_distribution<double> normal;
    CurveFunction h{Poly{}, Poly{}, poles};
    for (const auto& f : b.functions) {
        if (f.poles != poles) throw Error("random_section: basis functions with different denominators");
        double ms = 0.0;
        for (const auto& p : pts) ms += std::norm(f(p));
        const cplx w = cplx(normal(rng), normal(rng)) / std::sqrt(ms / static_cast<double>(pts.size()));
        h.p = poly_add(h.p, poly_scale(f.p, w));
        h.q = poly_add(h.q, poly_scale(f.q, w));
    }
    return h;
}

std::vector<CurvePoint> residual_zeros(const HyperellipticCurve& c, const CurveFunction& h, const Divisor& known,
                                       int expected) {
    std::vector<CurvePoint> cand;
    const double sc = c.scale();
    double p_max = 0.0, q_max = 0.0;
    for (cplx v : h.p) p_max = std::max(p_max, std::abs(v));
    for (cplx v : h.q) q_max = std::max(q_max, std::abs(v));
    const bool pure_x = q_max <= 1e-10 * p_max;
    // a function of x alone vanishes on both points of the fibre over a root of p, and twice at a branch point
    for (cplx x0 : pure_x ? poly_roots(h.p, 1e-9) : std::vector<cplx>{}) {
        if (std::abs(x0) > 1e6 * sc) continue;
        bool over_pole = false;
        for (cplx rho : h.poles)
            if (std::abs(x0 - rho) < 1e-6 * sc) over_pole = true;
        if (over_pole) continue;
        const int w = c.weierstrass_index(CurvePoint::affine(x0, 0.0), 1e-6);
        if (w >= 0) {
            cand.push_back(c.weierstrass(w));
            cand.push_back(c.weierstrass(w));
        } else {
            cand.push_back(c.point_over(x0, 1));
            cand.push_back(c.point_over(x0, -1));
        }
    }
    // N(h) r^2 = p^2 - q^2 f
    const Poly m = poly_add(poly_mul(h.p, h.p), poly_scale(poly_mul(poly_mul(h.q, h.q), c.f()), -1.0));
    for (cplx x0 : pure_x ? std::vector<cplx>{} : poly_roots(m, 1e-9)) {
        if (std::abs(x0) > 1e6 * sc) continue;
        bool over_pole = false;
        for (cplx rho : h.poles)
            if (std::abs(x0 - rho) < 1e-6 * sc) over_pole = true;
        if (over_pole) continue;
        const cplx pv = poly_eval(h.p, x0), qv = poly_eval(h.q, x0);
        const cplx fx = c.eval_f(x0);
        const double ref = std::abs(pv) + std::abs(qv) * std::sqrt(std::abs(fx));
        if (std::abs(qv) > 1e-8 * (ref + 1e-300)) {
            cplx y = -pv / qv;
            // project onto the curve on the sheet of y
            const cplx s = std::sqrt(fx);
            y = std::abs(y - s) <= std::abs(y + s) ? s : -s;
            cand.push_back(CurvePoint::affine(x0, y));
        } else {
            cand.push_back(c.point_over(x0, 1));
            cand.push_back(c.point_over(x0, -1));
        }
    }
    for (const auto& [pt, mult] : known.terms()) {
        if (!pt.is_affine()) continue;
        for (int k = 0; k < mult; ++k) {
            auto it = std::find_if(cand.begin(), cand.end(), [&](const CurvePoint& q) {
                return std::abs(q.x - pt.x) < 1e-6 * sc && std::abs(q.y - pt.y) < 1e-3 * sc;
            });
            if (it == cand.end()) throw ToleranceFailure("residual_zeros: a known zero was not found");
            cand.erase(it);
        }
    }
    if (static_cast<int>(cand.size()) != expected) {
        std::ostringstream os;
        os << "residual_zeros: found " << cand.size() << " zeros, expected " << expected;
        throw ToleranceFailure(os.str());
    }
    return cand;
}

std::vector<CurvePoint> effective_representative(const HyperellipticCurve& c, const Divisor& d) {
    if (d.degree() < 0) throw Error("effective_representative: negative degree");
    const SectionBasis b = riemann_roch_basis(c, d);
    if (b.dimension() != 1) {
        std::ostringstream os;
        os << "effective_representative: L(D) has dimension " << b.dimension() << ", expected 1";
        throw ToleranceFailure(os.str());
    }
    return residual_zeros(c, b.functions[0], d.negative_part(), d.degree());
}

std::vector<CurvePoint> reduce_to_effective(const HyperellipticCurve& c, const Divisor& d, const CurvePoint& anchor) {
    if (d.degree() != 3) throw Error("reduce_to_effective expects degree 3");
    std::vector<CurvePoint> out{anchor};
    for (const auto& p : effective_representative(c, d - Divisor::point(anchor))) out.push_back(p);
    return out;
}

// ---------------------------------------------------------------- 2-torsion and theta characteristics

std::string TwoTorsionDivisor::label() const {
    if (is_zero()) return "0";
    return "W" + std::to_string(i + 1) + "+W" + std::to_string(j + 1) + "-K";
}

std::vector<TwoTorsionDivisor> two_torsion_divisors(const HyperellipticCurve& c) {
    std::vector<TwoTorsionDivisor> out;
    out.push_back(TwoTorsionDivisor{});
    for (int i = 0; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j) {
            TwoTorsionDivisor t;
            t.i = i;
            t.j = j;
            t.divisor = Divisor::point(c.weierstrass(i)) + Divisor::point(c.weierstrass(j)) - Divisor::canonical();
            t.psi = CurveFunction{poly_from_roots({c.branch_points()[i], c.branch_points()[j]}), {}, {}};
            out.push_back(t);
        }
    return out;
}

std::vector<ThetaCharacteristicDivisor> theta_characteristics(const HyperellipticCurve& c) {
    std::vector<ThetaCharacteristicDivisor> out;
    const auto& e = c.branch_points();
    for (int i = 0; i < 6; ++i) {
        ThetaCharacteristicDivisor t;
        t.divisor = Divisor::point(c.weierstrass(i));
        t.odd = true;
        t.indices = {i};
        t.psi = CurveFunction{poly_from_roots({e[i]}), {}, {}};
        t.label = "W" + std::to_string(i + 1);
        out.push_back(t);
    }
    for (int j = 1; j < 6; ++j)
        for (int k = j + 1; k < 6; ++k) {
            ThetaCharacteristicDivisor t;
            t.divisor = Divisor::point(c.weierstrass(0)) + Divisor::point(c.weierstrass(j)) -
                        Divisor::point(c.weierstrass(k));
            t.odd = false;
            t.indices = {0, j, k};
            t.psi = CurveFunction{poly_from_roots({e[0], e[j]}), {}, {e[k]}};
            t.label = "W1+W" + std::to_string(j + 1) + "-W" + std::to_string(k + 1);
            out.push_back(t);
        }
    return out;
}

// ---------------------------------------------------------------- determinantal Weil functions

DeterminantWeilFunction::DeterminantWeilFunction(const HyperellipticCurve& c, const TwoTorsionDivisor& p)
    : curve_(c), p_(p) {
    const Divisor two_k = Divisor::canonical() * 2;
    reference_ = riemann_roch_basis(c, two_k);
    twisted_ = p.is_zero() ? reference_ : riemann_roch_basis(c, two_k + p.divisor);
    if (reference_.dimension() != 3 || twisted_.dimension() != 3)
        throw ToleranceFailure("determinant bases must be 3-dimensional");
}

void DeterminantWeilFunction::check_triple(const std::vector<CurvePoint>& z) const {
    if (z.size() != 3) throw Error("determinant Weil functions take a triple of points");
    for (const auto& p : z) {
        if (!p.is_affine()) throw Error("determinant Weil functions need affine points");
        if (!curve_.on_curve(p, 1e-8)) throw Error("point is not on the curve");
    }
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (points_coincide(z[i], z[j], 1e-8)) throw PoleProximity("triple meets the diagonal");
}

namespace {

Eigen::Matrix3cd section_matrix(const SectionBasis& b, const std::vector<CurvePoint>& z) {
    Eigen::Matrix3cd m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = b.functions[i](z[j]);
    return m;
}

double hadamard(const Eigen::Matrix3cd& m) {
    double h = 1.0;
    for (int j = 0; j < 3; ++j) h *= m.col(j).norm();
    return h;
}

}  // namespace

cplx DeterminantWeilFunction::det_twisted(const std::vector<CurvePoint>& z) const {
    check_triple(z);
    return section_matrix(twisted_, z).determinant();
}

cplx DeterminantWeilFunction::det_reference(const std::vector<CurvePoint>& z) const {
    check_triple(z);
    return section_matrix(reference_, z).determinant();
}

double DeterminantWeilFunction::hadamard_twisted(const std::vector<CurvePoint>& z) const {
    return hadamard(section_matrix(twisted_, z));
}

double DeterminantWeilFunction::hadamard_reference(const std::vector<CurvePoint>& z) const {
    return hadamard(section_matrix(reference_, z));
}

cplx DeterminantWeilFunction::operator()(const std::vector<CurvePoint>& z, int n) const {
    if (n < 2 || n % 2) throw Error("determinant Weil functions are defined for even N");
    check_triple(z);
    if (p_.is_zero()) return 1.0;
    const Eigen::Matrix3cd mr = section_matrix(reference_, z);
    const cplx ref = mr.determinant();
    if (!(std::abs(ref) > 1e-12 * hadamard(mr))) throw PoleProximity("reference determinant vanishes");
    const cplx ratio = section_matrix(twisted_, z).determinant() / ref;
    cplx v = ratio * ratio;
    for (const auto& p : z) v *= p_.psi(p);
    cplx out = 1.0;
    for (int k = 0; k < n / 2; ++k) out *= v;
    return out;
}

std::vector<CurvePoint> twisted_vanishing_triple(const DeterminantWeilFunction& f, std::mt19937_64& rng,
                                                 int max_attempts) {
    if (f.torsion().is_zero()) throw Error("twisted_vanishing_triple needs a nonzero 2-torsion class");
    const HyperellipticCurve& c = f.curve();
    const double sep = 1e-3 * c.scale();
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        const CurveFunction h = random_section(c, f.twisted_basis(), rng);
        std::vector<CurvePoint> zeros;
        try {
            zeros = residual_zeros(c, h, Divisor(), 4);
        } catch (const ToleranceFailure&) {
            continue;
        }
        std::vector<CurvePoint> z;
        for (const auto& p : zeros) {
            bool ok = true;
            for (cplx e : c.branch_points()) ok = ok && std::abs(p.x - e) > sep;
            for (const auto& q : z) ok = ok && !points_coincide(p, q, 1e-6);
            if (ok && z.size() < 3) z.push_back(p);
        }
        if (z.size() == 3) return z;
    }
    throw ToleranceFailure("twisted_vanishing_triple: no admissible triple was sampled");
}

cplx weil_function_determinant(const HyperellipticCurve& c, const TwoTorsionDivisor& p, int n,
                               const std::vector<CurvePoint>& z) {
    return DeterminantWeilFunction(c, p)(z, n);
}

// ---------------------------------------------------------------- the curve family

CurveWeilFamily::CurveWeilFamily(HyperellipticCurve c, std::vector<int> labels, CurvePoint anchor)
    : curve_(std::move(c)), labels_(std::move(labels)), anchor_(anchor), torsion_(two_torsion_divisors(curve_)) {
    if (labels_.size() != 16) throw Error("CurveWeilFamily needs 16 labels");
    std::vector<int> seen(16, 0);
    for (int l : labels_) {
        if (l < 0 || l >= 16 || seen[l]++) throw Error("CurveWeilFamily labels must be a permutation");
    }
    if (labels_[0] != 0) throw Error("the zero label must map to the zero divisor");
    for (const auto& t : torsion_) functions_.emplace_back(curve_, t);
}

const TwoTorsionDivisor& CurveWeilFamily::divisor_of(const LPoint& p) const {
    if (p.n() != 2 || p.g() != 2) throw AmbientMismatch("curve family lives on (Z/2)^4");
    return torsion_[labels_[p.index()]];
}

VectorXc CurveWeilFamily::pack(const std::vector<CurvePoint>& z) {
    VectorXc x(2 * z.size());
    for (std::size_t k = 0; k < z.size(); ++k) {
        if (!z[k].is_affine()) throw Error("packed triples must be affine");
        x(2 * k) = z[k].x;
        x(2 * k + 1) = z[k].y;
    }
    return x;
}

std::vector<CurvePoint> CurveWeilFamily::unpack(const VectorXc& x) {
    std::vector<CurvePoint> z;
    for (long k = 0; k + 1 < x.size(); k += 2) z.push_back(CurvePoint::affine(x(k), x(k + 1)));
    return z;
}

cplx CurveWeilFamily::evaluate(const LPoint& p, const VectorXc& x) const {
    return functions_[labels_[p.index()]](unpack(x), 2);
}

VectorXc CurveWeilFamily::translate(const VectorXc& x, const LPoint& p) const {
    const TwoTorsionDivisor& t = divisor_of(p);
    if (t.is_zero()) return x;
    // D_P is 2-torsion, so z - D_P ~ z + D_P
    return pack(reduce_to_effective(curve_, sum_of_points(unpack(x)) + t.divisor, anchor_));
}

VectorXc CurveWeilFamily::negate(const VectorXc& x) const {
    return pack(reduce_to_effective(curve_, Divisor::canonical() * 3 - sum_of_points(unpack(x)), anchor_));
}

VectorXc CurveWeilFamily::sample_point(std::mt19937_64& rng) const {
    std::vector<CurvePoint> z;
    while (z.size() < 3) {
        const CurvePoint p = curve_.random_point(rng);
        bool ok = std::abs(p.y) > 1e-3;
        for (const auto& q : z) ok = ok && std::abs(q.x - p.x) > 1e-3;
        if (ok) z.push_back(p);
    }
    return pack(z);
}

}  // namespace thomae
