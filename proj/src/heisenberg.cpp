#include "thomae/heisenberg.hpp"

#include <string>

namespace thomae {

LPoint::LPoint(int n, int g) : n_(n), g_(g), coords_(Eigen::VectorXi::Zero(2 * g)) {
    if (n < 2 || g < 1) throw Error("LPoint needs n >= 2 and g >= 1");
}

LPoint::LPoint(int n, int g, const Eigen::VectorXi& coords) : LPoint(n, g) {
    if (coords.size() != 2 * g) throw Error("LPoint needs 2g coordinates");
    for (int i = 0; i < 2 * g; ++i) coords_(i) = mod(coords(i), n);
}

LPoint LPoint::from_index(int n, int g, long index) {
    LPoint p(n, g);
    for (int i = 2 * g - 1; i >= 0; --i) {
        p.coords_(i) = static_cast<int>(index % n);
        index /= n;
    }
    return p;
}

LPoint LPoint::unit(int n, int g, int i) {
    LPoint p(n, g);
    p.coords_(i) = 1 % n;
    return p;
}

long LPoint::index() const {
    long idx = 0;
    for (int i = 0; i < 2 * g_; ++i) idx = idx * n_ + coords_(i);
    return idx;
}

void LPoint::check_same_ambient(const LPoint& o) const {
    if (n_ != o.n_ || g_ != o.g_) {
        throw AmbientMismatch("points of (Z/" + std::to_string(n_) + ")^" + std::to_string(2 * g_) +
                              " and (Z/" + std::to_string(o.n_) + ")^" + std::to_string(2 * o.g_));
    }
}

LPoint LPoint::operator+(const LPoint& o) const {
    check_same_ambient(o);
    return {n_, g_, coords_ + o.coords_};
}

LPoint LPoint::operator-(const LPoint& o) const {
    check_same_ambient(o);
    return {n_, g_, coords_ - o.coords_};
}

LPoint LPoint::operator-() const { return {n_, g_, -coords_}; }

LPoint LPoint::operator*(int m) const { return {n_, g_, coords_ * m}; }

bool LPoint::operator==(const LPoint& o) const {
    return n_ == o.n_ && g_ == o.g_ && coords_ == o.coords_;
}

long group_order(int n, int g) {
    long order = 1;
    for (int i = 0; i < 2 * g; ++i) order *= n;
    return order;
}

std::vector<LPoint> all_points(int n, int g) {
    std::vector<LPoint> out;
    const long order = group_order(n, g);
    out.reserve(order);
    for (long i = 0; i < order; ++i) out.push_back(LPoint::from_index(n, g, i));
    return out;
}

RootOfUnity RootOfUnity::operator*(const RootOfUnity& o) const {
    if (n != o.n) throw AmbientMismatch("roots of unity of different orders");
    return {n, static_cast<long long>(exponent) + o.exponent};
}

BilinearPairing::BilinearPairing(int n, int g, Eigen::MatrixXi matrix)
    : n_(n), g_(g), m_(std::move(matrix)) {
    if (m_.rows() != 2 * g || m_.cols() != 2 * g) throw Error("pairing matrix must be 2g x 2g");
    for (int i = 0; i < m_.rows(); ++i)
        for (int j = 0; j < m_.cols(); ++j) m_(i, j) = mod(m_(i, j), n);
}

int BilinearPairing::exponent(const LPoint& p, const LPoint& q) const {
    p.check_same_ambient(q);
    if (p.n() != n_ || p.g() != g_) throw AmbientMismatch("pairing applied to foreign points");
    long long acc = 0;
    for (int i = 0; i < 2 * g_; ++i) {
        if (p[i] == 0) continue;
        for (int j = 0; j < 2 * g_; ++j) acc += static_cast<long long>(p[i]) * m_(i, j) * q[j];
    }
    return mod(acc, n_);
}

BilinearPairing BilinearPairing::skew() const {
    return {n_, g_, Eigen::MatrixXi(m_ - m_.transpose())};
}

bool BilinearPairing::operator==(const BilinearPairing& o) const {
    return n_ == o.n_ && g_ == o.g_ && m_ == o.m_;
}

BilinearPairing symplectic_pairing(int n, int g) {
    Eigen::MatrixXi m = Eigen::MatrixXi::Zero(2 * g, 2 * g);
    m.topRightCorner(g, g).setIdentity();
    m.bottomLeftCorner(g, g) = -Eigen::MatrixXi::Identity(g, g);
    return {n, g, m};
}

BilinearPairing standard_pairing(int n, int g) {
    Eigen::MatrixXi m = Eigen::MatrixXi::Zero(2 * g, 2 * g);
    m.topRightCorner(g, g).setIdentity();
    return {n, g, m};
}

BilinearPairing canonical_odd_pairing(int n, int g) {
    if (n % 2 == 0) throw Error("canonical d = e^{(N+1)/2} needs N odd");
    Eigen::MatrixXi e = symplectic_pairing(n, g).matrix();
    return {n, g, Eigen::MatrixXi(e * ((n + 1) / 2))};
}

RootOfUnity symplectic_e(const LPoint& p, const LPoint& q) {
    p.check_same_ambient(q);
    return symplectic_pairing(p.n(), p.g())(p, q);
}

RootOfUnity standard_d(const LPoint& p, const LPoint& q) {
    p.check_same_ambient(q);
    return standard_pairing(p.n(), p.g())(p, q);
}

RootOfUnity canonical_d_odd(const LPoint& p, const LPoint& q) {
    p.check_same_ambient(q);
    return canonical_odd_pairing(p.n(), p.g())(p, q);
}

CentralScalar CentralScalar::operator*(const CentralScalar& o) const {
    if (exact_ && o.exact_) return CentralScalar(*exact_ * *o.exact_);
    return CentralScalar(value_ * o.value_);
}

CentralScalar CentralScalar::inverse() const {
    if (exact_) return CentralScalar(exact_->inverse());
    return CentralScalar(1.0 / value_);
}

ThetaGroup::ThetaGroup(BilinearPairing d) : d_(std::move(d)) {}

void ThetaGroup::check(const LPoint& p) const {
    if (p.n() != n() || p.g() != g()) throw AmbientMismatch("element outside this theta group");
}

ThetaGroupElement ThetaGroup::identity() const {
    return {CentralScalar(RootOfUnity(n(), 0)), LPoint(n(), g())};
}

ThetaGroupElement ThetaGroup::element(const LPoint& p, long long exponent) const {
    check(p);
    return {CentralScalar(RootOfUnity(n(), exponent)), p};
}

ThetaGroupElement group_mul(const ThetaGroupElement& x, const ThetaGroupElement& y,
                            const BilinearPairing& d) {
    x.point.check_same_ambient(y.point);
    return {x.scalar * y.scalar * CentralScalar(d(x.point, y.point)), x.point + y.point};
}

ThetaGroupElement ThetaGroup::mul(const ThetaGroupElement& x, const ThetaGroupElement& y) const {
    check(x.point);
    check(y.point);
    return group_mul(x, y, d_);
}

ThetaGroupElement ThetaGroup::inverse(const ThetaGroupElement& x) const {
    check(x.point);
    // (l, P)(m, -P) = (l m d(P, -P), 0), so m = l^{-1} d(P, P).
    return {x.scalar.inverse() * CentralScalar(d_(x.point, x.point)), -x.point};
}

ThetaGroupElement ThetaGroup::commutator(const ThetaGroupElement& x,
                                         const ThetaGroupElement& y) const {
    return mul(mul(x, y), mul(inverse(x), inverse(y)));
}

Character::Character(int n, int g, Eigen::VectorXi coords) : n_(n), g_(g), coords_(std::move(coords)) {
    if (coords_.size() != 2 * g) throw Error("character needs 2g coordinates");
    for (int i = 0; i < coords_.size(); ++i) coords_(i) = mod(coords_(i), n);
}

Character Character::trivial(int n, int g) { return {n, g, Eigen::VectorXi::Zero(2 * g)}; }

RootOfUnity Character::operator()(const LPoint& r) const {
    if (r.n() != n_ || r.g() != g_) throw AmbientMismatch("character applied to a foreign point");
    return {n_, coords_.dot(r.coords())};
}

Character Character::operator*(const Character& o) const {
    if (o.n_ != n_ || o.g_ != g_) throw AmbientMismatch("characters of different groups");
    return {n_, g_, coords_ + o.coords_};
}

ThetaGroupElement quasi_trivial_automorphism(const Character& chi, const ThetaGroupElement& x) {
    return {x.scalar * CentralScalar(chi(x.point)), x.point};
}

ThetaGroupElement involution_iota(const ThetaGroupElement& x) { return {x.scalar, -x.point}; }

FunctionOnL FunctionOnL::delta(const LPoint& r0) {
    FunctionOnL h(r0.n(), r0.g());
    h(r0) = 1.0;
    return h;
}

FunctionOnL heisenberg_action(const ThetaGroupElement& x, const FunctionOnL& h,
                              const BilinearPairing& d) {
    if (h.n != x.point.n() || h.g != x.point.g()) throw AmbientMismatch("function on a foreign L");
    FunctionOnL out(h.n, h.g);
    const cplx lambda = x.scalar.value();
    for (const LPoint& r : all_points(h.n, h.g)) {
        out(r) = lambda * h(r - x.point) * d(r, x.point).inverse().value();
    }
    return out;
}

long l1_index(int n, const Eigen::VectorXi& l) {
    long idx = 0;
    for (int i = 0; i < l.size(); ++i) idx = idx * n + mod(l(i), n);
    return idx;
}

namespace {

Eigen::VectorXi l1_from_index(int n, int g, long idx) {
    Eigen::VectorXi l(g);
    for (int i = g - 1; i >= 0; --i) {
        l(i) = static_cast<int>(idx % n);
        idx /= n;
    }
    return l;
}

long l1_size(int n, int g) {
    long s = 1;
    for (int i = 0; i < g; ++i) s *= n;
    return s;
}

MatrixXc translation_matrix(int n, int g, const Eigen::VectorXi& m) {
    const long dim = l1_size(n, g);
    MatrixXc t = MatrixXc::Zero(dim, dim);
    for (long j = 0; j < dim; ++j) {
        const Eigen::VectorXi l = l1_from_index(n, g, j);
        t(l1_index(n, l - m), j) = 1.0;
    }
    return t;
}

}  // namespace

MatrixXc standard_rep_character(int n, int g, const Eigen::VectorXi& c) {
    const long dim = l1_size(n, g);
    const Eigen::VectorXi cb = c.size() == 2 * g ? Eigen::VectorXi(c.tail(g)) : c;
    MatrixXc t = MatrixXc::Zero(dim, dim);
    for (long j = 0; j < dim; ++j) t(j, j) = root_of_unity(cb.dot(l1_from_index(n, g, j)), n);
    return t;
}

MatrixXc standard_rep_iota(int n, int g) {
    const long dim = l1_size(n, g);
    MatrixXc t = MatrixXc::Zero(dim, dim);
    for (long j = 0; j < dim; ++j) t(l1_index(n, -l1_from_index(n, g, j)), j) = 1.0;
    return t;
}

MatrixXc standard_rep_matrix(const ThetaGroup& group, const ThetaGroupElement& x) {
    const int n = group.n();
    const int g = group.g();
    for (int i = 0; i < 2 * g; ++i) {
        const LPoint r = LPoint::unit(n, g, i);
        // (1, r)^n = (d(r, r)^{n(n-1)/2}, 0) must map to the identity matrix.
        if (group.pairing()(r, r).pow(static_cast<long long>(n) * (n - 1) / 2).exponent != 0) {
            throw Error("standard representation needs d(r_i, r_i)^{n(n-1)/2} = 1");
        }
    }
    // Word (1, r_1)^{m_1} ... (1, r_2g)^{m_2g} = (s, P); rho(l, P) = l s^{-1} rho(r_1)^{m_1} ...
    ThetaGroupElement word = group.identity();
    const long dim = l1_size(n, g);
    MatrixXc rho = MatrixXc::Identity(dim, dim);
    for (int i = 0; i < 2 * g; ++i) {
        const int m = x.point[i];
        if (m == 0) continue;
        const LPoint r = LPoint::unit(n, g, i);
        MatrixXc gen;
        if (i < g) {
            gen = translation_matrix(n, g, r.a());
        } else {
            gen = standard_rep_character(n, g, r.b());
        }
        for (int k = 0; k < m; ++k) {
            word = group.mul(word, group.element(r));
            rho = rho * gen;
        }
    }
    return x.scalar.value() * word.scalar.inverse().value() * rho;
}

int standard_rep_commutant_dimension(const ThetaGroup& group) {
    const int n = group.n();
    const int g = group.g();
    const long dim = l1_size(n, g);
    std::vector<MatrixXc> gens;
    for (int i = 0; i < 2 * g; ++i) gens.push_back(standard_rep_matrix(group, group.element(LPoint::unit(n, g, i))));
    // vec(M T - T M) = (T^T kron I - I kron T) vec(M)
    const long unknowns = dim * dim;
    MatrixXc system(static_cast<long>(gens.size()) * unknowns, unknowns);
    const MatrixXc eye = MatrixXc::Identity(dim, dim);
    for (std::size_t k = 0; k < gens.size(); ++k) {
        const MatrixXc& t = gens[k];
        MatrixXc block = MatrixXc::Zero(unknowns, unknowns);
        for (long i = 0; i < dim; ++i)
            for (long j = 0; j < dim; ++j) {
                block.block(i * dim, j * dim, dim, dim) += t(j, i) * eye;
                block.block(i * dim, j * dim, dim, dim) -= (i == j ? 1.0 : 0.0) * t;
            }
        system.middleRows(static_cast<long>(k) * unknowns, unknowns) = block;
    }
    Eigen::JacobiSVD<MatrixXc> svd(system);
    const auto& s = svd.singularValues();
    const double tol = 1e-9 * std::max(1.0, s(0));
    int rank = 0;
    for (int i = 0; i < s.size(); ++i)
        if (s(i) > tol) ++rank;
    return static_cast<int>(unknowns) - rank;
}

}  // namespace thomae
