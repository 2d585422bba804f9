#include "thomae/weil.hpp"

#include <map>

namespace thomae {

cplx gamma(const WeilFamily& family, const LPoint& p, const LPoint& q, const BilinearPairing& d,
           const VectorXc& x0) {
    const cplx num = d(p, q).value() * family.evaluate(p + q, x0);
    const cplx den = family.evaluate(p, x0) * family.evaluate(q, family.translate(x0, p));
    if (den == cplx(0.0)) throw PoleProximity("gamma: vanishing denominator");
    return num / den;
}

double gamma_spread(const WeilFamily& family, const LPoint& p, const LPoint& q, const BilinearPairing& d,
                    const std::vector<VectorXc>& points) {
    if (points.empty()) return 0.0;
    const cplx ref = gamma(family, p, q, d, points.front());
    double worst = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i)
        worst = std::max(worst, std::abs(gamma(family, p, q, d, points[i]) - ref) / std::abs(ref));
    return worst;
}

SnappedRoot snap_root(cplx w, int n) {
    const long long k = std::llround(std::arg(w) * n / (2.0 * kPi));
    RootOfUnity r(n, k);
    return {r, std::abs(w - r.value())};
}

SnappedRoot weil_pairing(const WeilFamily& family, const LPoint& p, const LPoint& q, const VectorXc& x,
                         double max_snap) {
    const cplx num = family.evaluate(p, x) * family.evaluate(q, family.translate(x, p));
    const cplx den = family.evaluate(q, x) * family.evaluate(p, family.translate(x, q));
    const SnappedRoot s = snap_root(num / den, family.N());
    if (!(s.distance < max_snap)) {
        throw ToleranceFailure("Weil pairing value is " + std::to_string(s.distance) + " away from mu_N");
    }
    return s;
}

Eigen::MatrixXi weil_pairing_table(const WeilFamily& family, const VectorXc& x, double max_snap,
                                   double* worst_snap) {
    const auto pts = family.torsion();
    const int m = static_cast<int>(pts.size());
    // f_Q(x) and f_Q(x - P) for every pair, evaluated once
    VectorXc at_x(m);
    for (int i = 0; i < m; ++i) at_x(i) = family.evaluate(pts[i], x);
    MatrixXc shifted(m, m);
    for (int i = 0; i < m; ++i) {
        const VectorXc xp = family.translate(x, pts[i]);
        for (int j = 0; j < m; ++j) shifted(i, j) = family.evaluate(pts[j], xp);
    }
    Eigen::MatrixXi table(m, m);
    double worst = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const cplx w = at_x(i) * shifted(i, j) / (at_x(j) * shifted(j, i));
            const SnappedRoot s = snap_root(w, family.N());
            worst = std::max(worst, s.distance);
            table(i, j) = s.root.exponent;
        }
    if (worst_snap) *worst_snap = worst;
    if (!(worst < max_snap)) throw ToleranceFailure("Weil pairing table: snap distance " + std::to_string(worst));
    return table;
}

bool pairing_nondegenerate(const Eigen::MatrixXi& table, int n) {
    for (int i = 1; i < table.rows(); ++i) {
        bool trivial = true;
        for (int j = 0; j < table.cols() && trivial; ++j) trivial = mod(table(i, j), n) == 0;
        if (trivial) return false;
    }
    return true;
}

int rank_mod_prime(Eigen::MatrixXi m, int p) {
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) m(i, j) = mod(m(i, j), p);
    auto inv = [p](int a) {
        for (int x = 1; x < p; ++x)
            if ((a * x) % p == 1) return x;
        throw Error("rank_mod_prime: modulus is not prime");
    };
    int rank = 0;
    for (int c = 0; c < m.cols() && rank < m.rows(); ++c) {
        int piv = -1;
        for (int r = rank; r < m.rows(); ++r)
            if (m(r, c) != 0) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        m.row(piv).swap(m.row(rank));
        const int iv = inv(m(rank, c));
        for (int j = 0; j < m.cols(); ++j) m(rank, j) = (m(rank, j) * iv) % p;
        for (int r = 0; r < m.rows(); ++r) {
            if (r == rank || m(r, c) == 0) continue;
            const int f = m(r, c);
            for (int j = 0; j < m.cols(); ++j) m(r, j) = mod(m(r, j) - f * m(rank, j), p);
        }
        ++rank;
    }
    return rank;
}

NormalizedPower normalized_power(const WeilFamily& family, const LPoint& p, const BilinearPairing& d,
                                 const VectorXc& x0) {
    const int n = family.N();
    const long long e = static_cast<long long>(d.exponent(p, p)) * n * (n - 1) / 2;
    const int eps = mod(e, n) == 0 ? 1 : -1;
    if (p.is_zero()) return {1.0, 1};
    const VectorXc xp = family.translate(x0, p);
    cplx num = 1.0, den = ipow(family.evaluate(p, x0), n);
    for (int m = 1; m < n; ++m) {
        num *= family.evaluate(p * m, x0);
        den *= family.evaluate(p * m, xp);
    }
    return {static_cast<double>(eps) * num / den, eps};
}

cplx NormalizationResult::evaluate(const LPoint& p, const VectorXc& x) const {
    if (p.is_zero()) return 1.0;
    return alpha(p.index()) * family->evaluate(p, x);
}

int NormalizationResult::alpha_exponent(const LPoint& p, double tol) const {
    const SnappedRoot s = snap_root(alpha(p.index()), 2 * family->N());
    return s.distance < tol ? s.root.exponent : -1;
}

namespace {

// f_Q(x0) and f_Q(x0 - P), each evaluated at most once.
class EvalCache {
public:
    EvalCache(const WeilFamily& f, const VectorXc& x0) : f_(f), x0_(x0) {}

    cplx at(const LPoint& q) { return shifted(LPoint(q.n(), q.g()), q); }

    cplx shifted(const LPoint& p, const LPoint& q) {
        const auto key = std::make_pair(p.index(), q.index());
        auto it = values_.find(key);
        if (it != values_.end()) return it->second;
        auto xt = points_.find(p.index());
        if (xt == points_.end()) xt = points_.emplace(p.index(), p.is_zero() ? x0_ : f_.translate(x0_, p)).first;
        const cplx v = f_.evaluate(q, xt->second);
        values_.emplace(key, v);
        return v;
    }

    cplx gamma(const LPoint& p, const LPoint& q, const BilinearPairing& d) {
        return d(p, q).value() * at(p + q) / (at(p) * shifted(p, q));
    }

private:
    const WeilFamily& f_;
    VectorXc x0_;
    std::map<long, VectorXc> points_;
    std::map<std::pair<long, long>, cplx> values_;
};

}  // namespace

NormalizationResult igusa_alpha(std::shared_ptr<const WeilFamily> family, const BilinearPairing& d,
                                const Eigen::VectorXi& seeds, const VectorXc& x0) {
    const int n = family->N(), g = family->g();
    if (d.n() != n || d.g() != g) throw AmbientMismatch("pairing and family have different levels");
    if (seeds.size() != 2 * g) throw Error("igusa_alpha needs one seed per basis point");
    EvalCache cache(*family, x0);
    VectorXc alpha = VectorXc::Zero(group_order(n, g));
    std::vector<bool> known(alpha.size(), false);
    alpha(0) = 1.0;
    known[0] = true;

    for (int i = 0; i < 2 * g; ++i) {
        const LPoint r = LPoint::unit(n, g, i);
        // alpha(r)^N = prod_m gamma(r, m r)
        cplx power = 1.0;
        for (int m = 1; m < n; ++m) power *= cache.gamma(r, r * m, d);
        const cplx a = root_of_unity(seeds(i), n) * std::pow(power, 1.0 / n);
        alpha(r.index()) = a;
        known[r.index()] = true;
        for (int m = 1; m + 1 < n; ++m) {
            const LPoint mr = r * m;
            alpha((mr + r).index()) = alpha(mr.index()) * a / cache.gamma(mr, r, d);
            known[(mr + r).index()] = true;
        }
    }
    for (const LPoint& p : family->torsion()) {
        if (known[p.index()]) continue;
        int k = 2 * g - 1;
        while (p[k] == 0) --k;
        LPoint tail(n, g);
        Eigen::VectorXi c = Eigen::VectorXi::Zero(2 * g);
        c(k) = p[k];
        tail = LPoint(n, g, c);
        const LPoint head = p - tail;
        alpha(p.index()) = alpha(head.index()) * alpha(tail.index()) / cache.gamma(head, tail, d);
        known[p.index()] = true;
    }
    // the seeds pin every alpha; sign ambiguities only enter through symmetric_refine
    return {family, d, x0, alpha, std::vector<bool>(alpha.size(), false), seeds};
}

NormalizationResult igusa_alpha(std::shared_ptr<const WeilFamily> family, const BilinearPairing& d,
                                const Eigen::VectorXi& seeds, std::mt19937_64& rng, int attempts) {
    for (int t = 0; t < attempts; ++t) {
        try {
            return igusa_alpha(family, d, seeds, family->sample_point(rng));
        } catch (const PoleProximity&) {
        }
    }
    throw PoleProximity("igusa_alpha: no base point in general position found");
}

NormalizationResult symmetric_refine(const NormalizationResult& r) {
    const WeilFamily& f = *r.family;
    if (!f.has_negation()) throw Error("symmetric_refine: the family has no inversion");
    const int n = f.N(), g = f.g();
    const VectorXc minus = f.negate(r.x0);
    Eigen::VectorXi c(2 * g);
    for (int i = 0; i < 2 * g; ++i) {
        const LPoint ri = LPoint::unit(n, g, i);
        const cplx s = r.evaluate(-ri, r.x0) / r.evaluate(ri, minus);
        const SnappedRoot k = snap_root(s, n);
        if (k.distance > 1e-6) throw ToleranceFailure("symmetric_refine: ratio is not a root of unity");
        if (n % 2 == 1) {
            c(i) = mod(static_cast<long long>(k.root.exponent) * (n + 1) / 2, n);
        } else {
            if (k.root.exponent % 2 != 0) throw ToleranceFailure("symmetric_refine: ratio is not a square in mu_N");
            c(i) = k.root.exponent / 2;
        }
    }
    const Character chi(n, g, c);
    NormalizationResult out = r;
    for (const LPoint& p : f.torsion()) {
        out.alpha(p.index()) *= chi(p).value();
        bool odd = false;
        for (int i = 0; i < 2 * g; ++i) odd |= p[i] % 2 == 1;
        out.ambiguous[p.index()] = n % 2 == 0 && odd;
    }
    return out;
}

double normal_set_residual(const NormalizationResult& r, int samples, std::mt19937_64& rng) {
    const WeilFamily& f = *r.family;
    const auto pts = f.torsion();
    std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        VectorXc x;
        for (int t = 0;; ++t) {
            x = f.sample_point(rng);
            try {
                r.evaluate(pts.back(), x);
                break;
            } catch (const PoleProximity&) {
                if (t > 20) throw;
            }
        }
        for (const LPoint& p : pts) {
            const LPoint& q = pts[pick(rng)];
            try {
                const cplx lhs = r.evaluate(p, x) * r.evaluate(q, f.translate(x, p));
                const cplx rhs = r.d(p, q).value() * r.evaluate(p + q, x);
                const double scale = std::max(std::abs(lhs), std::abs(rhs));
                if (scale > 0) worst = std::max(worst, std::abs(lhs - rhs) / scale);
            } catch (const PoleProximity&) {
            }
        }
    }
    return worst;
}

int parity(const Characteristic& chi) {
    if (chi.n != 2) throw Error("parity needs a half-integer characteristic");
    return mod(chi.a.dot(chi.b), 2);
}

bool QuadraticFormZ2::is_refinement() const {
    const auto pts = all_points(2, g);
    if (values.size() != pts.size()) return false;
    for (const LPoint& u : pts)
        for (const LPoint& v : pts)
            if (mod((*this)(u + v) + (*this)(u) + (*this)(v), 2) != symplectic_e(u, v).exponent) return false;
    return true;
}

int arf_invariant(const QuadraticFormZ2& q) {
    if (!q.is_refinement()) throw Error("arf_invariant: not a quadratic refinement of the Weil pairing");
    long s = 0;
    for (int v : q.values) s += (v % 2 == 0) ? 1 : -1;
    const long full = 1L << q.g;
    if (s == full) return 0;
    if (s == -full) return 1;
    throw Error("arf_invariant: signed sum is not +-2^g");
}

QuadraticFormZ2 form_from_characteristic(const Characteristic& l) {
    QuadraticFormZ2 q{l.g(), {}};
    const int base = parity(l);
    for (const LPoint& u : all_points(2, l.g())) {
        const Characteristic c(2, l.a + u.a(), l.b + u.b());
        q.values.push_back(mod(parity(c) + base, 2));
    }
    return q;
}

VectorXc moduli_point(const NormalizationResult& r, const VectorXc& delta) {
    const auto pts = r.family->torsion();
    VectorXc v(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) v(i) = r.evaluate(pts[i], delta);
    return v / v(0);
}

}  // namespace thomae
