#include "thomae/residue.hpp"

#include <limits>
#include <sstream>

namespace thomae {

namespace {

// Distinct affine points. A branch point is allowed only where E itself is supported: it is then a base
// point of |2K - E| and cannot be avoided. Returns the distance from the remaining points to the branch
// points and to each other, relative to the curve scale, or -1 when a is not admissible.
double support_quality(const HyperellipticCurve& c, const Divisor& e, const std::vector<CurvePoint>& a) {
    double q = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i].is_affine()) return -1.0;
        const int w = c.weierstrass_index(a[i], 1e-9);
        if (w >= 0 && e.multiplicity(c.weierstrass(w)) == 0) return -1.0;
        if (w < 0)
            for (cplx z : c.branch_points()) q = std::min(q, std::abs(a[i].x - z));
        for (std::size_t j = 0; j < i; ++j) q = std::min(q, std::abs(a[i].x - a[j].x) + std::abs(a[i].y - a[j].y));
    }
    q /= c.scale();
    return q > 1e-6 ? q : -1.0;
}

// Coefficients of t^lo .. t^{lo + n - 1} of (psi / y) dx / dt in the chart parameter t at p.
std::vector<cplx> density(const HyperellipticCurve& c, const CurveFunction& psi_over_y, const CurvePoint& p, int lo,
                          int n) {
    const int first = -4, last = lo + n;
    const auto w = laurent_coefficients(c, psi_over_y, p, first, last);
    const auto x = laurent_coefficients(c, CurveFunction{Poly{0.0, 1.0}, Poly{}, {}}, p, 0, last - first + 2);
    std::vector<cplx> out(n, 0.0);
    for (int k = 0; k < n; ++k)
        for (int i = first; i < last; ++i) {
            // dx/dt has t^j coefficient (j + 1) x_{j + 1}
            const int j = lo + k - i;
            if (j < 0 || j + 1 >= static_cast<int>(x.size())) continue;
            out[k] += w[i - first] * static_cast<double>(j + 1) * x[j + 1];
        }
    return out;
}

Eigen::MatrixXcd unit_columns(Eigen::MatrixXcd m) {
    for (int j = 0; j < m.cols(); ++j) m.col(j).normalize();
    return m;
}

}  // namespace

ResiduePairingSpace residue_pairing_space(const HyperellipticCurve& c, const ThetaCharacteristicDivisor& e,
                                          std::mt19937_64& rng, int max_attempts) {
    const Divisor dual = Divisor::canonical() * 2 - e.divisor;
    const SectionBasis members = riemann_roch_basis(c, dual);

    // among the first few admissible samples keep the one farthest from the branch points
    ResiduePairingSpace out;
    out.theta = e;
    double best = -1.0;
    int admissible = 0;
    for (int attempt = 1; attempt <= max_attempts && admissible < 8; ++attempt) {
        const CurveFunction h = random_section(c, members, rng);
        std::vector<CurvePoint> a;
        try {
            a = residual_zeros(c, h, dual.negative_part(), 3);
        } catch (const ToleranceFailure&) {
            continue;
        }
        const double q = support_quality(c, e.divisor, a);
        if (q < 0) continue;
        ++admissible;
        if (q > best) {
            best = q;
            out.support = a;
            out.attempts = attempt;
        }
    }
    if (out.support.empty()) throw ToleranceFailure("residue_pairing_space: no admissible divisor a was sampled");

    const Divisor a = sum_of_points(out.support);
    const SectionBasis sections = riemann_roch_basis(c, e.divisor + a);
    if (sections.dimension() != 3) throw ToleranceFailure("residue_pairing_space: H^0(E(a)) is not 3-dimensional");

    // psi / y = psi y / f
    CurveFunction psi_over_y{Poly{}, e.psi.p, e.psi.poles};
    for (cplx z : c.branch_points()) psi_over_y.poles.push_back(z);

    // near P, E is generated by t^{-m} with m = mult_E(P); coordinates are the jets of t^m h
    out.gram = Eigen::MatrixXcd::Zero(6, 6);
    Eigen::MatrixXcd f0(6, 3);
    double min_s0 = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 3; ++k) {
        const CurvePoint& p = out.support[k];
        const int m = e.divisor.multiplicity(p);
        const auto s = density(c, psi_over_y, p, 2 * m, 2);
        out.gram(2 * k, 2 * k) = s[1];
        out.gram(2 * k, 2 * k + 1) = s[0];
        out.gram(2 * k + 1, 2 * k) = s[0];
        min_s0 = std::min(min_s0, std::abs(s[0]));
        for (int j = 0; j < 3; ++j) {
            const auto jet = laurent_coefficients(c, sections.functions[j], p, -m - 1, -m + 1);
            f0(2 * k, j) = jet[0];
            f0(2 * k + 1, j) = jet[1];
        }
    }
    out.v0 = unit_columns(f0);
    out.v1 = Eigen::MatrixXcd::Zero(6, 3);
    for (int k = 0; k < 3; ++k) out.v1(2 * k + 1, k) = 1.0;

    const double g = out.gram.cwiseAbs().maxCoeff();
    out.symmetry_residual = (out.gram - out.gram.transpose()).cwiseAbs().maxCoeff() / g;
    out.v0_defect = (out.v0.transpose() * out.gram * out.v0).cwiseAbs().maxCoeff() / g;
    out.v1_defect = (out.v1.transpose() * out.gram * out.v1).cwiseAbs().maxCoeff() / g;
    out.nondegeneracy = min_s0 / g;
    return out;
}

XiCorank xi_corank(const ResiduePairingSpace& s, double rel_tol) {
    Eigen::MatrixXcd both(6, 6);
    both << s.v0, s.v1;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(both);
    XiCorank out;
    out.singular_values = svd.singularValues();
    const double cut = rel_tol * out.singular_values(0);
    double smallest_kept = std::numeric_limits<double>::infinity(), largest_dropped = 0.0;
    for (int i = 0; i < 6; ++i) {
        const double v = out.singular_values(i);
        if (v < cut) {
            ++out.corank;
            largest_dropped = std::max(largest_dropped, v);
        } else {
            smallest_kept = std::min(smallest_kept, v);
        }
    }
    out.gap = out.corank == 0 ? std::numeric_limits<double>::infinity() : smallest_kept / largest_dropped;
    if (out.corank > 0 && out.gap < 1e3) {
        std::ostringstream os;
        os << "xi_corank: no clear gap between zero and nonzero singular values (ratio " << out.gap << ")";
        throw ToleranceFailure(os.str());
    }
    return out;
}

}  // namespace thomae
