#pragma once

// Normalization of Weil families: gamma cocycle, Weil pairing, Igusa induction,
// symmetric refinement, parity and Arf bookkeeping, moduli points.

#include <memory>

#include "thomae/theta.hpp"
#include "thomae/weil_family.hpp"

namespace thomae {

/// gamma(P, Q) = d(P, Q) f_{P+Q}(x0) / (f_P(x0) f_Q(x0 - P))
cplx gamma(const WeilFamily& family, const LPoint& p, const LPoint& q, const BilinearPairing& d,
           const VectorXc& x0);

/// Largest relative spread of gamma(P, Q) over the given base points.
double gamma_spread(const WeilFamily& family, const LPoint& p, const LPoint& q, const BilinearPairing& d,
                    const std::vector<VectorXc>& points);

struct SnappedRoot {
    RootOfUnity root;
    double distance;
};

/// Nearest n-th root of unity to w.
SnappedRoot snap_root(cplx w, int n);

/// e_N(P, Q) = f_P(x) f_Q(x - P) / (f_Q(x) f_P(x - Q)); throws ToleranceFailure when the
/// value is further than `max_snap` from mu_N.
SnappedRoot weil_pairing(const WeilFamily& family, const LPoint& p, const LPoint& q, const VectorXc& x,
                         double max_snap = 1e-6);

/// Exponent matrix of the Weil pairing on all pairs, in canonical order.
Eigen::MatrixXi weil_pairing_table(const WeilFamily& family, const VectorXc& x, double max_snap = 1e-6,
                                   double* worst_snap = nullptr);

/// True when no nonzero P pairs trivially with every Q (table indexed canonically).
bool pairing_nondegenerate(const Eigen::MatrixXi& table, int n);
/// Rank over Z/p of an integer matrix, p prime.
int rank_mod_prime(Eigen::MatrixXi m, int p);

/// alpha_P^N = epsilon(P) prod_{m=1}^{N-1} f_{mP}(x0) / (f_P(x0)^N prod f_{mP}(x0 - P)),
/// which fixes the normalized N-th power tf_P^N = alpha_P^N f_P^N.
struct NormalizedPower {
    cplx alpha_power;
    /// d(P, P)^{N(N-1)/2}: always 1 for N odd, a sign for N even.
    int epsilon;
};
NormalizedPower normalized_power(const WeilFamily& family, const LPoint& p, const BilinearPairing& d,
                                 const VectorXc& x0);

struct NormalizationResult {
    std::shared_ptr<const WeilFamily> family;
    BilinearPairing d;
    VectorXc x0;
    /// alpha_P, canonical order.
    VectorXc alpha;
    /// P whose alpha is known only up to sign.
    std::vector<bool> ambiguous;
    /// Seeds xi_i, as exponents mod N, used for alpha(r_i).
    Eigen::VectorXi seeds;

    cplx evaluate(const LPoint& p, const VectorXc& x) const;
    /// Exponent of alpha_P mod 2N when alpha_P is a 2N-th root of unity, -1 otherwise.
    int alpha_exponent(const LPoint& p, double tol = 1e-6) const;
};

/// The family x -> alpha_P f_P(x).
class NormalizedFamily : public WeilFamily {
public:
    explicit NormalizedFamily(NormalizationResult r) : r_(std::move(r)) {}
    int N() const override { return r_.family->N(); }
    int g() const override { return r_.family->g(); }
    cplx evaluate(const LPoint& p, const VectorXc& x) const override { return r_.evaluate(p, x); }
    VectorXc translate(const VectorXc& x, const LPoint& p) const override { return r_.family->translate(x, p); }
    bool has_negation() const override { return r_.family->has_negation(); }
    VectorXc negate(const VectorXc& x) const override { return r_.family->negate(x); }
    VectorXc sample_point(std::mt19937_64& rng) const override { return r_.family->sample_point(rng); }
    const NormalizationResult& result() const { return r_; }

private:
    NormalizationResult r_;
};

/// Igusa's induction: alpha(r_i) = zeta^{seed_i} (principal N-th root of alpha_{r_i}^N), then
/// alpha((m+1) r_i) = alpha(m r_i) alpha(r_i) / gamma(m r_i, r_i), then mixed sums
/// P = P' + m_k r_k (k the last nonzero coordinate) by alpha(P) = alpha(P') alpha(m_k r_k) / gamma(P', m_k r_k).
NormalizationResult igusa_alpha(std::shared_ptr<const WeilFamily> family, const BilinearPairing& d,
                                const Eigen::VectorXi& seeds, const VectorXc& x0);

/// As above, drawing base points from `rng` until every evaluation avoids the poles.
NormalizationResult igusa_alpha(std::shared_ptr<const WeilFamily> family, const BilinearPairing& d,
                                const Eigen::VectorXi& seeds, std::mt19937_64& rng, int attempts = 20);

/// Twists by the character chi with chi(r_i)^2 = tf_{-r_i}(x0) / tf_{r_i}(-x0), so that
/// tf_{-P} = tf_P o [-1]. Unique for N odd; for N even chi(r_i) is fixed up to sign and
/// every P with an odd coordinate is flagged.
NormalizationResult symmetric_refine(const NormalizationResult& r);

/// max over samples of |tf_P(x) tf_Q(x - P) - d(P, Q) tf_{P+Q}(x)| / scale.
double normal_set_residual(const NormalizationResult& r, int samples, std::mt19937_64& rng);

/// 4 a.b mod 2 for a half-integer characteristic (1 means odd).
int parity(const Characteristic& chi);

/// A function A[2] -> Z/2, values in canonical order of (Z/2)^{2g}.
struct QuadraticFormZ2 {
    int g;
    std::vector<int> values;

    int operator()(const LPoint& u) const { return values[u.index()]; }
    /// L(u + v) + L(u) + L(v) = eta(u, v) for every pair, eta the mod-2 symplectic form.
    bool is_refinement() const;
};

/// 0 if sum (-1)^{L} = +2^g, 1 if it is -2^g.
int arf_invariant(const QuadraticFormZ2& q);

/// f_L(u) = e_*(L + u) + e_*(L) with e_* the parity of a half-integer characteristic.
QuadraticFormZ2 form_from_characteristic(const Characteristic& l);

/// (tf_P(delta)) in canonical order, divided by the P = 0 entry.
VectorXc moduli_point(const NormalizationResult& r, const VectorXc& delta);

}  // namespace thomae
