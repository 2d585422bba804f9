#pragma once

// Exterior-algebra models of H*(A), H*(A x A) and H*(C^n) over Q.

#include <cstdint>
#include <functional>
#include <map>
#include <string>

#include "thomae/common.hpp"

namespace thomae {

/// A sum of wedge monomials in `generators` odd generators (at most 64), keyed by bitmask.
class ExteriorClass {
public:
    explicit ExteriorClass(int generators = 0) : gens_(generators) {}

    static ExteriorClass scalar(int generators, const Rational& c);
    static ExteriorClass generator(int generators, int i);

    int generators() const { return gens_; }
    const std::map<std::uint64_t, Rational>& terms() const { return terms_; }
    Rational coefficient(std::uint64_t monomial) const;
    bool is_zero() const { return terms_.empty(); }

    ExteriorClass operator+(const ExteriorClass& o) const;
    ExteriorClass operator-(const ExteriorClass& o) const;
    ExteriorClass operator-() const;
    ExteriorClass operator*(const ExteriorClass& o) const;
    ExteriorClass operator*(const Rational& c) const;
    ExteriorClass pow(int k) const;
    bool operator==(const ExteriorClass& o) const { return gens_ == o.gens_ && terms_ == o.terms_; }

    /// Part of degree d.
    ExteriorClass homogeneous(int d) const;

    /// Substitutes each generator i by image[i] (degree-one classes) and multiplies out in order.
    ExteriorClass pullback(const std::vector<ExteriorClass>& image) const;

    std::string to_string(const std::function<std::string(int)>& name) const;

private:
    void add(std::uint64_t m, const Rational& c);
    int gens_;
    std::map<std::uint64_t, Rational> terms_;
};

/// Sign of m1 ^ m2 relative to the sorted monomial (0 if they share a generator).
int wedge_sign(std::uint64_t m1, std::uint64_t m2);

// A^k: generators u^{(f)}_i at index f*2g + i, i < 2g.

/// Sum_i u_i ^ u_{g+i} on factor f of A^k.
ExteriorClass theta_class(int g, int factor = 0, int factors = 1);
/// u_i -> u_i + v_i, from A to A x A.
ExteriorClass addition_pullback(int g, const ExteriorClass& c);
/// u_i -> u^{(f)}_i, from A to A^k.
ExteriorClass projection_pullback(int g, int factor, int factors, const ExteriorClass& c);
/// u_i -> n u_i.
ExteriorClass multiplication_pullback(const ExteriorClass& c, int n);

/// Coefficient against the volume form prod_f prod_i (u^{(f)}_i ^ u^{(f)}_{g+i}), for which the
/// integral of Theta^g/g! is 1 on each factor. Throws if the class has no top-degree part only.
Rational top_integral(int g, int factors, const ExteriorClass& c);

/// m = -(pr_1^* Theta)^{g-1} (3 pr_2^* Theta - sigma^* Theta)^{g+1} / (2 (g+1)! g!)
Rational chord_tangent_m(int g);

struct EmbeddingStats {
    int g;
    long h0_6theta;
    long h0_12theta;
    long projective_dimension;
    long hyperplanes;
    long quadrics;
};
EmbeddingStats embedding_stats(int g = 2);

/// H*(C^n): generators a^{(i)}_k (index i*2g + k) and b^{(i)}_k (index i*2g + g + k), factor i < n.
class CurvePowerModel {
public:
    CurvePowerModel(int g, int n);

    int g() const { return g_; }
    int n() const { return n_; }
    int generators() const { return 2 * g_ * n_; }

    ExteriorClass a(int i, int k) const;
    ExteriorClass b(int i, int k) const;
    ExteriorClass one() const;
    /// Point class on factor i, represented by a_1 ^ b_1.
    ExteriorClass pt(int i) const;
    /// pr_i^* K_C = (2g - 2) pt_i
    ExteriorClass canonical(int i) const;
    /// pt_i + pt_j - sum_k (a_k^i b_k^j - b_k^i a_k^j)
    ExteriorClass diagonal(int i, int j) const;
    /// alpha^* Theta with alpha^* u_k = sum_i a^{(i)}_k and alpha^* u_{g+k} = sum_i b^{(i)}_k.
    ExteriorClass abel_pullback_theta() const;

    /// Normal form in H*(C^n): on each factor a_k b_k becomes pt, other products of degree >= 2 vanish.
    ExteriorClass reduce(const ExteriorClass& c) const;
    /// Integral over C^n.
    Rational integrate(const ExteriorClass& c) const;

    std::string name(int generator) const;

private:
    int g_;
    int n_;
};

struct PullbackWitness {
    bool holds;
    /// Rendered difference lhs - rhs in normal form (empty when it holds).
    std::string difference;
    ExteriorClass lhs;
    ExteriorClass rhs;
};

/// (2g-2) alpha^* Theta against (g-1+n) sum pr_i^* K_C - (2g-2) sum_{i<j} Delta_ij, coefficientwise.
PullbackWitness verify_pullback_theta(int g, int n);

/// Self-intersection of the diagonal of C x C in the model.
Rational diagonal_self_intersection(int g);

}  // namespace thomae
