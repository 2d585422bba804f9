#pragma once

#include <memory>
#include <random>

#include "thomae/heisenberg.hpp"

namespace thomae {

/// An indexed family {f_P} of functions on a torsor X, with P running over (Z/N)^{2g}.
/// Points of X are stored as complex vectors; their meaning is backend specific.
/// Translation follows t_P^* f (x) = f(x - P) everywhere.
class WeilFamily {
public:
    virtual ~WeilFamily() = default;

    virtual int N() const = 0;
    virtual int g() const = 0;

    /// f_P(x); throws PoleProximity near a pole or an indeterminacy.
    virtual cplx evaluate(const LPoint& p, const VectorXc& x) const = 0;
    /// A representative of x - P.
    virtual VectorXc translate(const VectorXc& x, const LPoint& p) const = 0;

    virtual bool has_negation() const { return false; }
    /// A representative of -x (for the inversion [-1] of the torsor).
    virtual VectorXc negate(const VectorXc& x) const;

    /// A point in general position, drawn from `rng`.
    virtual VectorXc sample_point(std::mt19937_64& rng) const = 0;

    std::vector<LPoint> torsion() const { return all_points(N(), g()); }
};

/// f_P scaled by fixed nonzero constants c_P (c_0 is forced to 1).
class ScaledFamily : public WeilFamily {
public:
    ScaledFamily(std::shared_ptr<const WeilFamily> base, VectorXc scale);

    int N() const override { return base_->N(); }
    int g() const override { return base_->g(); }
    cplx evaluate(const LPoint& p, const VectorXc& x) const override;
    VectorXc translate(const VectorXc& x, const LPoint& p) const override { return base_->translate(x, p); }
    bool has_negation() const override { return base_->has_negation(); }
    VectorXc negate(const VectorXc& x) const override { return base_->negate(x); }
    VectorXc sample_point(std::mt19937_64& rng) const override { return base_->sample_point(rng); }

    const VectorXc& scale() const { return scale_; }
    std::shared_ptr<const WeilFamily> base() const { return base_; }

private:
    std::shared_ptr<const WeilFamily> base_;
    VectorXc scale_;
};

/// c_P drawn uniformly from the annulus 1/2 <= |c| <= 2, with c_0 = 1.
VectorXc random_scalars(int n, int g, std::mt19937_64& rng);

}  // namespace thomae
