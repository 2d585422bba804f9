#include "thomae/weil_family.hpp"

namespace thomae {

VectorXc WeilFamily::negate(const VectorXc&) const {
    throw Error("this Weil family does not support the inversion x -> -x");
}

ScaledFamily::ScaledFamily(std::shared_ptr<const WeilFamily> base, VectorXc scale)
    : base_(std::move(base)), scale_(std::move(scale)) {
    if (scale_.size() != group_order(base_->N(), base_->g())) throw Error("one scalar per torsion point");
    scale_(0) = 1.0;
}

cplx ScaledFamily::evaluate(const LPoint& p, const VectorXc& x) const {
    return scale_(p.index()) * base_->evaluate(p, x);
}

VectorXc random_scalars(int n, int g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> mag(0.5, 2.0), arg(0.0, 2.0 * kPi);
    VectorXc c(group_order(n, g));
    for (long i = 0; i < c.size(); ++i) c(i) = std::polar(mag(rng), arg(rng));
    c(0) = 1.0;
    return c;
}

}  // namespace thomae
