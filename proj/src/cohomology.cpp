#include "thomae/cohomology.hpp"

#include <bit>
#include <sstream>

namespace thomae {

int wedge_sign(std::uint64_t m1, std::uint64_t m2) {
    if (m1 & m2) return 0;
    // each generator of m2 passes the generators of m1 with a larger index
    int swaps = 0;
    std::uint64_t rest = m2;
    while (rest) {
        const int j = std::countr_zero(rest);
        rest &= rest - 1;
        swaps += std::popcount(m1 >> (j + 1));
    }
    return (swaps % 2) ? -1 : 1;
}

ExteriorClass ExteriorClass::scalar(int generators, const Rational& c) {
    ExteriorClass e(generators);
    e.add(0, c);
    return e;
}

ExteriorClass ExteriorClass::generator(int generators, int i) {
    if (i < 0 || i >= generators || generators > 64) throw Error("generator index out of range");
    ExteriorClass e(generators);
    e.add(std::uint64_t{1} << i, 1);
    return e;
}

Rational ExteriorClass::coefficient(std::uint64_t monomial) const {
    auto it = terms_.find(monomial);
    return it == terms_.end() ? Rational(0) : it->second;
}

void ExteriorClass::add(std::uint64_t m, const Rational& c) {
    if (c == 0) return;
    auto [it, fresh] = terms_.emplace(m, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

ExteriorClass ExteriorClass::operator+(const ExteriorClass& o) const {
    if (o.gens_ != gens_) throw AmbientMismatch("classes on different exterior algebras");
    ExteriorClass r = *this;
    for (const auto& [m, c] : o.terms_) r.add(m, c);
    return r;
}

ExteriorClass ExteriorClass::operator-() const { return *this * Rational(-1); }

ExteriorClass ExteriorClass::operator-(const ExteriorClass& o) const { return *this + (-o); }

ExteriorClass ExteriorClass::operator*(const Rational& c) const {
    ExteriorClass r(gens_);
    for (const auto& [m, v] : terms_) r.add(m, v * c);
    return r;
}

ExteriorClass ExteriorClass::operator*(const ExteriorClass& o) const {
    if (o.gens_ != gens_) throw AmbientMismatch("classes on different exterior algebras");
    ExteriorClass r(gens_);
    for (const auto& [m1, c1] : terms_)
        for (const auto& [m2, c2] : o.terms_) {
            const int s = wedge_sign(m1, m2);
            if (s != 0) r.add(m1 | m2, s > 0 ? c1 * c2 : -(c1 * c2));
        }
    return r;
}

ExteriorClass ExteriorClass::pow(int k) const {
    ExteriorClass r = scalar(gens_, 1);
    for (int i = 0; i < k; ++i) r = r * *this;
    return r;
}

ExteriorClass ExteriorClass::homogeneous(int d) const {
    ExteriorClass r(gens_);
    for (const auto& [m, c] : terms_)
        if (std::popcount(m) == d) r.add(m, c);
    return r;
}

ExteriorClass ExteriorClass::pullback(const std::vector<ExteriorClass>& image) const {
    if (static_cast<int>(image.size()) != gens_) throw Error("pullback needs one image per generator");
    const int target = image.empty() ? 0 : image.front().generators();
    ExteriorClass r(target);
    for (const auto& [m, c] : terms_) {
        ExteriorClass t = scalar(target, c);
        std::uint64_t rest = m;
        while (rest) {
            const int j = std::countr_zero(rest);
            rest &= rest - 1;
            t = t * image[j];
        }
        r = r + t;
    }
    return r;
}

std::string ExteriorClass::to_string(const std::function<std::string(int)>& name) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c << ")";
        std::uint64_t rest = m;
        while (rest) {
            const int j = std::countr_zero(rest);
            rest &= rest - 1;
            os << (rest == 0 && m == (std::uint64_t{1} << j) ? " " : " ") << name(j);
        }
    }
    return os.str();
}

ExteriorClass theta_class(int g, int factor, int factors) {
    const int gens = 2 * g * factors;
    ExteriorClass t(gens);
    for (int i = 0; i < g; ++i) {
        t = t + ExteriorClass::generator(gens, factor * 2 * g + i) *
                    ExteriorClass::generator(gens, factor * 2 * g + g + i);
    }
    return t;
}

ExteriorClass addition_pullback(int g, const ExteriorClass& c) {
    if (c.generators() != 2 * g) throw Error("addition_pullback expects a class on A");
    std::vector<ExteriorClass> img;
    for (int i = 0; i < 2 * g; ++i)
        img.push_back(ExteriorClass::generator(4 * g, i) + ExteriorClass::generator(4 * g, 2 * g + i));
    return c.pullback(img);
}

ExteriorClass projection_pullback(int g, int factor, int factors, const ExteriorClass& c) {
    if (c.generators() != 2 * g) throw Error("projection_pullback expects a class on A");
    std::vector<ExteriorClass> img;
    for (int i = 0; i < 2 * g; ++i) img.push_back(ExteriorClass::generator(2 * g * factors, factor * 2 * g + i));
    return c.pullback(img);
}

ExteriorClass multiplication_pullback(const ExteriorClass& c, int n) {
    std::vector<ExteriorClass> img;
    for (int i = 0; i < c.generators(); ++i) img.push_back(ExteriorClass::generator(c.generators(), i) * Rational(n));
    return c.pullback(img);
}

Rational top_integral(int g, int factors, const ExteriorClass& c) {
    const int gens = 2 * g * factors;
    if (c.generators() != gens) throw AmbientMismatch("class lives on a different product");
    const std::uint64_t top = gens == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << gens) - 1;
    for (const auto& [m, v] : c.terms())
        if (m != top) throw Error("top_integral: class has components below top degree");
    ExteriorClass vol = ExteriorClass::scalar(gens, 1);
    for (int f = 0; f < factors; ++f)
        for (int i = 0; i < g; ++i)
            vol = vol * ExteriorClass::generator(gens, f * 2 * g + i) * ExteriorClass::generator(gens, f * 2 * g + g + i);
    return c.coefficient(top) / vol.coefficient(top);
}

namespace {

Rational factorial(int k) {
    Rational r = 1;
    for (int i = 2; i <= k; ++i) r *= i;
    return r;
}

}  // namespace

Rational chord_tangent_m(int g) {
    if (g < 1) throw Error("chord_tangent_m needs g >= 1");
    const ExteriorClass theta = theta_class(g);
    const ExteriorClass p1 = projection_pullback(g, 0, 2, theta);
    const ExteriorClass p2 = projection_pullback(g, 1, 2, theta);
    const ExteriorClass s = addition_pullback(g, theta);
    const ExteriorClass prod = p1.pow(g - 1) * (p2 * Rational(3) - s).pow(g + 1);
    return -top_integral(g, 2, prod) / (Rational(2) * factorial(g + 1) * factorial(g));
}

EmbeddingStats embedding_stats(int g) {
    auto ipow = [](long b, int e) {
        long r = 1;
        for (int i = 0; i < e; ++i) r *= b;
        return r;
    };
    auto binom = [](long n, long k) {
        long r = 1;
        for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
        return r;
    };
    EmbeddingStats s;
    s.g = g;
    s.h0_6theta = ipow(6, g);
    s.h0_12theta = ipow(12, g);
    s.projective_dimension = binom(ipow(3, g), ipow(2, g)) - 1;
    s.hyperplanes = s.projective_dimension + 1 - s.h0_6theta;
    s.quadrics = binom(s.h0_6theta + 1, 2) - s.h0_12theta;
    return s;
}

CurvePowerModel::CurvePowerModel(int g, int n) : g_(g), n_(n) {
    if (g < 2) throw Error("curve model needs g >= 2");
    if (n < 1 || 2 * g * n > 64) throw Error("curve model supports 1 <= n and 2gn <= 64");
}

ExteriorClass CurvePowerModel::a(int i, int k) const { return ExteriorClass::generator(generators(), i * 2 * g_ + k); }
ExteriorClass CurvePowerModel::b(int i, int k) const {
    return ExteriorClass::generator(generators(), i * 2 * g_ + g_ + k);
}
ExteriorClass CurvePowerModel::one() const { return ExteriorClass::scalar(generators(), 1); }
ExteriorClass CurvePowerModel::pt(int i) const { return a(i, 0) * b(i, 0); }
ExteriorClass CurvePowerModel::canonical(int i) const { return pt(i) * Rational(2 * g_ - 2); }

ExteriorClass CurvePowerModel::diagonal(int i, int j) const {
    ExteriorClass d = pt(i) + pt(j);
    for (int k = 0; k < g_; ++k) d = d - (a(i, k) * b(j, k) - b(i, k) * a(j, k));
    return d;
}

ExteriorClass CurvePowerModel::abel_pullback_theta() const {
    ExteriorClass t(generators());
    for (int k = 0; k < g_; ++k) {
        ExteriorClass sa(generators()), sb(generators());
        for (int i = 0; i < n_; ++i) {
            sa = sa + a(i, k);
            sb = sb + b(i, k);
        }
        t = t + sa * sb;
    }
    return t;
}

ExteriorClass CurvePowerModel::reduce(const ExteriorClass& c) const {
    ExteriorClass r(generators());
    const std::uint64_t block = (std::uint64_t{1} << (2 * g_)) - 1;
    for (const auto& [m, v] : c.terms()) {
        std::uint64_t out = 0;
        bool zero = false;
        for (int i = 0; i < n_ && !zero; ++i) {
            const std::uint64_t part = (m >> (i * 2 * g_)) & block;
            const int deg = std::popcount(part);
            if (deg <= 1) {
                out |= part << (i * 2 * g_);
                continue;
            }
            if (deg > 2) {
                zero = true;
                continue;
            }
            const int lo = std::countr_zero(part);
            const int hi = 63 - std::countl_zero(part);
            if (lo < g_ && hi == lo + g_) {
                out |= ((std::uint64_t{1} << 0) | (std::uint64_t{1} << g_)) << (i * 2 * g_);
            } else {
                zero = true;
            }
        }
        if (!zero) {
            // same sign: a_k and b_k stay adjacent and ordered inside the block
            ExteriorClass mono = ExteriorClass::scalar(generators(), v);
            std::uint64_t rest = out;
            while (rest) {
                const int j = std::countr_zero(rest);
                rest &= rest - 1;
                mono = mono * ExteriorClass::generator(generators(), j);
            }
            r = r + mono;
        }
    }
    return r;
}

Rational CurvePowerModel::integrate(const ExteriorClass& c) const {
    const ExteriorClass red = reduce(c);
    std::uint64_t top = 0;
    for (int i = 0; i < n_; ++i) top |= ((std::uint64_t{1}) | (std::uint64_t{1} << g_)) << (i * 2 * g_);
    return red.coefficient(top);
}

std::string CurvePowerModel::name(int generator) const {
    const int i = generator / (2 * g_), r = generator % (2 * g_);
    return (r < g_ ? "a" : "b") + std::to_string(r % g_ + 1) + "^" + std::to_string(i + 1);
}

PullbackWitness verify_pullback_theta(int g, int n) {
    CurvePowerModel m(g, n);
    const ExteriorClass lhs = m.reduce(m.abel_pullback_theta() * Rational(2 * g - 2));
    ExteriorClass sk(m.generators()), sd(m.generators());
    for (int i = 0; i < n; ++i) sk = sk + m.canonical(i);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) sd = sd + m.diagonal(i, j);
    const ExteriorClass rhs = m.reduce(sk * Rational(g - 1 + n) - sd * Rational(2 * g - 2));
    const ExteriorClass diff = lhs - rhs;
    PullbackWitness w{diff.is_zero(), "", lhs, rhs};
    if (!w.holds) w.difference = diff.to_string([&](int j) { return m.name(j); });
    return w;
}

Rational diagonal_self_intersection(int g) {
    CurvePowerModel m(g, 2);
    const ExteriorClass d = m.diagonal(0, 1);
    return m.integrate(d * d);
}

}  // namespace thomae
