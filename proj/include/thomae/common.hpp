#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

// Boost 1.74 probes const_iterator when testing conversions to a multiprecision number;
// Eigen 3.4 declares it as void for matrices, which turns the probe into a hard error.
namespace boost::multiprecision::detail {
template <class C>
    requires requires {
        typename C::Scalar;
        typename C::StorageKind;
    }
struct is_byte_container<C> : public boost::false_type {};
}  // namespace boost::multiprecision::detail

namespace thomae {

using cplx = std::complex<double>;
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;
using MatrixXq = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using VectorXq = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

inline constexpr double kPi = std::numbers::pi;
inline const cplx kI{0.0, 1.0};

/// Base class of everything the library throws on a violated precondition.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two objects built over different (N, g) were combined.
class AmbientMismatch : public Error {
public:
    using Error::Error;
};

/// An evaluation landed too close to a pole (or a zero that is divided by).
class PoleProximity : public Error {
public:
    using Error::Error;
};

/// A numerical result could not be certified at the requested tolerance.
class ToleranceFailure : public Error {
public:
    using Error::Error;
};

inline int mod(long long a, int n) {
    long long r = a % n;
    return static_cast<int>(r < 0 ? r + n : r);
}

/// exp(2 pi i k / n)
inline cplx root_of_unity(int k, int n) {
    const double t = 2.0 * kPi * static_cast<double>(mod(k, n)) / n;
    return {std::cos(t), std::sin(t)};
}

}  // namespace thomae

namespace Eigen {

// Lets Eigen containers hold exact rationals (no decompositions are used on them).
template <>
struct NumTraits<thomae::Rational> : GenericNumTraits<thomae::Rational> {
    using Real = thomae::Rational;
    using NonInteger = thomae::Rational;
    using Nested = thomae::Rational;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 6,
        AddCost = 150,
        MulCost = 100
    };
    static inline Real epsilon() { return 0; }
    static inline Real dummy_precision() { return 0; }
    static inline int digits10() { return 0; }
};

}  // namespace Eigen

namespace thomae {

/// z^k by repeated squaring (k >= 0).
inline cplx ipow(cplx z, int k) {
    cplx r = 1.0;
    while (k > 0) {
        if (k & 1) r *= z;
        z *= z;
        k >>= 1;
    }
    return r;
}

}  // namespace thomae
