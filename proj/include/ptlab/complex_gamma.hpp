#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <sstream>

#include "ptlab/errors.hpp"

namespace ptlab {

using cplx = std::complex<double>;

namespace detail {

// Lanczos approximation, g = 7 with 9 coefficients (the classic double
// precision set; relative error ~1e-14 over the right half plane).
inline constexpr double lanczos_g = 7.0;
inline constexpr double lanczos_c[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

// log Gamma via Lanczos, valid for Re z >= 0.5. No reflection, no mirroring.
inline cplx lngamma_lanczos(cplx z) {
    z -= 1.0;
    cplx sum = lanczos_c[0];
    for (int i = 1; i < 9; ++i)
        sum += lanczos_c[i] / (z + static_cast<double>(i));
    cplx t = z + lanczos_g + 0.5;
    constexpr double half_log_two_pi = 0.91893853320467274178; // log(2*pi)/2
    return half_log_two_pi + (z + 0.5) * std::log(t) - t + std::log(sum);
}

// log(sin(pi z)) for Im z >= 0, stable against overflow of sinh/cosh:
// sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 i pi z}), |e^{2 i pi z}| < 1 above the axis.
inline cplx log_sin_pi(cplx z) {
    const double pi = std::numbers::pi;
    cplx w = pi * z;
    if (w.imag() < 20.0)
        return std::log(std::sin(w));
    cplx i{0.0, 1.0};
    return std::log(0.5 * i) - i * w + std::log(1.0 - std::exp(2.0 * i * w));
}

inline bool near_nonpositive_integer(cplx z, double tol) {
    double r = std::round(z.real());
    if (r > 0.5)
        return false;
    return std::abs(z - cplx(r, 0.0)) < tol;
}

} // namespace detail

// Principal-branch log of the gamma function for complex argument.
// exp(lngamma(z)) == Gamma(z); lngamma(conj z) == conj(lngamma z) by
// construction (the lower half plane is evaluated by mirroring).
// Throws PoleError within 1e-9 of a non-positive integer.
inline cplx lngamma(cplx z) {
    if (detail::near_nonpositive_integer(z, 1e-9)) {
        std::ostringstream msg;
        msg << "lngamma: pole at z = (" << z.real() << ", " << z.imag() << ")";
        throw PoleError(msg.str());
    }
    if (z.imag() < 0.0)
        return std::conj(lngamma(std::conj(z)));
    if (z.real() >= 0.5)
        return detail::lngamma_lanczos(z);
    // Reflection: log Gamma(z) = log pi - log sin(pi z) - log Gamma(1 - z).
    constexpr double log_pi = 1.1447298858494001741;
    return log_pi - detail::log_sin_pi(z) - detail::lngamma_lanczos(1.0 - z);
}

struct GammaRatioResult {
    cplx value{0.0, 0.0};
    bool pole_in_denominator = false;
};

// prod Gamma(num_i) / prod Gamma(den_j), evaluated entirely in log space so
// intermediate factors can exceed the range of double. A pole in the
// denominator sends the ratio to zero and is flagged rather than thrown;
// a pole in the numerator propagates as PoleError.
inline GammaRatioResult gamma_ratio(std::span<const cplx> num, std::span<const cplx> den) {
    for (const cplx& z : den)
        if (detail::near_nonpositive_integer(z, 1e-9))
            return {cplx(0.0, 0.0), true};
    cplx acc{0.0, 0.0};
    for (const cplx& z : num)
        acc += lngamma(z);
    for (const cplx& z : den)
        acc -= lngamma(z);
    return {std::exp(acc), false};
}

inline GammaRatioResult gamma_ratio(std::initializer_list<cplx> num,
                                    std::initializer_list<cplx> den) {
    return gamma_ratio(std::span<const cplx>(num.begin(), num.size()),
                       std::span<const cplx>(den.begin(), den.size()));
}

} // namespace ptlab
