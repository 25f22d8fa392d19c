#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "ptlab/complex_gamma.hpp"
#include "ptlab/errors.hpp"
#include "ptlab/grid.hpp"
#include "ptlab/potential.hpp"
#include "ptlab/schrodinger.hpp"

namespace ptlab {

// 2x2 complex matrices are all the linear algebra this problem needs.
struct Mat2 {
    cplx m11{0.0}, m12{0.0}, m21{0.0}, m22{0.0};

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    Mat2 operator*(const Mat2& o) const {
        return {m11 * o.m11 + m12 * o.m21, m11 * o.m12 + m12 * o.m22,
                m21 * o.m11 + m22 * o.m21, m21 * o.m12 + m22 * o.m22};
    }
    Mat2 operator-(const Mat2& o) const {
        return {m11 - o.m11, m12 - o.m12, m21 - o.m21, m22 - o.m22};
    }
    Mat2 adjoint() const {
        return {std::conj(m11), std::conj(m21), std::conj(m12), std::conj(m22)};
    }
    Mat2 transpose() const { return {m11, m21, m12, m22}; }
    Mat2 conjugate() const {
        return {std::conj(m11), std::conj(m12), std::conj(m21), std::conj(m22)};
    }
    cplx det() const { return m11 * m22 - m12 * m21; }
    double max_abs() const {
        return std::max(std::max(std::abs(m11), std::abs(m12)),
                        std::max(std::abs(m21), std::abs(m22)));
    }
};

inline Mat2 sigma1() { return {0.0, 1.0, 1.0, 0.0}; }
inline Mat2 sigma3() { return {1.0, 0.0, 0.0, -1.0}; }
// antisymmetric metric [[0,-1],[1,0]]
inline Mat2 symplectic_j() { return {0.0, -1.0, 1.0, 0.0}; }

// Plane-wave amplitudes of one scattering solution on the two flat tails:
// psi -> cf_a e^{ikx} + cf_b e^{-ikx}  (x -> -inf)
// psi -> cf_c e^{ikx} + cf_d e^{-ikx}  (x -> +inf)
struct AsymptoticCoefficients {
    cplx cf_a, cf_b, cf_c, cf_d;
};

// M maps left-side amplitudes to right-side ones: (cf_c, cf_d) = M (cf_a, cf_b).
struct TransferMatrix {
    Mat2 m;
    cplx k;
};

// S maps incoming to outgoing: (cf_b, cf_c) = S (cf_a, cf_d).
enum class SConvention { InOut };

struct ScatteringMatrix {
    Mat2 s;
    cplx k;
    SConvention convention = SConvention::InOut;

    cplx reflection_left() const { return s.m11; }
    cplx transmission() const { return s.m12; }
    cplx reflection_right() const { return s.m22; }
};

// Columns of M are the right-edge coefficient images of pure (1,0) and (0,1)
// left-edge plane-wave data, read off the fundamental pair.
inline TransferMatrix transfer_matrix(const PotentialSpec& pot, double k, const Grid& grid) {
    if (!(k > 0.0))
        throw Error("transfer_matrix: momentum must be positive");
    cplx energy = pot.v_asym() + cplx(k * k, 0.0);
    auto [fp, fm] = fundamental_pair(pot, energy, grid);
    double xr = grid.x(grid.size() - 1);
    auto [c1, d1] = extract_coefficients(fp, xr, fp.k);
    auto [c2, d2] = extract_coefficients(fm, xr, fm.k);
    return {{c1, c2, d1, d2}, fp.k};
}

inline ScatteringMatrix s_from_m(const TransferMatrix& tm) {
    const Mat2& m = tm.m;
    if (std::abs(m.m22) < 1e-10)
        throw SpectralSingularityError("s_from_m: |M22| < 1e-10 (lasing/CPA point)");
    Mat2 s{-m.m21 / m.m22, 1.0 / m.m22, m.det() / m.m22, m.m12 / m.m22};
    return {s, tm.k, SConvention::InOut};
}

enum class Scarf2Variant { AsPrinted, SinCorrected };

inline const char* to_string(Scarf2Variant v) {
    return v == Scarf2Variant::AsPrinted ? "as_printed" : "sin_corrected";
}

struct Scarf2Amplitudes {
    cplx t, r;
};

// Closed-form transmission and reflection amplitudes of the complexified
// Scarf-II barrier. The transmission is a ratio of four gamma factors; its
// second denominator argument must be 1 - ik/alpha, since the a=1, b=0
// sech^2 well has the exact amplitude t = (ik-1)/(ik+1), which pins the
// phase. The reflection multiplies t by a two-term bracket whose second
// factor is either sinh(pi a/alpha) or sin(pi a/alpha); the sin form is what
// the Hermitian reflectionless limit (integer a, b=0) requires, and
// scarf2-validate settles the choice against the integrated solution.
inline Scarf2Amplitudes scarf2_analytic_amplitudes(double a, double b, double alpha,
                                                   double k, Scarf2Variant variant) {
    if (!(k > 0.0))
        throw Error("scarf2_analytic_amplitudes: momentum must be positive");
    double ra = a / alpha, rb = b / alpha;
    cplx ik{0.0, k / alpha};
    auto ratio = gamma_ratio(
        {cplx(-ra) - ik, cplx(1.0 + ra) - ik, cplx(0.5 - rb) - ik, cplx(0.5 + rb) - ik},
        {-ik, cplx(1.0) - ik, cplx(0.5) - ik, cplx(0.5) - ik});
    cplx t = ratio.pole_in_denominator ? cplx(0.0) : ratio.value;
    double pa = std::numbers::pi * ra;
    double pb = std::numbers::pi * rb;
    double pk = std::numbers::pi * k / alpha;
    double f = variant == Scarf2Variant::AsPrinted ? std::sinh(pa) : std::sin(pa);
    double bracket = std::cos(pa) * std::sin(pb) / std::cosh(pk) + f * std::cos(pb) / std::sinh(pk);
    cplx r = cplx(0.0, 1.0) * t * bracket;
    return {t, r};
}

// Dirac-norm flux deviation |R|^2 + |T|^2 - 1 of the analytic amplitudes.
// For large momentum every hyperbolic factor is divided out first, so the
// value stays finite where cosh^2 alone would overflow.
inline double flux_deviation_analytic(double a, double b, double alpha, double k) {
    double pa = std::numbers::pi * a / alpha;
    double pb = std::numbers::pi * b / alpha;
    double pk = std::numbers::pi * k / alpha;
    double sa = std::sin(pa), ca = std::cos(pa);
    double sb = std::sin(pb), cb = std::cos(pb);
    double s2a = std::sin(2.0 * pa), s2b = std::sin(2.0 * pb);
    if (pk <= 1.0) {
        double sh = std::sinh(pk), ch = std::cosh(pk);
        double sh2 = sh * sh, ch2 = ch * ch;
        double den = (sh2 + sa * sa * cb * cb) * ch2 - ca * ca * sb * sb * sh2;
        if (std::abs(den) < 1e-12)
            throw DegenerateDenominatorError("flux_deviation_analytic: denominator underflow");
        double num = 2.0 * ca * ca * sb * sb * sh2 + s2a * s2b * std::sinh(2.0 * pk);
        return num / den;
    }
    double ish = 1.0 / std::sinh(pk), ich = 1.0 / std::cosh(pk);
    double num = 2.0 * ca * ca * sb * sb * ich * ich + 2.0 * s2a * s2b * ish * ich;
    double den = 1.0 + sa * sa * cb * cb * ish * ish - ca * ca * sb * sb * ich * ich;
    return num / den;
}

struct IdentityReport {
    double k = 0.0;
    std::map<std::string, double> params;
    std::map<std::string, double> defects;
};

// ||m^dagger eta m - eta|| in the max-entry norm
inline double metric_conjugation_defect(const Mat2& m, const Mat2& eta) {
    return (m.adjoint() * eta * m - eta).max_abs();
}

// |(AB* - BA*) - (CD* - DC*)|: imbalance of the parity-reversed current
// between the two asymptotic regions of one scattering solution.
inline double pt_current_imbalance(const AsymptoticCoefficients& c) {
    auto cross = [](cplx u, cplx v) { return u * std::conj(v) - v * std::conj(u); };
    return std::abs(cross(c.cf_a, c.cf_b) - cross(c.cf_c, c.cf_d));
}

// Measures every matrix relation as a numerical defect; nothing is assumed.
// Keys:
//   unitarity     ||S^dag S - I||
//   hermiticity   ||S - S^dag||
//   symmetry      ||S - S^T||          (transmission reciprocity)
//   eq8           ||M^dag s3 M - s3||  (flux conservation, real potentials)
//   eq9           current imbalance on the left-incidence solution (1, r_L, t, 0)
//   eq10          ||M^dag J M - J||
//   eq13_J        ||S^dag J S - J||
//   eq13_sigma1   ||S^dag s1 S - s1||
//   ptM           ||conj(M) M - I||    (PT closure of the transfer matrix)
// Extra metrics eta are reported as eq13_custom1, eq13_custom2, ...
inline IdentityReport identity_defects(const PotentialSpec& pot, double k, const Grid& grid,
                                       const std::vector<Mat2>& extra_metrics = {}) {
    TransferMatrix tm = transfer_matrix(pot, k, grid);
    ScatteringMatrix sm = s_from_m(tm);
    Mat2 eye = Mat2::identity();

    IdentityReport rep;
    rep.k = k;
    rep.params["half_width"] = grid.half_width();
    rep.params["n_points"] = static_cast<double>(grid.size());
    if (pot.kind() == PotentialKind::Scarf2) {
        rep.params["a"] = pot.a();
        rep.params["b"] = pot.b();
        rep.params["alpha"] = pot.alpha();
    }

    auto& d = rep.defects;
    d["unitarity"] = (sm.s.adjoint() * sm.s - eye).max_abs();
    d["hermiticity"] = (sm.s - sm.s.adjoint()).max_abs();
    d["symmetry"] = (sm.s - sm.s.transpose()).max_abs();
    d["eq8"] = metric_conjugation_defect(tm.m, sigma3());
    d["eq9"] = pt_current_imbalance({1.0, sm.reflection_left(), sm.transmission(), 0.0});
    d["eq10"] = metric_conjugation_defect(tm.m, symplectic_j());
    d["eq13_J"] = metric_conjugation_defect(sm.s, symplectic_j());
    d["eq13_sigma1"] = metric_conjugation_defect(sm.s, sigma1());
    d["ptM"] = (tm.m.conjugate() * tm.m - eye).max_abs();
    for (std::size_t i = 0; i < extra_metrics.size(); ++i)
        d["eq13_custom" + std::to_string(i + 1)] =
            metric_conjugation_defect(sm.s, extra_metrics[i]);
    return rep;
}

// ||S(V)^dag S(V*) - I||: time reversal pairs each complex potential with its
// pointwise conjugate, PT-symmetric or not.
inline double duality_defect(const PotentialSpec& pot, double k, const Grid& grid) {
    ScatteringMatrix s1 = s_from_m(transfer_matrix(pot, k, grid));
    ScatteringMatrix s2 = s_from_m(transfer_matrix(pot.flip_odd(), k, grid));
    return (s1.s.adjoint() * s2.s - Mat2::identity()).max_abs();
}

} // namespace ptlab
