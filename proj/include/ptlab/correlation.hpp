#pragma once

#include <cmath>
#include <complex>
#include <ostream>
#include <vector>

#include "ptlab/errors.hpp"
#include "ptlab/grid.hpp"
#include "ptlab/wavefunction.hpp"

namespace ptlab {

// rho(x) = conj(psi(-x)) psi(x). Reflection is exact index mirroring on the
// symmetric grid, never interpolation.
inline std::vector<cplx> correlation_density(const Wavefunction& w) {
    w.check_sizes();
    int n = w.grid.size();
    std::vector<cplx> rho(n);
    for (int j = 0; j < n; ++j)
        rho[j] = std::conj(w.psi[w.grid.mirror(j)]) * w.psi[j];
    return rho;
}

// q = psi phi' - phi psi' with phi(x) = conj(psi(-x)), so that
// phi'(x) = -conj(psi'(-x)). Unit normalization: no mass or hbar prefactor.
inline std::vector<cplx> pt_current(const Wavefunction& w) {
    w.check_sizes();
    int n = w.grid.size();
    std::vector<cplx> q(n);
    for (int j = 0; j < n; ++j) {
        int m = w.grid.mirror(j);
        cplx phi = std::conj(w.psi[m]);
        cplx dphi = -std::conj(w.dpsi[m]);
        q[j] = w.psi[j] * dphi - phi * w.dpsi[j];
    }
    return q;
}

// max over interior nodes of |d(q)/dx - 2i Im(E) rho|, the two boundary
// nodes excluded so the difference stays second order.
inline double continuity_residual(const Wavefunction& w) {
    auto rho = correlation_density(w);
    auto q = pt_current(w);
    int n = w.grid.size();
    double h = w.grid.step();
    cplx source{0.0, 2.0 * w.energy.imag()};
    double worst = 0.0;
    for (int j = 1; j + 1 < n; ++j) {
        cplx dq = (q[j + 1] - q[j - 1]) / (2.0 * h);
        worst = std::max(worst, std::abs(dq - source * rho[j]));
    }
    return worst;
}

struct PtOverlap {
    cplx c;        // best scalar with phi ~ c psi
    double defect; // ||phi - c psi||_2 / ||psi||_2
};

// How close partner's PT image phi(x) = conj(partner(-x)) is to a scalar
// multiple of w. With partner = w this measures PT self-symmetry of a state.
inline PtOverlap pt_overlap(const Wavefunction& w, const Wavefunction& partner) {
    if (w.grid != partner.grid)
        throw GridMismatchError("pt_overlap: wavefunctions live on different grids");
    w.check_sizes();
    partner.check_sizes();
    int n = w.grid.size();
    cplx dot{0.0, 0.0};
    double norm2 = 0.0;
    for (int j = 0; j < n; ++j) {
        cplx phi = std::conj(partner.psi[w.grid.mirror(j)]);
        dot += std::conj(w.psi[j]) * phi;
        norm2 += std::norm(w.psi[j]);
    }
    if (norm2 == 0.0)
        throw ZeroFunctionError("pt_overlap: zero wavefunction");
    cplx c = dot / norm2;
    double dev2 = 0.0;
    for (int j = 0; j < n; ++j) {
        cplx phi = std::conj(partner.psi[w.grid.mirror(j)]);
        dev2 += std::norm(phi - c * w.psi[j]);
    }
    return {c, std::sqrt(dev2 / norm2)};
}

inline PtOverlap pt_overlap(const Wavefunction& w) { return pt_overlap(w, w); }

// Trapezoidal quadrature of the non-local product int phi(x) conj(psi(-x)) dx.
// For states decaying at the edges the trapezoid rule converges spectrally.
inline cplx nonlocal_inner_product(const Wavefunction& phi, const Wavefunction& psi) {
    if (phi.grid != psi.grid)
        throw GridMismatchError("nonlocal_inner_product: grids differ");
    phi.check_sizes();
    psi.check_sizes();
    int n = phi.grid.size();
    cplx sum{0.0, 0.0};
    for (int j = 0; j < n; ++j) {
        double weight = (j == 0 || j == n - 1) ? 0.5 : 1.0;
        sum += weight * phi.psi[j] * std::conj(psi.psi[phi.grid.mirror(j)]);
    }
    return sum * phi.grid.step();
}

struct CorrelationField {
    Grid grid;
    std::vector<cplx> rho;
    std::vector<cplx> q;
    cplx energy;
};

inline CorrelationField correlation_field(const Wavefunction& w) {
    return {w.grid, correlation_density(w), pt_current(w), w.energy};
}

inline void write_correlation_csv(std::ostream& os, const CorrelationField& f) {
    os << "x,re_rho,im_rho,re_q,im_q\n";
    os.precision(17);
    for (int j = 0; j < f.grid.size(); ++j)
        os << f.grid.x(j) << ',' << f.rho[j].real() << ',' << f.rho[j].imag() << ','
           << f.q[j].real() << ',' << f.q[j].imag() << '\n';
}

} // namespace ptlab
