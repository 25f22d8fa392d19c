#pragma once

#include <complex>
#include <ostream>
#include <vector>

#include "ptlab/errors.hpp"
#include "ptlab/grid.hpp"

namespace ptlab {

using cplx = std::complex<double>;

// A solution of -psi'' + V psi = E psi sampled on a symmetric grid,
// together with its derivative and the asymptotic momentum k = sqrt(E - V_asym)
// (branch Im k >= 0, so bound states carry k = i*kappa).
struct Wavefunction {
    Grid grid;
    std::vector<cplx> psi;
    std::vector<cplx> dpsi;
    cplx energy{0.0, 0.0};
    cplx k{0.0, 0.0};

    explicit Wavefunction(const Grid& g)
        : grid(g), psi(g.size(), cplx(0.0, 0.0)), dpsi(g.size(), cplx(0.0, 0.0)) {}

    void check_sizes() const {
        if (static_cast<int>(psi.size()) != grid.size() ||
            static_cast<int>(dpsi.size()) != grid.size())
            throw GridMismatchError("wavefunction: array lengths do not match the grid");
    }
};

// CSV export, one row per node: x,re_psi,im_psi,re_dpsi,im_dpsi
inline void write_wavefunction_csv(std::ostream& os, const Wavefunction& w) {
    w.check_sizes();
    os << "x,re_psi,im_psi,re_dpsi,im_dpsi\n";
    os.precision(17);
    for (int j = 0; j < w.grid.size(); ++j) {
        os << w.grid.x(j) << ',' << w.psi[j].real() << ',' << w.psi[j].imag() << ','
           << w.dpsi[j].real() << ',' << w.dpsi[j].imag() << '\n';
    }
}

} // namespace ptlab
