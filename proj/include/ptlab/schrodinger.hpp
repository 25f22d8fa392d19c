#pragma once

#include <cmath>
#include <complex>
#include <utility>

#include "ptlab/errors.hpp"
#include "ptlab/grid.hpp"
#include "ptlab/potential.hpp"
#include "ptlab/wavefunction.hpp"

namespace ptlab {

// Direct integration of -psi'' + V psi = E psi as the first-order system
// y = (psi, psi') with classical RK4 steps locked to the grid spacing.
// Energies, potentials and solutions are all complex; the integrator itself
// is oblivious to whether E sits on the real axis.

enum class Direction { Forward, Backward };

// Asymptotic momentum k = sqrt(E - V_asym) on the branch Im k >= 0, so that
// e^{ikx} decays to the right for bound energies and travels right for real
// scattering energies.
inline cplx asymptotic_momentum(const PotentialSpec& pot, cplx energy) {
    cplx k = std::sqrt(energy - pot.v_asym());
    if (k.imag() < 0.0)
        k = -k;
    return k;
}

namespace detail {

struct State {
    cplx u; // psi
    cplx v; // psi'
};

// One RK4 step of size hs (signed) starting at x.
inline State rk4_step(const PotentialSpec& pot, cplx energy, double x, State y, double hs) {
    auto f = [&](double xx, State s) -> State {
        return {s.v, (pot.evaluate(xx) - energy) * s.u};
    };
    State k1 = f(x, y);
    State k2 = f(x + 0.5 * hs, {y.u + 0.5 * hs * k1.u, y.v + 0.5 * hs * k1.v});
    State k3 = f(x + 0.5 * hs, {y.u + 0.5 * hs * k2.u, y.v + 0.5 * hs * k2.v});
    State k4 = f(x + hs, {y.u + hs * k3.u, y.v + hs * k3.v});
    return {y.u + (hs / 6.0) * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u),
            y.v + (hs / 6.0) * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v)};
}

inline constexpr double overflow_limit = 1e280;

inline void check_overflow(const State& y, double x) {
    if (std::abs(y.u) > overflow_limit || std::abs(y.v) > overflow_limit)
        throw OverflowError("integrate: solution exceeded 1e280 near x = " +
                            std::to_string(x));
}

} // namespace detail

// March (psi, psi') from the grid node at x0 to the boundary in the chosen
// direction. Nodes on the untraversed side stay zero.
inline Wavefunction integrate(const PotentialSpec& pot, cplx energy, const Grid& grid,
                              double x0, std::pair<cplx, cplx> init, Direction dir) {
    int j0 = grid.index_of(x0);
    Wavefunction w(grid);
    w.energy = energy;
    w.k = asymptotic_momentum(pot, energy);
    detail::State y{init.first, init.second};
    w.psi[j0] = y.u;
    w.dpsi[j0] = y.v;
    double h = grid.step();
    if (dir == Direction::Forward) {
        for (int j = j0; j + 1 < grid.size(); ++j) {
            y = detail::rk4_step(pot, energy, grid.x(j), y, h);
            detail::check_overflow(y, grid.x(j + 1));
            w.psi[j + 1] = y.u;
            w.dpsi[j + 1] = y.v;
        }
    } else {
        for (int j = j0; j > 0; --j) {
            y = detail::rk4_step(pot, energy, grid.x(j), y, -h);
            detail::check_overflow(y, grid.x(j - 1));
            w.psi[j - 1] = y.u;
            w.dpsi[j - 1] = y.v;
        }
    }
    return w;
}

// The two scattering solutions launched at the left edge as pure plane waves
// e^{+ikx} and e^{-ikx}; their coefficients at the right edge are read off by
// extract_coefficients and fill the columns of the transfer matrix.
inline std::pair<Wavefunction, Wavefunction>
fundamental_pair(const PotentialSpec& pot, cplx energy, const Grid& grid) {
    cplx k = asymptotic_momentum(pot, energy);
    double xl = grid.x(0);
    cplx i{0.0, 1.0};
    cplx ep = std::exp(i * k * xl);
    cplx em = std::exp(-i * k * xl);
    Wavefunction fp = integrate(pot, energy, grid, xl, {ep, i * k * ep}, Direction::Forward);
    Wavefunction fm = integrate(pot, energy, grid, xl, {em, -i * k * em}, Direction::Forward);
    return {std::move(fp), std::move(fm)};
}

// Invert psi = c+ e^{ikx} + c- e^{-ikx} (and its derivative) at a node that
// sits on the flat tail of the potential.
inline std::pair<cplx, cplx> extract_coefficients(const Wavefunction& w, double x, cplx k) {
    if (std::abs(k) < 1e-12)
        throw ZeroMomentumError("extract_coefficients: |k| too small to separate waves");
    int j = w.grid.index_of(x);
    cplx i{0.0, 1.0};
    cplx psi = w.psi[j];
    cplx dpsi = w.dpsi[j];
    cplx cp = std::exp(-i * k * x) * (dpsi + i * k * psi) / (2.0 * i * k);
    cplx cm = std::exp(i * k * x) * (i * k * psi - dpsi) / (2.0 * i * k);
    return {cp, cm};
}

} // namespace ptlab
