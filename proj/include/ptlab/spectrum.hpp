#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ptlab/correlation.hpp"
#include "ptlab/errors.hpp"
#include "ptlab/grid.hpp"
#include "ptlab/potential.hpp"
#include "ptlab/schrodinger.hpp"
#include "ptlab/wavefunction.hpp"

namespace ptlab {

enum class SpectralClass { Bound, ResonancePairMember };

inline const char* to_string(SpectralClass c) {
    return c == SpectralClass::Bound ? "bound" : "resonance_pair_member";
}

struct SpectralPoint {
    cplx E;
    cplx kappa; // decay rate, kappa = -ik, Re > 0
    std::optional<int> n_index;
    SpectralClass classification = SpectralClass::Bound;
    double mismatch = 0.0;  // |W| at the reported energy
    double pt_defect = 0.0; // self pt_overlap defect of the eigenfunction
};

struct SearchBox {
    double re_min, re_max;
    double im_min, im_max;
};

struct NonConvergedSeed {
    cplx seed;
    cplx last_e;
    double last_mismatch;
    int iterations;
};

struct SpectrumResult {
    std::vector<SpectralPoint> points;
    std::vector<NonConvergedSeed> non_converged;
};

namespace detail {

inline constexpr int renorm_every = 1000;

// The shooting march evaluates the potential only at nodes and half-steps of
// a fixed grid, so the values are tabulated once per search instead of being
// recomputed for every Newton iterate. Index m covers x(0) + m h/2.
inline std::vector<cplx> half_step_table(const PotentialSpec& pot, const Grid& grid) {
    int n = grid.size();
    std::vector<cplx> vhalf(2 * n - 1);
    double h2 = 0.5 * grid.step();
    double x0 = grid.x(0);
    for (int m = 0; m < 2 * n - 1; ++m)
        vhalf[m] = pot.evaluate(x0 + m * h2);
    return vhalf;
}

// Same RK4 update as the generic integrator, reading the tabulated potential.
// m is the half-step index of the current position, dir = +1 or -1.
inline State rk4_step_tab(const std::vector<cplx>& vhalf, int m, int dir, cplx energy,
                          State y, double hs) {
    auto f = [&](cplx vv, State s) -> State { return {s.v, (vv - energy) * s.u}; };
    State k1 = f(vhalf[m], y);
    State k2 = f(vhalf[m + dir], {y.u + 0.5 * hs * k1.u, y.v + 0.5 * hs * k1.v});
    State k3 = f(vhalf[m + dir], {y.u + 0.5 * hs * k2.u, y.v + 0.5 * hs * k2.v});
    State k4 = f(vhalf[m + 2 * dir], {y.u + hs * k3.u, y.v + hs * k3.v});
    return {y.u + (hs / 6.0) * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u),
            y.v + (hs / 6.0) * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v)};
}

// March (psi, psi') from node j_from to node j_to, renormalizing periodically;
// the scale factors are positive reals, so the normalized Wronskian below is
// unaffected by them.
inline State shoot_half(const std::vector<cplx>& vhalf, cplx energy, double h, cplx init_v,
                        int j_from, int j_to) {
    State y{cplx(1.0, 0.0), init_v};
    int dir = (j_from < j_to) ? 1 : -1;
    double hs = dir * h;
    int steps = 0;
    for (int j = j_from; j != j_to; j += dir) {
        y = rk4_step_tab(vhalf, 2 * j, dir, energy, y, hs);
        if (++steps % renorm_every == 0) {
            double s = std::max(std::abs(y.u), std::abs(y.v));
            if (s > 0.0) {
                y.u /= s;
                y.v /= s;
            }
        }
    }
    return y;
}

inline cplx decay_rate(double v_asym, cplx energy, const char* who) {
    cplx kappa = std::sqrt(cplx(v_asym, 0.0) - energy);
    if (!(kappa.real() > 0.0))
        throw BranchError(std::string(who) + ": Re kappa <= 0, no decaying branch");
    return kappa;
}

// Wronskian of the two decaying solutions at the center node, made scale-free
// by the product of the half-solution sizes there. The size |psi| + |psi'|/|kappa|
// stays positive at matching points where psi' alone vanishes (parity-even
// states of symmetric potentials), which a |psi_L psi_R'| + |psi_R psi_L'|
// denominator does not: for an even potential the backward march mirrors the
// forward one exactly and that combination degenerates to |W| itself, pinning
// the ratio at 1 for every energy.
inline cplx mismatch_on_table(const std::vector<cplx>& vhalf, double v_asym, cplx energy,
                              const Grid& grid) {
    cplx kappa = decay_rate(v_asym, energy, "shoot_mismatch");
    int mid = (grid.size() - 1) / 2;
    auto left = shoot_half(vhalf, energy, grid.step(), kappa, 0, mid);
    auto right = shoot_half(vhalf, energy, grid.step(), -kappa, grid.size() - 1, mid);
    cplx w = left.u * right.v - right.u * left.v;
    double ak = std::abs(kappa);
    double n = ak * (std::abs(left.u) + std::abs(left.v) / ak) *
               (std::abs(right.u) + std::abs(right.v) / ak);
    if (n == 0.0)
        return w;
    return w / n;
}

} // namespace detail

inline cplx shoot_mismatch(const PotentialSpec& pot, cplx energy, const Grid& grid) {
    return detail::mismatch_on_table(detail::half_step_table(pot, grid), pot.v_asym(),
                                     energy, grid);
}

// Assemble the eigenfunction at a converged energy: integrate both decaying
// halves to the center, splice by the matching ratio, put the peak at 1.
inline Wavefunction eigenfunction(const PotentialSpec& pot, cplx energy, const Grid& grid) {
    cplx kappa = detail::decay_rate(pot.v_asym(), energy, "eigenfunction");
    int n = grid.size();
    int mid = (n - 1) / 2;
    Wavefunction w(grid);
    w.energy = energy;
    w.k = cplx(0.0, 1.0) * kappa;

    detail::State y{cplx(1.0, 0.0), kappa};
    w.psi[0] = y.u;
    w.dpsi[0] = y.v;
    for (int j = 0; j < mid; ++j) {
        y = detail::rk4_step(pot, energy, grid.x(j), y, grid.step());
        detail::check_overflow(y, grid.x(j + 1));
        w.psi[j + 1] = y.u;
        w.dpsi[j + 1] = y.v;
    }
    detail::State z{cplx(1.0, 0.0), -kappa};
    std::vector<cplx> rpsi(n), rdpsi(n);
    rpsi[n - 1] = z.u;
    rdpsi[n - 1] = z.v;
    for (int j = n - 1; j > mid; --j) {
        z = detail::rk4_step(pot, energy, grid.x(j), z, -grid.step());
        detail::check_overflow(z, grid.x(j - 1));
        rpsi[j - 1] = z.u;
        rdpsi[j - 1] = z.v;
    }
    if (rpsi[mid] == cplx(0.0, 0.0))
        throw Error("eigenfunction: right half vanishes at the matching point");
    cplx ratio = w.psi[mid] / rpsi[mid];
    for (int j = mid + 1; j < n; ++j) {
        w.psi[j] = ratio * rpsi[j];
        w.dpsi[j] = ratio * rdpsi[j];
    }
    int peak = 0;
    for (int j = 1; j < n; ++j)
        if (std::abs(w.psi[j]) > std::abs(w.psi[peak]))
            peak = j;
    cplx scale = w.psi[peak];
    for (int j = 0; j < n; ++j) {
        w.psi[j] /= scale;
        w.dpsi[j] /= scale;
    }
    return w;
}

// Newton search on shoot_mismatch from a deterministic seed lattice.
// Converged roots are deduplicated at 10*tol (keeping the smallest final
// mismatch), restricted to the box, classified by |Im E|, annotated with the
// self PT-overlap defect, and sorted by (Re E, Im E). Seeds that exhaust the
// iteration budget are returned in non_converged rather than dropped.
inline SpectrumResult find_eigenvalues(const PotentialSpec& pot, const Grid& grid,
                                       const SearchBox& box, int seeds_per_axis = 7,
                                       double tol = 1e-8) {
    if (seeds_per_axis < 1)
        throw Error("find_eigenvalues: need at least one seed per axis");
    if (!(box.re_max >= box.re_min) || !(box.im_max >= box.im_min))
        throw Error("find_eigenvalues: malformed search box");

    constexpr int max_iter = 40;
    constexpr double mismatch_goal = 1e-6;
    constexpr double class_im_tol = 1e-8;
    double margin = 10.0 * tol;
    double step_cap =
        std::max(box.re_max - box.re_min, std::max(box.im_max - box.im_min, 1.0));
    auto vhalf = detail::half_step_table(pot, grid);
    double v_asym = pot.v_asym();
    auto mismatch_at = [&](cplx e) {
        return detail::mismatch_on_table(vhalf, v_asym, e, grid);
    };

    std::vector<cplx> seeds;
    for (int i = 0; i < seeds_per_axis; ++i) {
        double re = box.re_min + (i + 0.5) * (box.re_max - box.re_min) / seeds_per_axis;
        for (int j = 0; j < seeds_per_axis; ++j) {
            double im = box.im_min + (j + 0.5) * (box.im_max - box.im_min) / seeds_per_axis;
            cplx s{re, im};
            if (std::find(seeds.begin(), seeds.end(), s) == seeds.end())
                seeds.push_back(s);
        }
    }

    // Weakly bound levels just below the continuum have Newton basins much
    // narrower than any reasonable lattice spacing. On the real axis the
    // mismatch of a PT-symmetric potential is real (the right launch is the
    // PT image of the left one), so sign changes bracket real eigenvalues;
    // bisecting each bracket yields extra seeds already inside the basin.
    if (box.im_min <= 0.0 && box.im_max >= 0.0 && box.re_max > box.re_min) {
        int m = std::max(16, 4 * seeds_per_axis) + 1; // endpoints included
        std::vector<double> re_probe(m);
        std::vector<double> f_probe(m);
        std::vector<bool> valid(m, false);
        for (int i = 0; i < m; ++i) {
            re_probe[i] = box.re_min + i * (box.re_max - box.re_min) / (m - 1);
            try {
                f_probe[i] = mismatch_at(cplx(re_probe[i], 0.0)).real();
                valid[i] = true;
            } catch (const BranchError&) {
            } catch (const OverflowError&) {
            }
        }
        for (int i = 0; i + 1 < m; ++i) {
            if (!valid[i] || !valid[i + 1])
                continue;
            if (!(f_probe[i] == 0.0) && !(f_probe[i + 1] == 0.0) &&
                std::signbit(f_probe[i]) == std::signbit(f_probe[i + 1]))
                continue;
            double lo = re_probe[i], hi = re_probe[i + 1];
            double flo = f_probe[i];
            try {
                for (int bis = 0; bis < 24; ++bis) {
                    double mid = 0.5 * (lo + hi);
                    double fm = mismatch_at(cplx(mid, 0.0)).real();
                    if (fm == 0.0 || std::signbit(fm) == std::signbit(flo)) {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
            } catch (const BranchError&) {
                continue;
            } catch (const OverflowError&) {
                continue;
            }
            seeds.push_back(cplx(0.5 * (lo + hi), 0.0));
        }
    }

    struct Root {
        cplx e;
        double mismatch;
    };
    std::vector<Root> roots;
    SpectrumResult result;

    for (cplx seed : seeds) {
        cplx e = seed;
        double fabs_last = 0.0;
        bool converged = false;
        int it = 0;
        try {
            cplx f = mismatch_at(e);
            fabs_last = std::abs(f);
            for (it = 0; it < max_iter; ++it) {
                double delta = 1e-7 * std::max(1.0, std::abs(e));
                cplx f2 = mismatch_at(e + delta);
                cplx deriv = (f2 - f) / delta;
                if (deriv == cplx(0.0, 0.0))
                    break;
                cplx step = -f / deriv;
                if (std::abs(step) > step_cap)
                    step *= step_cap / std::abs(step);
                e += step;
                f = mismatch_at(e);
                fabs_last = std::abs(f);
                if (std::abs(step) < tol && fabs_last < mismatch_goal) {
                    converged = true;
                    break;
                }
            }
        } catch (const BranchError&) {
            result.non_converged.push_back({seed, e, fabs_last, it});
            continue;
        } catch (const OverflowError&) {
            result.non_converged.push_back({seed, e, fabs_last, it});
            continue;
        }
        if (!converged) {
            result.non_converged.push_back({seed, e, fabs_last, it});
            continue;
        }
        if (e.real() < box.re_min - margin || e.real() > box.re_max + margin ||
            e.imag() < box.im_min - margin || e.imag() > box.im_max + margin)
            continue; // converged outside the requested box
        bool duplicate = false;
        for (auto& r : roots) {
            if (std::abs(r.e - e) < 10.0 * tol) {
                duplicate = true;
                if (fabs_last < r.mismatch)
                    r = {e, fabs_last};
                break;
            }
        }
        if (!duplicate)
            roots.push_back({e, fabs_last});
    }

    std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) {
        if (a.e.real() != b.e.real())
            return a.e.real() < b.e.real();
        return a.e.imag() < b.e.imag();
    });

    int bound_counter = 0;
    for (const auto& r : roots) {
        SpectralPoint p;
        p.E = r.e;
        p.kappa = std::sqrt(cplx(pot.v_asym(), 0.0) - r.e);
        p.mismatch = r.mismatch;
        if (std::abs(r.e.imag()) < class_im_tol) {
            p.classification = SpectralClass::Bound;
            p.n_index = bound_counter++;
        } else {
            p.classification = SpectralClass::ResonancePairMember;
        }
        p.pt_defect = pt_overlap(eigenfunction(pot, r.e, grid)).defect;
        result.points.push_back(p);
    }
    return result;
}

// For every point with Im E > im_tol, distance to the nearest conjugate
// partner in the list; the worst such distance, 0 if no point qualifies.
inline double pairing_mismatch(const std::vector<SpectralPoint>& points,
                               double im_tol = 1e-8) {
    double worst = 0.0;
    for (const auto& p : points) {
        if (p.E.imag() <= im_tol)
            continue;
        double best = std::numeric_limits<double>::infinity();
        for (const auto& q : points)
            best = std::min(best, std::abs(q.E - std::conj(p.E)));
        worst = std::max(worst, best);
    }
    return worst;
}

struct PoleSpectrum {
    std::vector<double> family1; // E = a^2 - (a - n alpha)^2,        a - n alpha > 0
    std::vector<double> family2; // E = a^2 - (b - (m+1/2) alpha)^2,  b - (m+1/2) alpha > 0
};

// Candidate bound energies where the transmission gamma factors blow up.
// Family 2 is emitted for comparison only; nothing asserts its members are
// eigenvalues.
inline PoleSpectrum scarf2_pole_spectrum(double a, double b, double alpha) {
    PoleSpectrum ps;
    for (int n = 0;; ++n) {
        double kappa = a - n * alpha;
        if (kappa <= 0.0)
            break;
        ps.family1.push_back(a * a - kappa * kappa);
    }
    for (int m = 0;; ++m) {
        double kappa = b - (m + 0.5) * alpha;
        if (kappa <= 0.0)
            break;
        ps.family2.push_back(a * a - kappa * kappa);
    }
    std::sort(ps.family1.begin(), ps.family1.end());
    std::sort(ps.family2.begin(), ps.family2.end());
    return ps;
}

enum class Phase { Unbroken, Broken };

inline const char* to_string(Phase p) { return p == Phase::Unbroken ? "unbroken" : "broken"; }

inline Phase phase_classify(const std::vector<SpectralPoint>& points, double tol = 1e-8) {
    if (points.empty())
        throw EmptySpectrumError("phase_classify: no spectral points supplied");
    for (const auto& p : points)
        if (std::abs(p.E.imag()) >= tol)
            return Phase::Broken;
    return Phase::Unbroken;
}

} // namespace ptlab
