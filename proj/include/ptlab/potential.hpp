#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ptlab/errors.hpp"
#include "ptlab/grid.hpp"
#include "ptlab/wavefunction.hpp"

namespace ptlab {

// Complex one-dimensional potentials in the convention
//     -psi'' + V(x) psi = E psi        (hbar = 1, m = 1/2)
//
// Two families are supported:
//  * scarf2(A, B, alpha):
//        V(x) = A^2 - (A(A+alpha) + B^2) sech^2(alpha x)
//                   + i B (2A+alpha) sech(alpha x) tanh(alpha x)
//    which is PT-symmetric for real A, B and factorizes through the
//    superpotential W = A tanh(alpha x) + i B sech(alpha x) as V = W^2 - W',
//    so exp(-int_0^x W) solves the equation at E = 0. The constant tail
//    V -> A^2 is kept inside V, not subtracted.
//  * tabulated(x, v): samples on a strictly increasing symmetric range,
//    evaluated by linear interpolation between nodes.
enum class PotentialKind { Scarf2, CustomTabulated };

struct EvenOddParts {
    double v_even = 0.0; // real even part
    double v_odd = 0.0;  // real odd amplitude; V = v_even + i*v_odd when PT holds
};

class PotentialSpec {
public:
    static PotentialSpec scarf2(double a, double b, double alpha) {
        if (!(alpha > 0.0))
            throw Error("potential: alpha must be positive");
        PotentialSpec p;
        p.kind_ = PotentialKind::Scarf2;
        p.a_ = a;
        p.b_ = b;
        p.alpha_ = alpha;
        return p;
    }

    static PotentialSpec tabulated(std::vector<double> xs, std::vector<cplx> vs) {
        if (xs.size() != vs.size() || xs.size() < 3)
            throw Error("potential: table needs >= 3 matching samples");
        for (std::size_t i = 1; i < xs.size(); ++i)
            if (!(xs[i] > xs[i - 1]))
                throw Error("potential: table abscissae must be strictly increasing");
        PotentialSpec p;
        p.kind_ = PotentialKind::CustomTabulated;
        p.xs_ = std::move(xs);
        p.vs_ = std::move(vs);
        return p;
    }

    PotentialKind kind() const { return kind_; }
    double a() const { return a_; }
    double b() const { return b_; }
    double alpha() const { return alpha_; }
    double tab_min() const { return xs_.front(); }
    double tab_max() const { return xs_.back(); }

    cplx evaluate(double x) const {
        if (kind_ == PotentialKind::Scarf2) {
            double u = alpha_ * x;
            double sech = 1.0 / std::cosh(u);
            double th = std::tanh(u);
            double re = a_ * a_ - (a_ * (a_ + alpha_) + b_ * b_) * sech * sech;
            double im = b_ * (2.0 * a_ + alpha_) * sech * th;
            return {re, im};
        }
        double slack = 1e-9 * (xs_.back() - xs_.front());
        if (x < xs_.front() - slack || x > xs_.back() + slack)
            throw OutOfRangeError("potential: x outside tabulated range");
        x = std::clamp(x, xs_.front(), xs_.back());
        auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
        std::size_t i = (it == xs_.begin()) ? 1 : static_cast<std::size_t>(it - xs_.begin());
        if (i >= xs_.size())
            i = xs_.size() - 1;
        double t = (x - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
        return vs_[i - 1] + t * (vs_[i] - vs_[i - 1]);
    }

    // Constant the potential approaches as x -> +-infinity. Real by
    // construction for scarf2; for tables it is the mean of the real parts
    // at the two ends (the flatness check in make_grid guards the rest).
    double v_asym() const {
        if (kind_ == PotentialKind::Scarf2)
            return a_ * a_;
        return 0.5 * (vs_.front().real() + vs_.back().real());
    }

    // Split into real even and real odd parts at +-x. Only meaningful for
    // PT-symmetric potentials; anything else is rejected pointwise.
    EvenOddParts decompose_even_odd(double x) const {
        cplx vp = evaluate(x);
        cplx vm = evaluate(-x);
        EvenOddParts parts;
        parts.v_even = 0.5 * (vp.real() + vm.real());
        parts.v_odd = 0.5 * (vp.imag() - vm.imag());
        double defect = std::abs(vp - cplx(parts.v_even, parts.v_odd));
        double scale = std::max({1.0, std::abs(vp), std::abs(vm)});
        if (defect > 1e-9 * scale)
            throw NotPTSymmetricError("potential: V*(-x) != V(x) at x = " + std::to_string(x));
        return parts;
    }

    // The dual partner with the odd (imaginary) part reversed. On the real
    // axis this is the pointwise complex conjugate potential, so it is well
    // defined for arbitrary complex tables, PT-symmetric or not.
    PotentialSpec flip_odd() const {
        if (kind_ == PotentialKind::Scarf2)
            return scarf2(a_, -b_, alpha_);
        std::vector<cplx> conj_vs(vs_.size());
        std::transform(vs_.begin(), vs_.end(), conj_vs.begin(),
                       [](cplx v) { return std::conj(v); });
        return tabulated(xs_, std::move(conj_vs));
    }

    // W(x) = A tanh(alpha x) + i B sech(alpha x); closed form, scarf2 only.
    cplx superpotential(double x) const {
        if (kind_ != PotentialKind::Scarf2)
            throw UnsupportedPotentialError("superpotential: defined for scarf2 only");
        double u = alpha_ * x;
        return {a_ * std::tanh(u), b_ / std::cosh(u)};
    }

    // Convenience check used by tests and the CLI; true when the sampled
    // PT defect stays below tol at every probe point.
    bool is_pt_symmetric(double x_max, int probes = 201, double tol = 1e-9) const {
        for (int i = 0; i < probes; ++i) {
            double x = -x_max + 2.0 * x_max * i / (probes - 1);
            cplx vp = evaluate(x), vm = evaluate(-x);
            double scale = std::max({1.0, std::abs(vp), std::abs(vm)});
            if (std::abs(vp - std::conj(vm)) > tol * scale)
                return false;
        }
        return true;
    }

private:
    PotentialSpec() = default;
    PotentialKind kind_ = PotentialKind::Scarf2;
    double a_ = 0.0, b_ = 0.0, alpha_ = 1.0;
    std::vector<double> xs_;
    std::vector<cplx> vs_;
};

// Default box size: 25 decay lengths of the scarf2 tail, or the full
// tabulated range. Default resolution keeps the RK4 phase error at k ~ 2
// comfortably below the 1e-8 identity targets.
inline double default_half_width(const PotentialSpec& pot) {
    if (pot.kind() == PotentialKind::Scarf2)
        return 25.0 / pot.alpha();
    return std::min(-pot.tab_min(), pot.tab_max());
}

inline constexpr int default_n_points = 25001;

// Grid factory that also enforces asymptotic flatness: both ends of the box
// must sit on the constant tail to within eps_asym relative to the potential
// scale, otherwise transfer-matrix coefficients would be meaningless.
inline Grid make_grid(const PotentialSpec& pot, double half_width = 0.0, int n_points = 0) {
    double L = half_width > 0.0 ? half_width : default_half_width(pot);
    int n = n_points > 0 ? n_points : default_n_points;
    Grid g(L, n);
    const double eps_asym = 1e-10;
    double va = pot.v_asym();
    double scale = std::max({1.0, std::abs(va), std::abs(pot.evaluate(0.0) - va)});
    for (double x : {g.x(0), g.x(g.size() - 1)}) {
        double defect = std::abs(pot.evaluate(x) - va);
        if (defect > eps_asym * scale)
            throw Error("grid: potential is not asymptotically flat at x = " +
                        std::to_string(x));
    }
    return g;
}

// Zero-energy solution exp(-int_0^x W dt) of the scarf2 factorization,
// built by cumulative Simpson quadrature of W on the grid (the closed form
// of the integral is deliberately not used here, so the state can serve as
// an independent check on both the potential and the integrator).
inline Wavefunction ground_state_oracle(const PotentialSpec& pot, const Grid& grid) {
    if (pot.kind() != PotentialKind::Scarf2)
        throw UnsupportedPotentialError("ground state oracle: scarf2 only");
    if (!(pot.a() > 0.0))
        throw NotNormalizableError("ground state oracle: needs A > 0 for decay");
    int n = grid.size();
    int mid = grid.mid();
    double h = grid.step();
    std::vector<cplx> iw(n, cplx(0.0, 0.0)); // int_0^{x_j} W dt
    for (int j = mid; j + 1 < n; ++j) {
        double x = grid.x(j);
        cplx s = pot.superpotential(x) + 4.0 * pot.superpotential(x + 0.5 * h) +
                 pot.superpotential(x + h);
        iw[j + 1] = iw[j] + (h / 6.0) * s;
    }
    for (int j = mid; j > 0; --j) {
        double x = grid.x(j);
        cplx s = pot.superpotential(x) + 4.0 * pot.superpotential(x - 0.5 * h) +
                 pot.superpotential(x - h);
        iw[j - 1] = iw[j] - (h / 6.0) * s;
    }
    Wavefunction w(grid);
    w.energy = cplx(0.0, 0.0);
    w.k = cplx(0.0, pot.a()); // k^2 = E - V_asym = -A^2
    for (int j = 0; j < n; ++j) {
        w.psi[j] = std::exp(-iw[j]);
        w.dpsi[j] = -pot.superpotential(grid.x(j)) * w.psi[j];
    }
    return w;
}

// CSV input with header x,re_v,im_v; strictly increasing x enforced by the
// tabulated() constructor.
inline PotentialSpec read_potential_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line))
        throw Error("potential csv: empty stream");
    auto strip = [](std::string s) {
        s.erase(std::remove_if(s.begin(), s.end(),
                               [](unsigned char c) { return std::isspace(c); }),
                s.end());
        return s;
    };
    if (strip(line) != "x,re_v,im_v")
        throw Error("potential csv: expected header 'x,re_v,im_v'");
    std::vector<double> xs;
    std::vector<cplx> vs;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (strip(line).empty())
            continue;
        std::istringstream ss(line);
        double x, re, im;
        char c1, c2;
        if (!(ss >> x >> c1 >> re >> c2 >> im) || c1 != ',' || c2 != ',')
            throw Error("potential csv: malformed row at line " + std::to_string(lineno));
        xs.push_back(x);
        vs.emplace_back(re, im);
    }
    return PotentialSpec::tabulated(std::move(xs), std::move(vs));
}

inline PotentialSpec read_potential_csv_file(const std::string& path) {
    std::ifstream f(path);
    if (!f)
        throw Error("potential csv: cannot open " + path);
    return read_potential_csv(f);
}

// CSV output mirroring the input format.
inline void write_potential_csv(std::ostream& os, const PotentialSpec& pot,
                                const Grid& grid) {
    os << "x,re_v,im_v\n";
    os.precision(17);
    for (int j = 0; j < grid.size(); ++j) {
        cplx v = pot.evaluate(grid.x(j));
        os << grid.x(j) << ',' << v.real() << ',' << v.imag() << '\n';
    }
}

} // namespace ptlab
