#pragma once

#include <cmath>
#include <string>

#include "ptlab/errors.hpp"

namespace ptlab {

// Uniform symmetric grid on [-L, L] with an odd number of nodes, so x = 0
// is always a node and x(n-1-j) = -x(j) holds exactly in floating point.
// Nodes are never stored; they are recomputed as h*(j - mid).
class Grid {
public:
    Grid(double half_width, int n_points) {
        if (!(half_width > 0.0))
            throw Error("grid: half width must be positive");
        if (n_points < 3 || n_points % 2 == 0)
            throw AsymmetricGridError(
                "grid: need an odd number of nodes >= 3, got " + std::to_string(n_points));
        n_ = n_points;
        mid_ = (n_points - 1) / 2;
        h_ = 2.0 * half_width / static_cast<double>(n_points - 1);
    }

    int size() const { return n_; }
    int mid() const { return mid_; }
    double step() const { return h_; }
    // h*mid rather than the constructor argument, so x(0) == -half_width() exactly.
    double half_width() const { return h_ * mid_; }
    double x(int j) const { return h_ * (j - mid_); }
    int mirror(int j) const { return n_ - 1 - j; }

    // Nearest node index; rejects points that are not nodes.
    int index_of(double x0) const {
        double jr = x0 / h_ + mid_;
        int j = static_cast<int>(std::lround(jr));
        if (j < 0 || j >= n_ || std::abs(x(j) - x0) > 1e-9 * std::max(1.0, half_width()))
            throw Error("grid: x = " + std::to_string(x0) + " is not a grid node");
        return j;
    }

    bool operator==(const Grid& o) const {
        return n_ == o.n_ && h_ == o.h_;
    }
    bool operator!=(const Grid& o) const { return !(*this == o); }

private:
    int n_;
    int mid_;
    double h_;
};

} // namespace ptlab
