#ifndef LAMPLAB_FIT_HPP
#define LAMPLAB_FIT_HPP

#include <cstddef>
#include <vector>

namespace lamplab {

// Ordinary least-squares fit of y against x, with the R^2 goodness measure
// and an optional target exponent to judge against.
struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double x_lo = 0.0;   // fit window in the regressor variable
    double x_hi = 0.0;
    std::size_t n_points = 0;
    double target = 0.0;     // expected slope, 0 if none
    double tolerance = 0.0;  // |slope - target| allowed, 0 if none
    bool pass = true;

    bool within(double t, double tol) const {
        return slope >= t - tol && slope <= t + tol;
    }
};

FitResult fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Fit log(y) against log(x); points must be strictly positive.
FitResult fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

} // namespace lamplab

#endif
