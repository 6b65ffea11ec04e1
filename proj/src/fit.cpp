#include "lamplab/fit.hpp"

#include <cmath>
#include <stdexcept>

namespace lamplab {

FitResult fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("fit_line: size mismatch");
    if (x.size() < 2) throw std::invalid_argument("fit_line: need at least 2 points");
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate x values");
    FitResult f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = (syy == 0.0) ? 1.0 : (sxy * sxy) / (sxx * syy);
    f.x_lo = x.front();
    f.x_hi = x.back();
    for (double xi : x) { f.x_lo = std::min(f.x_lo, xi); f.x_hi = std::max(f.x_hi, xi); }
    f.n_points = n;
    return f;
}

FitResult fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("fit_loglog: size mismatch");
    std::vector<double> lx, ly;
    lx.reserve(x.size());
    ly.reserve(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw std::invalid_argument("fit_loglog: nonpositive point");
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    FitResult f = fit_line(lx, ly);
    f.x_lo = std::exp(f.x_lo);
    f.x_hi = std::exp(f.x_hi);
    return f;
}

} // namespace lamplab
