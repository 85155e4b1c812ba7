#include "cgtc/relation_fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "cgtc/error.hpp"

namespace cgtc {

double pearson(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) {
        throw Error(ErrorCode::LengthMismatch,
                    "pearson: " + std::to_string(xs.size()) + " vs " + std::to_string(ys.size()) + " values");
    }
    if (xs.size() < 2) throw Error(ErrorCode::InsufficientSamples, "pearson needs at least 2 pairs");

    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;

    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw Error(ErrorCode::ZeroVariance, "pearson: a series is constant");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double pearson(std::span<const RelationSample> samples) {
    std::vector<double> xs, ys;
    xs.reserve(samples.size());
    ys.reserve(samples.size());
    for (const auto& s : samples) {
        xs.push_back(s.rudder_deg);
        ys.push_back(s.heading_change_deg);
    }
    return pearson(xs, ys);
}

double PolyFit::operator()(double x) const {
    double acc = 0.0;
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * x + *it;
    return acc;
}

PolyFit fit_poly(std::span<const double> xs, std::span<const double> ys, int degree) {
    if (xs.size() != ys.size()) throw Error(ErrorCode::LengthMismatch, "fit_poly: x and y lengths differ");
    if (degree < 1 || degree > 6) {
        throw Error(ErrorCode::InsufficientSamples, "fit_poly: degree must be in [1, 6], got " + std::to_string(degree));
    }
    const auto n = static_cast<Eigen::Index>(xs.size());
    const Eigen::Index m = degree + 1;
    if (n <= degree) {
        throw Error(ErrorCode::InsufficientSamples, "fit_poly: " + std::to_string(n) + " samples for degree " +
                                                        std::to_string(degree));
    }

    // Scale x into [-1, 1] so the Vandermonde columns stay comparable.
    double scale = 0.0;
    for (double x : xs) scale = std::max(scale, std::abs(x));
    if (scale == 0.0) scale = 1.0;

    Eigen::MatrixXd v(n, m);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double t = xs[static_cast<std::size_t>(i)] / scale;
        double p = 1.0;
        for (Eigen::Index j = 0; j < m; ++j) {
            v(i, j) = p;
            p *= t;
        }
        y(i) = ys[static_cast<std::size_t>(i)];
    }

    const Eigen::VectorXd beta = v.householderQr().solve(y);

    PolyFit fit;
    fit.coefficients.resize(static_cast<std::size_t>(m));
    double unscale = 1.0;
    for (Eigen::Index j = 0; j < m; ++j) {
        fit.coefficients[static_cast<std::size_t>(j)] = beta(j) / unscale;
        unscale *= scale;
    }

    fit.residuals.resize(xs.size());
    double mean = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        fit.residuals[i] = ys[i] - fit(xs[i]);
        mean += fit.residuals[i];
    }
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double r : fit.residuals) var += (r - mean) * (r - mean);
    fit.residual_stddev = std::sqrt(var / static_cast<double>(xs.size()));
    return fit;
}

PolyFit fit_poly(std::span<const RelationSample> samples, int degree) {
    std::vector<double> xs, ys;
    xs.reserve(samples.size());
    ys.reserve(samples.size());
    for (const auto& s : samples) {
        xs.push_back(s.rudder_deg);
        ys.push_back(s.heading_change_deg);
    }
    return fit_poly(xs, ys, degree);
}

CubicRelation::CubicRelation(double a, double b, double c, double d, double domain_lo_deg, double domain_hi_deg)
    : a_(a), b_(b), c_(c), d_(d), lo_(domain_lo_deg), hi_(domain_hi_deg) {
    if (!(lo_ < hi_)) throw Error(ErrorCode::MonotonicityViolation, "relation domain is empty");

    // The derivative is a quadratic: its minimum on the interval sits at an end
    // point or at the vertex. The 1 degree grid is a cross-check of the same.
    double worst = std::min(slope(lo_), slope(hi_));
    if (a_ != 0.0) {
        const double vertex = -b_ / (3.0 * a_);
        if (vertex > lo_ && vertex < hi_) worst = std::min(worst, slope(vertex));
    }
    for (double x = std::ceil(lo_); x <= hi_; x += 1.0) worst = std::min(worst, slope(x));
    if (!(worst > 0.0)) {
        throw Error(ErrorCode::MonotonicityViolation,
                    "heading change is not strictly increasing in rudder (min slope " + std::to_string(worst) + ")");
    }
}

double CubicRelation::heading_change(double r) const { return ((a_ * r + b_) * r + c_) * r + d_; }

double CubicRelation::slope(double r) const { return (3.0 * a_ * r + 2.0 * b_) * r + c_; }

CubicRelation fit_cubic_relation(std::span<const RelationSample> samples) {
    const PolyFit fit = fit_poly(samples, 3);
    double lo = samples.front().rudder_deg, hi = lo;
    for (const auto& s : samples) {
        lo = std::min(lo, s.rudder_deg);
        hi = std::max(hi, s.rudder_deg);
    }
    const auto& k = fit.coefficients;
    return CubicRelation(k[3], k[2], k[1], k[0], lo, hi);
}

double invert_relation(const CubicRelation& rel, double heading_change_deg) {
    double lo = rel.domain_lo_deg();
    double hi = rel.domain_hi_deg();
    const double f_lo = rel.heading_change(lo) - heading_change_deg;
    const double f_hi = rel.heading_change(hi) - heading_change_deg;
    if (f_lo > 0.0 || f_hi < 0.0) {
        throw Error(ErrorCode::OutOfRange, "heading change " + std::to_string(heading_change_deg) +
                                               " deg outside reachable range [" +
                                               std::to_string(rel.min_heading_change()) + ", " +
                                               std::to_string(rel.max_heading_change()) + "]");
    }
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;

    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double f = rel.heading_change(mid) - heading_change_deg;
        if (std::abs(f) < 1e-9 || hi - lo < 1e-12) return mid;
        if (f < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace cgtc
