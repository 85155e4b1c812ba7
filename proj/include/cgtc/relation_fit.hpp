#pragma once

#include <span>
#include <vector>

namespace cgtc {

/// One observed (rudder, heading change) pair.
struct RelationSample {
    double rudder_deg = 0.0;
    double heading_change_deg = 0.0;
};

/// Pearson correlation coefficient of two equally long series.
/// Throws LengthMismatch, InsufficientSamples (fewer than 2) or ZeroVariance.
double pearson(std::span<const double> xs, std::span<const double> ys);
double pearson(std::span<const RelationSample> samples);

struct PolyFit {
    /// Monomial coefficients, constant term first.
    std::vector<double> coefficients;
    std::vector<double> residuals;
    /// Population standard deviation of the residuals.
    double residual_stddev = 0.0;

    double operator()(double x) const;
};

/// Ordinary least squares polynomial fit in the monomial basis, solved by a
/// Householder QR factorization of the column-scaled Vandermonde matrix.
/// Degree must be in [1, 6] and strictly below the number of samples.
PolyFit fit_poly(std::span<const double> xs, std::span<const double> ys, int degree);
PolyFit fit_poly(std::span<const RelationSample> samples, int degree);

/// Heading change as a cubic in rudder angle:
/// heading = a*rudder^3 + b*rudder^2 + c*rudder + d, valid on [domain_lo, domain_hi].
/// Strictly increasing on its domain.
class CubicRelation {
public:
    /// Throws MonotonicityViolation if the derivative is not strictly positive
    /// on [domain_lo, domain_hi].
    CubicRelation(double a, double b, double c, double d, double domain_lo_deg, double domain_hi_deg);

    double a() const { return a_; }
    double b() const { return b_; }
    double c() const { return c_; }
    double d() const { return d_; }
    double domain_lo_deg() const { return lo_; }
    double domain_hi_deg() const { return hi_; }

    double heading_change(double rudder_deg) const;
    double slope(double rudder_deg) const;

    /// Heading changes reachable on the domain.
    double min_heading_change() const { return heading_change(lo_); }
    double max_heading_change() const { return heading_change(hi_); }

private:
    double a_, b_, c_, d_, lo_, hi_;
};

/// Cubic least squares fit over the samples; the domain is the sample hull.
CubicRelation fit_cubic_relation(std::span<const RelationSample> samples);

/// Rudder angle producing `heading_change_deg` under the relation, by bracketed
/// bisection to |residual| < 1e-6 deg. Throws OutOfRange when unreachable.
double invert_relation(const CubicRelation& rel, double heading_change_deg);

}  // namespace cgtc
