#ifndef TVPSV_DISTRIBUTIONS_HPP
#define TVPSV_DISTRIBUTIONS_HPP

#include <vector>

#include "tvpsv/rng.hpp"

namespace tvpsv {

// Generalized inverse Gaussian parameters for the density
//   f(x) proportional to x^(p-1) exp(-(a*x + b/x)/2),  x > 0.
// Valid combinations: p > 0 allows b = 0 (gamma boundary), p < 0 allows
// a = 0 (inverse gamma boundary), p = 0 requires a > 0 and b > 0.
struct GigParams {
  double p;
  double a;
  double b;
};

// Draw from the GIG law above. Boundary cases reduce to gamma or inverse
// gamma; the interior uses ratio-of-uniforms or a piecewise hat depending on
// (|p|, sqrt(a*b)), so no regime needs tuning by the caller.
double draw_gig(const GigParams& params, RngStream& rng);

// Gamma with density proportional to x^(shape-1) exp(-rate*x).
double draw_gamma(double shape, double rate, RngStream& rng);

// Inverse gamma with density proportional to x^(-shape-1) exp(-rate/x).
double draw_inverse_gamma(double shape, double rate, RngStream& rng);

// Inverse Gaussian (Wald) with the mean/shape parameterization.
double draw_inverse_gaussian(double mean, double shape, RngStream& rng);

double draw_exponential(double rate, RngStream& rng);
double draw_beta(double a, double b, RngStream& rng);

// Dirichlet draw via normalized gammas. All concentrations must be positive.
std::vector<double> draw_dirichlet(const std::vector<double>& conc,
                                   RngStream& rng);

// Log density of the Student-t location/scale family at x.
double student_t_logpdf(double x, double dof, double location, double scale);

// Log density of N(mean, var) at x.
double gaussian_logpdf(double x, double mean, double var);

// Numerically stable log(sum(exp(v))).
double log_sum_exp(const std::vector<double>& v);

double digamma(double x);
double trigamma(double x);
double log_beta(double a, double b);

}  // namespace tvpsv

#endif
