#pragma once

#include <vector>

#include "taunav/types.hpp"

namespace taunav {

// Sample-and-hold steering analysis in the normalized setting
// v = 1, f = 1, delta = epsilon = 1. The heading offset phi = theta - pi/2
// evolves, between samples, by a closed-form increment; iterating that
// increment with x frozen gives a one-dimensional map whose contraction
// on |phi| < pi/4 decides stability of the sampled loop.

struct SampledConfig {
    double h = 0.05;            // sampling interval, must divide the sim step grid
    double k = 1.0;             // gain
    double half_width = 1.0;    // R
    double phi_margin = 0.02;   // map domain is |phi| <= pi/4 - phi_margin
};

/// tau_l - tau_r as a function of (x, phi); the closed form the whole
/// geometry pipeline must reproduce.
Result<double> tau_diff_closed_form(double x, double phi, double R);

/// One step of the frozen-x heading map g(phi) = phi + h*k*tau_diff.
Result<double> g_map(double phi, double x, double h, double k, double R);

/// dg/dphi.
Result<double> g_prime(double phi, double x, double h, double k, double R);

/// Factors of the g' increment: g' = 1 + h k num / den^2. The numerator
/// is negative and the denominator positive on the whole domain, which
/// is what makes small gains contractive.
struct GPrimeFactors {
    double numerator;    // -2 - 3R cos(phi) + R cos(3 phi) + 3x sin(phi) + x sin(3 phi)
    double denominator;  // cos^2(phi) - sin^2(phi)
};
GPrimeFactors g_prime_factors(double phi, double x, double R);

struct IterationOutcome {
    std::vector<double> iterates;  // phi_0 .. phi_n (truncated on escape)
    Error error = Error::None;     // DomainEscape if an iterate left the domain
};
IterationOutcome iterate_heading_map(double phi0, double x, const SampledConfig& config, int n);

/// Max of |g'| over the (x, phi) grid, pitch 0.01. The serial and OpenMP
/// versions must agree exactly; the serial one is the reference.
double grid_max_abs_g_prime_serial(double h, double k, double R, double phi_margin);
double grid_max_abs_g_prime(double h, double k, double R, double phi_margin);

/// Largest gain for which the map is a contraction on the whole domain
/// (bisection to 1e-4).
double estimate_k_crit(double h, double R, double phi_margin);

}  // namespace taunav
