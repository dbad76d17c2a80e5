#include "taunav/sampled.hpp"

#include <algorithm>
#include <cmath>

namespace taunav {

namespace {

constexpr double kGridPitch = 0.01;

bool in_phi_domain(double phi, double margin) {
    return std::abs(phi) <= std::numbers::pi / 4.0 - margin;
}

}  // namespace

Result<double> tau_diff_closed_form(double x, double phi, double R) {
    const double sp = std::sin(phi);
    const double cp = std::cos(phi);
    const double den = sp * sp - cp * cp;  // = -cos(2 phi)
    if (std::abs(den) < kSingularTol) return Error::Singular;
    return (2.0 * sp * (R + cp) - 2.0 * x * cp) / den;
}

Result<double> g_map(double phi, double x, double h, double k, double R) {
    const auto diff = tau_diff_closed_form(x, phi, R);
    if (!diff) return diff.error();
    return phi + h * k * *diff;
}

GPrimeFactors g_prime_factors(double phi, double x, double R) {
    const double num = -2.0 - 3.0 * R * std::cos(phi) + R * std::cos(3.0 * phi) +
                       3.0 * x * std::sin(phi) + x * std::sin(3.0 * phi);
    const double den = std::cos(phi) * std::cos(phi) - std::sin(phi) * std::sin(phi);
    return {num, den};
}

Result<double> g_prime(double phi, double x, double h, double k, double R) {
    // d/dphi of g_map, simplified: the trig identities
    // cos(phi) - cos(3 phi) = 4 sin^2(phi) cos(phi) and
    // 3 sin(phi) - sin(3 phi) = 4 sin^3(phi) collapse the quotient-rule
    // expansion to num / (2 den^2) with the factors below.
    const auto [num, den] = g_prime_factors(phi, x, R);
    if (std::abs(den) < kSingularTol) return Error::Singular;
    return 1.0 + h * k * num / (den * den);
}

IterationOutcome iterate_heading_map(double phi0, double x, const SampledConfig& config, int n) {
    IterationOutcome out;
    out.iterates.reserve(static_cast<std::size_t>(n) + 1);
    double phi = phi0;
    out.iterates.push_back(phi);
    if (!in_phi_domain(phi, config.phi_margin)) {
        out.error = Error::DomainEscape;
        return out;
    }
    for (int i = 0; i < n; ++i) {
        const auto next = g_map(phi, x, config.h, config.k, config.half_width);
        if (!next) {
            out.error = next.error();
            return out;
        }
        phi = *next;
        out.iterates.push_back(phi);
        if (!in_phi_domain(phi, config.phi_margin)) {
            out.error = Error::DomainEscape;
            return out;
        }
    }
    return out;
}

double grid_max_abs_g_prime_serial(double h, double k, double R, double phi_margin) {
    const double phi_max = std::numbers::pi / 4.0 - phi_margin;
    const int nx = static_cast<int>(std::floor(2.0 * R / kGridPitch));
    const int np = static_cast<int>(std::floor(2.0 * phi_max / kGridPitch));
    double worst = 0.0;
    for (int i = 0; i <= nx; ++i) {
        const double x = -R + i * kGridPitch;
        for (int j = 0; j <= np; ++j) {
            const double phi = -phi_max + j * kGridPitch;
            const auto gp = g_prime(phi, x, h, k, R);
            if (gp) worst = std::max(worst, std::abs(*gp));
        }
    }
    return worst;
}

double grid_max_abs_g_prime(double h, double k, double R, double phi_margin) {
    const double phi_max = std::numbers::pi / 4.0 - phi_margin;
    const int nx = static_cast<int>(std::floor(2.0 * R / kGridPitch));
    const int np = static_cast<int>(std::floor(2.0 * phi_max / kGridPitch));
    double worst = 0.0;
#pragma omp parallel for reduction(max : worst) schedule(static)
    for (int i = 0; i <= nx; ++i) {
        const double x = -R + i * kGridPitch;
        for (int j = 0; j <= np; ++j) {
            const double phi = -phi_max + j * kGridPitch;
            const auto gp = g_prime(phi, x, h, k, R);
            if (gp) worst = std::max(worst, std::abs(*gp));
        }
    }
    return worst;
}

double estimate_k_crit(double h, double R, double phi_margin) {
    auto contractive = [&](double k) { return grid_max_abs_g_prime(h, k, R, phi_margin) < 1.0; };
    double lo = 0.0;
    double hi = 1.0 / (4.0 * h);  // below the origin-only threshold 1/((1+R)h)
    while (contractive(hi)) {
        lo = hi;
        hi *= 2.0;
    }
    while (hi - lo > 1e-4) {
        const double mid = 0.5 * (lo + hi);
        (contractive(mid) ? lo : hi) = mid;
    }
    return lo;
}

}  // namespace taunav
