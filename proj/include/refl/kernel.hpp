#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "refl/types.hpp"

namespace refl {

using Complex = std::complex<double>;

/// Perpendicular wavevector inside a layer of SLD rho_n, relative to the
/// ambient medium rho_0, for ambient wavevector k0 = q/2:
///   k_n = sqrt(k0^2 - 4 pi (rho_n - rho_0))
/// The branch with non-negative imaginary part is taken so evanescent
/// waves decay into the stack.
inline Complex layer_wavevector(double k0, double rho_n, double rho_0) {
    const double radicand = k0 * k0 - 4.0 * std::numbers::pi * (rho_n - rho_0);
    Complex k = std::sqrt(Complex(radicand, 0.0));
    if (k.imag() < 0.0) k = -k;
    return k;
}

/// Fresnel coefficient between adjacent layers with Nevot-Croce Gaussian
/// roughness damping: r = (k_n - k_n1)/(k_n + k_n1) * exp(-2 k_n k_n1 sigma^2).
inline Complex fresnel_coefficient(Complex k_n, Complex k_n1, double sigma) {
    if (k_n == Complex(0.0) && k_n1 == Complex(0.0))
        throw std::domain_error("fresnel_coefficient: both wavevectors are zero");
    const Complex ratio = (k_n - k_n1) / (k_n + k_n1);
    return ratio * std::exp(-2.0 * k_n * k_n1 * sigma * sigma);
}

/// Exact (Abeles matrix) specular reflectivity with Nevot-Croce roughness.
/// Characteristic matrix per interface j (between layers j-1 and j):
///   M_j = [ e^{i b}      r e^{i b}  ]      b = k_{j-1} d_{j-1}, b = 0 for
///         [ r e^{-i b}   e^{-i b}   ]      the ambient medium
/// B = M_1 ... M_N, amplitude = B21/B11, R = |amplitude|^2.
inline ReflectivityCurve dynamical_reflectivity(const LayeredStructure& structure,
                                                const WavevectorGrid& grid) {
    structure.validate();
    grid.validate();
    const auto& layers = structure.layers;
    const std::size_t n_media = layers.size();
    const double rho0 = structure.ambient_sld();

    ReflectivityCurve curve;
    curve.q = grid.q;
    curve.r.resize(grid.q.size());

    const Complex I(0.0, 1.0);
    for (std::size_t iq = 0; iq < grid.q.size(); ++iq) {
        const double k0 = 0.5 * grid.q[iq];
        // B accumulated as the running product M_1 * ... * M_j.
        Complex b11(1.0), b12(0.0), b21(0.0), b22(1.0);
        Complex k_above = layer_wavevector(k0, layers[0].sld, rho0);
        for (std::size_t j = 1; j < n_media; ++j) {
            const Complex k_below = layer_wavevector(k0, layers[j].sld, rho0);
            const Complex r = fresnel_coefficient(k_above, k_below, layers[j].roughness_top);
            const Complex beta = (j == 1) ? Complex(0.0) : k_above * layers[j - 1].thickness;
            const Complex ep = std::exp(I * beta);
            const Complex em = std::exp(-I * beta);
            const Complex m11 = ep, m12 = r * ep, m21 = r * em, m22 = em;
            const Complex c11 = b11 * m11 + b12 * m21;
            const Complex c12 = b11 * m12 + b12 * m22;
            const Complex c21 = b21 * m11 + b22 * m21;
            const Complex c22 = b21 * m12 + b22 * m22;
            b11 = c11;
            b12 = c12;
            b21 = c21;
            b22 = c22;
            k_above = k_below;
        }
        const Complex amplitude = b21 / b11;
        const double reflectivity = std::norm(amplitude);
        if (!std::isfinite(reflectivity)) {
            std::ostringstream msg;
            msg << "dynamical_reflectivity: non-finite result at q = " << grid.q[iq];
            throw std::runtime_error(msg.str());
        }
        curve.r[iq] = reflectivity;
    }
    return curve;
}

/// Single-scattering (Born) reflectivity for a sharp multi-step profile:
///   R(q) = (16 pi^2 / q^4) | sum_j drho_j exp(-i q z_j) |^2
/// over the interfaces at depths z_j. Not clamped to 1; it diverges as
/// q -> 0, which is the known failure of the approximation.
inline ReflectivityCurve kinematic_reflectivity(const LayeredStructure& structure,
                                                const WavevectorGrid& grid) {
    structure.validate();
    grid.validate();
    const auto& layers = structure.layers;
    for (std::size_t j = 1; j < layers.size(); ++j)
        if (layers[j].roughness_top != 0.0)
            throw std::invalid_argument(
                "kinematic_reflectivity supports sharp interfaces only (sigma = 0)");

    // Interface j sits at the bottom of layer j-1; z = 0 at the first interface.
    std::vector<double> depth(layers.size() - 1);
    std::vector<double> contrast(layers.size() - 1);
    double z = 0.0;
    for (std::size_t j = 1; j < layers.size(); ++j) {
        depth[j - 1] = z;
        contrast[j - 1] = layers[j].sld - layers[j - 1].sld;
        if (j < layers.size() - 1) z += layers[j].thickness;
    }

    constexpr double sixteen_pi_sq =
        16.0 * std::numbers::pi * std::numbers::pi;
    ReflectivityCurve curve;
    curve.q = grid.q;
    curve.r.resize(grid.q.size());
    for (std::size_t iq = 0; iq < grid.q.size(); ++iq) {
        const double q = grid.q[iq];
        Complex sum(0.0);
        for (std::size_t j = 0; j < depth.size(); ++j)
            sum += contrast[j] * std::exp(Complex(0.0, -q * depth[j]));
        curve.r[iq] = sixteen_pi_sq / (q * q * q * q) * std::norm(sum);
    }
    return curve;
}

/// Depth profile rho(z) for display. Sharp interfaces become steps; rough
/// interfaces are drawn as error-function transitions of width sigma.
inline SLDProfile sld_profile(const LayeredStructure& structure, std::size_t n_points) {
    structure.validate();
    if (n_points < 2) throw std::invalid_argument("sld_profile: n_points must be >= 2");
    const auto& layers = structure.layers;

    std::vector<double> depth(layers.size() - 1);
    double z = 0.0;
    double max_sigma = 0.0;
    for (std::size_t j = 1; j < layers.size(); ++j) {
        depth[j - 1] = z;
        max_sigma = std::max(max_sigma, layers[j].roughness_top);
        if (j < layers.size() - 1) z += layers[j].thickness;
    }
    const double pad = 4.0 * std::max(max_sigma, 10.0);
    const double z_lo = depth.front() - pad;
    const double z_hi = depth.back() + pad;

    SLDProfile profile;
    profile.z.resize(n_points);
    profile.rho.resize(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
        const double zi =
            z_lo + (z_hi - z_lo) * static_cast<double>(i) / static_cast<double>(n_points - 1);
        double rho = layers.front().sld;
        for (std::size_t j = 1; j < layers.size(); ++j) {
            const double drho = layers[j].sld - layers[j - 1].sld;
            const double sigma = layers[j].roughness_top;
            double step;
            if (sigma > 0.0)
                step = 0.5 * (1.0 + std::erf((zi - depth[j - 1]) / (sigma * std::numbers::sqrt2)));
            else
                step = zi >= depth[j - 1] ? 1.0 : 0.0;
            rho += drho * step;
        }
        profile.z[i] = zi;
        profile.rho[i] = rho;
    }
    return profile;
}

/// Critical edge for total external reflection at positive SLD contrast.
inline double critical_edge(double rho_sub, double rho_amb) {
    return 4.0 * std::sqrt(std::numbers::pi * (rho_sub - rho_amb));
}

}  // namespace refl
