#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace refl {

/// One slab in a layered scattering-length-density model.
/// `roughness_top` is the Gaussian width of the interface between this
/// layer and the one above it (ignored for the ambient medium).
struct Layer {
    std::string name;
    double thickness = 0.0;      // d, Angstrom
    double sld = 0.0;            // rho, Angstrom^-2
    double roughness_top = 0.0;  // sigma, Angstrom

    void validate() const {
        if (!(thickness >= 0.0))
            throw std::invalid_argument("layer '" + name + "': thickness must be >= 0");
        if (!(roughness_top >= 0.0))
            throw std::invalid_argument("layer '" + name + "': roughness must be >= 0");
        if (!std::isfinite(sld))
            throw std::invalid_argument("layer '" + name + "': sld must be finite");
    }
};

/// Ordered stack of layers, index 0 = ambient (semi-infinite, thickness
/// ignored), last index = substrate (semi-infinite, thickness ignored).
struct LayeredStructure {
    std::vector<Layer> layers;

    void validate() const {
        if (layers.size() < 2)
            throw std::invalid_argument("structure needs at least ambient and substrate");
        for (const auto& layer : layers) layer.validate();
    }

    std::size_t interface_count() const { return layers.size() - 1; }
    double ambient_sld() const { return layers.front().sld; }
    double substrate_sld() const { return layers.back().sld; }
};

/// Strictly increasing, strictly positive momentum-transfer grid (Angstrom^-1).
struct WavevectorGrid {
    std::vector<double> q;

    void validate() const {
        if (q.empty()) throw std::invalid_argument("empty q grid");
        double prev = 0.0;
        for (double value : q) {
            if (!std::isfinite(value) || value <= prev)
                throw std::invalid_argument("q grid must be finite, positive, strictly increasing");
            prev = value;
        }
    }

    static WavevectorGrid linspace(double qmin, double qmax, std::size_t n) {
        if (n < 2 || qmin <= 0.0 || qmax <= qmin)
            throw std::invalid_argument("bad q grid request");
        WavevectorGrid grid;
        grid.q.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            grid.q[i] = qmin + (qmax - qmin) * static_cast<double>(i) / static_cast<double>(n - 1);
        return grid;
    }
};

/// Reflectivity versus q, either measured (with uncertainties) or modelled.
struct ReflectivityCurve {
    std::vector<double> q;
    std::vector<double> r;
    std::optional<std::vector<double>> dr;

    void validate() const {
        if (q.size() != r.size())
            throw std::invalid_argument("q/r length mismatch");
        if (dr && dr->size() != q.size())
            throw std::invalid_argument("q/dr length mismatch");
        if (dr)
            for (double value : *dr)
                if (!(value > 0.0)) throw std::invalid_argument("dr must be positive");
    }
};

/// Scattering length density depth profile, for display.
struct SLDProfile {
    std::vector<double> z;    // Angstrom, increasing into the substrate
    std::vector<double> rho;  // Angstrom^-2
};

}  // namespace refl
