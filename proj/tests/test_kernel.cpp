#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <numbers>
#include <random>

#include "refl/kernel.hpp"

using namespace refl;
using Catch::Approx;

namespace {

constexpr double kRhoSi = 2.074e-6;

// Independent single-interface Fresnel oracle, written before the matrix
// code: R = |(k0 - k1)/(k0 + k1)|^2 with k1 = sqrt(k0^2 - 4 pi drho).
double fresnel_oracle(double q, double rho_sub, double rho_amb) {
    const double k0 = 0.5 * q;
    const std::complex<double> k1 =
        std::sqrt(std::complex<double>(k0 * k0 - 4.0 * std::numbers::pi * (rho_sub - rho_amb)));
    return std::norm((k0 - k1) / (k0 + k1));
}

LayeredStructure bare_si(double sigma = 0.0) {
    return LayeredStructure{{{"air", 0.0, 0.0, 0.0}, {"si", 0.0, kRhoSi, sigma}}};
}

}  // namespace

TEST_CASE("layer_wavevector") {
    SECTION("zero contrast leaves the wavevector unchanged") {
        const auto k = layer_wavevector(0.05, 1.5e-6, 1.5e-6);
        CHECK(k.real() == Approx(0.05));
        CHECK(k.imag() == 0.0);
    }
    SECTION("closed-form evaluation above the critical edge") {
        const auto k = layer_wavevector(0.05, kRhoSi, 0.0);
        CHECK(k.real() == Approx(0.0497386).margin(1e-6));
        CHECK(k.imag() == 0.0);
    }
    SECTION("purely imaginary below the critical edge") {
        // q = 0.004 < q_c = 4 sqrt(pi rho_Si) ~ 0.01021
        const double qc = critical_edge(kRhoSi, 0.0);
        CHECK(qc == Approx(0.01021).margin(1e-4));
        const auto k = layer_wavevector(0.002, kRhoSi, 0.0);
        CHECK(k.real() == 0.0);
        CHECK(k.imag() > 0.0);
    }
}

TEST_CASE("fresnel_coefficient") {
    SECTION("no contrast, no reflection") {
        const Complex k(0.03, 0.0);
        CHECK(std::abs(fresnel_coefficient(k, k, 5.0)) == 0.0);
    }
    SECTION("sharp-interface ratio") {
        const auto r = fresnel_coefficient({0.05, 0.0}, {0.049739, 0.0}, 0.0);
        CHECK(r.real() == Approx(2.617e-3).margin(2e-6));
        CHECK(r.imag() == 0.0);
    }
    SECTION("Gaussian damping is monotone in sigma") {
        double prev = 1.0;
        for (double sigma : {0.0, 2.0, 5.0, 10.0, 20.0}) {
            const double mag = std::abs(fresnel_coefficient({0.05, 0.0}, {0.048, 0.0}, sigma));
            CHECK(mag < prev + 1e-15);
            prev = mag;
        }
    }
    SECTION("degenerate zero wavevectors") {
        CHECK_THROWS_AS(fresnel_coefficient({0.0, 0.0}, {0.0, 0.0}, 0.0), std::domain_error);
    }
}

TEST_CASE("dynamical_reflectivity basics") {
    SECTION("zero contrast gives zero reflectivity") {
        LayeredStructure flat{{{"a", 0.0, 1.0e-6, 0.0}, {"b", 0.0, 1.0e-6, 0.0}}};
        const auto curve = dynamical_reflectivity(flat, WavevectorGrid::linspace(0.01, 0.3, 50));
        for (double r : curve.r) CHECK(r == 0.0);
    }
    SECTION("bare Si matches the Fresnel oracle") {
        const double qc = critical_edge(kRhoSi, 0.0);
        const auto grid = WavevectorGrid::linspace(qc / 2.0, 30.0 * qc, 400);
        const auto curve = dynamical_reflectivity(bare_si(), grid);
        for (std::size_t i = 0; i < grid.q.size(); ++i) {
            const double oracle = fresnel_oracle(grid.q[i], kRhoSi, 0.0);
            CHECK(curve.r[i] == Approx(oracle).epsilon(1e-10));
        }
    }
    SECTION("total reflection below the critical edge") {
        const double qc = critical_edge(kRhoSi, 0.0);
        const auto grid = WavevectorGrid::linspace(0.001, qc * 0.999, 100);
        const auto curve = dynamical_reflectivity(bare_si(), grid);
        for (double r : curve.r) CHECK(r == Approx(1.0).margin(1e-9));
    }
    SECTION("zero-thickness layer insertion leaves R unchanged") {
        LayeredStructure with_layer{{{"air", 0.0, 0.0, 0.0},
                                     {"ghost", 0.0, 4.5e-6, 0.0},
                                     {"si", 0.0, kRhoSi, 0.0}}};
        const auto grid = WavevectorGrid::linspace(0.005, 0.3, 200);
        const auto plain = dynamical_reflectivity(bare_si(), grid);
        const auto ghost = dynamical_reflectivity(with_layer, grid);
        for (std::size_t i = 0; i < grid.q.size(); ++i)
            CHECK(ghost.r[i] == Approx(plain.r[i]).epsilon(1e-12).margin(1e-12));
    }
}

TEST_CASE("dynamical_reflectivity invariants") {
    SECTION("energy conservation over randomized structures") {
        std::mt19937_64 rng(1234);
        std::uniform_real_distribution<double> rho(-1.0e-6, 1.0e-5);
        std::uniform_real_distribution<double> thick(0.0, 500.0);
        std::uniform_real_distribution<double> rough(0.0, 20.0);
        std::uniform_int_distribution<int> n_layers(2, 8);
        const auto grid = WavevectorGrid::linspace(0.002, 0.4, 120);
        for (int trial = 0; trial < 60; ++trial) {
            LayeredStructure structure;
            const int n = n_layers(rng);
            for (int j = 0; j < n; ++j)
                structure.layers.push_back({"l", thick(rng), rho(rng), rough(rng)});
            structure.layers.front().roughness_top = 0.0;
            const auto curve = dynamical_reflectivity(structure, grid);
            for (double r : curve.r) {
                CHECK(r >= 0.0);
                CHECK(r <= 1.0 + 1e-9);
            }
        }
    }
    SECTION("layer-split invariance") {
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const auto grid = WavevectorGrid::linspace(0.005, 0.3, 100);
        for (int trial = 0; trial < 20; ++trial) {
            const double d = 50.0 + 300.0 * unit(rng);
            const double rho_film = 1.0e-6 + 5.0e-6 * unit(rng);
            LayeredStructure whole{{{"air", 0.0, 0.0, 0.0},
                                    {"film", d, rho_film, 0.0},
                                    {"si", 0.0, kRhoSi, 0.0}}};
            const double split = d * unit(rng);
            LayeredStructure halves{{{"air", 0.0, 0.0, 0.0},
                                     {"film_a", split, rho_film, 0.0},
                                     {"film_b", d - split, rho_film, 0.0},
                                     {"si", 0.0, kRhoSi, 0.0}}};
            const auto r_whole = dynamical_reflectivity(whole, grid);
            const auto r_split = dynamical_reflectivity(halves, grid);
            for (std::size_t i = 0; i < grid.q.size(); ++i)
                CHECK(r_split.r[i] == Approx(r_whole.r[i]).epsilon(1e-10).margin(1e-14));
        }
    }
    SECTION("sigma -> 0 continuity") {
        const auto grid = WavevectorGrid::linspace(0.005, 0.3, 100);
        const auto sharp = dynamical_reflectivity(bare_si(0.0), grid);
        const auto tiny = dynamical_reflectivity(bare_si(1e-6), grid);
        for (std::size_t i = 0; i < grid.q.size(); ++i)
            CHECK(tiny.r[i] == Approx(sharp.r[i]).epsilon(1e-6));
    }
    SECTION("kinematic/dynamical agreement at high q") {
        const double qc = critical_edge(kRhoSi, 0.0);
        const auto grid = WavevectorGrid::linspace(10.0 * qc, 50.0 * qc, 100);
        const auto dyn = dynamical_reflectivity(bare_si(), grid);
        const auto kin = kinematic_reflectivity(bare_si(), grid);
        for (std::size_t i = 0; i < grid.q.size(); ++i)
            CHECK(std::abs(kin.r[i] - dyn.r[i]) / dyn.r[i] < 0.05);
    }
    SECTION("Kiessig fringe period 2 pi / d") {
        const double d = 200.0;
        LayeredStructure film{{{"air", 0.0, 0.0, 0.0},
                               {"film", d, 4.5e-6, 0.0},
                               {"si", 0.0, kRhoSi, 0.0}}};
        const auto grid = WavevectorGrid::linspace(0.03, 0.3, 20000);
        const auto curve = dynamical_reflectivity(film, grid);
        // refraction distorts the spacing near the critical edge, so
        // measure well above it
        std::vector<double> minima;
        for (std::size_t i = 1; i + 1 < curve.r.size(); ++i)
            if (curve.r[i] < curve.r[i - 1] && curve.r[i] < curve.r[i + 1] && curve.q[i] > 0.1)
                minima.push_back(curve.q[i]);
        REQUIRE(minima.size() >= 3);
        const double expected = 2.0 * std::numbers::pi / d;
        for (std::size_t i = 1; i < minima.size(); ++i)
            CHECK(minima[i] - minima[i - 1] == Approx(expected).epsilon(0.02));
    }
}

TEST_CASE("kinematic_reflectivity") {
    SECTION("bare Si closed form 16 pi^2 rho^2 / q^4") {
        const auto grid = WavevectorGrid::linspace(0.01, 0.3, 200);
        const auto curve = kinematic_reflectivity(bare_si(), grid);
        for (std::size_t i = 0; i < grid.q.size(); ++i) {
            const double q = grid.q[i];
            const double expected =
                16.0 * std::numbers::pi * std::numbers::pi * kRhoSi * kRhoSi / std::pow(q, 4);
            CHECK(curve.r[i] == Approx(expected).epsilon(1e-12));
        }
        // spot value re-derived by hand: q = 0.1 -> (4 pi rho / q^2)^2
        const auto spot = kinematic_reflectivity(bare_si(), WavevectorGrid{{0.1}});
        CHECK(spot.r[0] == Approx(6.79e-6).epsilon(1e-3));
    }
    SECTION("exceeds 1 below the breakdown point") {
        // solve 16 pi^2 rho^2 / q^4 = 1 -> q = sqrt(4 pi rho) ~ 5.105e-3
        const double breakdown = std::sqrt(4.0 * std::numbers::pi * kRhoSi);
        CHECK(breakdown == Approx(5.105e-3).margin(5e-6));
        const auto grid = WavevectorGrid::linspace(0.001, breakdown * 0.999, 50);
        const auto curve = kinematic_reflectivity(bare_si(), grid);
        for (double r : curve.r) CHECK(r > 1.0);
    }
    SECTION("zero contrast gives zero") {
        LayeredStructure flat{{{"a", 0.0, 2.0e-6, 0.0},
                               {"mid", 80.0, 2.0e-6, 0.0},
                               {"b", 0.0, 2.0e-6, 0.0}}};
        const auto curve = kinematic_reflectivity(flat, WavevectorGrid::linspace(0.01, 0.2, 40));
        for (double r : curve.r) CHECK(r == 0.0);
    }
    SECTION("roughness is rejected") {
        CHECK_THROWS_AS(
            kinematic_reflectivity(bare_si(3.0), WavevectorGrid::linspace(0.01, 0.2, 10)),
            std::invalid_argument);
    }
}

TEST_CASE("sld_profile") {
    SECTION("bare Si is a Heaviside step at z = 0") {
        const auto profile = sld_profile(bare_si(), 801);
        for (std::size_t i = 0; i < profile.z.size(); ++i) {
            if (profile.z[i] < 0.0)
                CHECK(profile.rho[i] == 0.0);
            else
                CHECK(profile.rho[i] == Approx(kRhoSi));
        }
    }
    SECTION("single layer gives steps at 0 and d") {
        LayeredStructure film{{{"air", 0.0, 0.0, 0.0},
                               {"film", 100.0, 4.5e-6, 0.0},
                               {"si", 0.0, kRhoSi, 0.0}}};
        const auto profile = sld_profile(film, 2001);
        for (std::size_t i = 0; i < profile.z.size(); ++i) {
            const double z = profile.z[i];
            const double expected = z < 0.0 ? 0.0 : (z < 100.0 ? 4.5e-6 : kRhoSi);
            CHECK(profile.rho[i] == Approx(expected).margin(1e-12));
        }
    }
    SECTION("rough interface midpoint is the mean of adjacent SLDs") {
        const auto profile = sld_profile(bare_si(5.0), 100001);
        // find the sample closest to z = 0
        std::size_t mid = 0;
        for (std::size_t i = 0; i < profile.z.size(); ++i)
            if (std::abs(profile.z[i]) < std::abs(profile.z[mid])) mid = i;
        CHECK(profile.rho[mid] == Approx(0.5 * kRhoSi).epsilon(1e-3));
    }
}
