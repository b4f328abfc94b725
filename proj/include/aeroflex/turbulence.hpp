#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aeroflex/types.hpp"

namespace aeroflex {

// Frozen two-dimensional field of vertical gust velocity w_g(x, y)
// (down positive), periodic on its extent, synthesized from the
// two-dimensional von Karman vertical-velocity spectrum.
struct TurbulenceField {
    int nx{0}, ny{0};
    double spacing_m{0.0};
    double length_scale_m{0.0};
    double sigma_ms{0.0};
    uint64_t seed{0};
    std::vector<double> data; // row-major, data[ix*ny + iy]

    double at(int ix, int iy) const { return data[size_t(ix) * ny + iy]; }
    // periodic bilinear interpolation
    double sample(double x, double y) const;
    double sample(const Vec3& p_inertial) const {
        return sample(p_inertial.x(), p_inertial.y());
    }
};

// Target spectrum value at wavenumber magnitude k [rad/m]; normalized so
// the double integral over the plane equals sigma^2.
double von_karman_psd_2d(double k, double length_scale_m, double sigma_ms);

TurbulenceField generate_turbulence(double extent_x_m, double extent_y_m,
                                    double spacing_m, double length_scale_m,
                                    double sigma_ms, uint64_t seed);

void save_turbulence(const TurbulenceField& f, const std::string& path);
TurbulenceField load_turbulence(const std::string& path);
void export_turbulence_csv(const TurbulenceField& f, const std::string& path);

// radially averaged periodogram: returns (k, psd) bin pairs, for spectrum
// verification
std::vector<std::pair<double, double>> turbulence_psd(const TurbulenceField& f,
                                                      int n_bins);

} // namespace aeroflex
