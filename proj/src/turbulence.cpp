#include "aeroflex/turbulence.hpp"

#include <cstring>
#include <fstream>
#include <random>
#include <stdexcept>

#include <fftw3.h>

namespace aeroflex {

double von_karman_psd_2d(double k, double length_scale_m, double sigma_ms) {
    const double L = length_scale_m, s2 = sigma_ms * sigma_ms;
    const double lk2 = L * L * k * k;
    return 4.0 * s2 * L * L * lk2 / (9.0 * kPi * std::pow(1.0 + lk2, 7.0 / 3.0));
}

double TurbulenceField::sample(double x, double y) const {
    const double ex = nx * spacing_m, ey = ny * spacing_m;
    double fx = std::fmod(x, ex);
    if (fx < 0) fx += ex;
    double fy = std::fmod(y, ey);
    if (fy < 0) fy += ey;
    const double gx = fx / spacing_m, gy = fy / spacing_m;
    const int ix = int(gx), iy = int(gy);
    const double tx = gx - ix, ty = gy - iy;
    const int ix1 = (ix + 1) % nx, iy1 = (iy + 1) % ny;
    return (1 - tx) * (1 - ty) * at(ix, iy) + tx * (1 - ty) * at(ix1, iy) +
           (1 - tx) * ty * at(ix, iy1) + tx * ty * at(ix1, iy1);
}

TurbulenceField generate_turbulence(double extent_x_m, double extent_y_m,
                                    double spacing_m, double length_scale_m,
                                    double sigma_ms, uint64_t seed) {
    if (spacing_m <= 0.0 || extent_x_m <=  0.0 || extent_y_m <= 0.0)
        throw std::runtime_error("turbulence grid dimensions must be positive");
    TurbulenceField f;
    f.nx = std::max(2, int(std::lround(extent_x_m / spacing_m)));
    f.ny = std::max(2, int(std::lround(extent_y_m / spacing_m)));
    f.spacing_m = spacing_m;
    f.length_scale_m = length_scale_m;
    f.sigma_ms = sigma_ms;
    f.seed = seed;
    f.data.assign(size_t(f.nx) * f.ny, 0.0);
    if (sigma_ms == 0.0) return f;

    const int nx = f.nx, ny = f.ny, nyh = ny / 2 + 1;
    const size_t n = size_t(nx) * ny;

    // white Gaussian noise, shaped in the wavenumber domain
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> noise(n);
    for (auto& v : noise) v = gauss(rng);

    fftw_complex* spec =
        fftw_alloc_complex(size_t(nx) * nyh);
    fftw_plan fwd = fftw_plan_dft_r2c_2d(nx, ny, noise.data(), spec,
                                         FFTW_ESTIMATE);
    fftw_execute(fwd);
    fftw_destroy_plan(fwd);

    const double dkx = 2.0 * kPi / (nx * spacing_m);
    const double dky = 2.0 * kPi / (ny * spacing_m);
    for (int i = 0; i < nx; ++i) {
        const double kx = dkx * (i <= nx / 2 ? i : i - nx);
        for (int j = 0; j < nyh; ++j) {
            const double ky = dky * j;
            const double k = std::hypot(kx, ky);
            const double phi = von_karman_psd_2d(k, length_scale_m, sigma_ms);
            const double amp = std::sqrt(phi * dkx * dky / double(n));
            spec[size_t(i) * nyh + j][0] *= amp;
            spec[size_t(i) * nyh + j][1] *= amp;
        }
    }

    fftw_plan bwd = fftw_plan_dft_c2r_2d(nx, ny, spec, f.data.data(),
                                         FFTW_ESTIMATE);
    fftw_execute(bwd);
    fftw_destroy_plan(bwd);
    fftw_free(spec);
    return f;
}

namespace {
constexpr uint64_t kMagic = 0x47465755424c5446ull; // "FTLBUWFG"-ish tag
}

void save_turbulence(const TurbulenceField& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write turbulence file: " + path);
    uint64_t magic = kMagic, version = 1;
    int64_t nx = f.nx, ny = f.ny;
    out.write(reinterpret_cast<char*>(&magic), 8);
    out.write(reinterpret_cast<char*>(&version), 8);
    out.write(reinterpret_cast<char*>(&nx), 8);
    out.write(reinterpret_cast<char*>(&ny), 8);
    out.write(reinterpret_cast<const char*>(&f.spacing_m), 8);
    out.write(reinterpret_cast<const char*>(&f.length_scale_m), 8);
    out.write(reinterpret_cast<const char*>(&f.sigma_ms), 8);
    out.write(reinterpret_cast<const char*>(&f.seed), 8);
    out.write(reinterpret_cast<const char*>(f.data.data()),
              std::streamsize(f.data.size() * 8));
}

TurbulenceField load_turbulence(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open turbulence file: " + path);
    uint64_t magic = 0, version = 0;
    int64_t nx = 0, ny = 0;
    in.read(reinterpret_cast<char*>(&magic), 8);
    in.read(reinterpret_cast<char*>(&version), 8);
    if (magic != kMagic || version != 1)
        throw std::runtime_error("not a turbulence field file: " + path);
    in.read(reinterpret_cast<char*>(&nx), 8);
    in.read(reinterpret_cast<char*>(&ny), 8);
    TurbulenceField f;
    f.nx = int(nx);
    f.ny = int(ny);
    in.read(reinterpret_cast<char*>(&f.spacing_m), 8);
    in.read(reinterpret_cast<char*>(&f.length_scale_m), 8);
    in.read(reinterpret_cast<char*>(&f.sigma_ms), 8);
    in.read(reinterpret_cast<char*>(&f.seed), 8);
    f.data.resize(size_t(nx) * ny);
    in.read(reinterpret_cast<char*>(f.data.data()),
            std::streamsize(f.data.size() * 8));
    if (!in) throw std::runtime_error("truncated turbulence file: " + path);
    return f;
}

void export_turbulence_csv(const TurbulenceField& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write csv: " + path);
    out << "x_m,y_m,w_g_ms\n";
    for (int i = 0; i < f.nx; ++i)
        for (int j = 0; j < f.ny; ++j)
            out << i * f.spacing_m << "," << j * f.spacing_m << ","
                << f.at(i, j) << "\n";
}

std::vector<std::pair<double, double>> turbulence_psd(const TurbulenceField& f,
                                                      int n_bins) {
    const int nx = f.nx, ny = f.ny, nyh = ny / 2 + 1;
    const size_t n = size_t(nx) * ny;
    std::vector<double> work(f.data);
    fftw_complex* spec = fftw_alloc_complex(size_t(nx) * nyh);
    fftw_plan fwd =
        fftw_plan_dft_r2c_2d(nx, ny, work.data(), spec, FFTW_ESTIMATE);
    fftw_execute(fwd);
    fftw_destroy_plan(fwd);

    const double dkx = 2.0 * kPi / (nx * f.spacing_m);
    const double dky = 2.0 * kPi / (ny * f.spacing_m);
    const double kmax = std::min(dkx * (nx / 2), dky * (ny / 2));
    std::vector<double> sum(n_bins, 0.0);
    std::vector<int> cnt(n_bins, 0);
    for (int i = 0; i < nx; ++i) {
        const double kx = dkx * (i <= nx / 2 ? i : i - nx);
        for (int j = 0; j < nyh; ++j) {
            const double ky = dky * j;
            const double k = std::hypot(kx, ky);
            if (k <= 0.0 || k >= kmax) continue;
            const int bin = int(k / kmax * n_bins);
            const double re = spec[size_t(i) * nyh + j][0];
            const double im = spec[size_t(i) * nyh + j][1];
            // periodogram estimate of the continuous spectrum
            sum[bin] += (re * re + im * im) / (double(n) * dkx * dky * n);
            cnt[bin]++;
        }
    }
    std::vector<std::pair<double, double>> out;
    for (int b = 0; b < n_bins; ++b)
        if (cnt[b] > 0)
            out.emplace_back((b + 0.5) * kmax / n_bins, sum[b] / cnt[b]);
    return out;
}

} // namespace aeroflex
