#pragma once

#include "helmdual/errors.hpp"

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace helmdual {

/// Uniform periodic grid on [-L, L)^N. Sample j along an axis sits at
/// x_j = -L + j*h with h = 2L/n; frequency index m in [-n/2, n/2) maps to
/// xi_m = pi*m/L (the Nyquist mode is assigned to -n/2).
struct Grid {
    int dim = 0;
    double half_width = 0.0;
    int samples = 0;

    double spacing() const { return 2.0 * half_width / samples; }
    double cell_volume() const;            // spacing()^dim
    std::size_t cell_count() const;        // samples^dim
    double coord(int j) const { return -half_width + j * spacing(); }
    /// DFT bin -> signed frequency integer in [-n/2, n/2)
    int freq_index(int k) const { return k < samples / 2 ? k : k - samples; }
    double freq(int k) const { return 3.14159265358979323846 * freq_index(k) / half_width; }
    double freq_spacing() const { return 3.14159265358979323846 / half_width; }

    bool operator==(const Grid&) const = default;
};

/// Pre: N in {3,4,5}, L > 0, n a power of two >= 16. Throws BadResolution.
Grid make_grid(int N, double L, int n);

/// Real-valued samples on a Grid, stored with axis 0 (x_1) fastest-varying:
/// flat = j_0 + n*j_1 + n^2*j_2 + ... Entries are validated finite on
/// construction; fields are treated as immutable afterwards.
class ScalarField {
public:
    ScalarField(Grid grid, std::vector<double> values);

    const Grid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }

    /// decompose a flat index into per-axis sample indices
    void unflatten(std::size_t flat, std::array<int, 8>& idx) const;
    /// physical coordinates of a flat index
    std::array<double, 8> point(std::size_t flat) const;

private:
    Grid grid_;
    std::vector<double> values_;
};

ScalarField constant_field(const Grid& grid, double value);

/// Quadrature L^r norm: ( sum |f_j|^r h^N )^{1/r}. Pre: r >= 1.
double lp_norm(const ScalarField& f, double r);

/// Quadrature inner product sum f_j g_j h^N (compensated summation).
double inner(const ScalarField& f, const ScalarField& g);

/// Exact cyclic shift by whole cells per axis: out(x) = f(x - a*h).
ScalarField shift(const ScalarField& f, const std::vector<long>& cells);

/// Shift by a physical displacement that must be a lattice vector; throws
/// NonLatticeShift if any component is not an integer multiple of h
/// (tolerance 1e-9 * h).
ScalarField shift_physical(const ScalarField& f, const std::vector<double>& displacement);

/// Pointwise sign(f)*|f|^s with 0 -> 0. Pre: s > 0.
ScalarField signed_power(const ScalarField& f, double s);

struct GaussianBump {
    double amplitude = 1.0;
    std::vector<double> center;
    double sigma = 1.0;
};

/// Coefficient function specification: either a positive constant or
/// floor-plus-gaussians alpha + sum A_i exp(-|x-c_i|^2/sigma_i^2).
struct CoefficientSpec {
    enum class Kind { Constant, FloorPlusGaussians } kind = Kind::Constant;
    double constant_value = 1.0;
    double floor = 0.0;
    std::vector<GaussianBump> gaussians;

    static CoefficientSpec constant(double c);
    static CoefficientSpec floor_plus_gaussians(double alpha, std::vector<GaussianBump> bumps);

    double evaluate(const double* x, int dim) const;
};

/// Sampled coefficient with its positivity floor, discrete sup and argmax set.
struct CoefficientField {
    ScalarField base;
    double floor = 0.0;       // alpha, > 0
    double sup_value = 0.0;   // max over grid
    std::vector<std::vector<double>> argmax_points; // physical coordinates

    const Grid& grid() const { return base.grid(); }
};

/// Sample `spec` on the grid, optionally with dilated argument x -> scale*x
/// (used for the eps-dilated coefficients). Throws FloorViolation if a
/// sample drops below the declared floor.
CoefficientField make_coefficient(const CoefficientSpec& spec, const Grid& grid, double scale = 1.0);

} // namespace helmdual
