#include "helmdual/field.hpp"
#include "helmdual/numeric.hpp"

#include <cmath>
#include <limits>

namespace helmdual {

double Grid::cell_volume() const {
    double v = 1.0;
    for (int d = 0; d < dim; ++d) v *= spacing();
    return v;
}

std::size_t Grid::cell_count() const {
    std::size_t c = 1;
    for (int d = 0; d < dim; ++d) c *= static_cast<std::size_t>(samples);
    return c;
}

Grid make_grid(int N, double L, int n) {
    if (N < 3 || N > 5)
        throw BadResolution("make_grid: dimension must be in {3,4,5}");
    if (!(L > 0.0) || !std::isfinite(L))
        throw BadResolution("make_grid: half-width must be positive and finite");
    if (n < 16 || (n & (n - 1)) != 0)
        throw BadResolution("make_grid: samples per axis must be a power of two >= 16, got " +
                            std::to_string(n));
    return Grid{N, L, n};
}

ScalarField::ScalarField(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.cell_count())
        throw GridMismatch("ScalarField: value count " + std::to_string(values_.size()) +
                           " does not match grid cell count " + std::to_string(grid_.cell_count()));
    for (double v : values_)
        if (!std::isfinite(v))
            throw DomainError("ScalarField: non-finite sample");
}

void ScalarField::unflatten(std::size_t flat, std::array<int, 8>& idx) const {
    const int n = grid_.samples;
    for (int d = 0; d < grid_.dim; ++d) {
        idx[d] = static_cast<int>(flat % n);
        flat /= n;
    }
}

std::array<double, 8> ScalarField::point(std::size_t flat) const {
    std::array<int, 8> idx{};
    unflatten(flat, idx);
    std::array<double, 8> x{};
    for (int d = 0; d < grid_.dim; ++d) x[d] = grid_.coord(idx[d]);
    return x;
}

ScalarField constant_field(const Grid& grid, double value) {
    return ScalarField(grid, std::vector<double>(grid.cell_count(), value));
}

double lp_norm(const ScalarField& f, double r) {
    if (!(r >= 1.0))
        throw DomainError("lp_norm: requires r >= 1");
    CompensatedSum s;
    if (r == 2.0) {
        for (double v : f.values()) s.add(v * v);
    } else if (r == 1.0) {
        for (double v : f.values()) s.add(std::abs(v));
    } else {
        for (double v : f.values()) s.add(std::pow(std::abs(v), r));
    }
    return std::pow(s.value() * f.grid().cell_volume(), 1.0 / r);
}

double inner(const ScalarField& f, const ScalarField& g) {
    if (!(f.grid() == g.grid()))
        throw GridMismatch("inner: fields on different grids");
    CompensatedSum s;
    const auto& a = f.values();
    const auto& b = g.values();
    for (std::size_t i = 0; i < a.size(); ++i) s.add(a[i] * b[i]);
    return s.value() * f.grid().cell_volume();
}

ScalarField shift(const ScalarField& f, const std::vector<long>& cells) {
    const Grid& g = f.grid();
    if (static_cast<int>(cells.size()) != g.dim)
        throw NonLatticeShift("shift: displacement dimension mismatch");
    const int n = g.samples;
    std::vector<long> a(cells);
    for (auto& c : a) c = ((c % n) + n) % n;

    std::vector<double> out(f.size());
    std::array<int, 8> idx{};
    std::vector<std::size_t> stride(g.dim);
    std::size_t s = 1;
    for (int d = 0; d < g.dim; ++d) { stride[d] = s; s *= n; }
    for (std::size_t flat = 0; flat < out.size(); ++flat) {
        f.unflatten(flat, idx);
        std::size_t src = 0;
        for (int d = 0; d < g.dim; ++d) {
            int j = idx[d] - static_cast<int>(a[d]);
            if (j < 0) j += n;
            src += stride[d] * static_cast<std::size_t>(j);
        }
        out[flat] = f[src];
    }
    return ScalarField(g, std::move(out));
}

ScalarField shift_physical(const ScalarField& f, const std::vector<double>& displacement) {
    const Grid& g = f.grid();
    if (static_cast<int>(displacement.size()) != g.dim)
        throw NonLatticeShift("shift_physical: displacement dimension mismatch");
    const double h = g.spacing();
    std::vector<long> cells(g.dim);
    for (int d = 0; d < g.dim; ++d) {
        double c = displacement[d] / h;
        double r = std::round(c);
        if (std::abs(c - r) > 1e-9)
            throw NonLatticeShift("shift_physical: component " + std::to_string(d) +
                                  " is not a lattice multiple of h");
        cells[d] = static_cast<long>(r);
    }
    return shift(f, cells);
}

ScalarField signed_power(const ScalarField& f, double s) {
    if (!(s > 0.0))
        throw DomainError("signed_power: requires s > 0");
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = signed_pow(f[i], s);
    return ScalarField(f.grid(), std::move(out));
}

CoefficientSpec CoefficientSpec::constant(double c) {
    if (!(c > 0.0))
        throw DomainError("CoefficientSpec: constant coefficient must be positive");
    CoefficientSpec s;
    s.kind = Kind::Constant;
    s.constant_value = c;
    s.floor = c;
    return s;
}

CoefficientSpec CoefficientSpec::floor_plus_gaussians(double alpha, std::vector<GaussianBump> bumps) {
    if (!(alpha > 0.0))
        throw DomainError("CoefficientSpec: floor must be positive");
    for (const auto& b : bumps)
        if (!(b.amplitude > 0.0) || !(b.sigma > 0.0))
            throw DomainError("CoefficientSpec: gaussian amplitude and width must be positive");
    CoefficientSpec s;
    s.kind = Kind::FloorPlusGaussians;
    s.floor = alpha;
    s.gaussians = std::move(bumps);
    return s;
}

double CoefficientSpec::evaluate(const double* x, int dim) const {
    if (kind == Kind::Constant) return constant_value;
    double v = floor;
    for (const auto& b : gaussians) {
        double r2 = 0.0;
        for (int d = 0; d < dim; ++d) {
            double c = d < static_cast<int>(b.center.size()) ? b.center[d] : 0.0;
            double dx = x[d] - c;
            r2 += dx * dx;
        }
        v += b.amplitude * std::exp(-r2 / (b.sigma * b.sigma));
    }
    return v;
}

CoefficientField make_coefficient(const CoefficientSpec& spec, const Grid& grid, double scale) {
    std::vector<double> vals(grid.cell_count());
    const int n = grid.samples;
    double x[8];
    std::size_t flat = 0;
    std::array<int, 8> idx{};
    idx.fill(0);
    for (flat = 0; flat < vals.size(); ++flat) {
        std::size_t rem = flat;
        for (int d = 0; d < grid.dim; ++d) {
            idx[d] = static_cast<int>(rem % n);
            rem /= n;
            x[d] = scale * grid.coord(idx[d]);
        }
        vals[flat] = spec.evaluate(x, grid.dim);
    }

    double mx = vals[0];
    for (double v : vals) mx = std::max(mx, v);
    const double floor = spec.kind == CoefficientSpec::Kind::Constant ? spec.constant_value : spec.floor;
    for (double v : vals)
        if (v < floor * (1.0 - 1e-12))
            throw FloorViolation("make_coefficient: sample below declared floor");

    CoefficientField cf{ScalarField(grid, std::move(vals)), floor, mx, {}};
    // argmax set: samples within 1e-12 relative of the discrete max
    const double tol = std::abs(mx) * 1e-12;
    for (std::size_t i = 0; i < cf.base.size(); ++i) {
        if (cf.base[i] >= mx - tol) {
            auto pt = cf.base.point(i);
            cf.argmax_points.emplace_back(pt.begin(), pt.begin() + grid.dim);
        }
    }
    return cf;
}

} // namespace helmdual
