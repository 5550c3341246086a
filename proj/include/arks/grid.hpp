#ifndef ARKS_GRID_HPP_
#define ARKS_GRID_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "arks/errors.hpp"

namespace arks {

// Rectangular cell-centered grid, 1D or 2D. Homogeneous Neumann walls are
// realized by reflection ghosts (ghost = adjacent cell), which makes the
// zero-flux condition exact for the discrete operators below.
struct Grid {
    int dim = 2;
    int nx = 3, ny = 1;        // cells per axis (ny = 1 in 1D)
    double lx = 1.0, ly = 1.0; // extents (ly = 1 in 1D so volume = hx)
    double hx = 0.0, hy = 0.0;

    Grid() = default;
    static Grid make_1d(int cells, double extent);
    static Grid make_2d(int cells_x, int cells_y, double extent_x, double extent_y);

    std::size_t cell_count() const { return std::size_t(nx) * std::size_t(ny); }
    double cell_volume() const { return hx * hy; }
    double measure() const { return lx * ly; }  // |Omega|
    double x_center(int ix) const { return (ix + 0.5) * hx; }
    double y_center(int iy) const { return (iy + 0.5) * hy; }
    double min_spacing() const { return dim == 2 ? (hx < hy ? hx : hy) : hx; }

    bool operator==(const Grid& o) const = default;
};

// Cell-centered scalar field, row-major (index = iy*nx + ix).
struct ScalarField {
    Grid grid;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(const Grid& g, double fill = 0.0)
        : grid(g), values(g.cell_count(), fill) {}

    double& at(int ix, int iy = 0) { return values[std::size_t(iy) * grid.nx + ix]; }
    double at(int ix, int iy = 0) const { return values[std::size_t(iy) * grid.nx + ix]; }
    std::size_t size() const { return values.size(); }
};

enum class FaceScheme { ArithmeticMean, Upwind };

// Midpoint quadrature of the field over the domain.
double integral(const ScalarField& field);

// Integral of field^p, p >= 1; the field must be nonnegative up to a
// -1e-12 round-off tolerance (worse throws NegativeValue).
double lp_integral(const ScalarField& field, double p);

double linf_norm(const ScalarField& field);

// Second-order centered Laplacian with reflective ghosts. Integrates to
// zero against any field (discrete Neumann flux condition) and is
// symmetric in the plain dot product on a uniform grid.
ScalarField laplacian_neumann(const ScalarField& field);
void laplacian_neumann_into(const ScalarField& field, ScalarField& out);

// coeff * div(u grad phi) with face-centered fluxes u_face*(phi_R-phi_L)/h
// and zero flux through the walls. u_face is the arithmetic mean by
// default; Upwind selects the donor cell relative to the advective
// velocity -coeff*grad(phi).
ScalarField taxis_divergence(const ScalarField& u, const ScalarField& phi,
                             double coeff, FaceScheme scheme = FaceScheme::ArithmeticMean);
void taxis_divergence_into(const ScalarField& u, const ScalarField& phi, double coeff,
                           FaceScheme scheme, ScalarField& out);

// Solves (1 + dt*decay) x - dt*Lap(x) = rhs by conjugate gradients to
// relative residual 1e-10 (cap 10*cells, then NoConvergence). For
// decay = 0 the result is shifted by a constant so that the discrete mass
// of rhs is preserved exactly.
ScalarField solve_implicit_diffusion(const ScalarField& rhs, double dt, double decay);

// Plain-text portable graymap (P2), values linearly rescaled to 0..65535;
// the scale is recorded in a comment line "# scale min=... max=...".
// `header` lines are written as leading comments (each prefixed with "# ").
void write_pgm(const ScalarField& field, const std::string& path,
               const std::vector<std::string>& header = {});

// CSV with columns x[,y],value at cell centers.
void write_field_csv(const ScalarField& field, const std::string& path,
                     const std::vector<std::string>& header = {});

// Reads a field written by write_field_csv onto the given grid.
ScalarField read_field_csv(const Grid& g, const std::string& path);

}  // namespace arks

#endif  // ARKS_GRID_HPP_
