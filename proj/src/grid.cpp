#include "arks/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace arks {

Grid Grid::make_1d(int cells, double extent) {
    if (cells < 3) throw DomainError("grid needs >= 3 cells per axis");
    if (!(extent > 0.0)) throw DomainError("grid extent must be > 0");
    Grid g;
    g.dim = 1;
    g.nx = cells;
    g.ny = 1;
    g.lx = extent;
    g.ly = 1.0;
    g.hx = extent / cells;
    g.hy = 1.0;
    return g;
}

Grid Grid::make_2d(int cells_x, int cells_y, double extent_x, double extent_y) {
    if (cells_x < 3 || cells_y < 3) throw DomainError("grid needs >= 3 cells per axis");
    if (!(extent_x > 0.0) || !(extent_y > 0.0)) throw DomainError("grid extent must be > 0");
    Grid g;
    g.dim = 2;
    g.nx = cells_x;
    g.ny = cells_y;
    g.lx = extent_x;
    g.ly = extent_y;
    g.hx = extent_x / cells_x;
    g.hy = extent_y / cells_y;
    return g;
}

double integral(const ScalarField& field) {
    double s = 0.0;
    for (double v : field.values) s += v;
    return s * field.grid.cell_volume();
}

double lp_integral(const ScalarField& field, double p) {
    if (!(p >= 1.0)) throw DomainError("lp_integral requires p >= 1");
    constexpr double kNegTol = 1e-12;
    double s = 0.0;
    for (double v : field.values) {
        if (v < -kNegTol)
            throw NegativeValue("lp_integral: cell value " + std::to_string(v));
        if (v > 0.0) s += std::pow(v, p);
    }
    return s * field.grid.cell_volume();
}

double linf_norm(const ScalarField& field) {
    double m = 0.0;
    for (double v : field.values) m = std::max(m, std::abs(v));
    return m;
}

void laplacian_neumann_into(const ScalarField& field, ScalarField& out) {
    const Grid& g = field.grid;
    if (out.grid != g) out = ScalarField(g);
    const double* f = field.values.data();
    double* o = out.values.data();
    const int nx = g.nx, ny = g.ny;
    const double ax = 1.0 / (g.hx * g.hx);
    const double ay = 1.0 / (g.hy * g.hy);

    for (int iy = 0; iy < ny; ++iy) {
        const double* row = f + std::size_t(iy) * nx;
        double* orow = o + std::size_t(iy) * nx;
        // x-direction, reflection ghosts at both walls
        orow[0] = ax * (row[1] - row[0]);
        for (int ix = 1; ix < nx - 1; ++ix)
            orow[ix] = ax * (row[ix - 1] - 2.0 * row[ix] + row[ix + 1]);
        orow[nx - 1] = ax * (row[nx - 2] - row[nx - 1]);
    }
    if (g.dim == 2) {
        for (int iy = 0; iy < ny; ++iy) {
            const double* row = f + std::size_t(iy) * nx;
            const double* dn = f + std::size_t(iy == 0 ? 0 : iy - 1) * nx;
            const double* up = f + std::size_t(iy == ny - 1 ? ny - 1 : iy + 1) * nx;
            double* orow = o + std::size_t(iy) * nx;
            for (int ix = 0; ix < nx; ++ix)
                orow[ix] += ay * (dn[ix] - 2.0 * row[ix] + up[ix]);
        }
    }
}

ScalarField laplacian_neumann(const ScalarField& field) {
    ScalarField out(field.grid);
    laplacian_neumann_into(field, out);
    return out;
}

void taxis_divergence_into(const ScalarField& u, const ScalarField& phi, double coeff,
                           FaceScheme scheme, ScalarField& out) {
    const Grid& g = u.grid;
    if (phi.grid != g) throw GridMismatch();
    if (out.grid != g) out = ScalarField(g);
    std::fill(out.values.begin(), out.values.end(), 0.0);

    const double* uv = u.values.data();
    const double* pv = phi.values.data();
    double* o = out.values.data();
    const int nx = g.nx, ny = g.ny;
    const bool upwind = scheme == FaceScheme::Upwind;

    // x-faces; boundary faces carry zero flux, interior flux telescopes.
    const double cx = coeff / (g.hx * g.hx);
    for (int iy = 0; iy < ny; ++iy) {
        const std::size_t off = std::size_t(iy) * nx;
        double flux_left = 0.0;
        for (int ix = 0; ix < nx; ++ix) {
            double flux_right = 0.0;
            if (ix + 1 < nx) {
                const double dphi = pv[off + ix + 1] - pv[off + ix];
                double uf;
                if (upwind)
                    uf = (coeff * dphi < 0.0) ? uv[off + ix] : uv[off + ix + 1];
                else
                    uf = 0.5 * (uv[off + ix] + uv[off + ix + 1]);
                flux_right = uf * dphi;
            }
            o[off + ix] += cx * (flux_right - flux_left);
            flux_left = flux_right;
        }
    }
    if (g.dim == 2) {
        const double cy = coeff / (g.hy * g.hy);
        for (int ix = 0; ix < nx; ++ix) {
            double flux_down = 0.0;
            for (int iy = 0; iy < ny; ++iy) {
                const std::size_t c = std::size_t(iy) * nx + ix;
                double flux_up = 0.0;
                if (iy + 1 < ny) {
                    const std::size_t n = c + nx;
                    const double dphi = pv[n] - pv[c];
                    double uf;
                    if (upwind)
                        uf = (coeff * dphi < 0.0) ? uv[c] : uv[n];
                    else
                        uf = 0.5 * (uv[c] + uv[n]);
                    flux_up = uf * dphi;
                }
                o[c] += cy * (flux_up - flux_down);
                flux_down = flux_up;
            }
        }
    }
}

ScalarField taxis_divergence(const ScalarField& u, const ScalarField& phi,
                             double coeff, FaceScheme scheme) {
    ScalarField out(u.grid);
    taxis_divergence_into(u, phi, coeff, scheme, out);
    return out;
}

namespace {

// out = a*x - dt*Lap(x), fused single pass.
void helmholtz_apply(const ScalarField& x, double a, double dt, ScalarField& out) {
    const Grid& g = x.grid;
    const double* f = x.values.data();
    double* o = out.values.data();
    const int nx = g.nx, ny = g.ny;
    const double ax = dt / (g.hx * g.hx);

    for (int iy = 0; iy < ny; ++iy) {
        const double* row = f + std::size_t(iy) * nx;
        double* orow = o + std::size_t(iy) * nx;
        orow[0] = a * row[0] - ax * (row[1] - row[0]);
        for (int ix = 1; ix < nx - 1; ++ix)
            orow[ix] = a * row[ix] - ax * (row[ix - 1] - 2.0 * row[ix] + row[ix + 1]);
        orow[nx - 1] = a * row[nx - 1] - ax * (row[nx - 2] - row[nx - 1]);
    }
    if (g.dim == 2) {
        const double ay = dt / (g.hy * g.hy);
        for (int iy = 0; iy < ny; ++iy) {
            const double* row = f + std::size_t(iy) * nx;
            const double* dn = f + std::size_t(iy == 0 ? 0 : iy - 1) * nx;
            const double* up = f + std::size_t(iy == ny - 1 ? ny - 1 : iy + 1) * nx;
            double* orow = o + std::size_t(iy) * nx;
            for (int ix = 0; ix < nx; ++ix)
                orow[ix] -= ay * (dn[ix] - 2.0 * row[ix] + up[ix]);
        }
    }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

ScalarField solve_implicit_diffusion(const ScalarField& rhs, double dt, double decay) {
    if (!(dt > 0.0)) throw DomainError("dt must be > 0");
    if (decay < 0.0) throw DomainError("decay must be >= 0");

    const Grid& g = rhs.grid;
    const std::size_t n = g.cell_count();
    const double a = 1.0 + dt * decay;
    constexpr double kRelTol = 1e-10;

    ScalarField x(g);
    // Constants are eigenfunctions with eigenvalue a; this guess is exact
    // for uniform right-hand sides.
    for (std::size_t i = 0; i < n; ++i) x.values[i] = rhs.values[i] / a;

    const double bnorm2 = dot(rhs.values, rhs.values);
    if (bnorm2 == 0.0) {
        std::fill(x.values.begin(), x.values.end(), 0.0);
        return x;
    }
    const double stop2 = kRelTol * kRelTol * bnorm2;

    struct Scratch {
        ScalarField ap, r, p;
    };
    static thread_local Scratch s;
    if (s.ap.grid != g) {
        s.ap = ScalarField(g);
        s.r = ScalarField(g);
        s.p = ScalarField(g);
    }
    ScalarField& ap = s.ap;
    ScalarField& r = s.r;
    ScalarField& p = s.p;
    helmholtz_apply(x, a, dt, ap);
    for (std::size_t i = 0; i < n; ++i) r.values[i] = rhs.values[i] - ap.values[i];
    double rr = dot(r.values, r.values);

    if (rr > stop2) {
        p = r;
        const std::size_t cap = 10 * n;
        std::size_t it = 0;
        for (;; ++it) {
            if (it >= cap)
                throw NoConvergence("implicit diffusion solve: iteration cap " +
                                    std::to_string(cap));
            helmholtz_apply(p, a, dt, ap);
            const double alpha = rr / dot(p.values, ap.values);
            for (std::size_t i = 0; i < n; ++i) {
                x.values[i] += alpha * p.values[i];
                r.values[i] -= alpha * ap.values[i];
            }
            const double rr_new = dot(r.values, r.values);
            if (rr_new <= stop2) break;
            const double beta = rr_new / rr;
            rr = rr_new;
            for (std::size_t i = 0; i < n; ++i) p.values[i] = r.values[i] + beta * p.values[i];
        }
    }

    if (decay == 0.0) {
        // Pure diffusion preserves discrete mass; shift the constant mode
        // so the identity holds exactly rather than to solver tolerance.
        double sb = 0.0, sx = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sb += rhs.values[i];
            sx += x.values[i];
        }
        const double shift = (sb - sx) / double(n);
        for (std::size_t i = 0; i < n; ++i) x.values[i] += shift;
    }
    return x;
}

namespace {

void write_header_comments(std::ofstream& os, const std::vector<std::string>& header) {
    for (const auto& line : header) os << "# " << line << '\n';
}

}  // namespace

void write_pgm(const ScalarField& field, const std::string& path,
               const std::vector<std::string>& header) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path + " for writing");
    double lo = field.values.empty() ? 0.0 : field.values[0];
    double hi = lo;
    for (double v : field.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = hi - lo;
    os << "P2\n";
    write_header_comments(os, header);
    os.precision(17);
    os << "# scale min=" << lo << " max=" << hi << " maxval=65535\n";
    os << field.grid.nx << ' ' << field.grid.ny << "\n65535\n";
    for (int iy = 0; iy < field.grid.ny; ++iy) {
        for (int ix = 0; ix < field.grid.nx; ++ix) {
            const double v = field.at(ix, iy);
            const int q = span > 0.0
                              ? int(std::lround((v - lo) / span * 65535.0))
                              : 0;
            os << q << (ix + 1 == field.grid.nx ? '\n' : ' ');
        }
    }
}

void write_field_csv(const ScalarField& field, const std::string& path,
                     const std::vector<std::string>& header) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path + " for writing");
    write_header_comments(os, header);
    os.precision(17);
    const Grid& g = field.grid;
    if (g.dim == 1) {
        os << "x,value\n";
        for (int ix = 0; ix < g.nx; ++ix)
            os << g.x_center(ix) << ',' << field.at(ix) << '\n';
    } else {
        os << "x,y,value\n";
        for (int iy = 0; iy < g.ny; ++iy)
            for (int ix = 0; ix < g.nx; ++ix)
                os << g.x_center(ix) << ',' << g.y_center(iy) << ',' << field.at(ix, iy)
                   << '\n';
    }
}

ScalarField read_field_csv(const Grid& g, const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open " + path);
    ScalarField f(g);
    std::string line;
    std::size_t idx = 0;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (line.find("value") != std::string::npos) continue;  // column header
        const auto last_comma = line.rfind(',');
        if (last_comma == std::string::npos) throw Error(path + ": malformed CSV row");
        if (idx >= f.values.size()) throw Error(path + ": more rows than grid cells");
        f.values[idx++] = std::stod(line.substr(last_comma + 1));
    }
    if (idx != f.values.size())
        throw Error(path + ": expected " + std::to_string(f.values.size()) +
                    " rows, got " + std::to_string(idx));
    return f;
}

}  // namespace arks
