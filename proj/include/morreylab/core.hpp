#ifndef MORREYLAB_CORE_HPP
#define MORREYLAB_CORE_HPP

// Finite dyadic grids over a root cube centered at the origin, piecewise
// constant functions, and weights with exact cube masses.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace morreylab {

class resource_error : public std::runtime_error {
public:
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// Root cube [-2^{J-1}, 2^{J-1})^dim split into 2^{dim*L} cells of side 2^{J-L}.
struct DyadicGrid {
    int dim = 1;   // 1 or 2
    int J   = 0;   // root side 2^J
    int L   = 1;   // tree depth, finest level

    DyadicGrid() = default;
    DyadicGrid(int dim_, int J_, int L_);

    std::int64_t cells_per_side() const { return std::int64_t{1} << L; }
    std::int64_t cell_count() const { return std::int64_t{1} << (dim * L); }
    double side(int level) const;          // 2^{J-level}
    double cell_volume() const;            // side(L)^dim
    double volume(int level) const;        // side(level)^dim
    double root_lower() const;             // -2^{J-1}

    bool operator==(const DyadicGrid& o) const {
        return dim == o.dim && J == o.J && L == o.L;
    }
};

DyadicGrid build_grid(int dim, int J, int L);

// Cube at `level` with per-axis indices in [0, 2^level).
struct DyadicCube {
    int level = 0;
    std::array<std::int32_t, 2> idx{0, 0};

    static DyadicCube root() { return DyadicCube{}; }
    bool operator==(const DyadicCube& o) const {
        return level == o.level && idx == o.idx;
    }
};

struct CubeGeometry {
    double side = 0;
    double volume = 0;
    std::array<double, 2> center{0, 0};
    std::array<double, 2> lower{0, 0};
};

void check_cube(const DyadicGrid& g, const DyadicCube& q);
CubeGeometry cube_geometry(const DyadicGrid& g, const DyadicCube& q);

bool has_ancestor(const DyadicCube& q, int m);
DyadicCube ancestor(const DyadicCube& q, int m);
DyadicCube parent(const DyadicCube& q);
std::vector<DyadicCube> children(const DyadicGrid& g, const DyadicCube& q);
bool contains(const DyadicCube& outer, const DyadicCube& inner);

// All cubes of one level, row-major linear ids.
std::int64_t cubes_at_level(const DyadicGrid& g, int level);
std::int64_t cube_linear_id(const DyadicGrid& g, const DyadicCube& q);
DyadicCube cube_from_linear_id(const DyadicGrid& g, int level, std::int64_t id);

// Finest-cell range of a cube. In 1D the cells are one contiguous run;
// in 2D one run per x-slice. `fn` receives linear cell indices.
template <typename Fn>
void for_each_cell(const DyadicGrid& g, const DyadicCube& q, Fn&& fn) {
    const std::int64_t span = std::int64_t{1} << (g.L - q.level);
    if (g.dim == 1) {
        const std::int64_t base = std::int64_t{q.idx[0]} * span;
        for (std::int64_t c = base; c < base + span; ++c) fn(c);
    } else {
        const std::int64_t nx = std::int64_t{q.idx[0]} * span;
        const std::int64_t ny = std::int64_t{q.idx[1]} * span;
        const std::int64_t row = g.cells_per_side();
        for (std::int64_t i = nx; i < nx + span; ++i)
            for (std::int64_t j = ny; j < ny + span; ++j) fn(i * row + j);
    }
}

DyadicCube cell_cube(const DyadicGrid& g, std::int64_t cell);  // level-L cube of a cell
std::array<double, 2> cell_midpoint(const DyadicGrid& g, std::int64_t cell);
std::array<double, 2> cell_lower(const DyadicGrid& g, std::int64_t cell);

// Real value per finest cell, immutable after construction.
class GridFunction {
public:
    GridFunction(DyadicGrid g, std::vector<double> values);
    static GridFunction constant(const DyadicGrid& g, double c);
    static GridFunction indicator(const DyadicGrid& g, const DyadicCube& q);

    const DyadicGrid& grid() const { return grid_; }
    const std::vector<double>& values() const { return v_; }
    double operator[](std::int64_t cell) const { return v_[static_cast<std::size_t>(cell)]; }
    std::int64_t size() const { return static_cast<std::int64_t>(v_.size()); }

    GridFunction abs() const;
    GridFunction pow(double e) const;      // |f|^e
    GridFunction scaled(double s) const;
    GridFunction plus(const GridFunction& o) const;
    GridFunction minus(const GridFunction& o) const;
    GridFunction times(const GridFunction& o) const;
    GridFunction shifted(double c) const;  // f + c
    GridFunction restricted(const DyadicCube& q) const;  // f * chi_Q

private:
    DyadicGrid grid_;
    std::vector<double> v_;
};

// Per-cube sums of a cell array (level L down to 0); sums[level][cube_id].
class CubePyramid {
public:
    CubePyramid() = default;
    CubePyramid(const DyadicGrid& g, const std::vector<double>& cell_values);
    double sum(const DyadicGrid& g, const DyadicCube& q) const {
        return levels_[static_cast<std::size_t>(q.level)]
                      [static_cast<std::size_t>(cube_linear_id_cached(q))];
    }
    const std::vector<double>& level(int l) const { return levels_[static_cast<std::size_t>(l)]; }

private:
    std::int64_t cube_linear_id_cached(const DyadicCube& q) const;
    int dim_ = 1;
    std::vector<std::vector<double>> levels_;
};

// Strictly positive density per finest cell; cube masses are exact cell sums,
// additive over the tree by construction.
class Weight {
public:
    Weight(DyadicGrid g, std::vector<double> density);
    static Weight constant(const DyadicGrid& g, double c);

    const DyadicGrid& grid() const { return grid_; }
    const std::vector<double>& density() const { return d_; }
    double density_at(std::int64_t cell) const { return d_[static_cast<std::size_t>(cell)]; }

    double mass(const DyadicCube& q) const;             // w(Q)
    const CubePyramid& mass_pyramid() const { return pyramid_; }

    GridFunction as_function() const { return GridFunction(grid_, d_); }
    Weight cellwise_pow(double e) const;                // density^e as a new weight

private:
    DyadicGrid grid_;
    std::vector<double> d_;
    CubePyramid pyramid_;  // density * cell_volume
};

// Power weight |x|^alpha with exact 1D cell masses (antiderivative) and
// 2D masses by adaptive quadrature (relative tolerance 1e-10).
Weight weight_from_power(const DyadicGrid& g, double alpha);

double weight_mass(const Weight& w, const DyadicCube& q);

// Finest cells covering the concentric double 2Q. Requires 2Q to be a union
// of finest cells (level between 1 and L-1) and 2Q inside the root.
std::vector<std::int64_t> concentric_double(const DyadicGrid& g, const DyadicCube& q);
bool concentric_double_in_range(const DyadicGrid& g, const DyadicCube& q);

// CSV serialization: header "cell_index,value", row-major order, values in
// shortest round-trip decimal form.
void save_csv(const GridFunction& f, const std::string& path);
void save_csv(const Weight& w, const std::string& path);
GridFunction load_function_csv(const DyadicGrid& g, const std::string& path);
Weight load_weight_csv(const DyadicGrid& g, const std::string& path);

std::string format_double(double x);  // shortest round-trip decimal

}  // namespace morreylab

#endif
