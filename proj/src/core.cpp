#include "morreylab/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace morreylab {

DyadicGrid::DyadicGrid(int dim_, int J_, int L_) : dim(dim_), J(J_), L(L_) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("dim must be 1 or 2");
    if (L < 1) throw std::invalid_argument("depth L must be >= 1");
    if (dim * L > 26) throw resource_error("grid exceeds 2^26 cell cap");
}

double DyadicGrid::side(int level) const { return std::ldexp(1.0, J - level); }
double DyadicGrid::cell_volume() const { return volume(L); }
double DyadicGrid::volume(int level) const {
    double s = side(level);
    return dim == 1 ? s : s * s;
}
double DyadicGrid::root_lower() const { return -std::ldexp(1.0, J - 1); }

DyadicGrid build_grid(int dim, int J, int L) { return DyadicGrid(dim, J, L); }

void check_cube(const DyadicGrid& g, const DyadicCube& q) {
    if (q.level < 0 || q.level > g.L) throw std::invalid_argument("cube level out of range");
    const std::int64_t n = std::int64_t{1} << q.level;
    for (int a = 0; a < g.dim; ++a)
        if (q.idx[static_cast<std::size_t>(a)] < 0 || q.idx[static_cast<std::size_t>(a)] >= n)
            throw std::invalid_argument("cube index out of range");
}

CubeGeometry cube_geometry(const DyadicGrid& g, const DyadicCube& q) {
    check_cube(g, q);
    CubeGeometry geo;
    geo.side = g.side(q.level);
    geo.volume = g.volume(q.level);
    for (int a = 0; a < g.dim; ++a) {
        geo.lower[static_cast<std::size_t>(a)] =
            g.root_lower() + q.idx[static_cast<std::size_t>(a)] * geo.side;
        geo.center[static_cast<std::size_t>(a)] =
            geo.lower[static_cast<std::size_t>(a)] + geo.side / 2;
    }
    return geo;
}

bool has_ancestor(const DyadicCube& q, int m) { return m >= 0 && m <= q.level; }

DyadicCube ancestor(const DyadicCube& q, int m) {
    if (!has_ancestor(q, m)) throw std::invalid_argument("ancestor level out of range");
    DyadicCube a;
    a.level = q.level - m;
    a.idx = {q.idx[0] >> m, q.idx[1] >> m};
    return a;
}

DyadicCube parent(const DyadicCube& q) { return ancestor(q, 1); }

std::vector<DyadicCube> children(const DyadicGrid& g, const DyadicCube& q) {
    if (q.level >= g.L) return {};
    std::vector<DyadicCube> out;
    const int n = 1 << (g.dim - 1);
    out.reserve(static_cast<std::size_t>(2 * n));
    for (int dx = 0; dx < 2; ++dx)
        for (int dy = 0; dy < (g.dim == 2 ? 2 : 1); ++dy) {
            DyadicCube c;
            c.level = q.level + 1;
            c.idx = {2 * q.idx[0] + dx, 2 * q.idx[1] + dy};
            out.push_back(c);
        }
    return out;
}

bool contains(const DyadicCube& outer, const DyadicCube& inner) {
    if (outer.level > inner.level) return false;
    const int m = inner.level - outer.level;
    return (inner.idx[0] >> m) == outer.idx[0] && (inner.idx[1] >> m) == outer.idx[1];
}

std::int64_t cubes_at_level(const DyadicGrid& g, int level) {
    return std::int64_t{1} << (g.dim * level);
}

std::int64_t cube_linear_id(const DyadicGrid& g, const DyadicCube& q) {
    if (g.dim == 1) return q.idx[0];
    return (std::int64_t{q.idx[0]} << q.level) + q.idx[1];
}

DyadicCube cube_from_linear_id(const DyadicGrid& g, int level, std::int64_t id) {
    DyadicCube q;
    q.level = level;
    if (g.dim == 1) {
        q.idx = {static_cast<std::int32_t>(id), 0};
    } else {
        q.idx = {static_cast<std::int32_t>(id >> level),
                 static_cast<std::int32_t>(id & ((std::int64_t{1} << level) - 1))};
    }
    return q;
}

DyadicCube cell_cube(const DyadicGrid& g, std::int64_t cell) {
    return cube_from_linear_id(g, g.L, cell);
}

std::array<double, 2> cell_lower(const DyadicGrid& g, std::int64_t cell) {
    DyadicCube c = cell_cube(g, cell);
    CubeGeometry geo = cube_geometry(g, c);
    return geo.lower;
}

std::array<double, 2> cell_midpoint(const DyadicGrid& g, std::int64_t cell) {
    DyadicCube c = cell_cube(g, cell);
    CubeGeometry geo = cube_geometry(g, c);
    return geo.center;
}

GridFunction::GridFunction(DyadicGrid g, std::vector<double> values)
    : grid_(g), v_(std::move(values)) {
    if (static_cast<std::int64_t>(v_.size()) != g.cell_count())
        throw std::invalid_argument("value array size mismatch");
}

GridFunction GridFunction::constant(const DyadicGrid& g, double c) {
    return GridFunction(g, std::vector<double>(static_cast<std::size_t>(g.cell_count()), c));
}

GridFunction GridFunction::indicator(const DyadicGrid& g, const DyadicCube& q) {
    check_cube(g, q);
    std::vector<double> v(static_cast<std::size_t>(g.cell_count()), 0.0);
    for_each_cell(g, q, [&](std::int64_t c) { v[static_cast<std::size_t>(c)] = 1.0; });
    return GridFunction(g, std::move(v));
}

GridFunction GridFunction::abs() const {
    std::vector<double> v(v_.size());
    for (std::size_t i = 0; i < v_.size(); ++i) v[i] = std::fabs(v_[i]);
    return GridFunction(grid_, std::move(v));
}

GridFunction GridFunction::pow(double e) const {
    std::vector<double> v(v_.size());
    for (std::size_t i = 0; i < v_.size(); ++i) v[i] = std::pow(std::fabs(v_[i]), e);
    return GridFunction(grid_, std::move(v));
}

GridFunction GridFunction::scaled(double s) const {
    std::vector<double> v(v_.size());
    for (std::size_t i = 0; i < v_.size(); ++i) v[i] = s * v_[i];
    return GridFunction(grid_, std::move(v));
}

GridFunction GridFunction::plus(const GridFunction& o) const {
    if (!(grid_ == o.grid_)) throw std::invalid_argument("grid mismatch");
    std::vector<double> v(v_.size());
    for (std::size_t i = 0; i < v_.size(); ++i) v[i] = v_[i] + o.v_[i];
    return GridFunction(grid_, std::move(v));
}

GridFunction GridFunction::minus(const GridFunction& o) const {
    if (!(grid_ == o.grid_)) throw std::invalid_argument("grid mismatch");
    std::vector<double> v(v_.size());
    for (std::size_t i = 0; i < v_.size(); ++i) v[i] = v_[i] - o.v_[i];
    return GridFunction(grid_, std::move(v));
}

GridFunction GridFunction::times(const GridFunction& o) const {
    if (!(grid_ == o.grid_)) throw std::invalid_argument("grid mismatch");
    std::vector<double> v(v_.size());
    for (std::size_t i = 0; i < v_.size(); ++i) v[i] = v_[i] * o.v_[i];
    return GridFunction(grid_, std::move(v));
}

GridFunction GridFunction::shifted(double c) const {
    std::vector<double> v(v_.size());
    for (std::size_t i = 0; i < v_.size(); ++i) v[i] = v_[i] + c;
    return GridFunction(grid_, std::move(v));
}

GridFunction GridFunction::restricted(const DyadicCube& q) const {
    check_cube(grid_, q);
    std::vector<double> v(v_.size(), 0.0);
    for_each_cell(grid_, q, [&](std::int64_t c) {
        v[static_cast<std::size_t>(c)] = v_[static_cast<std::size_t>(c)];
    });
    return GridFunction(grid_, std::move(v));
}

CubePyramid::CubePyramid(const DyadicGrid& g, const std::vector<double>& cell_values)
    : dim_(g.dim) {
    levels_.resize(static_cast<std::size_t>(g.L + 1));
    levels_[static_cast<std::size_t>(g.L)] = cell_values;
    for (int l = g.L - 1; l >= 0; --l) {
        const std::vector<double>& fine = levels_[static_cast<std::size_t>(l + 1)];
        std::vector<double>& coarse = levels_[static_cast<std::size_t>(l)];
        coarse.assign(static_cast<std::size_t>(cubes_at_level(g, l)), 0.0);
        if (g.dim == 1) {
            for (std::size_t i = 0; i < coarse.size(); ++i)
                coarse[i] = fine[2 * i] + fine[2 * i + 1];
        } else {
            const std::int64_t nc = std::int64_t{1} << l;
            const std::int64_t nf = nc * 2;
            for (std::int64_t ix = 0; ix < nc; ++ix)
                for (std::int64_t iy = 0; iy < nc; ++iy) {
                    const std::int64_t fx = 2 * ix, fy = 2 * iy;
                    coarse[static_cast<std::size_t>(ix * nc + iy)] =
                        (fine[static_cast<std::size_t>(fx * nf + fy)] +
                         fine[static_cast<std::size_t>(fx * nf + fy + 1)]) +
                        (fine[static_cast<std::size_t>((fx + 1) * nf + fy)] +
                         fine[static_cast<std::size_t>((fx + 1) * nf + fy + 1)]);
                }
        }
    }
}

std::int64_t CubePyramid::cube_linear_id_cached(const DyadicCube& q) const {
    if (dim_ == 1) return q.idx[0];
    return (std::int64_t{q.idx[0]} << q.level) + q.idx[1];
}

Weight::Weight(DyadicGrid g, std::vector<double> density)
    : grid_(g), d_(std::move(density)) {
    if (static_cast<std::int64_t>(d_.size()) != g.cell_count())
        throw std::invalid_argument("density array size mismatch");
    for (double x : d_)
        if (!(x > 0.0) || !std::isfinite(x))
            throw std::invalid_argument("weight density must be strictly positive and finite");
    std::vector<double> masses(d_.size());
    const double vol = grid_.cell_volume();
    for (std::size_t i = 0; i < d_.size(); ++i) masses[i] = d_[i] * vol;
    pyramid_ = CubePyramid(grid_, masses);
}

Weight Weight::constant(const DyadicGrid& g, double c) {
    return Weight(g, std::vector<double>(static_cast<std::size_t>(g.cell_count()), c));
}

double Weight::mass(const DyadicCube& q) const {
    check_cube(grid_, q);
    return pyramid_.sum(grid_, q);
}

Weight Weight::cellwise_pow(double e) const {
    std::vector<double> v(d_.size());
    for (std::size_t i = 0; i < d_.size(); ++i) v[i] = std::pow(d_[i], e);
    return Weight(grid_, std::move(v));
}

double weight_mass(const Weight& w, const DyadicCube& q) { return w.mass(q); }

namespace {

// Antiderivative of |x|^alpha: sign(x) |x|^{alpha+1}/(alpha+1).
double power_antiderivative(double x, double alpha) {
    if (x == 0.0) return 0.0;
    const double s = x > 0 ? 1.0 : -1.0;
    return s * std::pow(std::fabs(x), alpha + 1.0) / (alpha + 1.0);
}

// 3x3 tensor Gauss-Legendre on [ax,bx]x[ay,by].
double gauss3(double ax, double bx, double ay, double by, double alpha) {
    static const double node[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
    static const double wt[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    const double cx = (ax + bx) / 2, hx = (bx - ax) / 2;
    const double cy = (ay + by) / 2, hy = (by - ay) / 2;
    double s = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const double x = cx + hx * node[i], y = cy + hy * node[j];
            s += wt[i] * wt[j] * std::pow(x * x + y * y, alpha / 2);
        }
    return s * hx * hy;
}

double adaptive2(double ax, double bx, double ay, double by, double alpha, double tol,
                 int depth) {
    const double whole = gauss3(ax, bx, ay, by, alpha);
    const double mx = (ax + bx) / 2, my = (ay + by) / 2;
    const double split = gauss3(ax, mx, ay, my, alpha) + gauss3(mx, bx, ay, my, alpha) +
                         gauss3(ax, mx, my, by, alpha) + gauss3(mx, bx, my, by, alpha);
    if (depth > 24 || std::fabs(split - whole) <= tol * std::max(std::fabs(split), 1e-300))
        return split;
    return adaptive2(ax, mx, ay, my, alpha, tol, depth + 1) +
           adaptive2(mx, bx, ay, my, alpha, tol, depth + 1) +
           adaptive2(ax, mx, my, by, alpha, tol, depth + 1) +
           adaptive2(mx, bx, my, by, alpha, tol, depth + 1);
}

// Mass of |x|^alpha over [0,s)^2 via self-similarity:
// m(s) = s^{2+alpha} * A / (1 - 2^{-(2+alpha)}), A = mass over [0,1)^2 \ [0,1/2)^2.
double origin_corner_mass(double s, double alpha) {
    const double tol = 1e-11;
    const double A = adaptive2(0.5, 1.0, 0.0, 0.5, alpha, tol, 0) +
                     adaptive2(0.5, 1.0, 0.5, 1.0, alpha, tol, 0) +
                     adaptive2(0.0, 0.5, 0.5, 1.0, alpha, tol, 0);
    const double unit = A / (1.0 - std::pow(2.0, -(2.0 + alpha)));
    return std::pow(s, 2.0 + alpha) * unit;
}

}  // namespace

Weight weight_from_power(const DyadicGrid& g, double alpha) {
    if (!(alpha > -g.dim))
        throw std::invalid_argument("power weight |x|^alpha needs alpha > -dim");
    const std::int64_t n = g.cell_count();
    std::vector<double> density(static_cast<std::size_t>(n));
    const double vol = g.cell_volume();
    if (g.dim == 1) {
        for (std::int64_t c = 0; c < n; ++c) {
            auto lo = cell_lower(g, c);
            const double a = lo[0], b = lo[0] + g.side(g.L);
            const double mass = power_antiderivative(b, alpha) - power_antiderivative(a, alpha);
            density[static_cast<std::size_t>(c)] = mass / vol;
        }
    } else {
        double corner_unit = -1.0;  // cache: all four origin-corner cells share one value
        for (std::int64_t c = 0; c < n; ++c) {
            auto lo = cell_lower(g, c);
            const double s = g.side(g.L);
            const double ax = lo[0], bx = lo[0] + s, ay = lo[1], by = lo[1] + s;
            // reflect into the quadrant with ax',ay' >= 0 (|x|^alpha is symmetric)
            const double rax = std::min(std::fabs(ax), std::fabs(bx));
            const double ray = std::min(std::fabs(ay), std::fabs(by));
            double mass;
            if (rax == 0.0 && ray == 0.0) {
                if (corner_unit < 0) corner_unit = origin_corner_mass(s, alpha);
                mass = corner_unit;
            } else {
                mass = adaptive2(rax, rax + s, ray, ray + s, alpha, 1e-11, 0);
            }
            density[static_cast<std::size_t>(c)] = mass / vol;
        }
    }
    return Weight(g, std::move(density));
}

bool concentric_double_in_range(const DyadicGrid& g, const DyadicCube& q) {
    if (q.level < 1 || q.level > g.L - 1) return false;
    const std::int64_t half = std::int64_t{1} << (q.level + 1);
    for (int a = 0; a < g.dim; ++a) {
        const std::int64_t start = 2 * std::int64_t{q.idx[static_cast<std::size_t>(a)]} - 1;
        if (start < 0 || start + 4 > half) return false;
    }
    return true;
}

std::vector<std::int64_t> concentric_double(const DyadicGrid& g, const DyadicCube& q) {
    check_cube(g, q);
    if (q.level < 1 || q.level > g.L - 1)
        throw std::out_of_range("2Q is not aligned to the cell grid at this level");
    if (!concentric_double_in_range(g, q)) throw std::out_of_range("2Q exceeds the root cube");
    // 2Q spans indices [2 idx - 1, 2 idx + 3) at level q.level+1
    const int shift = g.L - (q.level + 1);
    const std::int64_t span = std::int64_t{1} << shift;
    std::vector<std::int64_t> cells;
    if (g.dim == 1) {
        const std::int64_t s0 = (2 * std::int64_t{q.idx[0]} - 1) * span;
        for (std::int64_t c = s0; c < s0 + 4 * span; ++c) cells.push_back(c);
    } else {
        const std::int64_t row = g.cells_per_side();
        const std::int64_t sx = (2 * std::int64_t{q.idx[0]} - 1) * span;
        const std::int64_t sy = (2 * std::int64_t{q.idx[1]} - 1) * span;
        for (std::int64_t i = sx; i < sx + 4 * span; ++i)
            for (std::int64_t j = sy; j < sy + 4 * span; ++j) cells.push_back(i * row + j);
    }
    return cells;
}

std::string format_double(double x) {
    char buf[48];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

namespace {

void save_cells_csv(const std::vector<double>& v, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "cell_index,value\n";
    for (std::size_t i = 0; i < v.size(); ++i)
        out << i << ',' << format_double(v[i]) << '\n';
}

std::vector<double> load_cells_csv(const DyadicGrid& g, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("cell_index,value", 0) != 0)
        throw std::runtime_error("bad CSV header in " + path);
    std::vector<double> v(static_cast<std::size_t>(g.cell_count()),
                          std::numeric_limits<double>::quiet_NaN());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string a, b;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b))
            throw std::runtime_error("bad CSV row in " + path);
        const std::size_t i = static_cast<std::size_t>(std::stoll(a));
        if (i >= v.size()) throw std::runtime_error("cell index out of range in " + path);
        v[i] = std::stod(b);
    }
    for (double x : v)
        if (std::isnan(x)) throw std::runtime_error("missing cells in " + path);
    return v;
}

}  // namespace

void save_csv(const GridFunction& f, const std::string& path) { save_cells_csv(f.values(), path); }
void save_csv(const Weight& w, const std::string& path) { save_cells_csv(w.density(), path); }

GridFunction load_function_csv(const DyadicGrid& g, const std::string& path) {
    return GridFunction(g, load_cells_csv(g, path));
}

Weight load_weight_csv(const DyadicGrid& g, const std::string& path) {
    return Weight(g, load_cells_csv(g, path));
}

}  // namespace morreylab
