#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "morreylab/rearrange.hpp"
#include "oracles.hpp"

using namespace morreylab;
using oracles::near;

namespace {
GridFunction mk(const DyadicGrid& g, std::vector<double> v) {
    return GridFunction(g, std::move(v));
}
}  // namespace

TEST_CASE("rearrangement on the documented example") {
    const DyadicGrid g = build_grid(1, 2, 2);  // 4 unit cells
    const GridFunction f = mk(g, {3, 1, 2, 5});
    const DyadicCube root = DyadicCube::root();
    CHECK(rearrangement_at(f, root, 1.2) == 3.0);
    CHECK(rearrangement_at(f, root, 0.0) == 5.0);
    CHECK(rearrangement_at(f, root, 4.0) == 0.0);
    CHECK(rearrangement_at(f, root, 100.0) == 0.0);
}

TEST_CASE("rearrangement equals brute force and is nonincreasing") {
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 40; ++rep) {
        const DyadicGrid g = build_grid(1, 1, 2 + rep % 5);
        const GridFunction f = oracles::random_function(g, rng, -3.0, 3.0);
        const DyadicCube q = rep % 2 ? DyadicCube{1, {0, 0}} : DyadicCube::root();
        std::uniform_real_distribution<double> tu(0.0, g.volume(q.level) * 1.1);
        double prev = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 8; ++i) {
            // avoid jump points: attained measures are multiples of the cell volume
            const double t = tu(rng);
            const double mine = rearrangement_at(f, q, t);
            CHECK(mine == oracles::rearrangement_brute(f, q, t));
            (void)prev;
        }
        // monotone in t on a sorted ladder
        double last = std::numeric_limits<double>::infinity();
        for (double t : {0.0, 0.3, 0.7, 1.1, 2.0, 4.0}) {
            const double v = rearrangement_at(f, q, t * g.cell_volume());
            CHECK(v <= last);
            last = v;
        }
    }
}

TEST_CASE("median: documented examples and predicate") {
    const DyadicGrid g = build_grid(1, 2, 2);
    CHECK(median(mk(g, {1, 2, 3, 4}), DyadicCube::root()) == 2.0);
    CHECK(median(mk(g, {5, 5, 5, 5}), DyadicCube::root()) == 5.0);
    CHECK(median(mk(g, {0, 0, 0, 10}), DyadicCube::root()) == 0.0);

    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 60; ++rep) {
        const DyadicGrid gg = build_grid(rep % 2 ? 2 : 1, 1, rep % 2 ? 2 : 4);
        const GridFunction f = oracles::random_function(gg, rng);
        for (const DyadicCube& q : oracles::all_cubes(gg)) {
            const double m = median(f, q);
            CHECK(oracles::is_median(f, q, m));
            // lower tie-break: any smaller attained value fails the predicate
            for (double v : oracles::values_on(f, q))
                if (v < m) CHECK(!oracles::is_median(f, q, v));
        }
    }
}

TEST_CASE("oscillation: documented examples") {
    const DyadicGrid g = build_grid(1, 2, 2);
    CHECK(oscillation(mk(g, {7, 7, 7, 7}), DyadicCube::root(), 0.25) == 0.0);
    CHECK(oscillation(mk(g, {0, 0, 10, 10}), DyadicCube::root(), 0.25) == 5.0);
    CHECK(oscillation(mk(g, {0, 0, 0, 10}), DyadicCube::root(), 0.25) == 0.0);
}

TEST_CASE("oscillation equals the center-scan oracle") {
    std::mt19937_64 rng(9);
    for (int rep = 0; rep < 50; ++rep) {
        const DyadicGrid g = build_grid(1, 1, 2 + rep % 4);
        const GridFunction f = oracles::random_function(g, rng);
        std::uniform_real_distribution<double> lu(0.01, 0.49);
        const double lambda = lu(rng);
        for (const DyadicCube& q : oracles::all_cubes(g)) {
            CHECK(near(oscillation(f, q, lambda), oracles::oscillation_brute(f, q, lambda)));
        }
    }
}

TEST_CASE("oscillation invariances") {
    std::mt19937_64 rng(13);
    const DyadicGrid g = build_grid(1, 1, 5);
    for (int rep = 0; rep < 20; ++rep) {
        const GridFunction f = oracles::random_function(g, rng);
        std::uniform_real_distribution<double> lu(0.05, 0.45);
        const double lambda = lu(rng);
        const DyadicCube q = DyadicCube{1, {rep % 2, 0}};
        const double w = oscillation(f, q, lambda);
        CHECK(near(oscillation(f.shifted(3.25), q, lambda), w));
        CHECK(near(oscillation(f.scaled(-2.5), q, lambda), 2.5 * w));
    }
}

TEST_CASE("median and oscillation sandwich (151130-1) and (151130-2)") {
    std::mt19937_64 rng(17);
    int checked = 0;
    for (int rep = 0; rep < 120; ++rep) {
        const DyadicGrid g = build_grid(rep % 2 ? 2 : 1, 1, rep % 2 ? 2 : 5);
        const GridFunction f = oracles::random_function(g, rng);
        std::uniform_real_distribution<double> lu(0.02, 0.48);
        const double lambda = lu(rng);
        for (const DyadicCube& q : oracles::all_cubes(g)) {
            const double m = median(f, q);
            const double t = lambda * g.volume(q.level);
            CHECK(std::fabs(m) <= rearrangement_at(f, q, t) * (1 + 1e-12) + 1e-300);
            const double w = oscillation(f, q, lambda);
            const double mid = rearrangement_at(f.shifted(-m), q, t);
            CHECK(w <= mid * (1 + 1e-12));
            CHECK(mid <= 2 * w * (1 + 1e-12));
            ++checked;
        }
    }
    CHECK(checked > 500);
}
