#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "climctl/synthesis.hpp"

using namespace climctl;

namespace {

// Independent oracle: Bellman value iteration to a fixed point, no BFS, no
// shared machinery with solve_min_time.
std::vector<int64_t> brute_force_costs(const TransitionTable& t,
                                       const std::vector<CellIndex>& target) {
    const int32_t cells = t.grid.cell_count();
    const int64_t inf = std::numeric_limits<int64_t>::max() / 4;
    std::vector<int64_t> cost(cells, inf);
    for (const CellIndex& c : target) cost[t.grid.flat(c)] = 0;
    for (bool changed = true; changed;) {
        changed = false;
        for (int32_t c = 0; c < cells; ++c) {
            if (cost[c] == 0) continue;
            int64_t best = inf;
            for (int32_t k = 0; k < t.controls.count(); ++k) {
                const int32_t img = t.at(c, k);
                if (img >= 0 && cost[img] + 1 < best) best = cost[img] + 1;
            }
            if (best < cost[c]) {
                cost[c] = best;
                changed = true;
            }
        }
    }
    return cost;
}

void check_against_oracle(const TransitionTable& t, const std::vector<CellIndex>& target) {
    const DocTable doc = solve_min_time(t, target);
    const std::vector<int64_t> oracle = brute_force_costs(t, target);
    const int64_t inf = std::numeric_limits<int64_t>::max() / 4;
    for (int32_t c = 0; c < t.grid.cell_count(); ++c) {
        if (oracle[c] >= inf) {
            REQUIRE(doc.cost[c] == kUnreachable);
        } else {
            REQUIRE(doc.cost[c] == oracle[c]);
        }
    }
}

TransitionTable random_table(uint32_t seed, int32_t n_a, int32_t n_s, int n_levels,
                             double sink_prob) {
    std::mt19937 rng(seed);
    TransitionTable t;
    t.grid = {{268.0, 276.0, 286.0, 294.0}, n_a, n_s};
    t.controls.levels.resize(n_levels);
    for (int k = 0; k < n_levels; ++k) t.controls.levels[k] = k * 0.03 / (n_levels - 1);
    const int32_t cells = t.grid.cell_count();
    std::uniform_int_distribution<int32_t> cell_dist(0, cells - 1);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    t.image.resize(static_cast<size_t>(cells) * n_levels);
    for (auto& e : t.image) e = coin(rng) < sink_prob ? -1 : cell_dist(rng);
    return t;
}

CellGrid coarse_grid() { return {{268.0, 276.0, 286.0, 294.0}, 16, 16}; }

}  // namespace

TEST_CASE("control_levels reproduces the paper's nine-level set") {
    const ControlSet cs = control_levels(0.03, 8);
    REQUIRE(cs.count() == 9);
    // printed as {0, 0.37%, 0.75%, 1.13%, 1.5%, 1.87%, 2.25%, 2.62%, 3%}
    const double expected[] = {0.0, 0.00375, 0.0075, 0.01125, 0.015,
                               0.01875, 0.0225, 0.02625, 0.03};
    for (int i = 0; i < 9; ++i) {
        CHECK(cs.levels[i] == doctest::Approx(expected[i]).epsilon(1e-12));
    }
}

TEST_CASE("control_levels edge cases") {
    const ControlSet two = control_levels(0.03, 1);
    CHECK(two.levels == std::vector<double>{0.0, 0.03});
    for (int seg : {1, 3, 8, 20}) {
        CHECK(control_levels(0.05, seg).count() == seg + 1);
    }
    CHECK_THROWS_AS(control_levels(-0.1, 8), ModelError);
    CHECK_THROWS_AS(control_levels(0.03, 0), ModelError);
}

TEST_CASE("zero dynamics maps every cell to itself under every level") {
    const FlowFn identity = [](const ClimateState& x, ControlLevel) { return x; };
    const CellGrid g = coarse_grid();
    const ControlSet cs = control_levels(0.03, 2);
    const TransitionTable t = build_transitions_with(identity, g, cs, TimeStep::quarter());
    for (int32_t c = 0; c < g.cell_count(); ++c) {
        for (int32_t k = 0; k < cs.count(); ++k) {
            REQUIRE(t.at(c, k) == c);
        }
    }
    CHECK(t.blowup_count == 0);
}

TEST_CASE("three-cell chain solves to costs 2,1,0") {
    TransitionTable t;
    t.grid = {{0.0 + 268, 276.0, 286.0, 294.0}, 3, 1};
    t.controls.levels = {0.0};
    t.image = {1, 2, 2};  // A -> B -> T, T self-loops
    const DocTable doc = solve_min_time(t, {{2, 0}});
    CHECK(doc.cost == std::vector<int32_t>{2, 1, 0});
    CHECK(doc.level[0] == 0);
    CHECK(doc.level[1] == 0);
    CHECK(doc.level[2] == -1);  // target keeps no chosen level
}

TEST_CASE("ties between levels break toward the smallest u") {
    TransitionTable t;
    t.grid = {{268.0, 276.0, 286.0, 294.0}, 2, 1};
    t.controls.levels = {0.0, 0.015, 0.03};
    // All three levels take cell 0 to the target cell 1.
    t.image = {1, 1, 1, 1, 1, 1};
    const DocTable doc = solve_min_time(t, {{1, 0}});
    CHECK(doc.cost[0] == 1);
    CHECK(doc.level[0] == 0);
}

TEST_CASE("empty or sink targets are rejected") {
    TransitionTable t = random_table(7, 4, 4, 2, 0.1);
    CHECK_THROWS_AS(solve_min_time(t, {}), ModelError);
    CHECK_THROWS_AS(solve_min_time(t, {CellIndex::sink()}), ModelError);
}

TEST_CASE("solver equals the brute-force oracle on random tables") {
    check_against_oracle(random_table(1, 16, 16, 3, 0.05), {{8, 8}});
    check_against_oracle(random_table(2, 12, 16, 5, 0.3), {{0, 0}, {11, 15}});
    check_against_oracle(random_table(3, 16, 9, 2, 0.6), {{5, 5}});
}

TEST_CASE("solver equals the oracle on a coarsened climate grid") {
    const ModelParams p;
    const TransitionTable t = build_transitions(coarse_grid(), control_levels(0.03, 8), p,
                                                TimeStep::quarter());
    check_against_oracle(t, {locate({270.2, 288.0}, t.grid)});
}

TEST_CASE("Bellman consistency and DOC descent on the coarse climate table") {
    const ModelParams p;
    const TransitionTable t = build_transitions(coarse_grid(), control_levels(0.03, 8), p,
                                                TimeStep::quarter());
    const CellIndex target = locate({270.2, 288.0}, t.grid);
    const DocTable doc = solve_min_time(t, {target});
    for (int32_t c = 0; c < t.grid.cell_count(); ++c) {
        if (doc.cost[c] == kUnreachable || doc.cost[c] == 0) continue;
        int32_t best = std::numeric_limits<int32_t>::max();
        for (int32_t k = 0; k < t.controls.count(); ++k) {
            const int32_t img = t.at(c, k);
            if (img >= 0 && doc.cost[img] != kUnreachable) {
                best = std::min(best, doc.cost[img] + 1);
            }
        }
        REQUIRE(doc.cost[c] == best);
        const int32_t chosen_img = t.at(c, doc.level[c]);
        REQUIRE(chosen_img >= 0);
        REQUIRE(doc.cost[chosen_img] == doc.cost[c] - 1);
    }
}

TEST_CASE("enlarging the control set never shrinks the controllable region") {
    const ModelParams p;
    const CellGrid g = coarse_grid();
    const CellIndex target = locate({270.2, 288.0}, g);
    // {0, 0.03} is a subset of the 9-level set (levels 0 and 8).
    const TransitionTable small =
        build_transitions(g, control_levels(0.03, 1), p, TimeStep::quarter());
    const TransitionTable big =
        build_transitions(g, control_levels(0.03, 8), p, TimeStep::quarter());
    const int32_t count_small = controllable_region(solve_min_time(small, {target})).count;
    const int32_t count_big = controllable_region(solve_min_time(big, {target})).count;
    CHECK(count_big >= count_small);
}

TEST_CASE("parallel and serial transition builds agree exactly") {
    const ModelParams p;
    const TransitionTable serial = build_transitions(coarse_grid(), control_levels(0.03, 8),
                                                     p, TimeStep::quarter(), 1);
    const TransitionTable parallel = build_transitions(coarse_grid(), control_levels(0.03, 8),
                                                       p, TimeStep::quarter(), 4);
    CHECK(serial.image == parallel.image);
}

TEST_CASE("target-only controllability when nothing maps into the target") {
    TransitionTable t;
    t.grid = {{268.0, 276.0, 286.0, 294.0}, 2, 2};
    t.controls.levels = {0.0};
    t.image = {0, 0, 0, 0};  // everything maps to cell 0; target is cell 3
    const DocTable doc = solve_min_time(t, {{1, 1}});
    CHECK(controllable_region(doc).count == 1);
}
