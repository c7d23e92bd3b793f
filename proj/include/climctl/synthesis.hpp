#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "climctl/cellspace.hpp"
#include "climctl/integrator.hpp"

// Cell-to-cell mapping synthesis: build the controlled transition table and
// solve the minimum-time problem by backward BFS over the inverse relation,
// producing the DOC (discrete optimal control) table.

namespace climctl {

struct ControlSet {
    std::vector<double> levels;  // strictly increasing, first 0, last u_max

    void validate() const;
    int32_t count() const { return static_cast<int32_t>(levels.size()); }
};

// segments+1 evenly spaced levels from 0 to u_max.
ControlSet control_levels(double u_max, int segments);

struct TransitionTable {
    CellGrid grid;
    ControlSet controls;
    TimeStep step;
    // Flat image: entry (cell * levels + k) holds the flat target cell,
    // or -1 for the sink.
    std::vector<int32_t> image;
    int64_t blowup_count = 0;  // integrations that diverged and were sunk

    int32_t at(int32_t cell, int32_t level) const {
        return image[static_cast<size_t>(cell) * controls.count() + level];
    }
};

// image(c, u) = locate(integrate_interval(center(c), u, p, step)).
// n_threads <= 1 runs serially; the per-cell work is pure.
TransitionTable build_transitions(const CellGrid& g, const ControlSet& cs,
                                  const ModelParams& p, const TimeStep& step,
                                  int n_threads = 1);

// Same, with an arbitrary flow map (state, level) -> state. Used for
// synthetic dynamics in tests.
using FlowFn = std::function<ClimateState(const ClimateState&, ControlLevel)>;
TransitionTable build_transitions_with(const FlowFn& flow, const CellGrid& g,
                                       const ControlSet& cs, const TimeStep& step,
                                       int n_threads = 1);

inline constexpr int32_t kUnreachable = -1;

struct DocTable {
    CellGrid grid;
    ControlSet controls;
    std::vector<int32_t> cost;   // minimum intervals to target; kUnreachable if none
    std::vector<int8_t> level;   // chosen control level index; -1 for target/unreachable

    bool reachable(int32_t cell) const { return cost[cell] != kUnreachable; }
};

// Exact minimum-time cost-to-go via backward breadth-first sweep (unit step
// cost makes BFS Bellman-optimal). Ties between levels are broken toward the
// smallest u (least intervention). The sink is absorbing and uncontrollable.
DocTable solve_min_time(const TransitionTable& t, const std::vector<CellIndex>& target);

struct ControllableRegion {
    int32_t count = 0;
    std::vector<uint8_t> mask;  // per flat cell, 1 iff cost-to-go finite
};

ControllableRegion controllable_region(const DocTable& d);

}  // namespace climctl
