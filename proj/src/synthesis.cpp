#include "climctl/synthesis.hpp"

#include <atomic>
#include <deque>
#include <thread>

namespace climctl {

void ControlSet::validate() const {
    if (levels.empty()) throw ModelError("ControlSet: empty");
    if (levels.front() != 0.0) throw ModelError("ControlSet: first level must be 0");
    for (size_t i = 1; i < levels.size(); ++i) {
        if (!(levels[i] > levels[i - 1])) {
            throw ModelError("ControlSet: levels must be strictly increasing");
        }
    }
}

ControlSet control_levels(double u_max, int segments) {
    if (!(u_max > 0.0)) throw ModelError("control_levels: u_max must be positive");
    if (segments < 1) throw ModelError("control_levels: segments must be >= 1");
    ControlSet cs;
    cs.levels.reserve(segments + 1);
    for (int i = 0; i <= segments; ++i) {
        cs.levels.push_back(i * u_max / segments);
    }
    cs.validate();
    return cs;
}

TransitionTable build_transitions_with(const FlowFn& flow, const CellGrid& g,
                                       const ControlSet& cs, const TimeStep& step,
                                       int n_threads) {
    g.validate();
    cs.validate();
    const int32_t cells = g.cell_count();
    const int32_t n_levels = cs.count();

    TransitionTable table{g, cs, step, {}, 0};
    table.image.assign(static_cast<size_t>(cells) * n_levels, -1);
    std::atomic<int64_t> blowups{0};

    auto work = [&](int32_t first, int32_t last) {
        for (int32_t cell = first; cell < last; ++cell) {
            const ClimateState x0 = center(g.unflat(cell), g);
            for (int32_t k = 0; k < n_levels; ++k) {
                int32_t img = -1;
                try {
                    const ClimateState y = flow(x0, ControlLevel{cs.levels[k]});
                    const CellIndex c = locate(y, g);
                    if (!c.is_sink()) img = g.flat(c);
                } catch (const ModelError&) {
                    blowups.fetch_add(1, std::memory_order_relaxed);
                }
                table.image[static_cast<size_t>(cell) * n_levels + k] = img;
            }
        }
    };

    if (n_threads <= 1) {
        work(0, cells);
    } else {
        std::vector<std::thread> pool;
        const int32_t chunk = (cells + n_threads - 1) / n_threads;
        for (int t = 0; t < n_threads; ++t) {
            const int32_t lo = t * chunk;
            const int32_t hi = std::min(cells, lo + chunk);
            if (lo < hi) pool.emplace_back(work, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    table.blowup_count = blowups.load();
    return table;
}

TransitionTable build_transitions(const CellGrid& g, const ControlSet& cs,
                                  const ModelParams& p, const TimeStep& step,
                                  int n_threads) {
    p.validate();
    step.validate();
    return build_transitions_with(
        [&p, &step](const ClimateState& x, ControlLevel u) {
            return integrate_interval(x, u, p, step);
        },
        g, cs, step, n_threads);
}

DocTable solve_min_time(const TransitionTable& t, const std::vector<CellIndex>& target) {
    if (target.empty()) throw ModelError("solve_min_time: target set is empty");
    const CellGrid& g = t.grid;
    const int32_t cells = g.cell_count();
    const int32_t n_levels = t.controls.count();

    // Inverse adjacency in CSR form: for each cell, the (source, level)
    // pairs that map into it.
    std::vector<int32_t> in_degree(cells + 1, 0);
    for (int32_t cell = 0; cell < cells; ++cell) {
        for (int32_t k = 0; k < n_levels; ++k) {
            const int32_t img = t.at(cell, k);
            if (img >= 0) ++in_degree[img + 1];
        }
    }
    for (int32_t c = 0; c < cells; ++c) in_degree[c + 1] += in_degree[c];
    std::vector<int32_t> pred_cell(in_degree[cells]);
    std::vector<int8_t> pred_level(in_degree[cells]);
    {
        std::vector<int32_t> cursor(in_degree.begin(), in_degree.end() - 1);
        for (int32_t cell = 0; cell < cells; ++cell) {
            for (int32_t k = 0; k < n_levels; ++k) {
                const int32_t img = t.at(cell, k);
                if (img < 0) continue;
                pred_cell[cursor[img]] = cell;
                pred_level[cursor[img]] = static_cast<int8_t>(k);
                ++cursor[img];
            }
        }
    }

    DocTable doc{g, t.controls, std::vector<int32_t>(cells, kUnreachable),
                 std::vector<int8_t>(cells, -1)};
    std::deque<int32_t> frontier;
    for (const CellIndex& c : target) {
        if (c.is_sink()) throw ModelError("solve_min_time: target must be regular cells");
        const int32_t f = g.flat(c);
        if (doc.cost[f] != 0) {
            doc.cost[f] = 0;
            frontier.push_back(f);
        }
    }

    while (!frontier.empty()) {
        const int32_t cur = frontier.front();
        frontier.pop_front();
        for (int32_t e = in_degree[cur]; e < in_degree[cur + 1]; ++e) {
            const int32_t src = pred_cell[e];
            const int8_t lvl = pred_level[e];
            if (doc.cost[src] == kUnreachable) {
                doc.cost[src] = doc.cost[cur] + 1;
                doc.level[src] = lvl;
                frontier.push_back(src);
            } else if (doc.cost[src] == doc.cost[cur] + 1 && lvl < doc.level[src]) {
                doc.level[src] = lvl;  // smallest-u tie-break
            }
        }
    }
    // Target cells keep no chosen level.
    for (const CellIndex& c : target) doc.level[g.flat(c)] = -1;
    return doc;
}

ControllableRegion controllable_region(const DocTable& d) {
    ControllableRegion r;
    r.mask.resize(d.cost.size());
    for (size_t c = 0; c < d.cost.size(); ++c) {
        r.mask[c] = d.cost[c] != kUnreachable ? 1 : 0;
        r.count += r.mask[c];
    }
    return r;
}

}  // namespace climctl
