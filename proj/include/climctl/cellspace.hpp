#pragma once

#include <cmath>
#include <cstdint>

#include "climctl/model.hpp"

// Rectangular discretization of the (T_A, T_s) region into n_a x n_s cells
// plus a single absorbing sink for everything outside.

namespace climctl {

struct Region {
    double t_a_min = 268.0, t_a_max = 276.0;
    double t_s_min = 286.0, t_s_max = 294.0;

    void validate() const {
        if (!(t_a_min < t_a_max) || !(t_s_min < t_s_max)) {
            throw ModelError("Region: min must be < max on both axes");
        }
    }
};

struct CellIndex {
    // i indexes T_A, j indexes T_s; (-1, -1) is the sink.
    int32_t i = -1;
    int32_t j = -1;

    static CellIndex sink() { return {}; }
    bool is_sink() const { return i < 0; }
    bool operator==(const CellIndex&) const = default;
};

struct CellGrid {
    Region region;
    int32_t n_a = 64;
    int32_t n_s = 64;

    void validate() const {
        region.validate();
        if (n_a < 1 || n_s < 1) throw ModelError("CellGrid: divisions must be positive");
    }

    double width_a() const { return (region.t_a_max - region.t_a_min) / n_a; }
    double width_s() const { return (region.t_s_max - region.t_s_min) / n_s; }
    int32_t cell_count() const { return n_a * n_s; }

    int32_t flat(CellIndex c) const { return c.i * n_s + c.j; }
    CellIndex unflat(int32_t f) const { return {f / n_s, f % n_s}; }
};

// Half-open binning: cell i covers [min + i*w, min + (i+1)*w), except the
// last cell which is closed on top. Anything outside the region -> sink.
inline CellIndex locate(const ClimateState& x, const CellGrid& g) {
    auto bin = [](double v, double lo, double hi, int32_t n, double w) -> int32_t {
        if (v < lo || v > hi) return -1;
        if (v == hi) return n - 1;
        const int32_t i = static_cast<int32_t>(std::floor((v - lo) / w));
        return i >= n ? n - 1 : i;  // guard against floating point at the top edge
    };
    const int32_t i = bin(x.t_a, g.region.t_a_min, g.region.t_a_max, g.n_a, g.width_a());
    const int32_t j = bin(x.t_s, g.region.t_s_min, g.region.t_s_max, g.n_s, g.width_s());
    if (i < 0 || j < 0) return CellIndex::sink();
    return {i, j};
}

inline ClimateState center(CellIndex c, const CellGrid& g) {
    if (c.is_sink()) throw ModelError("center: the sink cell has no center");
    return {g.region.t_a_min + (c.i + 0.5) * g.width_a(),
            g.region.t_s_min + (c.j + 0.5) * g.width_s()};
}

}  // namespace climctl
