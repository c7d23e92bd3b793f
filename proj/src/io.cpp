#include "climctl/io.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

namespace climctl {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);  // LF only, also on non-POSIX
    if (!out) throw IoError("cannot open for writing: " + path.string());
    return out;
}

}  // namespace

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(std::numeric_limits<double>::max_digits10);
    os << v;
    return os.str();
}

void write_doc_csv(const std::filesystem::path& path, const DocTable& doc) {
    std::ofstream out = open_out(path);
    out << "i,j,cost_to_go,chosen_u\n";
    const CellGrid& g = doc.grid;
    for (int32_t i = 0; i < g.n_a; ++i) {
        for (int32_t j = 0; j < g.n_s; ++j) {
            const int32_t f = g.flat({i, j});
            out << i << ',' << j << ',' << doc.cost[f] << ',';
            if (doc.level[f] < 0) {
                out << "-1";
            } else {
                out << format_double(doc.controls.levels[doc.level[f]]);
            }
            out << '\n';
        }
    }
}

DocTable read_doc_csv(const std::filesystem::path& path, const CellGrid& grid,
                      const ControlSet& controls) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    DocTable doc{grid, controls,
                 std::vector<int32_t>(grid.cell_count(), kUnreachable),
                 std::vector<int8_t>(grid.cell_count(), -1)};
    std::string line;
    if (!std::getline(in, line) || line != "i,j,cost_to_go,chosen_u") {
        throw IoError("doc csv: bad header in " + path.string());
    }
    size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string field;
        int32_t i, j, cost;
        double u;
        char comma;
        if (!(ls >> i >> comma >> j >> comma >> cost >> comma >> u)) {
            throw IoError("doc csv: malformed row '" + line + "'");
        }
        if (i < 0 || i >= grid.n_a || j < 0 || j >= grid.n_s) {
            throw IoError("doc csv: cell index out of range in '" + line + "'");
        }
        const int32_t f = grid.flat({i, j});
        doc.cost[f] = cost;
        if (u >= 0.0) {
            int8_t lvl = -1;
            for (int32_t k = 0; k < controls.count(); ++k) {
                if (controls.levels[k] == u) {
                    lvl = static_cast<int8_t>(k);
                    break;
                }
            }
            if (lvl < 0) throw IoError("doc csv: unknown control value in '" + line + "'");
            doc.level[f] = lvl;
        }
        ++rows;
    }
    if (rows != static_cast<size_t>(grid.cell_count())) {
        throw IoError("doc csv: expected " + std::to_string(grid.cell_count()) +
                      " rows, got " + std::to_string(rows));
    }
    return doc;
}

void write_controllable_csv(const std::filesystem::path& path, const ControllableRegion& r,
                            const CellGrid& grid) {
    std::ofstream out = open_out(path);
    out << "# rows: T_A index 0.." << grid.n_a - 1 << ", cols: T_s index 0.."
        << grid.n_s - 1 << "\n";
    for (int32_t i = 0; i < grid.n_a; ++i) {
        for (int32_t j = 0; j < grid.n_s; ++j) {
            if (j) out << ',';
            out << int(r.mask[grid.flat({i, j})]);
        }
        out << '\n';
    }
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& t) {
    std::ofstream out = open_out(path);
    out << "step,time_s,t_a,t_s,u\n";
    for (size_t s = 0; s < t.samples.size(); ++s) {
        const Sample& smp = t.samples[s];
        out << s << ',' << format_double(smp.time_s) << ',' << format_double(smp.state.t_a)
            << ',' << format_double(smp.state.t_s) << ',' << format_double(smp.u) << '\n';
    }
}

void write_equilibrium_csv(const std::filesystem::path& path, const ClimateState& eq,
                           const std::array<double, 2>& eig) {
    std::ofstream out = open_out(path);
    out << "t_a,t_s,eig_re_1,eig_re_2\n";
    out << format_double(eq.t_a) << ',' << format_double(eq.t_s) << ','
        << format_double(eig[0]) << ',' << format_double(eig[1]) << '\n';
}

std::string scenario_report_text(const ScenarioReport& rep) {
    std::ostringstream os;
    auto steps = [](int32_t v) {
        return v == kNotReached ? std::string("NOT_REACHED") : std::to_string(v);
    };
    os << "target_cell: (" << rep.target_cell.i << ", " << rep.target_cell.j << ")\n";
    os << "controllable_cells: " << rep.controllable.count << " of "
       << rep.doc.grid.cell_count() << "\n";
    os << "feasible: " << (rep.feasible ? "yes" : "no") << "\n";
    os << "steps_to_target: " << steps(rep.controlled.steps_to_target) << "\n";
    os << "uncontrolled_steps_to_target: " << steps(rep.uncontrolled_steps_to_target) << "\n";
    os << "loop_status: "
       << (rep.controlled.status == LoopStatus::kOk ? "OK" : "CONTROL_LOST") << "\n";
    os << "terminal_state: (" << format_double(rep.controlled.terminal.t_a) << ", "
       << format_double(rep.controlled.terminal.t_s) << ")\n";
    if (!rep.target_attained) {
        os << "nearest_cell: (" << rep.nearest_cell.i << ", " << rep.nearest_cell.j
           << ") at chebyshev distance " << rep.nearest_distance << "\n";
    }
    if (rep.hold_mean_ts_deviation) {
        os << "hold_mean_abs_ts_deviation_K: " << format_double(*rep.hold_mean_ts_deviation)
           << "\n";
    }
    return os.str();
}

}  // namespace climctl
