#pragma once

// Result tables and their CSV / JSON / gnuplot-style writers. Cell values are
// preformatted strings so identical configs produce bit-identical files
// regardless of how the rows were computed.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pulsefront/fronts.hpp"
#include "pulsefront/homowave.hpp"
#include "pulsefront/pdesolver.hpp"
#include "pulsefront/zeros.hpp"

namespace pulsefront {

struct Table {
    std::string name;
    std::vector<std::pair<std::string, std::string>> meta; // provenance comments
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row) {
        if (row.size() != columns.size())
            throw std::invalid_argument("Table: row width mismatch");
        rows.push_back(std::move(row));
    }

    bool all_passed() const {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (columns[c] != "pass") continue;
            for (const auto& r : rows)
                if (r[c] != "1" && r[c] != "true") return false;
        }
        return true;
    }
};

inline std::string csv_text(const Table& t) {
    std::string out;
    for (const auto& [k, v] : t.meta) out += "# " + k + " = " + v + "\n";
    for (std::size_t c = 0; c < t.columns.size(); ++c)
        out += (c ? "," : "") + t.columns[c];
    out += "\n";
    for (const auto& r : t.rows) {
        for (std::size_t c = 0; c < r.size(); ++c) out += (c ? "," : "") + r[c];
        out += "\n";
    }
    return out;
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

inline void write_table(const Table& t, const std::string& dir) {
    std::filesystem::create_directories(dir);
    write_text(dir + "/" + t.name + ".csv", csv_text(t));

    nlohmann::ordered_json j;
    j["experiment"] = t.name;
    for (const auto& [k, v] : t.meta) j["meta"][k] = v;
    j["columns"] = t.columns;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : t.rows) j["rows"].push_back(r);
    j["all_passed"] = t.all_passed();
    write_text(dir + "/" + t.name + ".json", j.dump(2) + "\n");

    // gnuplot-friendly numeric dump: the numeric columns, space separated
    std::string dat = "#";
    for (const auto& c : t.columns) dat += " " + c;
    dat += "\n";
    for (const auto& r : t.rows) {
        for (std::size_t c = 0; c < r.size(); ++c) dat += (c ? " " : "") + r[c];
        dat += "\n";
    }
    write_text(dir + "/" + t.name + ".dat", dat);
}

namespace detail {
inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}
} // namespace detail

// Frozen wave profile as (xi, psi, dpsi) rows.
inline std::string wave_csv_text(const TravelingWave& w) {
    std::string out = "xi,psi,dpsi\n";
    for (std::size_t i = 0; i < w.xi.size(); ++i)
        out += detail::num(w.xi[i]) + "," + detail::num(w.psi[i]) + "," + detail::num(w.dpsi[i]) +
               "\n";
    return out;
}

inline std::string limit_speed_json_text(const LimitSpeedResult& ls) {
    nlohmann::ordered_json j;
    j["c_star"] = ls.c_star;
    j["nodes"] = ls.n_samples;
    j["error_estimate"] = ls.quad_error_estimate;
    return j.dump(2) + "\n";
}

inline std::string speed_report_json_text(double L, const SpeedEstimate& est) {
    nlohmann::ordered_json j;
    j["L"] = L;
    j["c_L"] = est.c_L;
    j["per_period_speeds"] = est.per_period_speeds;
    j["converged"] = est.converged;
    return j.dump(2) + "\n";
}

// Front lattice as (xi, y, phi) rows plus a separate (y, zeta) table.
inline std::string front_lattice_csv_text(const PulsatingFront& f) {
    std::string out = "xi,y,phi\n";
    for (std::size_t jy = 0; jy < f.y_grid.size(); ++jy)
        for (std::size_t i = 0; i < f.xi_grid.size(); ++i)
            out += detail::num(f.xi_grid[i]) + "," + detail::num(f.y_grid[jy]) + "," +
                   detail::num(f.phi[jy][i]) + "\n";
    return out;
}

inline std::string zeta_csv_text(const PulsatingFront& f) {
    std::string out = "y,zeta\n";
    for (std::size_t jy = 0; jy < f.y_grid.size(); ++jy)
        out += detail::num(f.y_grid[jy]) + "," + detail::num(f.zeta[jy]) + "\n";
    return out;
}

inline std::string envelope_report_json_text(double eps, double L, double lower, double upper,
                                             double T_tilde, double T_L) {
    nlohmann::ordered_json j;
    j["eps"] = eps;
    j["L"] = L;
    j["max_violation_lower"] = lower;
    j["max_violation_upper"] = upper;
    j["T_tilde"] = T_tilde;
    j["T_L"] = T_L;
    return j.dump(2) + "\n";
}

inline std::string zeros_report_json_text(const ZeroReport& rep) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& row : rep.rows)
        j.push_back({{"t", row.t}, {"z", row.z}, {"word", row.word}});
    return j.dump(2) + "\n";
}

// Snapshot sink: (t, x, u) triples.
inline std::string snapshots_csv_text(const SnapshotSet& snaps) {
    std::string out = "t,x,u\n";
    for (std::size_t k = 0; k < snaps.ts.size(); ++k)
        for (int i = 0; i < snaps.grid.n; ++i)
            out += detail::num(snaps.ts[k]) + "," + detail::num(snaps.grid.x(i)) + "," +
                   detail::num(snaps.us[k][i]) + "\n";
    return out;
}

} // namespace pulsefront
