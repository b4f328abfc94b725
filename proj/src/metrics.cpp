#include "aeroflex/metrics.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace aeroflex {

double rms(const std::vector<double>& x) {
    if (x.empty()) return 0.0;
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s / double(x.size()));
}

double max_abs(const std::vector<double>& x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

int CsvTable::column(const std::string& name) const {
    for (size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return int(i);
    return -1;
}

std::vector<double> CsvTable::series(const std::string& name) const {
    const int c = column(name);
    if (c < 0) throw std::runtime_error("missing log column: " + name);
    std::vector<double> out(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) out[i] = rows[i](c);
    return out;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open log: " + path);
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty log: " + path);
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) t.columns.push_back(cell);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        VecX row(t.columns.size());
        std::stringstream ls(line);
        int i = 0;
        while (std::getline(ls, cell, ',') && i < row.size())
            row(i++) = std::stod(cell);
        if (i != row.size()) throw std::runtime_error("ragged csv row");
        t.rows.push_back(row);
    }
    return t;
}

namespace {

std::vector<double> deviation(const CsvTable& t, const std::string& name,
                              const std::string& ref_name) {
    std::vector<double> x = t.series(name);
    if (!ref_name.empty() && t.column(ref_name) >= 0) {
        const std::vector<double> r = t.series(ref_name);
        for (size_t i = 0; i < x.size(); ++i) x[i] -= r[i];
    }
    return x;
}

} // namespace

std::map<std::string, double> compute_metrics(const CsvTable& log,
                                              const CsvTable* baseline) {
    struct Channel {
        std::string key, col, ref;
    };
    const std::vector<Channel> channels = {
        {"nz", "nz_g", "nz_trim_g"},
        {"Mphi_r", "Mphi_r_Nm", "Mphi_trim_Nm"},
        {"Mphi_l", "Mphi_l_Nm", "Mphi_trim_Nm"},
        {"Fw_r", "Fw_r_N", "Fw_ref_N"},
        {"p", "p_rads", ""},
        {"q", "q_rads", ""},
        {"r", "r_rads", ""},
        {"alpha_err", "alpha_rad", "alpha_ref_rad"},
        {"mu_err", "mu_rad", "mu_ref_rad"},
        {"gamma_err", "gamma_rad", "gamma_ref_rad"},
        {"chi_err", "chi_rad", "chi_ref_rad"},
    };
    std::map<std::string, double> m;
    for (const auto& ch : channels) {
        if (log.column(ch.col) < 0) continue;
        const auto d = deviation(log, ch.col, ch.ref);
        m["rms_" + ch.key] = rms(d);
        m["max_" + ch.key] = max_abs(d);
        if (baseline && baseline->column(ch.col) >= 0) {
            const double rb = rms(deviation(*baseline, ch.col, ch.ref));
            if (rb > 0.0)
                m["reduction_" + ch.key + "_pct"] =
                    100.0 * (1.0 - m["rms_" + ch.key] / rb);
        }
    }
    for (const std::string& extra :
         {std::string("tip_disp_m"), std::string("flap_max_rad")}) {
        if (log.column(extra) >= 0)
            m["max_" + extra] = max_abs(log.series(extra));
    }
    if (log.column("Mphi_ref_r_Nm") >= 0) {
        m["max_Mphi_ref_Nm"] =
            std::max(max_abs(log.series("Mphi_ref_r_Nm")),
                     max_abs(log.series("Mphi_ref_l_Nm")));
    }
    return m;
}

void write_metrics_json(const std::map<std::string, double>& m,
                        const std::string& path) {
    nlohmann::json j;
    for (const auto& [k, v] : m) j[k] = v;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write metrics: " + path);
    out << j.dump(2) << "\n";
}

} // namespace aeroflex
