#pragma once

#include <map>
#include <string>
#include <vector>

#include "aeroflex/types.hpp"

namespace aeroflex {

double rms(const std::vector<double>& x);
double max_abs(const std::vector<double>& x);

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<VecX> rows;
    int column(const std::string& name) const; // -1 when absent
    std::vector<double> series(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

// rms/max deviations of the load and rate channels; when a baseline table
// is given, percentage reductions are added. Deviations are taken from the
// *_trim columns when present, otherwise from the channel mean.
std::map<std::string, double> compute_metrics(const CsvTable& log,
                                              const CsvTable* baseline);

void write_metrics_json(const std::map<std::string, double>& m,
                        const std::string& path);

} // namespace aeroflex
