#include "dqap/lab.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace dqap::lab {

PowerLawFit fit_power_law(const std::vector<double> &x, const std::vector<double> &y) {
    if (x.size() != y.size()) throw InvalidSpec("fit needs equally many x and y values");
    if (x.size() < 3) throw InvalidSpec("fit needs at least three points");
    const int n = static_cast<int>(x.size());
    std::vector<double> lx(n), ly(n);
    for (int i = 0; i < n; ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw InvalidSpec("power-law fit needs positive data");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < n; ++i) {
        mx += lx[i] / n;
        my += ly[i] / n;
    }
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) throw InvalidSpec("fit needs at least two distinct x values");
    PowerLawFit f;
    f.exponent = sxy / sxx;
    f.log_prefactor = my - f.exponent * mx;
    double ssr = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = ly[i] - f.log_prefactor - f.exponent * lx[i];
        ssr += r * r;
    }
    f.stderr_exponent = std::sqrt(ssr / (n - 2) / sxx);
    f.points = n;
    return f;
}

PowerLawFit fit_power_law_csv(const std::string &path, const std::string &x_column,
                              const std::string &y_column) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    auto split = [](const std::string &line) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
        return cells;
    };
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("'" + path + "' is empty");
    const auto header = split(line);
    int ix = -1, iy = -1;
    for (int i = 0; i < static_cast<int>(header.size()); ++i) {
        if (header[i] == x_column) ix = i;
        if (header[i] == y_column) iy = i;
    }
    if (ix < 0 || iy < 0) throw ConfigError("column not found in '" + path + "'");
    std::vector<double> x, y;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split(line);
        if (static_cast<int>(cells.size()) <= std::max(ix, iy)) throw ConfigError("short row in '" + path + "'");
        x.push_back(std::stod(cells[ix]));
        y.push_back(std::stod(cells[iy]));
    }
    return fit_power_law(x, y);
}

} // namespace dqap::lab
