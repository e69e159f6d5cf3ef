#include "fracvar/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace fracvar {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s, int lineno) {
    const char* c = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(c, &end);
    if (end == c || *end != '\0') {
        throw std::invalid_argument("field csv line " + std::to_string(lineno) +
                                    ": bad number '" + s + "'");
    }
    return v;
}

}  // namespace

void write_field_csv(const std::string& path, const SpaceTimeField& field) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    const BoxDomain& d = field.domain;
    out << "t";
    for (int i = 0; i < d.dim; ++i) out << ",x" << (i + 1);
    out << ",value\n";
    for (int j = 0; j <= field.tgrid.n; ++j) {
        const std::string ts = fmt17(field.tgrid.node(j));
        for (int p = 0; p < d.total_nodes(); ++p) {
            out << ts;
            const auto x = d.point(d.multi_index(p));
            for (double xc : x) out << ',' << fmt17(xc);
            out << ',' << fmt17(field.at(j, p)) << '\n';
        }
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

SpaceTimeField read_field_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open field csv: " + path);
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("field csv: empty file: " + path);
    const auto header = split_csv(line);
    const int ncols = static_cast<int>(header.size());
    if (ncols < 3 || header[0] != "t" || header[ncols - 1] != "value")
        throw std::invalid_argument("field csv: bad header, want t,x1,...,xd,value");
    const int dim = ncols - 2;
    for (int i = 0; i < dim; ++i)
        if (header[i + 1] != "x" + std::to_string(i + 1))
            throw std::invalid_argument("field csv: bad header column " +
                                        std::to_string(i + 2));

    struct Row {
        double t;
        std::vector<double> x;
        double value;
    };
    std::vector<Row> rows;
    std::set<double> tset;
    std::vector<std::set<double>> xsets(dim);
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto cells = split_csv(line);
        if (static_cast<int>(cells.size()) != ncols)
            throw std::invalid_argument("field csv line " + std::to_string(lineno) +
                                        ": expected " + std::to_string(ncols) +
                                        " columns");
        Row r;
        r.t = parse_double(cells[0], lineno);
        r.x.resize(dim);
        for (int i = 0; i < dim; ++i) r.x[i] = parse_double(cells[i + 1], lineno);
        r.value = parse_double(cells[ncols - 1], lineno);
        tset.insert(r.t);
        for (int i = 0; i < dim; ++i) xsets[i].insert(r.x[i]);
        rows.push_back(std::move(r));
    }
    if (tset.size() < 2)
        throw std::invalid_argument("field csv: needs at least two time nodes");

    std::map<double, int> tindex;
    int k = 0;
    for (double t : tset) tindex[t] = k++;
    std::vector<std::map<double, int>> xindex(dim);
    std::vector<double> lo(dim), hi(dim);
    std::vector<int> n(dim);
    for (int i = 0; i < dim; ++i) {
        k = 0;
        for (double x : xsets[i]) xindex[i][x] = k++;
        lo[i] = *xsets[i].begin();
        hi[i] = *xsets[i].rbegin();
        n[i] = static_cast<int>(xsets[i].size()) - 1;
    }
    const TimeGrid tg(*tset.begin(), *tset.rbegin(), static_cast<int>(tset.size()) - 1);
    const BoxDomain dom(lo, hi, n);

    const size_t expected = static_cast<size_t>(tg.num_nodes()) * dom.total_nodes();
    if (rows.size() != expected)
        throw std::invalid_argument("field csv: node set is not a full tensor grid");
    std::vector<double> values(expected);
    std::vector<bool> seen(expected, false);
    for (const auto& r : rows) {
        std::vector<int> idx(dim);
        for (int i = 0; i < dim; ++i) idx[i] = xindex[i][r.x[i]];
        const size_t slot =
            static_cast<size_t>(tindex[r.t]) * dom.total_nodes() + dom.flat_index(idx);
        if (seen[slot])
            throw std::invalid_argument("field csv: duplicate node row");
        seen[slot] = true;
        values[slot] = r.value;
    }
    return SpaceTimeField(tg, dom, std::move(values));
}

std::string check_report_json(const CheckReport& rep) {
    nlohmann::json j;
    j["name"] = rep.name;
    j["grid_sizes"] = rep.grid_sizes;
    j["metrics"] = nlohmann::json::object();
    for (const auto& [k, v] : rep.metrics) j["metrics"][k] = v;
    j["pass"] = rep.pass;
    return j.dump(2) + "\n";
}

std::string convergence_report_json(const ConvergenceReport& rep) {
    nlohmann::json j;
    j["case"] = rep.case_id;
    j["solver"] = rep.solver;
    j["levels"] = nlohmann::json::array();
    for (const auto& lev : rep.levels) {
        j["levels"].push_back({{"n", lev.n},
                               {"h", lev.h},
                               {"dt", lev.dt},
                               {"err_l2", lev.err_l2},
                               {"err_linf", lev.err_linf}});
    }
    if (rep.exact_on_grid)
        j["observed_orders"] = "exact";
    else
        j["observed_orders"] = rep.observed_orders;
    j["exact_on_grid"] = rep.exact_on_grid;
    j["pass"] = rep.pass;
    return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace fracvar
