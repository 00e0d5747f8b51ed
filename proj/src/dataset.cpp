#include "nnpsi/dataset.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nnpsi {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

double parse_number(const std::string& cell, std::size_t row, const std::string& column) {
    const std::string t = trim(cell);
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v)) {
        std::ostringstream os;
        os << "non-numeric cell at data row " << row + 1 << ", column '" << column << "'";
        throw std::invalid_argument(os.str());
    }
    return v;
}

} // namespace

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file '" + path + "'");
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty file '" + path + "'");
    t.header = split_line(line);
    for (auto& h : t.header) h = trim(h);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split_line(line);
        if (cells.size() != t.header.size()) {
            std::ostringstream os;
            os << "row " << t.rows.size() + 1 << " has " << cells.size() << " cells, expected "
               << t.header.size();
            throw std::invalid_argument(os.str());
        }
        t.rows.push_back(std::move(cells));
    }
    return t;
}

namespace {

int find_column(const CsvTable& t, const std::string& name) {
    for (std::size_t i = 0; i < t.header.size(); ++i) {
        if (t.header[i] == name) return static_cast<int>(i);
    }
    throw std::invalid_argument("missing column '" + name + "'");
}

} // namespace

Dataset parse_dataset(const std::string& path, const std::string& response,
                      const std::vector<std::string>& covariates, bool as_grid) {
    const CsvTable t = read_csv(path);
    const int yc = find_column(t, response);
    std::vector<int> xcols;
    std::vector<std::string> xnames;
    if (covariates.empty()) {
        for (std::size_t i = 0; i < t.header.size(); ++i) {
            if (static_cast<int>(i) != yc) {
                xcols.push_back(static_cast<int>(i));
                xnames.push_back(t.header[i]);
            }
        }
    } else {
        for (const std::string& name : covariates) {
            xcols.push_back(find_column(t, name));
            xnames.push_back(name);
        }
    }
    if (xcols.empty()) throw std::invalid_argument("no covariate columns");
    const int n = static_cast<int>(t.rows.size());
    if (n < 2) throw std::invalid_argument("need at least 2 data rows");
    const int d = static_cast<int>(xcols.size());

    std::vector<std::string> raw_labels(n);
    std::vector<double> coords(static_cast<std::size_t>(n) * d);
    for (int i = 0; i < n; ++i) {
        raw_labels[i] = trim(t.rows[i][yc]);
        for (int k = 0; k < d; ++k) {
            coords[static_cast<std::size_t>(i) * d + k] =
                parse_number(t.rows[i][xcols[k]], i, t.header[xcols[k]]);
        }
    }
    Dataset ds{as_grid ? PointCloud::function_grid(n, d, std::move(coords))
                       : PointCloud::euclidean(n, d, std::move(coords)),
               LabelVector::from_strings(raw_labels), std::move(xnames)};
    return ds;
}

LabelVector parse_labels(const std::string& path, const std::string& response) {
    const CsvTable t = read_csv(path);
    const int yc = find_column(t, response);
    std::vector<std::string> raw(t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) raw[i] = trim(t.rows[i][yc]);
    return LabelVector::from_strings(raw);
}

PointCloud parse_distance_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file '" + path + "'");
    std::vector<std::vector<double>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_line(line);
        if (first) {
            first = false;
            // tolerate a header row of non-numeric names
            bool numeric = true;
            try {
                parse_number(cells[0], 0, "1");
            } catch (const std::invalid_argument&) {
                numeric = false;
            }
            if (!numeric) continue;
        }
        std::vector<double> vals;
        vals.reserve(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c) {
            vals.push_back(parse_number(cells[c], rows.size(), std::to_string(c + 1)));
        }
        rows.push_back(std::move(vals));
    }
    const int n = static_cast<int>(rows.size());
    if (n < 2) throw std::invalid_argument("distance matrix needs at least 2 rows");
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(n) * n);
    for (const auto& r : rows) {
        if (static_cast<int>(r.size()) != n) {
            throw std::invalid_argument("distance matrix is not square");
        }
        flat.insert(flat.end(), r.begin(), r.end());
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (flat[static_cast<std::size_t>(i) * n + j] !=
                flat[static_cast<std::size_t>(j) * n + i]) {
                throw std::invalid_argument("distance matrix not symmetric");
            }
        }
    }
    return PointCloud::precomputed(n, std::move(flat));
}

} // namespace nnpsi
