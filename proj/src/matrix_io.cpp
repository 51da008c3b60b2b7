#include <ionet/matrix_io.hpp>

#include <cstdio>
#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ionet {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

MatrixFormat format_from_path(const std::string &path) {
    auto dot = path.rfind('.');
    const std::string ext = dot == std::string::npos ? "" : path.substr(dot);
    if (ext == ".json")
        return MatrixFormat::edge_json;
    if (ext == ".csv")
        return MatrixFormat::dense_csv;
    fail(errc::parse_error, "cannot infer matrix format from '" + path + "'");
}

namespace {

Matrix parse_dense_csv(std::istream &in, const std::string &path) {
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::vector<double> row;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            try {
                size_t pos = 0;
                row.push_back(std::stod(cell, &pos));
                while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos])))
                    ++pos;
                if (pos != cell.size())
                    throw std::invalid_argument(cell);
            } catch (const std::exception &) {
                fail(errc::parse_error, path + ": bad numeric cell '" + cell + "'");
            }
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        fail(errc::parse_error, path + ": empty csv");
    const size_t n = rows.size();
    Matrix m(n, n);
    for (size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n)
            fail(errc::parse_error, path + ": row " + std::to_string(i) + " has " +
                                        std::to_string(rows[i].size()) + " cells, expected " +
                                        std::to_string(n));
        for (size_t j = 0; j < n; ++j)
            m(i, j) = rows[i][j];
    }
    return m;
}

Matrix parse_edge_json(std::istream &in, const std::string &path) {
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception &e) {
        fail(errc::parse_error, path + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("n") || !doc.contains("edges"))
        fail(errc::parse_error, path + ": expected {\"n\":..., \"edges\":[...]}");
    const auto n = doc["n"].get<long>();
    if (n <= 0)
        fail(errc::parse_error, path + ": n must be positive");
    Matrix m = Matrix::Zero(n, n);
    for (const auto &e : doc["edges"]) {
        if (!e.contains("i") || !e.contains("j") || !e.contains("w"))
            fail(errc::parse_error, path + ": edge needs i, j, w");
        const auto i = e["i"].get<long>();
        const auto j = e["j"].get<long>();
        if (i < 0 || i >= n || j < 0 || j >= n)
            fail(errc::parse_error, path + ": edge index out of range");
        m(i, j) = e["w"].get<double>();
    }
    return m;
}

} // namespace

IoMatrix load_matrix(const std::string &path, MatrixFormat format) {
    std::ifstream in(path);
    if (!in)
        fail(errc::io_error, "cannot open '" + path + "'");
    Matrix raw = format == MatrixFormat::dense_csv ? parse_dense_csv(in, path)
                                                   : parse_edge_json(in, path);
    return IoMatrix::validate(raw, ValidationMode::strict);
}

void save_matrix(const IoMatrix &m, const std::string &path, MatrixFormat format) {
    std::ofstream out(path);
    if (!out)
        fail(errc::io_error, "cannot open '" + path + "' for writing");
    const Eigen::Index n = m.size();
    if (format == MatrixFormat::dense_csv) {
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j)
                    out << ',';
                out << format_double(m(i, j));
            }
            out << '\n';
        }
    } else {
        // Entries are emitted in row-major order so output is reproducible.
        out << "{\"n\": " << n << ", \"edges\": [";
        bool first = true;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                if (m(i, j) == 0.0)
                    continue;
                if (!first)
                    out << ", ";
                first = false;
                out << "{\"i\": " << i << ", \"j\": " << j
                    << ", \"w\": " << format_double(m(i, j)) << "}";
            }
        out << "]}\n";
    }
    if (!out)
        fail(errc::io_error, "write to '" + path + "' failed");
}

} // namespace ionet
