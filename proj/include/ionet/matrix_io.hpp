#ifndef IONET_MATRIX_IO_HPP_
#define IONET_MATRIX_IO_HPP_

#include <string>

#include <ionet/matrix.hpp>

namespace ionet {

enum class MatrixFormat { dense_csv, edge_json };

// Picks edge_json for .json, dense_csv for .csv; anything else is a parse_error.
MatrixFormat format_from_path(const std::string &path);

// Loads and strict-validates a matrix. dense-csv is n lines of n
// comma-separated decimals; edge-json is {"n":int,"edges":[{"i","j","w"},...]}
// with unlisted entries zero.
IoMatrix load_matrix(const std::string &path, MatrixFormat format);

// Decimal serialization at 17 significant digits, so load(save(m)) == m exactly.
void save_matrix(const IoMatrix &m, const std::string &path, MatrixFormat format);

// %.17g round-trip formatting used by every serializer in the project.
std::string format_double(double x);

} // namespace ionet

#endif // IONET_MATRIX_IO_HPP_
