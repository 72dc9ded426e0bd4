#ifndef CPFACTOR_MATRIX_IO_HPP
#define CPFACTOR_MATRIX_IO_HPP

#include <iosfwd>
#include <string>

#include "cpfactor/linalg.hpp"

namespace cpf {

// Matrix text format used repo-wide: first non-comment line is "n m",
// followed by n lines of m whitespace-separated reals. Lines starting with
// '#' are comments. Writers emit 17 significant digits.

Mat read_matrix(std::istream& in, const std::string& name = "<stream>");
Mat read_matrix_file(const std::string& path);

void write_matrix(std::ostream& out, const Mat& M,
                  const std::string& comment = "");
void write_matrix_file(const std::string& path, const Mat& M,
                       const std::string& comment = "");

}  // namespace cpf

#endif
