#include "cpfactor/matrix_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace cpf {

namespace {

bool next_content_line(std::istream& in, std::string& line, long& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t i = line.find_first_not_of(" \t\r");
    if (i == std::string::npos) continue;
    if (line[i] == '#') continue;
    return true;
  }
  return false;
}

[[noreturn]] void parse_fail(const std::string& name, long lineno,
                             const std::string& what) {
  std::ostringstream os;
  os << name << ":" << lineno << ": " << what;
  throw ParseError(os.str());
}

}  // namespace

Mat read_matrix(std::istream& in, const std::string& name) {
  std::string line;
  long lineno = 0;
  if (!next_content_line(in, line, lineno))
    parse_fail(name, lineno, "missing header line 'n m'");
  long n = 0, m = 0;
  {
    std::istringstream hs(line);
    if (!(hs >> n >> m) || n < 0 || m < 0)
      parse_fail(name, lineno, "bad header line, expected 'n m'");
    std::string extra;
    if (hs >> extra) parse_fail(name, lineno, "trailing tokens after 'n m'");
  }
  Mat M(n, m);
  for (long i = 0; i < n; ++i) {
    if (!next_content_line(in, line, lineno))
      parse_fail(name, lineno, "unexpected end of file, expected row " +
                                   std::to_string(i + 1));
    std::istringstream rs(line);
    for (long j = 0; j < m; ++j) {
      double v;
      if (!(rs >> v))
        parse_fail(name, lineno,
                   "bad or missing entry in column " + std::to_string(j + 1));
      M(i, j) = v;
    }
    std::string extra;
    if (rs >> extra) parse_fail(name, lineno, "trailing tokens in row");
  }
  if (!M.allFinite()) throw ParseError(name + ": non-finite entries");
  return M;
}

Mat read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  return read_matrix(in, path);
}

void write_matrix(std::ostream& out, const Mat& M, const std::string& comment) {
  if (!comment.empty()) {
    std::istringstream cs(comment);
    std::string cl;
    while (std::getline(cs, cl)) out << "# " << cl << "\n";
  }
  out << M.rows() << " " << M.cols() << "\n";
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (j) out << " ";
      out << M(i, j);
    }
    out << "\n";
  }
}

void write_matrix_file(const std::string& path, const Mat& M,
                       const std::string& comment) {
  std::ofstream out(path);
  if (!out) throw Error(path + ": cannot open file for writing");
  write_matrix(out, M, comment);
  if (!out) throw Error(path + ": write failed");
}

}  // namespace cpf
