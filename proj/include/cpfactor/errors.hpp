#ifndef CPFACTOR_ERRORS_HPP
#define CPFACTOR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cpf {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : Error {
  using Error::Error;
};
struct NotSymmetric : Error {
  using Error::Error;
};
struct NotPsd : Error {
  using Error::Error;
};
struct RankDeficient : Error {
  using Error::Error;
};
struct ConvergenceFailure : Error {
  using Error::Error;
};
struct BadShape : Error {
  using Error::Error;
};
struct BadSpec : Error {
  using Error::Error;
};
struct DegenerateInstance : Error {
  using Error::Error;
};
struct NotDiagonallyDominant : Error {
  using Error::Error;
};
struct ZeroMatrix : Error {
  using Error::Error;
};
struct AllColumnsDropped : Error {
  using Error::Error;
};
struct PreconditionViolated : Error {
  using Error::Error;
};
struct SearchFailed : Error {
  using Error::Error;
};

}  // namespace cpf

#endif
